//! Finite compressions of multiplication and composition operators in the
//! orthonormal monomial basis `e_n = z^n/√β_n`, their norms, and m-isometry
//! defects.

mod checks;
mod norm;
mod shift;

pub use checks::{
    blaschke_isometry_check, composition_norm_bound_check, dirichlet_linearity_check, growth_formula_check,
    hilbert_schmidt_bound_check,
    s2_three_isometry_residual,
};
pub use norm::{
    convergence_profile, hilbert_schmidt_norm_sq, monomial_composition_norm, operator_norm, ConvergenceProfile,
    ProfileKind, BandedMultiplication, DEFAULT_PROFILE_CAP, COMPOSITION_PROFILE_CAP,
};
pub use shift::{isometry_defect, isometry_defect_series, shift_isometry_order, shift_weights_sq, ShiftClassification};

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{cauchy_product, PowerSeries};
use crate::spaces::Space;

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorKind {
    Multiplication(PowerSeries),
    Composition(PowerSeries),
    Custom,
}

/// Square matrix of `⟨T e_j, e_i⟩` for `0 ≤ i, j ≤ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    entries: DMatrix<Complex64>,
    space: Space,
    kind: OperatorKind,
}

impl OperatorMatrix {
    pub fn custom(space: Space, entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() || entries.nrows() == 0 {
            return Err(Error::Shape(format!("expected a nonempty square matrix, got {}×{}", entries.nrows(), entries.ncols())));
        }
        Ok(Self { entries, space, kind: OperatorKind::Custom })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn kind(&self) -> &OperatorKind {
        &self.kind
    }

    /// The truncation order `N`; the matrix is `(N+1)×(N+1)`.
    pub fn order(&self) -> usize {
        self.entries.nrows() - 1
    }

    /// Row-major CSV, one `re,im` cell per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for i in 0..self.entries.nrows() {
            let row: Vec<String> = (0..self.entries.ncols())
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{},{}", z.re, z.im)
                })
                .collect();
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn sqrt_weights(space: &Space, order: usize) -> Vec<f64> {
    (0..=order).map(|n| space.weight(n).sqrt()).collect()
}

/// `M_f` compressed to polynomials of degree `≤ order`: entry `(i, j)` is
/// `f_{i−j} √(β_i/β_j)` for `i ≥ j`.
pub fn multiplication_matrix(space: &Space, f: &PowerSeries, order: usize) -> OperatorMatrix {
    let s = sqrt_weights(space, order);
    let entries = DMatrix::from_fn(order + 1, order + 1, |i, j| {
        if i >= j {
            f.coeff(i - j) * (s[i] / s[j])
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    OperatorMatrix { entries, space: *space, kind: OperatorKind::Multiplication(f.clone()) }
}

/// `C_φ` compressed to polynomials of degree `≤ order`: column `j` holds `φ^j`
/// truncated at `order`, rescaled to the orthonormal basis.
pub fn composition_matrix(space: &Space, phi: &PowerSeries, order: usize) -> Result<OperatorMatrix> {
    check_self_map(phi)?;
    let s = sqrt_weights(space, order);
    let phi = phi.truncated(order);
    let mut entries = DMatrix::zeros(order + 1, order + 1);
    let mut power = PowerSeries::one(order);
    for j in 0..=order {
        for i in 0..=order {
            entries[(i, j)] = power.coeff(i) * (s[i] / s[j]);
        }
        if j < order {
            power = cauchy_product(&power, &phi, order);
        }
    }
    Ok(OperatorMatrix { entries, space: *space, kind: OperatorKind::Composition(phi) })
}

pub(crate) fn check_self_map(phi: &PowerSeries) -> Result<()> {
    let c = phi.coeff(0).norm();
    if !(c < 1.0) {
        return Err(Error::Domain(format!("composition symbol needs |φ(0)| < 1, got {c}")));
    }
    Ok(())
}
