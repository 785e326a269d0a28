use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{OperatorKind, OperatorMatrix};
use crate::error::{Error, Result};
use crate::series::{cauchy_product, compose, PowerSeries};
use crate::spaces::{norm_sq, Space};

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `Σ_k (−1)^{m−k} C(m,k) x_k`.
pub(crate) fn alternating_sum(norms: &[f64], m: usize) -> f64 {
    (0..=m)
        .map(|k| {
            let sign = if (m - k).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * binomial(m, k) * norms[k]
        })
        .sum()
}

fn degree_of(f: &PowerSeries) -> usize {
    f.degree().unwrap_or(0)
}

/// `⟨β_m(T) h, h⟩ = Σ_k (−1)^{m−k} C(m,k) ‖T^k h‖²`.
///
/// For multiplication and composition operators the iterates `T^k h` are
/// formed exactly as polynomials and measured in the ambient space, so the
/// probe must leave room: `deg h + m·deg f ≤ N` (resp. `deg h·(deg φ)^m ≤ N`).
/// A custom matrix acts on the orthonormal coordinates of the probe.
pub fn isometry_defect(t: &OperatorMatrix, m: usize, probe: &PowerSeries) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("defect order m must be at least 1".into()));
    }
    let n = t.order();
    let hd = degree_of(probe);
    let space = t.space();
    let mut iterates = vec![probe.truncated(hd)];
    match t.kind() {
        OperatorKind::Multiplication(f) => {
            let d = degree_of(f);
            if hd + m * d > n {
                return Err(Error::Truncation(format!(
                    "probe degree {hd} + {m}·{d} exceeds the truncation order {n}"
                )));
            }
            let f = f.truncated(d);
            for k in 1..=m {
                let prev = &iterates[k - 1];
                iterates.push(cauchy_product(prev, &f, hd + k * d));
            }
        }
        OperatorKind::Composition(phi) => {
            let d = degree_of(phi).max(1);
            let needed = (hd as f64) * (d as f64).powi(m as i32);
            if needed > n as f64 {
                return Err(Error::Truncation(format!(
                    "probe degree {hd} composed {m} times with a degree-{d} symbol exceeds {n}"
                )));
            }
            let phi = phi.truncated(d);
            for k in 1..=m {
                let prev = &iterates[k - 1];
                let order = degree_of(prev) * d;
                iterates.push(compose(prev, &phi, order)?);
            }
        }
        OperatorKind::Custom => {
            if hd > n {
                return Err(Error::Truncation(format!("probe degree {hd} exceeds the truncation order {n}")));
            }
            let mut x = DVector::from_fn(n + 1, |i, _| probe.coeff(i) * space.weight(i).sqrt());
            let mut norms = vec![x.norm_squared()];
            for _ in 1..=m {
                x = t.entries() * x;
                norms.push(x.norm_squared());
            }
            return Ok(alternating_sum(&norms, m));
        }
    }
    let norms: Vec<f64> = iterates.iter().map(|g| norm_sq(&space, g)).collect();
    Ok(alternating_sum(&norms, m))
}

/// Defect of `M_ψ` for a general (non-polynomial) symbol, every product
/// truncated at `order`.
pub fn isometry_defect_series(space: &Space, symbol: &PowerSeries, m: usize, probe: &PowerSeries, order: usize) -> f64 {
    let symbol = symbol.truncated(order);
    let mut g = probe.truncated(order);
    let mut norms = vec![norm_sq(space, &g)];
    for _ in 1..=m {
        g = cauchy_product(&g, &symbol, order);
        norms.push(norm_sq(space, &g));
    }
    alternating_sum(&norms, m)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftClassification {
    pub order: Option<usize>,
    /// Coefficients of `P(x)` in powers of `x`, `P(0) = 1`; empty when no order fits.
    pub polynomial: Vec<f64>,
    /// Largest scaled recurrence residual of the accepted fit, or of the
    /// degree-`m_max − 1` fit when none is accepted.
    pub residual: f64,
}

struct Fit {
    coeffs_x: Vec<f64>,
    residual: f64,
    positive: bool,
}

/// Least squares for `P(n+1) = w_n² P(n)`, `n < len`, with `deg P = m − 1` and
/// `P(0) = 1`. Works in `u = x/L` so the columns stay comparable.
fn fit_polynomial(weights_sq: &[f64], m: usize) -> Fit {
    let len = weights_sq.len();
    let scale = len as f64;
    let unknowns = m - 1;
    let mut p_u = vec![1.0];
    if unknowns > 0 {
        let a = DMatrix::from_fn(len, unknowns, |n, j| {
            let j = j as i32 + 1;
            ((n as f64 + 1.0) / scale).powi(j) - weights_sq[n] * (n as f64 / scale).powi(j)
        });
        let b = DVector::from_fn(len, |n, _| weights_sq[n] - 1.0);
        let svd = a.svd(true, true);
        match svd.solve(&b, 1e-14) {
            Ok(sol) => p_u.extend(sol.iter().copied()),
            Err(_) => p_u.extend(std::iter::repeat_n(0.0, unknowns)),
        }
    }
    let eval = |x: f64| p_u.iter().rev().fold(0.0, |acc, c| acc * (x / scale) + c);
    let mut residual: f64 = 0.0;
    let mut positive = true;
    for (n, &w) in weights_sq.iter().enumerate().take(len) {
        let (p0, p1) = (eval(n as f64), eval(n as f64 + 1.0));
        positive &= p0 > 0.0 && p1 > 0.0;
        let denom = p1.abs() + w * p0.abs();
        residual = residual.max((p1 - w * p0).abs() / denom.max(f64::MIN_POSITIVE));
    }
    let coeffs_x = p_u.iter().enumerate().map(|(j, c)| c / scale.powi(j as i32)).collect();
    Fit { coeffs_x, residual, positive }
}

/// Smallest `m ≤ m_max` whose weights satisfy `|w_n|² = P(n+1)/P(n)` for a
/// positive polynomial of degree `m − 1`.
pub fn shift_isometry_order(weights_sq: &[f64], m_max: usize, fit_tol: f64) -> ShiftClassification {
    let mut last_residual = f64::INFINITY;
    if weights_sq.is_empty() || weights_sq.iter().any(|w| !(*w > 0.0)) {
        return ShiftClassification { order: None, polynomial: Vec::new(), residual: last_residual };
    }
    for m in 1..=m_max {
        let fit = fit_polynomial(weights_sq, m);
        last_residual = fit.residual;
        if fit.positive && fit.residual < fit_tol {
            return ShiftClassification { order: Some(m), polynomial: fit.coeffs_x, residual: fit.residual };
        }
    }
    ShiftClassification { order: None, polynomial: Vec::new(), residual: last_residual }
}

/// `|w_n|² = β_{n+1}/β_n` for `n < len`.
pub fn shift_weights_sq(space: &Space, len: usize) -> Vec<f64> {
    (0..len).map(|n| space.weight(n + 1) / space.weight(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use crate::operators::{composition_matrix, multiplication_matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn shift(space: &Space, order: usize) -> OperatorMatrix {
        multiplication_matrix(space, &PowerSeries::identity(1), order)
    }

    #[test]
    fn defect_examples() {
        let one = PowerSeries::one(0);
        let t = shift(&Space::S12, 64);
        assert_eq!(isometry_defect(&t, 3, &one).unwrap(), 0.0);
        assert_eq!(isometry_defect(&t, 2, &one).unwrap(), 1.0);
        let h = PowerSeries::from_real(&[0.3, -1.0, 2.0]).unwrap();
        assert!(isometry_defect(&shift(&Space::H2, 16), 1, &h).unwrap().abs() < 1e-15);
    }

    #[test]
    fn defect_vanishes_on_random_probes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = shift(&Space::S12, 64);
        for _ in 0..50 {
            let h = PowerSeries::from_fn(12, |_| c(rng.random::<f64>() * 2.0 - 1.0));
            let scale = norm_sq(&Space::S12, &h);
            assert!(isometry_defect(&t, 3, &h).unwrap().abs() < 1e-12 * (1.0 + scale));
        }
    }

    #[test]
    fn km_is_m_plus_two_isometry() {
        for m in 1..=3u32 {
            let space = Space::Km(m);
            let t = shift(&space, 64);
            let h = PowerSeries::from_real(&[1.0, 0.5, -0.25]).unwrap();
            let k = m as usize + 2;
            let scale = norm_sq(&space, &h.shift_up(k));
            assert!(isometry_defect(&t, k, &h).unwrap().abs() < 1e-12 * scale);
            assert!(isometry_defect(&t, k - 1, &h).unwrap().abs() > 1e-3);
        }
    }

    #[test]
    fn truncation_budget() {
        let t = shift(&Space::S12, 10);
        let h = PowerSeries::monomial(8, c(1.0), 8);
        assert!(matches!(isometry_defect(&t, 3, &h), Err(Error::Truncation(_))));
        assert!(isometry_defect(&t, 2, &h).is_ok());
    }

    #[test]
    fn composition_defect_uses_exact_iterates() {
        // C_z is the identity: every defect of order ≥ 1 vanishes
        let t = composition_matrix(&Space::D2, &PowerSeries::identity(1), 16).unwrap();
        let h = PowerSeries::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert!(isometry_defect(&t, 1, &h).unwrap().abs() < 1e-12);
    }

    #[test]
    fn custom_matrix_defect_matches_multiplication() {
        let t = shift(&Space::S12, 32);
        let custom = OperatorMatrix::custom(Space::S12, t.entries().clone()).unwrap();
        let h = PowerSeries::from_real(&[1.0, -0.5, 0.25]).unwrap();
        let a = isometry_defect(&t, 2, &h).unwrap();
        let b = isometry_defect(&custom, 2, &h).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn classification_examples() {
        let w: Vec<f64> = (0..256).map(|n| (n as f64 + 3.0) / (n as f64 + 1.0)).collect();
        let cls = shift_isometry_order(&w, 6, 1e-8);
        assert_eq!(cls.order, Some(3));
        for (got, want) in cls.polynomial.iter().zip([1.0, 1.5, 0.5]) {
            assert!((got - want).abs() < 1e-8, "{:?}", cls.polynomial);
        }
        let cls = shift_isometry_order(&vec![1.0; 256], 6, 1e-8);
        assert_eq!(cls.order, Some(1));
        assert_eq!(cls.polynomial, vec![1.0]);

        let cls = shift_isometry_order(&shift_weights_sq(&Space::S2, 256), 6, 1e-8);
        assert_eq!(cls.order, None);
        assert!(cls.residual > 1e-4);

        for m in 1..=3 {
            let cls = shift_isometry_order(&shift_weights_sq(&Space::Km(m), 256), 8, 1e-8);
            assert_eq!(cls.order, Some(m as usize + 2));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 4), 0.0);
        assert_eq!(alternating_sum(&[1.0, 3.0, 6.0, 10.0], 3), 0.0);
    }
}
