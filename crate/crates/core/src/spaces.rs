//! Weighted Hardy-type spaces on the disk, each fixed by its monomial norms
//! `β_n = ‖z^n‖²`.
//!
//! The reproducing kernel of such a space is `K_w(z) = Σ a_n (w̄z)^n` with
//! `a_n = 1/β_n`. A handful of spaces also have closed-form kernels.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::report::{Provenance, VerificationReport};
use crate::series::PowerSeries;

/// Points on the circle used for `‖f‖_∞` of a polynomial (maximum modulus).
pub const BOUNDARY_SAMPLES: usize = 4096;

/// Below this `|w̄z|` the logarithmic closed forms are replaced by a short
/// direct sum; the `(w̄z)²` denominator cancels digits there.
pub const SMALL_ARGUMENT: f64 = 1e-3;
const SMALL_ARGUMENT_TERMS: usize = 16;

/// A weighted space, identified by its weight sequence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Space {
    /// Hardy space, `β_n = 1`.
    H2,
    /// Bergman space, `β_n = 1/(n+1)`.
    A2,
    /// Dirichlet space, `β_n = n+1`.
    D2,
    /// `|f(0)|² + ‖f′‖²_{H²}`: `β_0 = 1`, `β_n = n²`.
    S2,
    /// Derivative Hardy space with the log kernel, `β_n = (n+1)(n+2)/2`.
    S12,
    /// `‖f‖²_{H²} + ‖f′‖²_{H²}`: `β_n = 1 + n²`.
    S22,
    /// `β_n = (n+1)²`, the same weights as `Dalpha(2.0)`.
    S32,
    /// Dirichlet-type space, `β_n = (n+1)^α`, `α ≥ 0`.
    Dalpha(f64),
    /// Higher-order derivative space, `β_n = (n+1)⋯(n+m+1)/(m+1)!`, `m ≥ 1`.
    Km(u32),
}

impl Space {
    pub fn dalpha(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("Dalpha needs a finite α ≥ 0, got {alpha}")));
        }
        Ok(Space::Dalpha(alpha))
    }

    pub fn km(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("Km needs m ≥ 1".into()));
        }
        Ok(Space::Km(m))
    }

    /// `‖z^n‖²`.
    pub fn weight(&self, n: usize) -> f64 {
        self.weight_at(n as f64)
    }

    /// The weight formula evaluated at a real index; used where indices far
    /// beyond any stored truncation are needed.
    pub fn weight_at(&self, n: f64) -> f64 {
        match *self {
            Space::H2 => 1.0,
            Space::A2 => 1.0 / (n + 1.0),
            Space::D2 => n + 1.0,
            Space::S2 => {
                if n == 0.0 {
                    1.0
                } else {
                    n * n
                }
            }
            Space::S12 => (n + 1.0) * (n + 2.0) / 2.0,
            Space::S22 => 1.0 + n * n,
            Space::S32 => (n + 1.0) * (n + 1.0),
            Space::Dalpha(alpha) => (n + 1.0).powf(alpha),
            Space::Km(m) => (1..=m + 1).map(|j| (n + j as f64) / j as f64).product(),
        }
    }

    /// Kernel coefficient `a_n = 1/‖z^n‖²`.
    pub fn kernel_coeff(&self, n: usize) -> f64 {
        1.0 / self.weight(n)
    }

    pub fn kernel_coefficients(&self, order: usize) -> Vec<f64> {
        (0..=order).map(|n| self.kernel_coeff(n)).collect()
    }

    pub fn has_closed_kernel(&self) -> bool {
        matches!(self, Space::H2 | Space::A2 | Space::D2 | Space::S12)
    }

    /// `m` such that `M_z` is a strict `m`-isometry, known from the weights:
    /// `|w_n|² = P(n+1)/P(n)` with `P` of degree `m−1`.
    pub fn shift_isometry_order(&self) -> Option<usize> {
        match *self {
            Space::H2 => Some(1),
            Space::D2 => Some(2),
            Space::S12 | Space::S22 | Space::S32 => Some(3),
            Space::Km(m) => Some(m as usize + 2),
            Space::Dalpha(a) if a.fract() == 0.0 => Some(a as usize + 1),
            _ => None,
        }
    }

    /// Every `a_n ≤ 1`, i.e. every monomial has norm at least one.
    pub fn kernel_coeffs_at_most_one(&self) -> bool {
        !matches!(self, Space::A2)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::H2 => write!(f, "H2"),
            Space::A2 => write!(f, "A2"),
            Space::D2 => write!(f, "D2"),
            Space::S2 => write!(f, "S2"),
            Space::S12 => write!(f, "S12"),
            Space::S22 => write!(f, "S22"),
            Space::S32 => write!(f, "S32"),
            Space::Dalpha(a) => write!(f, "Dalpha:{a:?}"),
            Space::Km(m) => write!(f, "Km:{m}"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(a) = s.strip_prefix("Dalpha:") {
            let alpha = a.parse::<f64>().map_err(|e| Error::Parse(format!("Dalpha parameter: {e}")))?;
            return Space::dalpha(alpha);
        }
        if let Some(m) = s.strip_prefix("Km:") {
            let m = m.parse::<u32>().map_err(|e| Error::Parse(format!("Km parameter: {e}")))?;
            return Space::km(m);
        }
        match s {
            "H2" => Ok(Space::H2),
            "A2" => Ok(Space::A2),
            "D2" => Ok(Space::D2),
            "S2" => Ok(Space::S2),
            "S12" => Ok(Space::S12),
            "S22" => Ok(Space::S22),
            "S32" => Ok(Space::S32),
            other => Err(Error::Parse(format!("unknown space `{other}`"))),
        }
    }
}

/// `Σ β_n |f_n|²`.
pub fn norm_sq(space: &Space, f: &PowerSeries) -> f64 {
    f.coeffs().iter().enumerate().map(|(n, c)| space.weight(n) * c.norm_sqr()).sum()
}

pub fn space_norm(space: &Space, f: &PowerSeries) -> f64 {
    norm_sq(space, f).sqrt()
}

/// `⟨f, g⟩ = Σ β_n f_n ḡ_n`.
pub fn inner_product(space: &Space, f: &PowerSeries, g: &PowerSeries) -> Complex64 {
    let top = f.order().min(g.order());
    (0..=top).map(|n| f.coeff(n) * g.coeff(n).conj() * space.weight(n)).sum()
}

/// `D(f) = ‖f′‖²_{A²} = Σ_{n≥1} n|f_n|²`.
pub fn dirichlet_energy(f: &PowerSeries) -> f64 {
    f.coeffs().iter().enumerate().skip(1).map(|(n, c)| n as f64 * c.norm_sqr()).sum()
}

/// The three pieces of `‖f‖²_{S12} = ‖f‖²_{H²} + (3/2)‖f′‖²_{A²} + (1/2)‖f′‖²_{H²}`,
/// each computed from `f` or `f′` in its own space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S12Decomposition {
    pub hardy_sq: f64,
    pub bergman_deriv_sq: f64,
    pub hardy_deriv_sq: f64,
}

impl S12Decomposition {
    pub fn total(&self) -> f64 {
        self.hardy_sq + 1.5 * self.bergman_deriv_sq + 0.5 * self.hardy_deriv_sq
    }
}

pub fn norm_decomposition_s12(f: &PowerSeries) -> S12Decomposition {
    let d = f.derivative();
    S12Decomposition {
        hardy_sq: norm_sq(&Space::H2, f),
        bergman_deriv_sq: norm_sq(&Space::A2, &d),
        hardy_deriv_sq: norm_sq(&Space::H2, &d),
    }
}

/// Checks `2‖f‖²_{S12} = ‖f‖²_{S2} + 2‖f‖²_{H²} + 3D(f) − |f(0)|²` and
/// `‖f‖²_{S22} = ‖f‖²_{S2} + ‖f‖²_{H²} − |f(0)|²`.
pub fn norm_relation_check(f: &PowerSeries) -> VerificationReport {
    let s12 = norm_sq(&Space::S12, f);
    let s2 = norm_sq(&Space::S2, f);
    let h2 = norm_sq(&Space::H2, f);
    let s22 = norm_sq(&Space::S22, f);
    let d = dirichlet_energy(f);
    let f0 = f.coeff(0).norm_sqr();

    let r1 = (2.0 * s12 - (s2 + 2.0 * h2 + 3.0 * d - f0)).abs();
    let r2 = (s22 - (s2 + h2 - f0)).abs();
    let tol = 1e-10 * (1.0 + s12);
    VerificationReport::new("norm_relations", tol)
        .computed("s12_vs_s2_residual", r1)
        .computed("s22_vs_s2_residual", r2)
        .reference("residual", 0.0, Provenance::Published)
        .passed_if(r1 < tol && r2 < tol)
}

fn check_kernel_argument(t: Complex64) -> Result<()> {
    let r = t.norm();
    if !(r < 1.0) {
        return Err(Error::Domain(format!("kernel needs |w̄z| < 1, got {r}")));
    }
    Ok(())
}

/// Partial sum `Σ_{n≤order} a_n (w̄z)^n`.
pub fn kernel_eval_series(space: &Space, w: Complex64, z: Complex64, order: usize) -> Result<Complex64> {
    let t = w.conj() * z;
    check_kernel_argument(t)?;
    Ok(kernel_series_at(space, t, order))
}

fn kernel_series_at(space: &Space, t: Complex64, order: usize) -> Complex64 {
    let mut power = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..=order {
        acc += power * space.kernel_coeff(n);
        power *= t;
    }
    acc
}

/// `log(1 + u)` without the cancellation of forming `1 + u` first.
fn ln_1p(u: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    let im = u.im.atan2(1.0 + u.re);
    Complex64::new(re, im)
}

/// Closed-form kernel for `H2`, `A2`, `D2` and `S12`, principal logarithm.
///
/// With `|w̄z| < 1` the real part of `1 − w̄z` is positive, so the principal
/// branch of `ln(1/(1 − w̄z))` is continuous on the whole domain.
pub fn kernel_eval_closed(space: &Space, w: Complex64, z: Complex64) -> Result<Complex64> {
    let t = w.conj() * z;
    check_kernel_argument(t)?;
    let one = Complex64::new(1.0, 0.0);
    match space {
        Space::H2 => Ok(one / (one - t)),
        Space::A2 => {
            let g = one / (one - t);
            Ok(g * g)
        }
        Space::D2 | Space::S12 if t.norm() < SMALL_ARGUMENT => Ok(kernel_series_at(space, t, SMALL_ARGUMENT_TERMS)),
        Space::D2 => Ok(-ln_1p(-t) / t),
        Space::S12 => {
            let log_term = -ln_1p(-t);
            Ok(2.0 * (t + (t - one) * log_term) / (t * t))
        }
        other => Err(Error::Unsupported(format!("no closed-form kernel for {other}"))),
    }
}

/// Series order whose geometric tail `a_max |t|^{order+1}/(1−|t|)` is below `tail_tol`.
pub fn series_order_for(space: &Space, t_abs: f64, tail_tol: f64) -> usize {
    if t_abs == 0.0 {
        return 0;
    }
    let a_max = if space.kernel_coeffs_at_most_one() { 1.0 } else { f64::INFINITY };
    if !a_max.is_finite() {
        // Growing coefficients (A2): a_n = n+1; bound the tail by direct search.
        let mut n = 0usize;
        while (n as f64 + 2.0) * t_abs.powi(n as i32 + 1) / (1.0 - t_abs).powi(2) >= tail_tol {
            n += 1;
        }
        return n;
    }
    let needed = (tail_tol * (1.0 - t_abs) / a_max).ln() / t_abs.ln() - 1.0;
    needed.ceil().max(0.0) as usize
}

/// Closed form where available, otherwise a series whose tail is below `1e-12`.
pub fn kernel_eval(space: &Space, w: Complex64, z: Complex64) -> Result<Complex64> {
    if space.has_closed_kernel() {
        return kernel_eval_closed(space, w, z);
    }
    let t = w.conj() * z;
    check_kernel_argument(t)?;
    Ok(kernel_series_at(space, t, series_order_for(space, t.norm(), 1e-12)))
}

/// `max |f(ζ)|` over `samples` equispaced points of the unit circle.
///
/// For a polynomial this approximates `‖f‖_∞` from below.
pub fn sup_norm(f: &PowerSeries, samples: usize) -> f64 {
    (0..samples)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / samples as f64;
            f.evaluate(Complex64::from_polar(1.0, theta)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn sup_norm_default(f: &PowerSeries) -> f64 {
    sup_norm(f, BOUNDARY_SAMPLES)
}

/// The extremal function `Σ 2/((n+1)(n+2)) z^n` for the pointwise bound in `S12`.
pub fn extremal_series(order: usize) -> PowerSeries {
    PowerSeries::from_fn(order, |n| {
        let n = n as f64;
        Complex64::new(2.0 / ((n + 1.0) * (n + 2.0)), 0.0)
    })
}

/// `‖extremal_series(order)‖²_{S12}` has the telescoping form `2(order+1)/(order+2)`;
/// the discarded tail contributes exactly `2/(order+2)`.
pub fn extremal_norm_sq_tail(order: usize) -> f64 {
    2.0 / (order as f64 + 2.0)
}

/// Partial-sum norm of the truncated extremal series and the norm with the
/// exact tail restored.
pub fn extremal_norms(order: usize) -> (f64, f64) {
    let partial_sq = norm_sq(&Space::S12, &extremal_series(order));
    (partial_sq.sqrt(), (partial_sq + extremal_norm_sq_tail(order)).sqrt())
}
