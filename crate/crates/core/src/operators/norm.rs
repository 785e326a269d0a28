use nalgebra::DVector;
use num_complex::Complex64;

use super::{check_self_map, composition_matrix, multiplication_matrix, OperatorMatrix};
use crate::error::{Error, Result};
use crate::linalg::{largest_singular_value, lanczos_top_singular_value, LinearOp};
use crate::series::{cauchy_product, PowerSeries};
use crate::spaces::{norm_sq, Space};

pub const DEFAULT_PROFILE_CAP: usize = 8192;
/// Composition compressions are dense; `2049²` complex entries is about 64 MB.
pub const COMPOSITION_PROFILE_CAP: usize = 2048;
const PROFILE_START: usize = 32;

/// Largest singular value of the compression, a lower bound for `‖T‖`.
pub fn operator_norm(t: &OperatorMatrix) -> f64 {
    largest_singular_value(t.entries())
}

/// `M_f` on polynomials of degree `≤ order`, applied diagonal by diagonal.
pub struct BandedMultiplication {
    diagonals: Vec<(usize, Complex64)>,
    sqrt_weights: Vec<f64>,
}

impl BandedMultiplication {
    pub fn new(space: &Space, f: &PowerSeries, order: usize) -> Self {
        let diagonals = (0..=order.min(f.order()))
            .map(|k| (k, f.coeff(k)))
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .collect();
        Self { diagonals, sqrt_weights: (0..=order).map(|n| space.weight(n).sqrt()).collect() }
    }
}

impl LinearOp for BandedMultiplication {
    fn nrows(&self) -> usize {
        self.sqrt_weights.len()
    }
    fn ncols(&self) -> usize {
        self.sqrt_weights.len()
    }
    fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        let s = &self.sqrt_weights;
        let n = s.len();
        let mut y = DVector::zeros(n);
        for &(k, fk) in &self.diagonals {
            for j in 0..n - k {
                y[j + k] += fk * (s[j + k] / s[j]) * x[j];
            }
        }
        y
    }
    fn apply_adjoint(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        let s = &self.sqrt_weights;
        let n = s.len();
        let mut x = DVector::zeros(n);
        for &(k, fk) in &self.diagonals {
            let fc = fk.conj();
            for j in 0..n - k {
                x[j] += fc * (s[j + k] / s[j]) * y[j + k];
            }
        }
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Multiplication,
    Composition,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceProfile {
    pub estimate: f64,
    pub order_used: usize,
    /// `(N, estimate)` for every order tried.
    pub history: Vec<(usize, f64)>,
}

fn compression_norm(space: &Space, kind: ProfileKind, symbol: &PowerSeries, order: usize) -> Result<f64> {
    match kind {
        ProfileKind::Multiplication if order + 1 > 160 => {
            let op = BandedMultiplication::new(space, symbol, order);
            Ok(lanczos_top_singular_value(&op).unwrap_or(0.0))
        }
        ProfileKind::Multiplication => Ok(operator_norm(&multiplication_matrix(space, symbol, order))),
        ProfileKind::Composition => Ok(operator_norm(&composition_matrix(space, symbol, order)?)),
    }
}

/// Doubles `N` from 32 until two successive compression norms agree to
/// relative `tol`. Composition compressions stop at `min(cap, 2048)`.
pub fn convergence_profile(
    space: &Space,
    kind: ProfileKind,
    symbol: &PowerSeries,
    tol: f64,
    cap: usize,
) -> Result<ConvergenceProfile> {
    if kind == ProfileKind::Composition {
        check_self_map(symbol)?;
    }
    let cap = match kind {
        ProfileKind::Multiplication => cap,
        ProfileKind::Composition => cap.min(COMPOSITION_PROFILE_CAP),
    };
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut order = PROFILE_START.min(cap);
    loop {
        let est: f64 = compression_norm(space, kind, symbol, order)?;
        if let Some(&(_, prev)) = history.last() {
            if (est - prev).abs() <= tol * est.max(f64::MIN_POSITIVE) {
                history.push((order, est));
                return Ok(ConvergenceProfile { estimate: est, order_used: order, history });
            }
        }
        history.push((order, est));
        if order >= cap {
            return Err(Error::Convergence(format!(
                "compression norm still moving at N = {order} (last estimate {est}); cap is {cap}"
            )));
        }
        order = (order * 2).min(cap);
    }
}

/// `‖C_φ‖` for `φ = c z^k`, `k ≥ 1`, `|c| ≤ 1`.
///
/// `C_φ e_n = c^n z^{kn}/√β_n` are mutually orthogonal, so the norm is
/// `sup_n |c|^n √(β_{kn}/β_n)`. The sup is taken over `n ≤ 4096` and then
/// along `n = 4096·2^j` up to `2^52`, which captures limits at infinity.
pub fn monomial_composition_norm(space: &Space, c: Complex64, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("monomial symbol needs k ≥ 1".into()));
    }
    let r = c.norm();
    if r > 1.0 {
        return Err(Error::Domain(format!("c z^k maps outside the disk for |c| = {r}")));
    }
    let term = |n: f64| {
        let ratio = (space.weight_at(k as f64 * n) / space.weight_at(n)).sqrt();
        if r == 1.0 {
            ratio
        } else {
            (n * r.ln()).exp() * ratio
        }
    };
    let mut best = (0..=4096).map(|n| term(n as f64)).fold(0.0, f64::max);
    let mut n = 4096.0f64;
    while n < 4.5e15 {
        n *= 2.0;
        best = best.max(term(n));
    }
    Ok(best)
}

/// `Σ_{n≤order} ‖φ^n‖²/β_n`, each power truncated at `order`.
pub fn hilbert_schmidt_norm_sq(space: &Space, phi: &PowerSeries, order: usize) -> Result<f64> {
    check_self_map(phi)?;
    let phi = phi.truncated(order);
    let mut power = PowerSeries::one(order);
    let mut total = 0.0;
    for n in 0..=order {
        total += norm_sq(space, &power) / space.weight(n);
        if n < order {
            power = cauchy_product(&power, &phi, order);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense_largest_singular_value;
    use crate::spaces::sup_norm_default;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_symbol_norm() {
        assert!((operator_norm(&multiplication_matrix(&Space::S12, &PowerSeries::one(0), 64)) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn monomial_multipliers_on_s12() {
        for k in 0..=10usize {
            let f = PowerSeries::monomial(k, Complex64::new(1.0, 0.0), k);
            let expect = (((k + 1) * (k + 2)) as f64 / 2.0).sqrt();
            let est = operator_norm(&multiplication_matrix(&Space::S12, &f, 256));
            assert!((est - expect).abs() < 1e-10, "k={k}: {est}");
        }
    }

    #[test]
    fn banded_matches_dense() {
        let f = PowerSeries::from_real(&[1.0, 1.0, -0.5]).unwrap();
        for order in [100, 300] {
            let dense = dense_largest_singular_value(multiplication_matrix(&Space::S12, &f, order).entries());
            let banded = lanczos_top_singular_value(&BandedMultiplication::new(&Space::S12, &f, order)).unwrap();
            assert!((dense - banded).abs() < 1e-12 * dense);
        }
    }

    #[test]
    fn one_plus_z_exceeds_sqrt_four_and_a_half() {
        let f = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
        let est = operator_norm(&multiplication_matrix(&Space::S12, &f, 512));
        assert!(est > 4.5f64.sqrt());
        let profile = convergence_profile(&Space::S12, ProfileKind::Multiplication, &f, 1e-8, DEFAULT_PROFILE_CAP).unwrap();
        assert!((profile.estimate - est).abs() < 1e-8 * est);
    }

    #[test]
    fn compression_norms_nondecreasing() {
        let f = PowerSeries::from_real(&[0.3, -1.0, 0.5, 0.2]).unwrap();
        let phi = PowerSeries::from_real(&[0.2, 0.3, 0.4]).unwrap();
        let mut last_m = 0.0;
        let mut last_c = 0.0;
        for order in [16, 32, 64, 128, 256] {
            let m = operator_norm(&multiplication_matrix(&Space::S12, &f, order));
            let c = operator_norm(&composition_matrix(&Space::S12, &phi, order).unwrap());
            assert!(m >= last_m - 1e-13 * m && c >= last_c - 1e-13 * c);
            last_m = m;
            last_c = c;
        }
    }

    #[test]
    fn composition_by_monomials() {
        for k in 1..=8 {
            let n = monomial_composition_norm(&Space::S12, Complex64::new(1.0, 0.0), k).unwrap();
            assert!((n - k as f64).abs() < 1e-8, "k={k}: {n}");
        }
        assert!((monomial_composition_norm(&Space::H2, Complex64::new(1.0, 0.0), 3).unwrap() - 1.0).abs() < 1e-15);
        // c = 1/2: the supremum is at n = 0
        assert!((monomial_composition_norm(&Space::S12, Complex64::new(0.5, 0.0), 1).unwrap() - 1.0).abs() < 1e-15);
        assert!(monomial_composition_norm(&Space::S12, Complex64::new(1.5, 0.0), 1).is_err());
        // the compression agrees from below
        let phi = PowerSeries::monomial(3, Complex64::new(1.0, 0.0), 3);
        let comp = operator_norm(&composition_matrix(&Space::S12, &phi, 256).unwrap());
        assert!(comp <= 3.0 && comp > 2.9);
    }

    #[test]
    fn profile_hits_cap() {
        let phi = PowerSeries::monomial(2, Complex64::new(1.0, 0.0), 2);
        let r = convergence_profile(&Space::S12, ProfileKind::Composition, &phi, 1e-12, 128);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    #[test]
    fn hilbert_schmidt_values() {
        let zero = PowerSeries::zero(0);
        assert!((hilbert_schmidt_norm_sq(&Space::S12, &zero, 64).unwrap() - 1.0).abs() < 1e-15);
        let half = PowerSeries::from_real(&[0.0, 0.5]).unwrap();
        let hs = hilbert_schmidt_norm_sq(&Space::S12, &half, 128).unwrap();
        let oracle: f64 = (0..=128).map(|n| 0.25f64.powi(n)).sum();
        assert!((hs - oracle).abs() < 1e-14);
        assert!((hs - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn strict_multiplier_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let f = PowerSeries::from_fn(3, |n| {
                if n == 0 {
                    Complex64::new(rng.random::<f64>(), 0.0)
                } else {
                    Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
                }
            });
            let op = BandedMultiplication::new(&Space::S12, &f, 512);
            let est = lanczos_top_singular_value(&op).unwrap();
            assert!(est > sup_norm_default(&f));
        }
    }
}
