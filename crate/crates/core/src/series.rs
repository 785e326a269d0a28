//! Truncated complex power series `f(z) = Σ f_n z^n`.
//!
//! Every function in the crate is carried as its Taylor coefficients up to a
//! fixed order `N`. Operations take an explicit output order and silently drop
//! the coefficients above it.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Truncation order used when the caller does not choose one.
pub const DEFAULT_ORDER: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Coefficients `f_0, …, f_N` of a truncated power series; `coeffs.len() == N + 1`.
#[derive(Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series from its coefficients. Rejects an empty list and
    /// non-finite entries.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("a power series needs at least one coefficient".into()));
        }
        if let Some(n) = coeffs.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain(format!("coefficient {n} is not finite")));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Series whose `n`-th coefficient is `coeff(n)` for `n ≤ order`.
    pub fn from_fn(order: usize, coeff: impl FnMut(usize) -> Complex64) -> Self {
        let coeffs: Vec<_> = (0..=order).map(coeff).collect();
        debug_assert!(coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()));
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `c·z^k`, stored with order `max(order, k)`.
    pub fn monomial(k: usize, c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order.max(k));
        s.coeffs[k] = c;
        s
    }

    /// The identity symbol `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, ONE, order.max(1))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient `n`, zero above the stored order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Index of the last nonzero coefficient, `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Copy cut down or zero-padded to exactly `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        Self { coeffs }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn conj_coeffs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a.conj()).collect() }
    }

    /// Multiplies by `z^k`; the order grows by `k` so nothing is lost.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![ZERO; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// `f′`, with coefficient `n` equal to `(n+1) f_{n+1}`. Order drops by one;
    /// an order-0 series maps to the zero series of order 0.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(n, c)| c * (n as f64 + 1.0))
            .collect();
        Self { coeffs }
    }

    /// Horner evaluation of the stored partial sum.
    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Truncated reciprocal `g` with `f·g = 1 + O(z^{order+1})`, from the
    /// recurrence `g_0 = 1/f_0`, `g_k = −(1/f_0) Σ_{j=1}^{k} f_j g_{k−j}`.
    pub fn reciprocal(&self, order: usize) -> Result<Self> {
        let f0 = self.coeffs[0];
        if f0 == ZERO {
            return Err(Error::Domain("reciprocal needs a nonzero constant term".into()));
        }
        let inv = ONE / f0;
        let mut g = Vec::with_capacity(order + 1);
        g.push(inv);
        for k in 1..=order {
            let top = k.min(self.order());
            let acc: Complex64 = (1..=top).map(|j| self.coeffs[j] * g[k - j]).sum();
            g.push(-inv * acc);
        }
        Self::new(g)
    }

    /// `self^k` truncated at `order`.
    pub fn pow(&self, k: u32, order: usize) -> Self {
        let mut acc = Self::one(order);
        for _ in 0..k {
            acc = cauchy_product(&acc, self, order);
        }
        acc
    }

    /// `(self^0, self^1, …, self^count)` each truncated at `order`.
    pub fn powers(&self, count: usize, order: usize) -> Vec<Self> {
        let mut out = Vec::with_capacity(count + 1);
        out.push(Self::one(order));
        for k in 1..=count {
            let next = cauchy_product(&out[k - 1], self, order);
            out.push(next);
        }
        out
    }

    /// Largest coefficient modulus; `0` for the zero series.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// `Σ_{j≤k} a_j b_{k−j}` for every `k ≤ order`.
pub fn cauchy_product(a: &PowerSeries, b: &PowerSeries, order: usize) -> PowerSeries {
    let mut out = vec![ZERO; order + 1];
    // Skip zero runs so banded and sparse symbols stay cheap.
    for (i, ai) in a.coeffs.iter().enumerate().take(order + 1) {
        if *ai == ZERO {
            continue;
        }
        let span = (order - i).min(b.order());
        for (j, bj) in b.coeffs[..=span].iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    PowerSeries { coeffs: out }
}

/// Truncated Taylor expansion of `f∘φ` by Horner accumulation
/// `f_0 + φ(f_1 + φ(f_2 + …))`.
///
/// Requires `|φ(0)| < 1`: for a symbol whose constant term leaves the disk the
/// composed series need not converge.
pub fn compose(f: &PowerSeries, phi: &PowerSeries, order: usize) -> Result<PowerSeries> {
    let phi0 = phi.coeff(0).norm();
    if phi0 >= 1.0 || !phi0.is_finite() {
        return Err(Error::Domain(format!("composition symbol has |φ(0)| = {phi0} ≥ 1")));
    }
    let phi = phi.truncated(order);
    let top = f.degree().unwrap_or(0);
    let mut acc = PowerSeries::constant(f.coeff(top), order);
    for n in (0..top).rev() {
        acc = cauchy_product(&acc, &phi, order);
        acc.coeffs[0] += f.coeffs[n];
    }
    Ok(acc)
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().max(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeff(k) + rhs.coeff(k))
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.order().max(rhs.order());
        PowerSeries::from_fn(n, |k| self.coeff(k) - rhs.coeff(k))
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(-ONE)
    }
}

/// Exact product: the order of the result is the sum of the orders.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        cauchy_product(self, rhs, self.order() + rhs.order())
    }
}

impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        let coeffs = pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        PowerSeries::new(coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn mobius_series(alpha: Complex64, order: usize) -> PowerSeries {
        // (α − z) Σ (ᾱz)^n
        let geo = PowerSeries::from_fn(order, |n| alpha.conj().powu(n as u32));
        let lin = PowerSeries::new(vec![alpha, -ONE]).unwrap();
        cauchy_product(&lin, &geo, order)
    }

    #[test]
    fn binomial_square() {
        let a = PowerSeries::from_real(&[1.0, 1.0]).unwrap();
        let sq = cauchy_product(&a, &a, 2);
        assert_eq!(sq.coeffs(), &[c(1.0), c(2.0), c(1.0)]);
    }

    #[test]
    fn product_with_one_is_identity() {
        let f = PowerSeries::from_fn(10, |n| Complex64::new(n as f64, -(n as f64) / 3.0));
        let one = PowerSeries::one(0);
        assert_eq!(cauchy_product(&f, &one, 10), f);
    }

    #[test]
    fn extremal_times_one_plus_z() {
        let n = 64;
        let f = PowerSeries::from_fn(n, |k| c(2.0 / ((k as f64 + 1.0) * (k as f64 + 2.0))));
        let g = cauchy_product(&f, &PowerSeries::from_real(&[1.0, 1.0]).unwrap(), n);
        assert_relative_eq!(g.coeff(0).re, 1.0, epsilon = 1e-15);
        for k in 1..=n {
            let expect = 4.0 / (k as f64 * (k as f64 + 2.0));
            assert_relative_eq!(g.coeff(k).re, expect, max_relative = 1e-13);
        }
    }

    #[test]
    fn derivative_rules() {
        let f = PowerSeries::from_real(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(f.derivative().coeffs(), &[c(1.0), c(2.0)]);
        let k = PowerSeries::constant(c(3.0), 0);
        assert!(k.derivative().is_zero());
        assert_eq!(k.derivative().order(), 0);
        assert!(PowerSeries::constant(c(3.0), 5).derivative().is_zero());
    }

    #[test]
    fn mobius_derivative_matches_closed_form() {
        let alpha = c(0.5);
        let d = mobius_series(alpha, 40).derivative();
        let r2 = alpha.norm_sqr();
        for n in 0..8 {
            let expect = (r2 - 1.0) * (n as f64 + 1.0) * alpha.conj().powu(n as u32);
            assert_relative_eq!((d.coeff(n) - expect).norm() / expect.norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn compose_with_identity_and_powers() {
        let f = PowerSeries::from_fn(12, |n| Complex64::new(1.0 / (n as f64 + 1.0), 0.5));
        let id = PowerSeries::identity(12);
        let g = compose(&f, &id, 12).unwrap();
        for n in 0..=12 {
            assert_relative_eq!((g.coeff(n) - f.coeff(n)).norm(), 0.0, epsilon = 1e-15);
        }
        // z^3 ∘ z^4 = z^12
        let z3 = PowerSeries::monomial(3, ONE, 3);
        let z4 = PowerSeries::monomial(4, ONE, 4);
        let h = compose(&z3, &z4, 20).unwrap();
        assert_eq!(h.degree(), Some(12));
        assert_eq!(h.coeff(12), ONE);
    }

    #[test]
    fn compose_geometric_with_half_z() {
        // 1/(1 − z/2) ∘ (z/2) = 1/(1 − z/4); brute-force expansion of the latter
        let n = 30;
        let f = PowerSeries::from_fn(n, |k| c(0.5f64.powi(k as i32)));
        let phi = PowerSeries::monomial(1, c(0.5), 1);
        let g = compose(&f, &phi, n).unwrap();
        for k in 0..=n {
            assert_relative_eq!(g.coeff(k).re, 0.25f64.powi(k as i32), max_relative = 1e-14);
        }
    }

    #[test]
    fn compose_rejects_symbol_leaving_disk() {
        let f = PowerSeries::identity(3);
        let phi = PowerSeries::from_real(&[1.0, 0.1]).unwrap();
        assert!(matches!(compose(&f, &phi, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn reciprocal_examples() {
        let geo = PowerSeries::from_real(&[1.0; 6]).unwrap();
        let r = geo.reciprocal(5).unwrap();
        assert_eq!(r.coeffs(), &[c(1.0), c(-1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);

        let s22 = PowerSeries::from_fn(20, |n| c(1.0 / (1.0 + (n * n) as f64)));
        let r = s22.reciprocal(2).unwrap();
        assert_relative_eq!(r.coeff(1).re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(r.coeff(2).re, 1.0 / 20.0, epsilon = 1e-15);

        let s2 = PowerSeries::from_fn(20, |n| c(if n == 0 { 1.0 } else { 1.0 / (n * n) as f64 }));
        let r = s2.reciprocal(2).unwrap();
        assert_relative_eq!(r.coeff(1).re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(r.coeff(2).re, 0.75, epsilon = 1e-15);

        assert!(matches!(PowerSeries::identity(3).reciprocal(3), Err(Error::Domain(_))));
    }

    #[test]
    fn evaluate_examples() {
        let f = PowerSeries::from_real(&[1.0, 2.0, 1.0]).unwrap();
        assert_eq!(f.evaluate(ONE), c(4.0));
        assert_eq!(PowerSeries::zero(7).evaluate(Complex64::new(0.3, -0.9)), ZERO);
    }

    #[test]
    fn rejects_non_finite() {
        assert!(PowerSeries::from_real(&[1.0, f64::NAN]).is_err());
        assert!(PowerSeries::new(vec![]).is_err());
    }

    #[test]
    fn json_shape() {
        let f = PowerSeries::new(vec![c(1.0), Complex64::new(0.5, -2.0)]).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[[1.0,0.0],[0.5,-2.0]]");
        let back: PowerSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<PowerSeries>("[]").is_err());
    }
}
