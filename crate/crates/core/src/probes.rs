//! Seeded random test inputs: polynomials with degree ≤ 12 and coefficients of
//! modulus ≤ 1, disk points, and Blaschke products with zeros of modulus ≤ 0.8.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blaschke::BlaschkeProduct;
use crate::series::PowerSeries;

pub const MAX_PROBE_DEGREE: usize = 12;
pub const MAX_ZERO_MODULUS: f64 = 0.8;

/// Generator for one named check: the stream depends only on `seed` and `name`.
pub fn probe_rng(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a, stable across platforms and toolchains
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

pub fn random_coefficient(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(rng.random::<f64>(), TAU * rng.random::<f64>())
}

/// Degree drawn uniformly from `min_degree..=max_degree`; the leading
/// coefficient is kept away from zero so the degree is exact.
pub fn random_polynomial(rng: &mut impl Rng, min_degree: usize, max_degree: usize) -> PowerSeries {
    let degree = rng.random_range(min_degree..=max_degree);
    PowerSeries::from_fn(degree, |n| {
        if n == degree && degree > 0 {
            Complex64::from_polar(0.1 + 0.9 * rng.random::<f64>(), TAU * rng.random::<f64>())
        } else {
            random_coefficient(rng)
        }
    })
}

pub fn random_point(rng: &mut impl Rng, r_max: f64) -> Complex64 {
    Complex64::from_polar(r_max * rng.random::<f64>().sqrt(), TAU * rng.random::<f64>())
}

/// Between one and `max_factors` zeros, unimodular constant of random phase.
pub fn random_blaschke(rng: &mut impl Rng, max_factors: usize) -> BlaschkeProduct {
    let count = rng.random_range(1..=max_factors);
    let zeros = (0..count).map(|_| random_point(rng, MAX_ZERO_MODULUS)).collect();
    let a = Complex64::from_polar(1.0, TAU * rng.random::<f64>());
    BlaschkeProduct::new(a, zeros).expect("zeros drawn inside the disk")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = probe_rng(0, "x").random();
        assert_eq!(a, probe_rng(0, "x").random::<u64>());
        assert_ne!(a, probe_rng(0, "y").random::<u64>());
        assert_ne!(a, probe_rng(1, "x").random::<u64>());
    }

    #[test]
    fn probe_bounds() {
        let mut rng = probe_rng(1, "bounds");
        for _ in 0..200 {
            let p = random_polynomial(&mut rng, 1, MAX_PROBE_DEGREE);
            assert!(p.degree().unwrap() >= 1 && p.order() <= MAX_PROBE_DEGREE);
            assert!(p.coeffs().iter().all(|c| c.norm() <= 1.0));
            let b = random_blaschke(&mut rng, 4);
            assert!(b.zeros().iter().all(|z| z.norm() <= MAX_ZERO_MODULUS));
        }
    }
}
