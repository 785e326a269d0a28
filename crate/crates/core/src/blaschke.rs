//! Disk automorphisms, finite Blaschke products, circle quadrature and the
//! moment identities used for adjoint symbols on `S2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Provenance, VerificationReport};
use crate::series::{cauchy_product, PowerSeries};
use crate::spaces::{inner_product, Space};

/// Default node count for circle quadrature.
pub const QUAD_NODES: usize = 4096;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_in_disk(alpha: Complex64, what: &str) -> Result<()> {
    if !(alpha.norm() < 1.0) {
        return Err(Error::Domain(format!("{what} must lie in the open unit disk, got |{alpha}| = {}", alpha.norm())));
    }
    Ok(())
}

/// The involution `φ_α(z) = (α − z)/(1 − ᾱz)`, swapping `0` and `α`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusMap {
    alpha: Complex64,
}

impl MobiusMap {
    pub fn new(alpha: Complex64) -> Result<Self> {
        check_in_disk(alpha, "Möbius parameter")?;
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        (self.alpha - z) / (ONE - self.alpha.conj() * z)
    }

    /// `(α − z) Σ (ᾱz)^n` truncated at `order`.
    pub fn series(&self, order: usize) -> PowerSeries {
        let ab = self.alpha.conj();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut prev = ONE; // ᾱ^{n-1}
        coeffs.push(self.alpha);
        for _ in 1..=order {
            let cur = prev * ab;
            coeffs.push(self.alpha * cur - prev);
            prev = cur;
        }
        PowerSeries::from_fn(order, |n| coeffs[n])
    }

    /// `φ′_α(z) = (|α|² − 1) Σ (n+1) ᾱ^n z^n`.
    pub fn derivative_series(&self, order: usize) -> PowerSeries {
        let scale = self.alpha.norm_sqr() - 1.0;
        let ab = self.alpha.conj();
        PowerSeries::from_fn(order, |n| ab.powu(n as u32) * ((n as f64 + 1.0) * scale))
    }
}

/// `a · Π B_{z_j}` where the factor for a zero at the origin is `z` and for a
/// zero `α ≠ 0` it is `φ_α`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlaschkeProduct {
    unimodular: Complex64,
    zeros: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct BlaschkeJson {
    a: [f64; 2],
    zeros: Vec<[f64; 2]>,
}

impl BlaschkeProduct {
    pub fn new(unimodular: Complex64, zeros: Vec<Complex64>) -> Result<Self> {
        if (unimodular.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("unimodular constant has modulus {}", unimodular.norm())));
        }
        for z in &zeros {
            check_in_disk(*z, "Blaschke zero")?;
        }
        Ok(Self { unimodular, zeros })
    }

    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(ONE, zeros)
    }

    /// `ψ(z) = z`.
    pub fn identity() -> Self {
        Self { unimodular: ONE, zeros: vec![ZERO] }
    }

    /// `z φ_α`.
    pub fn z_times_mobius(alpha: Complex64) -> Result<Self> {
        Self::from_zeros(vec![ZERO, alpha])
    }

    /// `φ_α φ_{−α}`.
    pub fn mobius_pair(alpha: Complex64) -> Result<Self> {
        Self::from_zeros(vec![alpha, -alpha])
    }

    pub fn unimodular(&self) -> Complex64 {
        self.unimodular
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    fn factor(zero: Complex64, z: Complex64) -> Complex64 {
        if zero == ZERO {
            z
        } else {
            (zero - z) / (ONE - zero.conj() * z)
        }
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.unimodular, |acc, &a| acc * Self::factor(a, z))
    }

    /// Largest modulus among the nonzero zeros, `0` if all sit at the origin.
    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Order at which the coefficient tail is negligible (`r^n` below `1e-14`,
    /// with room for the polynomial growth of repeated factors), capped at `cap`.
    pub fn recommended_order(&self, cap: usize) -> usize {
        let r = self.max_zero_modulus();
        let d = self.degree();
        if r == 0.0 {
            return d.min(cap);
        }
        let base = (1e-14f64.ln() / r.ln()).ceil() as usize;
        (base + 8 * d + d).min(cap)
    }

    /// Truncated Taylor series, each factor expanded as a geometric series.
    pub fn series(&self, order: usize) -> PowerSeries {
        let mut acc = PowerSeries::constant(self.unimodular, order);
        for &a in &self.zeros {
            let factor = if a == ZERO {
                PowerSeries::identity(order.max(1))
            } else {
                MobiusMap { alpha: a }.series(order)
            };
            acc = cauchy_product(&acc, &factor, order);
        }
        acc
    }

    pub fn to_json(&self) -> String {
        let j = BlaschkeJson {
            a: [self.unimodular.re, self.unimodular.im],
            zeros: self.zeros.iter().map(|z| [z.re, z.im]).collect(),
        };
        serde_json::to_string(&j).expect("plain numbers serialize")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: BlaschkeJson = serde_json::from_str(s)?;
        Self::new(
            Complex64::new(j.a[0], j.a[1]),
            j.zeros.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        )
    }
}

/// `P_α(ζ) = (1 − |α|²)/|ζ − α|²` for `|α| < 1` and `|ζ| = 1`.
pub fn poisson_kernel(alpha: Complex64, zeta: Complex64) -> Result<f64> {
    check_in_disk(alpha, "Poisson parameter")?;
    if (zeta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("Poisson kernel needs |ζ| = 1, got {}", zeta.norm())));
    }
    Ok(poisson_unchecked(alpha, zeta))
}

fn poisson_unchecked(alpha: Complex64, zeta: Complex64) -> f64 {
    (1.0 - alpha.norm_sqr()) / (zeta - alpha).norm_sqr()
}

/// Equispaced nodes `e^{2πij/n}`.
pub fn circle_nodes(n: usize) -> Vec<Complex64> {
    (0..n).map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / n as f64)).collect()
}

/// Trapezoidal rule for `∫ g(ζ) |dζ|/2π`; spectrally accurate for smooth
/// periodic integrands.
pub fn circle_mean(nodes: usize, mut g: impl FnMut(Complex64) -> Complex64) -> Complex64 {
    let sum: Complex64 = circle_nodes(nodes).into_iter().map(&mut g).sum();
    sum / nodes as f64
}

fn check_nodes(nodes: usize) -> Result<()> {
    if nodes < 256 || !nodes.is_power_of_two() {
        return Err(Error::Domain(format!("quadrature needs a power of two ≥ 256 nodes, got {nodes}")));
    }
    Ok(())
}

/// `∫ P_α(ζ) ζ̄^k |dζ|/2π` by quadrature; equals `ᾱ^k`.
pub fn poisson_moment(alpha: Complex64, k: u32, nodes: usize) -> Result<Complex64> {
    check_in_disk(alpha, "Poisson parameter")?;
    check_nodes(nodes)?;
    Ok(circle_mean(nodes, |z| z.conj().powu(k) * poisson_unchecked(alpha, z)))
}

/// `b(k) = ∫ P_α(ζ) P_{−α}(ζ) ζ̄^k |dζ|/2π` by quadrature.
pub fn poisson_product_moment(alpha: Complex64, k: u32, nodes: usize) -> Result<Complex64> {
    check_in_disk(alpha, "Poisson parameter")?;
    check_nodes(nodes)?;
    Ok(circle_mean(nodes, |z| {
        z.conj().powu(k) * (poisson_unchecked(alpha, z) * poisson_unchecked(-alpha, z))
    }))
}

/// Closed form of `b(k)`: `((1−|α|²)/(1+|α|²)) ᾱ^{2l}` for `k = 2l`, zero for odd `k`.
pub fn poisson_product_moment_closed(alpha: Complex64, k: u32) -> Complex64 {
    if k % 2 == 1 {
        return ZERO;
    }
    let r2 = alpha.norm_sqr();
    alpha.conj().powu(k) * ((1.0 - r2) / (1.0 + r2))
}

/// `⟨φ′_α, z^k φ′_α⟩_{H²} = ((1+|α|²)/(1−|α|²)) ᾱ^k + k ᾱ^k`.
pub fn phi_prime_moment(alpha: Complex64, k: u32) -> Result<Complex64> {
    check_in_disk(alpha, "Möbius parameter")?;
    let r2 = alpha.norm_sqr();
    let ak = alpha.conj().powu(k);
    Ok(ak * ((1.0 + r2) / (1.0 - r2)) + ak * k as f64)
}

/// The same inner product summed from the series of `φ′_α` to `order`.
pub fn phi_prime_moment_series(alpha: Complex64, k: u32, order: usize) -> Result<Complex64> {
    let d = MobiusMap::new(alpha)?.derivative_series(order);
    let k = k as usize;
    Ok((0..=order.saturating_sub(k)).map(|l| d.coeff(l + k) * d.coeff(l).conj()).sum())
}

/// Which order-2 Blaschke product the adjoint symbol `M*_ψ ψ` is taken for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjointVariant {
    /// `ψ = z φ_α`.
    ZPhiAlpha,
    /// `ψ = φ_α φ_{−α}`.
    PhiAlphaPhiMinusAlpha,
}

impl AdjointVariant {
    pub fn product(&self, alpha: Complex64) -> Result<BlaschkeProduct> {
        match self {
            AdjointVariant::ZPhiAlpha => BlaschkeProduct::z_times_mobius(alpha),
            AdjointVariant::PhiAlphaPhiMinusAlpha => BlaschkeProduct::mobius_pair(alpha),
        }
    }
}

/// Taylor coefficients of `M*_ψ ψ` on `S2` up to `k_max`, from the moment
/// identities for `φ′_α` and the Poisson kernels.
///
/// For `φ_α φ_{−α}` the `z^{2l}` coefficient is
/// `[2c ᾱ^{2l} + 8l ᾱ^{2l} + 2ρ ᾱ^{2l}]/(4l²)` with `c = (1+|α|²)/(1−|α|²)` and
/// `ρ = (1−|α|²)/(1+|α|²)`: the Poisson-product moment enters twice, once for
/// each cross term.
pub fn adjoint_symbol_expansion(variant: AdjointVariant, alpha: Complex64, k_max: usize) -> Result<PowerSeries> {
    check_in_disk(alpha, "Möbius parameter")?;
    let r2 = alpha.norm_sqr();
    let c = (1.0 + r2) / (1.0 - r2);
    let rho = (1.0 - r2) / (1.0 + r2);
    let ab = alpha.conj();
    let coeffs = match variant {
        AdjointVariant::ZPhiAlpha => PowerSeries::from_fn(k_max, |k| {
            if k == 0 {
                Complex64::new(3.0 + c, 0.0)
            } else {
                let kf = k as f64;
                ab.powu(k as u32) * ((2.0 * kf + 2.0 + c) / (kf * kf))
            }
        }),
        AdjointVariant::PhiAlphaPhiMinusAlpha => PowerSeries::from_fn(k_max, |k| {
            if k == 0 {
                Complex64::new(r2 * r2 + 2.0 * c + 2.0 * rho, 0.0)
            } else if k % 2 == 1 {
                ZERO
            } else {
                let l = (k / 2) as f64;
                ab.powu(k as u32) * ((2.0 * c + 8.0 * l + 2.0 * rho) / (4.0 * l * l))
            }
        }),
    };
    Ok(coeffs)
}

/// Brute-force coefficients `⟨ψ, z^k ψ⟩_{S2} / ‖z^k‖²_{S2}` from the series of `ψ`
/// truncated at `order`.
pub fn adjoint_symbol_oracle(
    variant: AdjointVariant,
    alpha: Complex64,
    k_max: usize,
    order: usize,
) -> Result<PowerSeries> {
    let psi = variant.product(alpha)?.series(order);
    Ok(PowerSeries::from_fn(k_max, |k| {
        let shifted = psi.shift_up(k);
        inner_product(&Space::S2, &psi, &shifted) / Space::S2.weight(k)
    }))
}

/// Order at which `|α|^{2k}` (the decay of `M*_ψψ` coefficients times `α^k`)
/// drops below machine precision.
fn evaluation_order(alpha: Complex64) -> usize {
    let r = alpha.norm();
    if r == 0.0 {
        return 1;
    }
    ((1e-18f64).ln() / (2.0 * r.ln())).ceil().clamp(8.0, 20_000.0) as usize
}

/// Compares `M*_ψψ(0)` and `M*_ψψ(α)` for `ψ = z φ_α`; they differ for `α ≠ 0`.
pub fn adjoint_distinctness_check(alpha: Complex64, tol: f64) -> Result<VerificationReport> {
    if alpha == ZERO {
        return Err(Error::Domain("distinctness needs α ≠ 0".into()));
    }
    let k_max = evaluation_order(alpha);
    let symbol = adjoint_symbol_expansion(AdjointVariant::ZPhiAlpha, alpha, k_max)?;
    let at_zero = symbol.evaluate(ZERO);
    let at_alpha = symbol.evaluate(alpha);
    let diff = (at_zero - at_alpha).norm();
    Ok(VerificationReport::new("adjoint_distinctness", tol)
        .computed("value_at_0", at_zero)
        .computed("value_at_alpha", at_alpha)
        .computed("difference", diff)
        .reference("difference_nonzero", tol, Provenance::Published)
        .passed_if(diff > tol))
}
