use num_complex::Complex64;

use super::norm::{operator_norm, hilbert_schmidt_norm_sq};
use super::shift::{alternating_sum, binomial};
use super::{composition_matrix, multiplication_matrix};
use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::report::{Provenance, VerificationReport};
use crate::series::{cauchy_product, PowerSeries};
use crate::spaces::{dirichlet_energy, norm_sq, space_norm, sup_norm_default, Space};

/// `ψ^k f` for `k = 0..=count`, each truncated at `order`.
fn blaschke_iterates(psi: &PowerSeries, f: &PowerSeries, count: usize, order: usize) -> Vec<PowerSeries> {
    let psi = psi.truncated(order);
    let mut out = vec![f.truncated(order)];
    for k in 1..=count {
        let next = cauchy_product(&out[k - 1], &psi, order);
        out.push(next);
    }
    out
}

/// Weighted energy in the top quarter of the kept coefficients. For series
/// with geometrically decaying coefficients it dominates the discarded tail.
fn tail_energy(space: &Space, g: &PowerSeries) -> f64 {
    let n = g.order();
    let start = n - n / 4;
    (start..=n).map(|k| space.weight(k) * g.coeff(k).norm_sqr()).sum()
}

fn check_tail(space: &Space, g: &PowerSeries, budget: f64) -> Result<()> {
    let tail = tail_energy(space, g);
    if tail > budget {
        return Err(Error::Truncation(format!(
            "coefficient tail energy {tail:e} exceeds {budget:e} at order {}",
            g.order()
        )));
    }
    Ok(())
}

/// `‖ψ³f‖₁² − 3‖ψ²f‖₁² + 3‖ψf‖₁² − ‖f‖₁²` on `S2` for a finite Blaschke
/// product: `(|ψ(0)|² − 1)³ |f(0)|²`.
///
/// On `S2`, `‖g‖₁² − |g(0)|² = ‖g′‖²_{H²}` grows quadratically along `ψ^n f`,
/// so only the point-evaluation part survives the third difference.
pub fn s2_three_isometry_residual(psi0: Complex64, f0: Complex64) -> f64 {
    (psi0.norm_sqr() - 1.0).powi(3) * f0.norm_sqr()
}

/// The alternating sum `Σ (−1)^{3−k} C(3,k) ‖ψ^k f‖²` for every probe.
///
/// On spaces where `M_z` is an `m`-isometry with `m ≤ 3` the sum vanishes; on
/// `S2` it equals [`s2_three_isometry_residual`]. A probe passes when
/// `|sum − expected| < tol·(1 + ‖f‖²)`.
pub fn blaschke_isometry_check(
    space: &Space,
    psi: &BlaschkeProduct,
    probes: &[PowerSeries],
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let three_isometric = matches!(space.shift_isometry_order(), Some(m) if m <= 3);
    if !three_isometric && *space != Space::S2 {
        return Err(Error::Unsupported(format!("no 3-isometry reference for M_ψ on {space}")));
    }
    let psi_series = psi.series(order);
    let psi0 = psi.evaluate(Complex64::new(0.0, 0.0));
    let mut report = VerificationReport::new("blaschke_three_isometry", tol);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for (i, f) in probes.iter().enumerate() {
        let iterates = blaschke_iterates(&psi_series, f, 3, order);
        let scale = 1.0 + norm_sq(space, f);
        check_tail(space, &iterates[3], tol * scale)?;
        let norms: Vec<f64> = iterates.iter().map(|g| norm_sq(space, g)).collect();
        let sum = alternating_sum(&norms, 3);
        let expected = if three_isometric { 0.0 } else { s2_three_isometry_residual(psi0, f.coeff(0)) };
        let dev = (sum - expected).abs() / scale;
        worst = worst.max(dev);
        ok &= dev < tol;
        report.push_computed(format!("alternating_sum[{i}]"), sum);
        let provenance = if three_isometric { Provenance::Published } else { Provenance::Derived };
        report.push_reference(format!("expected[{i}]"), expected, provenance);
    }
    report.push_computed("max_scaled_deviation", worst);
    Ok(report.passed_if(ok))
}

/// Polynomial growth of `‖ψ^n h‖²` for a finite Blaschke product `ψ`.
///
/// On `S2` the right side is the boundary-corrected quadratic formula;
/// elsewhere it is `Σ_{k<m} C(n,k) ⟨β_k h, h⟩` with `m` the isometry order of
/// `M_z` on the space. Pass iff the largest absolute residual is below `tol`.
pub fn growth_formula_check(
    space: &Space,
    psi: &BlaschkeProduct,
    h: &PowerSeries,
    n_max: usize,
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let psi_series = psi.series(order);
    let psi0 = psi.evaluate(Complex64::new(0.0, 0.0));
    let h0 = h.coeff(0);
    let (m, start) = if *space == Space::S2 {
        (3, 2)
    } else {
        let m = space
            .shift_isometry_order()
            .ok_or_else(|| Error::Unsupported(format!("M_z on {space} is not an m-isometry")))?;
        (m, 0)
    };
    let count = n_max.max(m - 1).max(2);
    let iterates = blaschke_iterates(&psi_series, h, count, order);
    check_tail(space, &iterates[count], tol)?;
    let norms: Vec<f64> = iterates.iter().map(|g| norm_sq(space, g)).collect();

    let mut report = VerificationReport::new("growth_formula", tol);
    let mut worst: f64 = 0.0;
    for n in start..=n_max {
        let formula = if *space == Space::S2 {
            let nf = n as f64;
            let p = |k: i32| (psi0.norm_sqr()).powi(k) * h0.norm_sqr();
            nf * (nf - 1.0) / 2.0 * norms[2] - nf * (nf - 2.0) * norms[1] + (nf - 1.0) * (nf - 2.0) / 2.0 * norms[0]
                - (nf - 1.0) * (nf - 2.0) / 2.0 * p(0)
                - nf * (nf - 1.0) / 2.0 * p(2)
                + nf * (nf - 2.0) * p(1)
                + p(n as i32)
        } else {
            (0..m).map(|k| binomial(n, k) * alternating_sum(&norms, k)).sum()
        };
        worst = worst.max((norms[n] - formula).abs());
        report.push_computed(format!("norm_sq[{n}]"), norms[n]);
        report.push_reference(format!("formula[{n}]"), formula, Provenance::Published);
    }
    report.push_computed("max_residual", worst);
    Ok(report.passed_if(worst < tol))
}

/// `D(ψ^n f) = D(f) + n[D(ψf) − D(f)]` for `n ≤ n_max`.
pub fn dirichlet_linearity_check(
    psi: &BlaschkeProduct,
    f: &PowerSeries,
    n_max: usize,
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    let iterates = blaschke_iterates(&psi.series(order), f, n_max.max(1), order);
    check_tail(&Space::D2, &iterates[n_max.max(1)], tol)?;
    let d: Vec<f64> = iterates.iter().map(dirichlet_energy).collect();
    let mut report = VerificationReport::new("dirichlet_linearity", tol);
    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        let formula = d[0] + n as f64 * (d[1] - d[0]);
        worst = worst.max((d[n] - formula).abs());
        report.push_computed(format!("energy[{n}]"), d[n]);
        report.push_reference(format!("linear[{n}]"), formula, Provenance::Published);
    }
    report.push_computed("max_residual", worst);
    Ok(report.passed_if(worst < tol))
}

/// Compression estimate of `‖C_φ‖²` against `(1+|φ(0)|)/(1−|φ(0)|)`, and on
/// `D2` against the lower bound `ln(1/(1−|φ(0)|²))/|φ(0)|²` as well.
///
/// Requires `a_n ≤ 1` for the space and a compression estimate `‖M_φ‖ ≤ 1`.
/// The estimate is a lower bound for the true norm, so a clean result is
/// reported as `consistent`.
pub fn composition_norm_bound_check(
    space: &Space,
    phi: &PowerSeries,
    order: usize,
    tol: f64,
) -> Result<VerificationReport> {
    if !space.kernel_coeffs_at_most_one() {
        return Err(Error::Precondition(format!("{space} has kernel coefficients above 1")));
    }
    let m_norm = operator_norm(&multiplication_matrix(space, phi, order));
    if m_norm > 1.0 + tol {
        return Err(Error::Precondition(format!("‖M_φ‖ ≈ {m_norm} exceeds 1 at N = {order}")));
    }
    let c_norm = operator_norm(&composition_matrix(space, phi, order)?);
    let c_sq = c_norm * c_norm;
    let a = phi.coeff(0).norm();
    let upper = (1.0 + a) / (1.0 - a);
    let mut report = VerificationReport::new("composition_norm_bound", tol)
        .computed("multiplier_norm", m_norm)
        .computed("composition_norm_sq", c_sq)
        .reference("upper_bound", upper, Provenance::Published);
    let mut ok = c_sq <= upper * (1.0 + tol);
    if *space == Space::D2 && a > 0.0 {
        let lower = (1.0 / (1.0 - a * a)).ln() / (a * a);
        report.push_reference("lower_bound", lower, Provenance::Published);
        ok &= c_sq >= lower - tol;
    }
    Ok(report.consistent_if(ok))
}

/// Hilbert–Schmidt partial sum on `S12` against `1 + 2‖φ‖²/(1 − ‖φ‖²_∞)`.
pub fn hilbert_schmidt_bound_check(phi: &PowerSeries, order: usize, tol: f64) -> Result<VerificationReport> {
    let sup = sup_norm_default(phi);
    if !(sup < 1.0) {
        return Err(Error::Precondition(format!("‖φ‖_∞ ≈ {sup} is not below 1")));
    }
    let hs = hilbert_schmidt_norm_sq(&Space::S12, phi, order)?;
    let norm = space_norm(&Space::S12, phi);
    let bound = 1.0 + 2.0 * norm * norm / (1.0 - sup * sup);
    Ok(VerificationReport::new("hilbert_schmidt_bound", tol)
        .computed("hs_partial_sum", hs)
        .computed("sup_norm", sup)
        .reference("bound", bound, Provenance::Published)
        .consistent_if(hs <= bound * (1.0 + tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn one_plus_z() -> PowerSeries {
        PowerSeries::from_real(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn shift_on_s12_weight_arithmetic() {
        let r = blaschke_isometry_check(&Space::S12, &BlaschkeProduct::identity(), &[PowerSeries::one(0)], 32, 1e-12)
            .unwrap();
        assert_eq!(r.computed_real("alternating_sum[0]"), Some(0.0));
    }

    #[test]
    fn blaschke_products_on_s12() {
        let probes = [PowerSeries::one(0), one_plus_z()];
        for psi in [
            BlaschkeProduct::z_times_mobius(c(0.4, 0.0)).unwrap(),
            BlaschkeProduct::mobius_pair(c(0.5, 0.0)).unwrap(),
        ] {
            let r = blaschke_isometry_check(&Space::S12, &psi, &probes, 1024, 1e-8).unwrap();
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn s2_residual_is_boundary_correction() {
        let psi = BlaschkeProduct::z_times_mobius(c(0.4, 0.0)).unwrap();
        let r = blaschke_isometry_check(&Space::S2, &psi, &[PowerSeries::one(0)], 1024, 1e-8).unwrap();
        assert_eq!(r.status, Status::Pass);
        // ψ(0) = 0 here, so the correction is −|f(0)|²
        assert!((r.computed_real("alternating_sum[0]").unwrap() + 1.0).abs() < 1e-8);
        let psi = BlaschkeProduct::mobius_pair(c(0.5, 0.0)).unwrap();
        let f = one_plus_z();
        let r = blaschke_isometry_check(&Space::S2, &psi, &[f], 1024, 1e-8).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.computed_real("alternating_sum[0]").unwrap().abs() > 0.1);
    }

    #[test]
    fn truncation_detected() {
        let psi = BlaschkeProduct::z_times_mobius(c(0.9, 0.0)).unwrap();
        let r = blaschke_isometry_check(&Space::S12, &psi, &[PowerSeries::one(0)], 32, 1e-8);
        assert!(matches!(r, Err(Error::Truncation(_))));
    }

    #[test]
    fn growth_shift_reproduces_n_squared() {
        let r = growth_formula_check(&Space::S2, &BlaschkeProduct::identity(), &PowerSeries::one(0), 6, 32, 1e-12)
            .unwrap();
        assert_eq!(r.status, Status::Pass);
        for n in 2..=6 {
            assert_eq!(r.computed_real(&format!("norm_sq[{n}]")), Some((n * n) as f64));
        }
        assert_eq!(r.computed_real("max_residual"), Some(0.0));
    }

    #[test]
    fn growth_formulas() {
        let psi = BlaschkeProduct::z_times_mobius(c(0.3, 0.0)).unwrap();
        for space in [Space::S2, Space::S12] {
            for f in [PowerSeries::one(0), one_plus_z()] {
                let r = growth_formula_check(&space, &psi, &f, 6, 512, 1e-8).unwrap();
                assert_eq!(r.status, Status::Pass, "{space}: {r:?}");
            }
        }
        let pair = BlaschkeProduct::mobius_pair(c(0.5, 0.0)).unwrap();
        let r = growth_formula_check(&Space::S12, &pair, &PowerSeries::identity(1), 3, 512, 1e-8).unwrap();
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn dirichlet_linearity() {
        let cases = [
            (BlaschkeProduct::identity(), PowerSeries::one(0), 5),
            (BlaschkeProduct::from_zeros(vec![c(0.6, 0.0)]).unwrap(), PowerSeries::one(0), 5),
            (BlaschkeProduct::z_times_mobius(c(0.2, 0.0)).unwrap(), PowerSeries::from_real(&[1.0, 0.0, 1.0]).unwrap(), 4),
        ];
        for (psi, f, n) in cases {
            let r = dirichlet_linearity_check(&psi, &f, n, 512, 1e-8).unwrap();
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn composition_bounds() {
        let zero = PowerSeries::zero(0);
        let r = composition_norm_bound_check(&Space::S12, &zero, 64, 1e-8).unwrap();
        assert_eq!(r.status, Status::Consistent);
        assert!((r.computed_real("composition_norm_sq").unwrap() - 1.0).abs() < 1e-12);

        let half = PowerSeries::constant(c(0.5, 0.0), 0);
        let r = composition_norm_bound_check(&Space::D2, &half, 128, 1e-8).unwrap();
        assert_eq!(r.status, Status::Consistent);
        let sq = r.computed_real("composition_norm_sq").unwrap();
        assert!((sq - 4.0 * (4.0f64 / 3.0).ln()).abs() < 1e-10 && sq <= 3.0);

        let zhalf = PowerSeries::from_real(&[0.0, 0.5]).unwrap();
        let r = composition_norm_bound_check(&Space::S12, &zhalf, 128, 1e-8).unwrap();
        assert_eq!(r.status, Status::Consistent);
        assert!(r.computed_real("composition_norm_sq").unwrap() <= 3.0);

        assert!(matches!(composition_norm_bound_check(&Space::A2, &zero, 16, 1e-8), Err(Error::Precondition(_))));
        let big = PowerSeries::from_real(&[0.0, 0.9]).unwrap();
        assert!(matches!(composition_norm_bound_check(&Space::S12, &big, 64, 1e-8), Err(Error::Precondition(_))));
    }

    #[test]
    fn hilbert_schmidt_bound() {
        let phi = PowerSeries::from_real(&[0.1, 0.3, -0.2]).unwrap();
        let r = hilbert_schmidt_bound_check(&phi, 256, 1e-8).unwrap();
        assert_eq!(r.status, Status::Consistent);
    }
}
