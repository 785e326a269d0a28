//! Pick-type positivity: Kaluza's log-convexity test, signs of the reciprocal
//! kernel series, Pick matrices and sampled Toeplitz–Corona kernels.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_part};
use crate::report::{Provenance, VerificationReport};
use crate::series::PowerSeries;
use crate::spaces::{kernel_eval, kernel_eval_closed, kernel_eval_series, Space};

/// Relative PSD tolerance against the largest diagonal entry.
pub const PSD_TOL: f64 = 1e-10;
/// Reciprocal coefficients up to this value count as nonpositive.
pub const SIGN_TOL: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct PickProblem {
    pub space: Space,
    pub nodes: Vec<Complex64>,
    pub targets: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PickJson {
    space: String,
    nodes: Vec<[f64; 2]>,
    targets: Vec<[f64; 2]>,
}

fn pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(v: Vec<[f64; 2]>) -> Vec<Complex64> {
    v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect()
}

impl PickProblem {
    pub fn new(space: Space, nodes: Vec<Complex64>, targets: Vec<Complex64>) -> Result<Self> {
        if nodes.len() != targets.len() {
            return Err(Error::Shape(format!("{} nodes but {} targets", nodes.len(), targets.len())));
        }
        for (i, z) in nodes.iter().enumerate() {
            if !(z.norm() < 1.0) {
                return Err(Error::Domain(format!("node {z} is not inside the unit disk")));
            }
            if nodes[..i].contains(z) {
                return Err(Error::Domain(format!("node {z} is repeated")));
            }
        }
        Ok(Self { space, nodes, targets })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PickJson = serde_json::from_str(s)?;
        Self::new(j.space.parse()?, complexes(j.nodes), complexes(j.targets))
    }

    pub fn to_json(&self) -> String {
        let j = PickJson { space: self.space.to_string(), nodes: pairs(&self.nodes), targets: pairs(&self.targets) };
        serde_json::to_string(&j).expect("plain numbers serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdVerdict {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    /// Largest diagonal entry.
    pub matrix_scale: f64,
}

/// `min eig ≥ −PSD_TOL · max diag`.
pub fn psd_check(m: &DMatrix<Complex64>) -> Result<PsdVerdict> {
    let eig = hermitian_eigenvalues(m)?;
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let matrix_scale = m.diagonal().iter().map(|z| z.re).fold(0.0, f64::max);
    Ok(PsdVerdict { is_psd: min_eigenvalue >= -PSD_TOL * matrix_scale, min_eigenvalue, matrix_scale })
}

/// `a_n² ≤ a_{n−1} a_{n+1}` for `1 ≤ n ≤ n_max`, with `a_0 = 1` required.
pub fn kaluza_check(space: &Space, n_max: usize) -> Result<VerificationReport> {
    let a = space.kernel_coefficients(n_max + 1);
    if a[0] != 1.0 {
        return Err(Error::Precondition(format!("a_0 = {} on {space}, expected 1", a[0])));
    }
    let mut report = VerificationReport::new("kaluza", 4.0 * f64::EPSILON);
    let mut first_failure = None;
    let mut min_margin = f64::INFINITY;
    for n in 1..=n_max {
        let lhs = a[n] * a[n];
        let rhs = a[n - 1] * a[n + 1];
        min_margin = min_margin.min((rhs - lhs) / rhs);
        if lhs > rhs * (1.0 + 4.0 * f64::EPSILON) {
            first_failure = Some(n);
            break;
        }
    }
    report.push_computed("n_checked", n_max);
    report.push_computed("min_relative_margin", min_margin);
    if let Some(n) = first_failure {
        report.push_computed("first_failure", n);
        return Ok(report.passed_if(false).with_message(format!("a_{n}² > a_{}·a_{}", n - 1, n + 1)));
    }
    Ok(report.passed_if(true))
}

/// Coefficients `c_n` of `1/Σ a_n t^n` up to `n_max`.
pub fn reciprocal_kernel_coefficients(space: &Space, n_max: usize) -> Result<Vec<f64>> {
    let k = PowerSeries::from_fn(n_max, |n| Complex64::new(space.kernel_coeff(n), 0.0));
    Ok(k.reciprocal(n_max)?.coeffs().iter().map(|c| c.re).collect())
}

/// `c_n ≤ SIGN_TOL` for `1 ≤ n ≤ n_max`.
pub fn reciprocal_sign_check(space: &Space, n_max: usize) -> Result<VerificationReport> {
    let c = reciprocal_kernel_coefficients(space, n_max)?;
    let mut report = VerificationReport::new("reciprocal_sign", SIGN_TOL);
    for (n, value) in c.iter().enumerate().take(4) {
        report.push_computed(format!("c[{n}]"), *value);
    }
    report.push_computed("max_c", c[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max));
    match (1..=n_max).find(|&n| c[n] > SIGN_TOL) {
        Some(n) => {
            report.push_computed("first_violation", n);
            report.push_computed("violation_value", c[n]);
            Ok(report.passed_if(false).with_message(format!("c_{n} = {} > 0", c[n])))
        }
        None => Ok(report.passed_if(true)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMode {
    /// Closed form when the space has one, otherwise a series with tail below `1e-12`.
    Auto,
    Closed,
    Series(usize),
}

fn kernel(space: &Space, w: Complex64, z: Complex64, mode: KernelMode) -> Result<Complex64> {
    match mode {
        KernelMode::Auto => kernel_eval(space, w, z),
        KernelMode::Closed => kernel_eval_closed(space, w, z),
        KernelMode::Series(order) => kernel_eval_series(space, w, z, order),
    }
}

/// `[(1 − w̄_i w_j) K_{λ_i}(λ_j)]` with entry `(j, i)`, symmetrized as
/// `(M + M*)/2`.
pub fn pick_matrix(problem: &PickProblem, mode: KernelMode) -> Result<DMatrix<Complex64>> {
    let n = problem.nodes.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (li, lj) = (problem.nodes[i], problem.nodes[j]);
            if !(li.norm() < 1.0 && lj.norm() < 1.0) {
                return Err(Error::Domain("Pick nodes must lie in the open disk".into()));
            }
            let factor = Complex64::new(1.0, 0.0) - problem.targets[i].conj() * problem.targets[j];
            m[(j, i)] = factor * kernel(&problem.space, li, lj, mode)?;
        }
    }
    Ok(hermitian_part(&m))
}

/// `Σ_{n≥1} |z0|^{2n}/β_{n+1}`, the largest `|f(z0)|²`-type quantity reachable
/// by a norm-one multiplier vanishing at `0` in the two-point problem; summed
/// until the terms drop below `1e-17`.
pub fn attainability_bound(space: &Space, z0: Complex64) -> Result<f64> {
    let r2 = z0.norm_sqr();
    if !(r2 < 1.0) {
        return Err(Error::Domain(format!("|z0| = {} is not below 1", z0.norm())));
    }
    let mut total = 0.0;
    let mut power = 1.0;
    for n in 1..100_000 {
        power *= r2;
        let term = power / space.weight(n + 1);
        total += term;
        if term < 1e-17 * total.max(1.0) {
            break;
        }
    }
    Ok(total)
}

/// The two-point problem on `S2` with nodes `{0, 1/2}`, targets `{0, w_0}`,
/// `|w_0|² = 0.1`: the Pick condition holds (`0.9·(1 + Σ 4^{−n}/n²) ≈ 1.1409`)
/// while the attainability sum is only `≈ 0.0706 < 0.1`.
pub fn scalar_pick_counterexample() -> Result<VerificationReport> {
    let w0 = Complex64::new(0.1f64.sqrt(), 0.0);
    let half = Complex64::new(0.5, 0.0);
    let problem = PickProblem::new(Space::S2, vec![Complex64::new(0.0, 0.0), half], vec![Complex64::new(0.0, 0.0), w0])?;
    let m = pick_matrix(&problem, KernelMode::Auto)?;
    let condition = m[(1, 1)].re;
    let verdict = psd_check(&m)?;
    let attain = attainability_bound(&Space::S2, half)?;
    let tol = 5e-4;
    let ok = (condition - 1.1409).abs() <= tol
        && condition > 1.0
        && (attain - 0.0706).abs() <= tol
        && attain < 0.1
        && verdict.is_psd;
    Ok(VerificationReport::new("scalar_pick_counterexample_values", tol)
        .computed("pick_condition", condition)
        .computed("attainability_sum", attain)
        .computed("pick_min_eigenvalue", verdict.min_eigenvalue)
        .reference("pick_condition", 1.1409, Provenance::Published)
        .reference("attainability_sum", 0.0706, Provenance::Published)
        .passed_if(ok))
}

/// `5×5` polar mesh, radii `0.1, 0.3, …, 0.9`.
pub fn default_corona_grid() -> Vec<Complex64> {
    let mut grid = Vec::with_capacity(25);
    for i in 0..5 {
        let r = 0.1 + 0.2 * i as f64;
        for j in 0..5 {
            grid.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / 5.0 + 0.3 * i as f64));
        }
    }
    grid
}

/// Sampled Toeplitz–Corona kernel `[Σ_k φ_k(w_i)‾ φ_k(z_j) − δ²] K_{w_i}(z_j)`
/// over `grid × grid`. A necessary test only; positivity on a finite sample
/// says nothing about the rest of the bidisk.
pub fn corona_kernel_matrix(
    space: &Space,
    symbols: &[PowerSeries],
    delta: f64,
    grid: &[Complex64],
) -> Result<DMatrix<Complex64>> {
    for z in grid {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("grid point {z} is not inside the unit disk")));
        }
    }
    let values: Vec<Vec<Complex64>> = grid.iter().map(|z| symbols.iter().map(|f| f.evaluate(*z)).collect()).collect();
    let n = grid.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s: Complex64 = values[i].iter().zip(&values[j]).map(|(fw, fz)| fw.conj() * fz).sum();
            m[(j, i)] = (s - delta * delta) * kernel_eval(space, grid[i], grid[j])?;
        }
    }
    Ok(hermitian_part(&m))
}

pub fn corona_kernel_check(
    space: &Space,
    symbols: &[PowerSeries],
    delta: f64,
    grid: &[Complex64],
) -> Result<PsdVerdict> {
    psd_check(&corona_kernel_matrix(space, symbols, delta, grid)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kaluza_examples() {
        let r = kaluza_check(&Space::S12, 10_000).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.computed_real("min_relative_margin").unwrap() > 0.0);
        assert_eq!(kaluza_check(&Space::H2, 100).unwrap().status, Status::Pass);
        let r = kaluza_check(&Space::S2, 100).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.computed_real("first_failure"), Some(1.0));
    }

    #[test]
    fn reciprocal_examples() {
        let s2 = reciprocal_kernel_coefficients(&Space::S2, 2).unwrap();
        assert!((s2[0] - 1.0).abs() < 1e-12 && (s2[1] + 1.0).abs() < 1e-12 && (s2[2] - 0.75).abs() < 1e-12);
        let s22 = reciprocal_kernel_coefficients(&Space::S22, 2).unwrap();
        assert!((s22[1] + 0.5).abs() < 1e-12 && (s22[2] - 0.05).abs() < 1e-12);

        let r = reciprocal_sign_check(&Space::S2, 10).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.computed_real("first_violation"), Some(2.0));
        let r = reciprocal_sign_check(&Space::S22, 10).unwrap();
        assert_eq!(r.computed_real("first_violation"), Some(2.0));
        assert_eq!(reciprocal_sign_check(&Space::S12, 2000).unwrap().status, Status::Pass);
    }

    #[test]
    fn kaluza_implies_sign_condition() {
        for space in [Space::H2, Space::D2, Space::S12, Space::Km(2), Space::dalpha(1.5).unwrap()] {
            if kaluza_check(&space, 500).unwrap().status == Status::Pass {
                assert_eq!(reciprocal_sign_check(&space, 500).unwrap().status, Status::Pass, "{space}");
            }
        }
    }

    #[test]
    fn psd_examples() {
        let id = DMatrix::<Complex64>::identity(3, 3);
        let v = psd_check(&id).unwrap();
        assert!(v.is_psd && (v.min_eigenvalue - 1.0).abs() < 1e-15);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-0.1, 0.0)]));
        assert!(!psd_check(&d).unwrap().is_psd);
        assert!(matches!(psd_check(&DMatrix::<Complex64>::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn single_node() {
        let p = PickProblem::new(Space::S12, vec![c(0.3, 0.2)], vec![c(0.0, 0.0)]).unwrap();
        let m = pick_matrix(&p, KernelMode::Auto).unwrap();
        assert!(m[(0, 0)].re > 1.0);
    }

    #[test]
    fn counterexample_values() {
        let r = scalar_pick_counterexample().unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!((attainability_bound(&Space::H2, c(0.5, 0.0)).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn closed_and_series_modes_agree() {
        let p = PickProblem::new(Space::S12, vec![c(0.1, 0.5), c(-0.6, 0.2)], vec![c(0.3, 0.0), c(0.0, 0.4)]).unwrap();
        let a = pick_matrix(&p, KernelMode::Closed).unwrap();
        let b = pick_matrix(&p, KernelMode::Series(400)).unwrap();
        assert!((a - b).norm() < 1e-12);
        assert!(matches!(
            pick_matrix(&PickProblem { space: Space::S2, ..p.clone() }, KernelMode::Closed),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn problem_validation_and_json() {
        assert!(PickProblem::new(Space::H2, vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0); 2]).is_err());
        assert!(PickProblem::new(Space::H2, vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]).is_err());
        assert!(PickProblem::new(Space::H2, vec![c(0.1, 0.0)], vec![]).is_err());
        let p = PickProblem::from_json(r#"{"space": "S2", "nodes": [[0,0],[0.5,0]], "targets": [[0,0],[0.3,0]]}"#).unwrap();
        assert_eq!(p.space, Space::S2);
        assert_eq!(PickProblem::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn corona_examples() {
        let grid = default_corona_grid();
        assert_eq!(grid.len(), 25);
        let one = [PowerSeries::one(0)];
        let v = corona_kernel_check(&Space::S12, &one, 1.0, &grid).unwrap();
        assert!(v.is_psd && v.min_eigenvalue.abs() < 1e-14);
        let v = corona_kernel_check(&Space::S12, &one, 1.1, &grid).unwrap();
        assert!(!v.is_psd);

        let symbols = [PowerSeries::identity(1), PowerSeries::from_real(&[1.0, -1.0]).unwrap()];
        let small: Vec<Complex64> = grid.iter().step_by(3).copied().take(8).collect();
        let v = corona_kernel_check(&Space::S12, &symbols, 0.1, &small).unwrap();
        assert!(v.is_psd);
        // the 8-point matrix is a principal submatrix of the doubled grid's, so
        // its smallest eigenvalue cannot lie below the larger one's
        let doubled: Vec<Complex64> = small.iter().copied().chain(grid.iter().skip(1).step_by(3).copied().take(8)).collect();
        let big = corona_kernel_check(&Space::S12, &symbols, 0.1, &doubled).unwrap();
        assert!(v.min_eigenvalue >= big.min_eigenvalue - 1e-12 * big.matrix_scale);
        assert!(corona_kernel_check(&Space::S12, &one, 1.0, &[c(1.0, 0.0)]).is_err());
    }

    fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        let a = DMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        a.qr().q()
    }

    #[test]
    fn unitary_invariance_and_target_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..6 {
            let nodes: Vec<Complex64> =
                (0..4).map(|_| Complex64::from_polar(0.85 * rng.random::<f64>(), 6.0 * rng.random::<f64>())).collect();
            let targets: Vec<Complex64> =
                (0..4).map(|_| Complex64::from_polar(if trial % 2 == 0 { 0.3 } else { 1.2 }, rng.random::<f64>())).collect();
            let p = PickProblem::new(Space::S12, nodes.clone(), targets.clone()).unwrap();
            let m = pick_matrix(&p, KernelMode::Auto).unwrap();
            let u = random_unitary(4, &mut rng);
            let conj = hermitian_part(&(&u * &m * u.adjoint()));
            assert_eq!(psd_check(&m).unwrap().is_psd, psd_check(&conj).unwrap().is_psd);

            let phase = Complex64::from_polar(1.0, rng.random::<f64>() * 6.0);
            let rotated = PickProblem::new(Space::S12, nodes, targets.iter().map(|w| w * phase).collect()).unwrap();
            let m2 = pick_matrix(&rotated, KernelMode::Auto).unwrap();
            assert!((&m - &m2).iter().all(|d| d.norm() <= 1e-15 * m.norm().max(1.0)));
        }
    }

    #[test]
    fn gram_matrices_are_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for space in [Space::H2, Space::A2, Space::D2, Space::S2, Space::S12, Space::S22, Space::Km(2)] {
            let nodes: Vec<Complex64> =
                (0..5).map(|_| Complex64::from_polar(0.9 * rng.random::<f64>(), 6.3 * rng.random::<f64>())).collect();
            let p = PickProblem::new(space, nodes, vec![c(0.0, 0.0); 5]).unwrap();
            let v = psd_check(&pick_matrix(&p, KernelMode::Auto).unwrap()).unwrap();
            assert!(v.min_eigenvalue >= -1e-10 * v.matrix_scale, "{space}");
        }
    }
}
