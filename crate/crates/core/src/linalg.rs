use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Up to this dimension the full dense SVD is cheap enough.
const DENSE_SVD_LIMIT: usize = 160;
const MAX_LANCZOS_STEPS: usize = 400;

/// Largest singular value of a dense complex matrix.
pub fn largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return 0.0;
    }
    if m.min(n) <= DENSE_SVD_LIMIT {
        dense_largest_singular_value(a)
    } else {
        lanczos_largest_singular_value(a)
    }
}

pub fn dense_largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

fn orthogonalize(v: &mut DVector<Complex64>, basis: &[DVector<Complex64>]) {
    // two passes of classical Gram-Schmidt
    for _ in 0..2 {
        for q in basis {
            let proj = q.dotc(v);
            v.axpy(-proj, q, Complex64::new(1.0, 0.0));
        }
    }
}

/// A matrix known only through products with it and its adjoint.
pub trait LinearOp {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64>;
    fn apply_adjoint(&self, y: &DVector<Complex64>) -> DVector<Complex64>;
}

impl LinearOp for DMatrix<Complex64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }
    fn ncols(&self) -> usize {
        self.ncols()
    }
    fn apply(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        self * x
    }
    fn apply_adjoint(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        self.ad_mul(y)
    }
}

pub fn lanczos_largest_singular_value(a: &DMatrix<Complex64>) -> f64 {
    lanczos_top_singular_value(a).unwrap_or_else(|| dense_largest_singular_value(a))
}

/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization; the
/// top singular value of the small bidiagonal matrix converges to `σ_max(A)`.
/// `None` when the start vector lies in the kernel.
pub fn lanczos_top_singular_value(a: &impl LinearOp) -> Option<f64> {
    let (m, n) = (a.nrows(), a.ncols());
    if m == 0 || n == 0 {
        return Some(0.0);
    }
    let max_steps = m.min(n).min(MAX_LANCZOS_STEPS);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = DVector::from_fn(n, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    v.unscale_mut(v.norm());

    let mut vs: Vec<DVector<Complex64>> = vec![v.clone()];
    let mut us: Vec<DVector<Complex64>> = Vec::new();
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();

    let mut u = a.apply(&v);
    let mut alpha = u.norm();
    if alpha == 0.0 {
        return None;
    }
    u.unscale_mut(alpha);
    us.push(u.clone());
    alphas.push(alpha);

    let mut last = alpha;
    for step in 1..max_steps {
        let mut next_v = a.apply_adjoint(&u) - &v * Complex64::new(alpha, 0.0);
        orthogonalize(&mut next_v, &vs);
        let beta = next_v.norm();
        if beta <= 1e-14 * last {
            break;
        }
        next_v.unscale_mut(beta);
        let mut next_u = a.apply(&next_v) - &u * Complex64::new(beta, 0.0);
        orthogonalize(&mut next_u, &us);
        alpha = next_u.norm();
        betas.push(beta);
        if alpha <= 1e-14 * last {
            alphas.push(0.0);
            break;
        }
        next_u.unscale_mut(alpha);
        alphas.push(alpha);
        vs.push(next_v.clone());
        us.push(next_u.clone());
        v = next_v;
        u = next_u;

        if step % 4 == 0 {
            let est = bidiagonal_top(&alphas, &betas);
            if (est - last).abs() <= 1e-15 * est {
                return Some(est);
            }
            last = est;
        }
    }
    Some(bidiagonal_top(&alphas, &betas))
}

fn bidiagonal_top(alphas: &[f64], betas: &[f64]) -> f64 {
    let k = alphas.len();
    let b = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alphas[i]
        } else if j == i + 1 && i < betas.len() {
            betas[i]
        } else {
            0.0
        }
    });
    b.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix in ascending order.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}×{}", m.nrows(), m.ncols())));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| a.total_cmp(b));
    Ok(vals)
}

/// `(M + M*)/2`.
pub fn hermitian_part(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn lanczos_agrees_with_dense_svd() {
        for (n, seed) in [(20, 1), (90, 2), (200, 3)] {
            let a = random_matrix(n, n, seed);
            let dense = dense_largest_singular_value(&a);
            let lz = lanczos_largest_singular_value(&a);
            assert!((dense - lz).abs() <= 1e-12 * dense, "{n}: {dense} vs {lz}");
        }
        // banded lower-triangular shape like a multiplication operator
        let n = 300;
        let band = DMatrix::from_fn(n, n, |i, j| {
            if i >= j && i - j <= 2 {
                Complex64::new(1.0 + ((i + 1) as f64 / (j + 1) as f64).sqrt() * 0.1, 0.2 * (i - j) as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let dense = dense_largest_singular_value(&band);
        let lz = lanczos_largest_singular_value(&band);
        assert!((dense - lz).abs() <= 1e-12 * dense);
    }

    #[test]
    fn eigenvalues_of_diag() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(-0.1, 0.0)]));
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] + 0.1).abs() < 1e-15 && (e[1] - 1.0).abs() < 1e-15);
        assert!(matches!(hermitian_eigenvalues(&random_matrix(2, 3, 0)), Err(Error::Shape(_))));
    }
}
