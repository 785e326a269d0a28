//! Browser bindings for the demo page in `www/`.
//!
//! Everything crosses the boundary as plain numbers, strings and `Vec<f64>`,
//! so the same functions are exercised by native tests.

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use diskops::linalg::lanczos_top_singular_value;
use diskops::operators::BandedMultiplication;
use diskops::spaces::{kernel_eval, norm_sq, sup_norm_default};
use diskops::{BlaschkeProduct, PowerSeries, Space};

const MAX_GRID: u32 = 512;
const MAX_ORDER: u32 = 8192;

fn space(name: &str) -> Result<Space, String> {
    name.parse().map_err(|e: diskops::Error| e.to_string())
}

fn complexes(interleaved: &[f64]) -> Result<Vec<Complex64>, String> {
    if !interleaved.len().is_multiple_of(2) {
        return Err(format!("expected (re, im) pairs, got {} numbers", interleaved.len()));
    }
    Ok(interleaved.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect())
}

/// `|K_w(z)|` on a `size × size` grid over `[-1, 1]²`, row-major from the top
/// left. Points with `|z| ≥ 0.995` are `NaN`.
#[wasm_bindgen]
pub fn kernel_heatmap(space_name: &str, w_re: f64, w_im: f64, size: u32) -> Result<Vec<f64>, String> {
    let sp = space(space_name)?;
    let w = Complex64::new(w_re, w_im);
    if w.norm() >= 1.0 || w.is_nan() {
        return Err(format!("w = {w} is outside the disk"));
    }
    if !(2..=MAX_GRID).contains(&size) {
        return Err(format!("grid size must be in 2..={MAX_GRID}"));
    }
    let step = 2.0 / (size - 1) as f64;
    let mut out = Vec::with_capacity((size * size) as usize);
    for row in 0..size {
        for col in 0..size {
            let z = Complex64::new(-1.0 + col as f64 * step, 1.0 - row as f64 * step);
            if z.norm() >= 0.995 {
                out.push(f64::NAN);
            } else {
                out.push(kernel_eval(&sp, w, z).map_err(|e| e.to_string())?.norm());
            }
        }
    }
    Ok(out)
}

/// Compression norms of `M_f` for `N = 16, 32, …, max_order`, returned as
/// `[N₀, est₀, N₁, est₁, …, sup|f|]`.
#[wasm_bindgen]
pub fn multiplier_profile(space_name: &str, coeffs: Vec<f64>, max_order: u32) -> Result<Vec<f64>, String> {
    let sp = space(space_name)?;
    let f = PowerSeries::new(complexes(&coeffs)?).map_err(|e| e.to_string())?;
    if !(16..=MAX_ORDER).contains(&max_order) {
        return Err(format!("max_order must be in 16..={MAX_ORDER}"));
    }
    let mut out = Vec::new();
    let mut n = 16;
    while n <= max_order as usize {
        let est = lanczos_top_singular_value(&BandedMultiplication::new(&sp, &f, n)).unwrap_or(0.0);
        out.extend([n as f64, est]);
        n *= 2;
    }
    out.push(sup_norm_default(&f));
    Ok(out)
}

/// `‖ψⁿ‖²` for `n = 0..=n_max`, where `ψ` has the given zeros.
#[wasm_bindgen]
pub fn blaschke_growth(space_name: &str, zeros: Vec<f64>, n_max: u32) -> Result<Vec<f64>, String> {
    let sp = space(space_name)?;
    let psi = BlaschkeProduct::from_zeros(complexes(&zeros)?).map_err(|e| e.to_string())?;
    if n_max > 32 {
        return Err("n_max is capped at 32".into());
    }
    let order = psi.recommended_order(2048).max(64 * psi.degree().max(1));
    let symbol = psi.series(order);
    let mut g = PowerSeries::one(order);
    let mut out = vec![norm_sq(&sp, &g)];
    for _ in 0..n_max {
        g = diskops::series::cauchy_product(&g, &symbol, order);
        out.push(norm_sq(&sp, &g));
    }
    Ok(out)
}

/// `|ψ(e^{iθ})|` at `samples` equally spaced angles; all ones for an inner function.
#[wasm_bindgen]
pub fn blaschke_boundary_modulus(zeros: Vec<f64>, samples: u32) -> Result<Vec<f64>, String> {
    let psi = BlaschkeProduct::from_zeros(complexes(&zeros)?).map_err(|e| e.to_string())?;
    Ok((0..samples)
        .map(|k| psi.evaluate(Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / samples as f64)).norm())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heatmap_shape_and_mask() {
        let h = kernel_heatmap("S12", 0.3, 0.0, 9).unwrap();
        assert_eq!(h.len(), 81);
        // corners are outside the disk, the center is K_w(0) = 1
        assert!(h[0].is_nan());
        assert!((h[40] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(kernel_heatmap("nope", 0.0, 0.0, 8).is_err());
        assert!(kernel_heatmap("H2", 1.0, 0.0, 8).is_err());
        assert!(multiplier_profile("S12", vec![1.0], 64).is_err());
        assert!(blaschke_growth("S12", vec![1.5, 0.0], 4).is_err());
    }
}
