use diskops_web::{blaschke_boundary_modulus, blaschke_growth, kernel_heatmap, multiplier_profile};

#[test]
fn heatmap_is_symmetric_for_real_w() {
    let n = 33;
    let h = kernel_heatmap("S12", 0.5, 0.0, n).unwrap();
    let n = n as usize;
    for row in 0..n {
        for col in 0..n {
            let (a, b) = (h[row * n + col], h[(n - 1 - row) * n + col]);
            assert!(a.is_nan() && b.is_nan() || (a - b).abs() <= 1e-12 * a.abs(), "{row},{col}: {a} vs {b}");
        }
    }
}

#[test]
fn multiplier_profile_for_one_plus_z() {
    let p = multiplier_profile("S12", vec![1.0, 0.0, 1.0, 0.0], 1024).unwrap();
    let (pairs, sup) = p.split_at(p.len() - 1);
    assert!((sup[0] - 2.0).abs() < 1e-12);
    let est: Vec<f64> = pairs.chunks(2).map(|c| c[1]).collect();
    assert_eq!(pairs.chunks(2).map(|c| c[0]).collect::<Vec<_>>(), vec![16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0]);
    assert!(est.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-13)));
    assert!(*est.last().unwrap() > 4.5f64.sqrt());
}

#[test]
fn growth_of_shift_powers() {
    // ψ = z: ‖zⁿ‖² is the weight itself
    let s12 = blaschke_growth("S12", vec![0.0, 0.0], 8).unwrap();
    for (n, v) in s12.iter().enumerate() {
        assert_eq!(*v, ((n + 1) * (n + 2)) as f64 / 2.0);
    }
    let s2 = blaschke_growth("S2", vec![0.0, 0.0], 8).unwrap();
    assert_eq!(s2[0], 1.0);
    for (n, v) in s2.iter().enumerate().skip(1) {
        assert_eq!(*v, (n * n) as f64);
    }
}

#[test]
fn growth_is_quadratic_on_s12() {
    let g = blaschke_growth("S12", vec![0.0, 0.0, 0.3, 0.0], 10).unwrap();
    for w in g.windows(4) {
        let third = w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0];
        assert!(third.abs() < 1e-9 * w[3], "{third}");
    }
}

#[test]
fn boundary_modulus_is_one() {
    let m = blaschke_boundary_modulus(vec![0.5, 0.2, -0.3, 0.6], 64).unwrap();
    assert_eq!(m.len(), 64);
    assert!(m.iter().all(|v| (v - 1.0).abs() < 1e-13));
}
