use oscbath_core::{
    diagonalize_oracle, free_space_eigencondition, potential_matrix, solve_spectrum, t0_free_space, transform_matrix,
    validate_params, CavitySpec, Error,
};

const PI: f64 = std::f64::consts::PI;

fn reference(g: f64) -> oscbath_core::ModelParams64 {
    validate_params(1.0, g, 2.0, 1.0).unwrap()
}

#[test]
fn weak_coupling_roots_approach_uncoupled_frequencies() {
    let p = reference(1e-8);
    let c = CavitySpec::new(10.0, 8).unwrap();
    let s = solve_spectrum(&p, &c, 1e-12).unwrap();
    let mut expected: Vec<f64> = (1..=8).map(|k| k as f64 * PI / 10.0).collect();
    expected.push(1.0);
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in s.omegas.iter().zip(&expected) {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
}

#[test]
fn decoupled_spectrum_is_exact() {
    let p = reference(0.0);
    let c = CavitySpec::new(10.0, 8).unwrap();
    let s = solve_spectrum(&p, &c, 1e-12).unwrap();
    assert_eq!(s.omegas.len(), 9);
    assert!(s.omegas.contains(&1.0));
    let t = transform_matrix(&s).unwrap();
    let r_bar = s.omegas.iter().position(|&w| w == 1.0).unwrap();
    for r in 0..9 {
        assert_eq!(t.t0[r], if r == r_bar { 1.0 } else { 0.0 });
    }
    let o = diagonalize_oracle(&p, &c).unwrap();
    for (lam, w) in o.eigenvalues.iter().zip(&s.omegas) {
        assert!((lam - w * w).abs() < 1e-14);
    }
}

#[test]
fn roots_match_dense_oracle() {
    let p = reference(0.1);
    for n in [4usize, 16, 32, 64] {
        let c = CavitySpec::new(10.0, n).unwrap();
        let s = solve_spectrum(&p, &c, 1e-12).unwrap();
        let o = diagonalize_oracle(&p, &c).unwrap();
        assert_eq!(s.omegas.len(), n + 1);
        for (w, lam) in s.omegas.iter().zip(&o.eigenvalues) {
            let rel = (w - lam.sqrt()).abs() / w;
            assert!(rel < 1e-10, "N={n}: {w} vs {} ({rel:e})", lam.sqrt());
        }
        assert!(s.residuals.iter().all(|&r| r < 1e-12));
    }
}

#[test]
fn roots_interlace_with_bath() {
    for (g, r, n) in [(0.1, 10.0, 32), (0.3, 5.0, 50), (0.01, 60.0, 256), (0.5, 1.0, 7)] {
        let p = reference(g);
        let c = CavitySpec::new(r, n).unwrap();
        let s = solve_spectrum(&p, &c, 1e-12).unwrap();
        assert!(s.omegas[0] > 0.0 && s.omegas[0] < PI / r);
        for k in 1..n {
            let (lo, hi) = (k as f64 * PI / r, (k + 1) as f64 * PI / r);
            assert!(s.omegas[k] > lo && s.omegas[k] < hi, "branch {k}");
        }
        assert!(s.omegas[n] > n as f64 * PI / r);
        assert!(s.omegas.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn transform_matches_oracle_eigenvectors() {
    let p = reference(0.1);
    for n in [4usize, 16, 64] {
        let c = CavitySpec::new(10.0, n).unwrap();
        let s = solve_spectrum(&p, &c, 1e-12).unwrap();
        let t = transform_matrix(&s).unwrap();
        let o = diagonalize_oracle(&p, &c).unwrap();
        let mut worst: f64 = 0.0;
        for r in 0..=n {
            assert!(t.t0[r] > 0.0);
            for mu in 0..=n {
                worst = worst.max((t.get(mu, r) - o.eigenvectors[(mu, r)]).abs());
            }
        }
        assert!(worst < 1e-8, "N={n}: {worst:e}");
    }
}

#[test]
fn transform_is_orthogonal() {
    let p = reference(0.1);
    let c = CavitySpec::new(60.0, 256).unwrap();
    let s = solve_spectrum(&p, &c, 1e-12).unwrap();
    let t = transform_matrix(&s).unwrap();
    let size = 257;
    for r in (0..size).step_by(17) {
        for q in (0..size).step_by(13) {
            let dot: f64 = (0..size).map(|mu| t.get(mu, r) * t.get(mu, q)).sum();
            let want = if r == q { 1.0 } else { 0.0 };
            assert!((dot - want).abs() < 1e-8, "({r},{q}) {dot}");
        }
    }
    let row: f64 = t.t0.iter().map(|x| x * x).sum();
    assert!((row - 1.0).abs() < 1e-10);
}

#[test]
fn particle_row_normalized_for_64_modes() {
    let p = reference(0.1);
    let c = CavitySpec::new(10.0, 64).unwrap();
    let t = transform_matrix(&solve_spectrum(&p, &c, 1e-12).unwrap()).unwrap();
    let row: f64 = t.t0.iter().map(|x| x * x).sum();
    assert!((row - 1.0).abs() < 1e-6);
}

#[test]
fn weak_coupling_transform_concentrates_on_particle() {
    let p = reference(1e-9);
    let c = CavitySpec::new(10.0, 8).unwrap();
    let s = solve_spectrum(&p, &c, 1e-12).unwrap();
    let t = transform_matrix(&s).unwrap();
    let r_bar = s.omegas.iter().enumerate().min_by(|a, b| (a.1 - 1.0).abs().partial_cmp(&(b.1 - 1.0).abs()).unwrap()).unwrap().0;
    for r in 0..9 {
        let want = if r == r_bar { 1.0 } else { 0.0 };
        assert!((t.t0[r] - want).abs() < 1e-3, "r={r} {}", t.t0[r]);
    }
}

#[test]
fn oracle_contract() {
    let p = reference(0.1);
    let c = CavitySpec::new(10.0, 32).unwrap();
    let v = potential_matrix(&p, &c);
    let eta = c.eta(0.1);
    assert_eq!(v[(0, 0)], 1.0 + 32.0 * eta * eta);
    let o = diagonalize_oracle(&p, &c).unwrap();
    let e = &o.eigenvectors;
    let gram = e.transpose() * e;
    for i in 0..33 {
        for j in 0..33 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - want).abs() < 1e-12);
        }
    }
    assert!(o.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    assert!((0..33).all(|r| e[(0, r)] > 0.0));
}

#[test]
fn counterterm_keeps_renormalized_frequency() {
    let p = reference(0.1);
    for n in [4usize, 64, 500] {
        let c = CavitySpec::new(10.0, n).unwrap();
        let eta = c.eta(0.1);
        assert_eq!(potential_matrix(&p, &c)[(0, 0)], 1.0 + n as f64 * eta * eta);
    }
}

// The free-space cot condition and the closed-form t_0 are the N → ∞ limits
// of the finite-cavity expressions: their mismatch shrinks roughly like 1/N.
#[test]
fn free_space_forms_converge_with_mode_count() {
    let p = reference(0.1);
    let mut last_res = f64::INFINITY;
    let mut last_t0 = f64::INFINITY;
    for n in [4usize, 16, 64, 256, 1024] {
        let c = CavitySpec::new(10.0, n).unwrap();
        let s = solve_spectrum(&p, &c, 1e-12).unwrap();
        let t = transform_matrix(&s).unwrap();
        let low = s.omegas.iter().take_while(|&&w| w < 2.0).count();
        let res = s.omegas[..low].iter().map(|&w| free_space_eigencondition(&p, 10.0, w).abs()).fold(0.0, f64::max);
        let dev = (0..low).map(|r| (t0_free_space(&p, &c, s.omegas[r]) - t.t0[r]).abs()).fold(0.0, f64::max);
        assert!(res < last_res / 3.0 && dev < last_t0 / 3.0, "N={n}: {res:e} {dev:e}");
        last_res = res;
        last_t0 = dev;
    }
    assert!(last_res < 2e-3 && last_t0 < 1e-3, "{last_res:e} {last_t0:e}");
}

#[test]
fn csv_dump() {
    let p = reference(0.1);
    let s = solve_spectrum(&p, &CavitySpec::new(10.0, 4).unwrap(), 1e-12).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "r,Omega_r,residual");
    assert_eq!(lines.len(), 6);
    assert!(lines[1].starts_with("0,"));
}

#[test]
fn rejects_bad_tolerance() {
    let p = reference(0.1);
    let e = solve_spectrum(&p, &CavitySpec::new(10.0, 4).unwrap(), 0.0).unwrap_err();
    assert!(matches!(e, Error::NonPositive { .. }));
}

#[test]
fn single_precision_spectrum() {
    let p = validate_params(1.0f32, 0.1, 2.0, 1.0).unwrap();
    let c = CavitySpec::new(10.0f32, 16).unwrap();
    let s = solve_spectrum(&p, &c, 1e-5).unwrap();
    let t = transform_matrix(&s).unwrap();
    let o = diagonalize_oracle(&p, &c).unwrap();
    for (w, lam) in s.omegas.iter().zip(&o.eigenvalues) {
        assert!((w - lam.sqrt()).abs() / w < 1e-5);
    }
    let norm: f32 = (0..17).map(|mu| t.get(mu, 3) * t.get(mu, 3)).sum();
    assert!((norm - 1.0).abs() < 1e-5);
}
