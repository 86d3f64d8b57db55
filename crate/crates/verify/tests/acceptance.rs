//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use oscbath_core::{
    bogoliubov_closed, c1_by_quadrature, c1_closed, diagonalize_oracle, f00_continuum, f00_sq_asymptotic,
    f_matrix_row, integrate_semi_infinite, k_factor, occupation_bare_continuum, occupation_bare_finite,
    occupation_dressed_continuum, occupation_dressed_finite, s1_direct, s2_direct, solve_spectrum, transform_matrix,
    vacuum_divergence_probe, validate_params, BathKernel, CavitySpec, Channel, ModeSpectrum64, ModelParams64,
    QuadratureSpec64, TransformMatrix64,
};

const PI: f64 = std::f64::consts::PI;

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

fn fig(n0: f64) -> ModelParams64 {
    validate_params(1.0, 0.1, 2.0, n0).unwrap()
}

fn quad() -> QuadratureSpec64 {
    QuadratureSpec64::default()
}

fn cavity(p: &ModelParams64, r: f64, n: usize) -> Result<(ModeSpectrum64, TransformMatrix64), oscbath_core::Error> {
    let s = solve_spectrum(p, &CavitySpec::new(r, n)?, 1e-12)?;
    let t = transform_matrix(&s)?;
    Ok((s, t))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
}

fn thermal_asymptote() -> Outcome {
    let start = Instant::now();
    let p = fig(1.0);
    let bose = 1.0 / (2f64.exp() - 1.0);
    let bare = occupation_bare_continuum(&p, 100.0, &quad())?;
    let dressed = occupation_dressed_continuum(&p, 100.0, BathKernel::Subtracted, &quad())?;
    let secs = start.elapsed().as_secs_f64();
    let pass = rel(bare, bose) < 0.02 && rel(dressed, bose) < 0.02 && secs < 300.0;
    Ok((
        pass,
        format!(
            "bose {bose:.6}, bare {bare:.6} ({:+.2}%), dressed {dressed:.6} ({:+.2}%), {secs:.1} s",
            100.0 * (bare / bose - 1.0),
            100.0 * (dressed / bose - 1.0)
        ),
    ))
}

fn initial_condition_independence() -> Outcome {
    let mut bare = Vec::new();
    let mut dressed = Vec::new();
    for n0 in [0.0, 1.0, 5.0] {
        let p = fig(n0);
        bare.push(occupation_bare_continuum(&p, 100.0, &quad())?);
        dressed.push(occupation_dressed_continuum(&p, 100.0, BathKernel::Subtracted, &quad())?);
    }
    let spread = |v: &[f64]| v.iter().copied().fold(f64::MIN, f64::max) - v.iter().copied().fold(f64::MAX, f64::min);
    let (sb, sd) = (spread(&bare), spread(&dressed));
    Ok((sb < 1e-3 && sd < 1e-3, format!("spread bare {sb:.2e}, dressed {sd:.2e}")))
}

fn dressed_unitarity() -> Outcome {
    let (s, tm) = cavity(&fig(1.0), 60.0, 256)?;
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.5, 5.0, 25.0] {
        let sum: f64 = f_matrix_row(&s, &tm, 0, t)?.iter().map(|z| z.norm_sqr()).sum();
        worst = worst.max((sum - 1.0).abs());
    }
    Ok((worst < 1e-10, format!("max |sum - 1| = {worst:.2e}")))
}

fn spectrum_oracle() -> Outcome {
    let p = fig(1.0);
    let (mut root_dev, mut vec_dev): (f64, f64) = (0.0, 0.0);
    for n in [4usize, 16, 64] {
        let c = CavitySpec::new(10.0, n)?;
        let s = solve_spectrum(&p, &c, 1e-12)?;
        let tm = transform_matrix(&s)?;
        let o = diagonalize_oracle(&p, &c)?;
        for (r, (w, lam)) in s.omegas.iter().zip(&o.eigenvalues).enumerate() {
            root_dev = root_dev.max(rel(*w, lam.sqrt()));
            for mu in 0..=n {
                vec_dev = vec_dev.max((tm.get(mu, r) - o.eigenvectors[(mu, r)]).abs());
            }
        }
    }
    Ok((root_dev < 1e-9 && vec_dev < 1e-8, format!("roots {root_dev:.2e} rel, eigenvectors {vec_dev:.2e}")))
}

fn closed_form_cross_checks() -> Outcome {
    let p = fig(1.0);
    let mut c1_dev: f64 = 0.0;
    for t in grid(0.0, 20.0, 201) {
        c1_dev = c1_dev.max((c1_closed(&p, t) - c1_by_quadrature(&p, t, &quad())?).abs());
    }
    let mut k_dev: f64 = 0.0;
    for t in grid(0.0, 100.0, 1001) {
        let c = bogoliubov_closed(&p, Channel::Particle, t);
        k_dev = k_dev.max((c.alpha.norm_sqr() + c.beta.norm_sqr() - k_factor(&p, t)).abs());
    }
    let g = p.g;
    let lorentz = |a: f64| 2.0 * g * a * a / ((a * a - 1.0).powi(2) + PI * PI * g * g * a * a);
    let norm = integrate_semi_infinite(lorentz, &quad().with_breakpoints([1.0]))?.value;
    let pass = c1_dev < 1e-6 && k_dev < 1e-12 && (norm - 1.0).abs() < 1e-8;
    Ok((pass, format!("C1 {c1_dev:.2e}, K identity {k_dev:.2e}, C1(0) integral - 1 = {:.2e}", norm - 1.0)))
}

fn asymptotic_formulas() -> Outcome {
    let p = fig(1.0);
    let g = p.g;
    let mut s1_worst: f64 = 0.0;
    for t in grid(50.0, 100.0, 11) {
        s1_worst = s1_worst.max(rel(s1_direct(&p, t, &quad())?, 4.0 * g / t.powi(3)));
    }
    let (w, t) = (2.0, 50.0);
    let s2 = s2_direct(&p, w, t, &quad())?;
    let s2_dev = rel(s2, 4.0 * 2f64.sqrt() * g.powf(1.5) / (w * w * t.powi(3)));
    let f00 = f00_continuum(&p, 60.0, &quad())?.norm_sqr();
    let f00_dev = rel(f00, f00_sq_asymptotic(&p, 60.0)?);
    let pass = s1_worst < 0.10 && s2_dev < 0.15 && f00_dev < 0.10;
    Ok((
        pass,
        format!("S1 worst {:.1}%, S2(2,50) {:.1}%, |f00|^2(60) {:.1}%", 100.0 * s1_worst, 100.0 * s2_dev, 100.0 * f00_dev),
    ))
}

fn continuum_limit() -> Outcome {
    let p = fig(1.0);
    let (s, tm) = cavity(&p, 60.0, 256)?;
    let (mut bare_worst, mut dressed_worst): (f64, f64) = (0.0, 0.0);
    for t in grid(1.0, 20.0, 761) {
        let fin = occupation_bare_finite(&s, &tm, &p, t)?.renormalized();
        bare_worst = bare_worst.max(rel(fin, occupation_bare_continuum(&p, t, &quad())?));
        let fin = occupation_dressed_finite(&s, &tm, &p, t)?;
        dressed_worst = dressed_worst.max(rel(fin, occupation_dressed_continuum(&p, t, BathKernel::Subtracted, &quad())?));
    }
    Ok((
        bare_worst < 0.03 && dressed_worst < 0.03,
        format!("bare {:.2}%, dressed {:.2}%", 100.0 * bare_worst, 100.0 * dressed_worst),
    ))
}

fn divergence_structure() -> Outcome {
    let p = fig(1.0);
    let cutoffs = [1e2, 1e3, 1e4];
    let mut v = Vec::new();
    for lam in cutoffs {
        v.push(vacuum_divergence_probe(&p, 1.0, lam, &quad())?);
    }
    let x: Vec<f64> = cutoffs.iter().map(|c: &f64| c.ln()).collect();
    let (mx, mv) = (x.iter().sum::<f64>() / 3.0, v.iter().sum::<f64>() / 3.0);
    let slope = x.iter().zip(&v).map(|(a, b)| (a - mx) * (b - mv)).sum::<f64>()
        / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>();
    let icpt = mv - slope * mx;
    let fit_res = x.iter().zip(&v).map(|(a, b)| rel(slope * a + icpt, *b)).fold(0.0, f64::max);
    let log_ok = slope > 0.0 && fit_res < 0.01;

    let cold = validate_params(1.0, 0.1, 50.0, 0.0)?;
    let (s, tm) = cavity(&cold, 60.0, 256)?;
    let mut cold_max: f64 = 0.0;
    for t in grid(0.0, 100.0, 41) {
        cold_max = cold_max.max(occupation_dressed_continuum(&cold, t, BathKernel::Subtracted, &quad())?);
    }
    for t in grid(0.0, 100.0, 401) {
        cold_max = cold_max.max(occupation_dressed_finite(&s, &tm, &cold, t)?);
    }
    Ok((
        log_ok && cold_max < 1e-6,
        format!("slope {slope:.4}, fit residual {:.3}%, cold dressed max {cold_max:.2e}", 100.0 * fit_res),
    ))
}

fn k_factor_contract() -> Outcome {
    let p = fig(1.0);
    let (wb, g, k2) = (p.omega_bar, p.g, p.kappa * p.kappa);
    let derived = wb * wb / k2 + PI * PI * g * g * (2.0 * wb * wb - PI * PI * g * g) / (8.0 * wb * wb * k2);
    let negative_ok = [-1e-9, -1.0, -50.0].iter().all(|&t| k_factor(&p, t) == 1.0);
    let k0_dev = (k_factor(&p, 0.0) - derived).abs();
    // envelope: largest value over one oscillation period centred on t
    let period = PI / p.kappa;
    let env = |t: f64| grid(t - period, t + period, 201).map(|s| k_factor(&p, s)).fold(0.0, f64::max);
    let (e20, e40, e80) = (env(20.0), env(40.0), env(80.0));
    let pass = negative_ok && k0_dev < 1e-12 && e20 > e40 && e40 > e80 && e80 < 1e-3;
    Ok((pass, format!("K(0) = {:.16} (dev {k0_dev:.1e}), envelope {e20:.2e} > {e40:.2e} > {e80:.2e}", k_factor(&p, 0.0))))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("thermal asymptote", thermal_asymptote),
        ("initial-condition independence", initial_condition_independence),
        ("dressed unitarity", dressed_unitarity),
        ("spectrum oracle equivalence", spectrum_oracle),
        ("closed-form/quadrature cross-checks", closed_form_cross_checks),
        ("asymptotic formulas", asymptotic_formulas),
        ("continuum limit", continuum_limit),
        ("divergence structure", divergence_structure),
        ("K-factor contract", k_factor_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (pass, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("criterion {} {name} ... {}: {detail}", i + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
