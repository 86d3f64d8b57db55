//! Dressed-coordinate evolution: amplitudes f_{μν}(t) in a finite cavity,
//! their free-space counterparts and the dressed particle occupation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bare::{quad_err, require, ModeIndex};
use crate::cavity::{ModeSpectrum, TransformMatrix};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{
    integrate, integrate_oscillatory, integrate_pv, integrate_semi_infinite, Phase, QuadratureSpec, TailPolicy,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedAmplitude<T> {
    pub value: Complex<T>,
    pub mu: usize,
    pub nu: ModeIndex<T>,
    pub t: T,
}

/// Which free-space particle→bath amplitude to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BathKernel {
    /// (C2 + iS2)(ω, t) − e^{-iωt}·C2(ω, 0): the limit of the finite-cavity
    /// amplitude, which vanishes at t = 0 and conserves probability.
    #[default]
    Subtracted,
    /// C2 + iS2 as defined by the principal-value integrals.
    PrincipalValue,
}

fn check_index(index: usize, max: usize) -> Result<()> {
    if index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

/// f_{μν}(t) = Σ_r t_μ^r t_ν^r e^{-iΩ_r t}.
pub fn f_matrix_finite<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    mu: usize,
    nu: usize,
    t: T,
) -> Result<DressedAmplitude<T>> {
    let max = spectrum.cavity.modes;
    check_index(mu, max)?;
    check_index(nu, max)?;
    let value = spectrum
        .omegas
        .iter()
        .enumerate()
        .fold(Complex::new(T::zero(), T::zero()), |acc, (r, &w)| {
            acc + Complex::from_polar(tm.get(mu, r) * tm.get(nu, r), -w * t)
        });
    Ok(DressedAmplitude { value, mu, nu: ModeIndex::Discrete(nu), t })
}

/// f_{μν}(t) for ν = 0..=N.
pub fn f_matrix_row<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    mu: usize,
    t: T,
) -> Result<Vec<Complex<T>>> {
    let n = spectrum.cavity.modes;
    check_index(mu, n)?;
    let zero = Complex::new(T::zero(), T::zero());
    let mut row = vec![zero; n + 1];
    for (r, &w) in spectrum.omegas.iter().enumerate() {
        let weight = Complex::from_polar(tm.get(mu, r), -w * t);
        row[0] += weight * tm.t0[r];
        for (k, t_k) in tm.tk.column(r).iter().enumerate() {
            row[k + 1] += weight * *t_k;
        }
    }
    Ok(row)
}

/// Dressed particle occupation in a finite cavity,
/// |f00|²·n₀ + Σ_k |f0k|²·n_B(ω_k), with bath modes at the bare Bose occupation.
pub fn occupation_dressed_finite<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    params: &ModelParams<T>,
    t: T,
) -> Result<T> {
    let row = f_matrix_row(spectrum, tm, 0, t)?;
    let mut n = row[0].norm_sqr() * params.n0_initial;
    for (f, &wk) in row[1..].iter().zip(&spectrum.omegas_bath) {
        n += f.norm_sqr() * params.bose(wk)?;
    }
    Ok(n)
}

/// C1(t) = e^{-πgt/2}[cos κt − (πg/2κ) sin κt], the real part of f00.
pub fn c1_closed<T: Real>(params: &ModelParams<T>, t: T) -> T {
    let hw = params.half_width();
    let (s, c) = (params.kappa * t).sin_cos();
    (-hw * t).exp() * (c - hw / params.kappa * s)
}

fn resonance_weight<T: Real>(params: &ModelParams<T>, a: T) -> T {
    T::lit(2.0) * params.g * a * a / params.lorentz_denominator(a)
}

fn line_spec<T: Real>(params: &ModelParams<T>, quad: &QuadratureSpec<T>, exponent: f64) -> QuadratureSpec<T> {
    quad.clone()
        .with_tail(TailPolicy::PowerDecay { exponent: T::lit(exponent) })
        .with_breakpoints([params.omega_bar])
}

/// C1(t) from its defining integral 2g∫ α² cos(αt)/((α² − ω̄²)² + π²g²α²) dα.
pub fn c1_by_quadrature<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok((params.omega_bar * t).cos());
    }
    let ctx = || format!("C1 integral at t = {}", t);
    let r = integrate_oscillatory(|a| resonance_weight(params, a), t, Phase::Cos, &line_spec(params, quad, 2.0))
        .map_err(quad_err(ctx()))?;
    require(r, ctx)
}

/// S1(t) = −2g∫ α² sin(αt)/((α² − ω̄²)² + π²g²α²) dα by direct quadrature.
pub fn s1_direct<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(-(params.omega_bar * t).sin());
    }
    let ctx = || format!("S1 integral at t = {}", t);
    let r = integrate_oscillatory(|a| resonance_weight(params, a), t, Phase::Sin, &line_spec(params, quad, 2.0))
        .map_err(quad_err(ctx()))?;
    Ok(-require(r, ctx)?)
}

// ∫_0^∞ y² e^{-yt} / (w(y)·((y² + ω̄²)² − π²g²y²)) dy with w = 1 or ω² + y²:
// what is left of the S1/S2 integrals after rotating onto the imaginary axis.
fn laplace_part<T: Real>(params: &ModelParams<T>, omega: Option<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    let wb2 = params.omega_bar * params.omega_bar;
    let pg = T::PI() * params.g;
    let integrand = |y: T| {
        let y2 = y * y;
        let den = (y2 + wb2 - pg * y) * (y2 + wb2 + pg * y);
        let extra = omega.map_or(T::one(), |w| w * w + y2);
        y2 * (-y * t).exp() / (extra * den)
    };
    let spec = quad
        .clone()
        .with_tail(TailPolicy::PowerDecay { exponent: T::lit(if omega.is_some() { 4.0 } else { 2.0 }) })
        .with_hint(None)
        .with_breakpoints([params.omega_bar]);
    let ctx = || format!("imaginary-axis integral at t = {}", t);
    let r = integrate_semi_infinite(integrand, &spec).map_err(quad_err(ctx()))?;
    require(r, ctx)
}

/// Algebraically decaying part 2g∫ y² e^{-yt}/((y² + ω̄²)² − π²g²y²) dy of S1;
/// it approaches 4g/(ω̄⁴t³) at long times.
pub fn s1_algebraic<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    Ok(T::lit(2.0) * params.g * laplace_part(params, None, t, quad)?)
}

/// S1(t) after rotating the integration contour: a damped pole term plus
/// [`s1_algebraic`]. Exact, smooth and cheap; agrees with [`s1_direct`].
pub fn s1_contour<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(-(params.omega_bar * t).sin());
    }
    let hw = params.half_width();
    let (s, c) = (params.kappa * t).sin_cos();
    let pole = -(-hw * t).exp() * (s + hw / params.kappa * c);
    Ok(pole + s1_algebraic(params, t, quad)?)
}

/// f00(t) = C1(t) + iS1(t), with S1 from direct quadrature.
pub fn f00_continuum<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
    if t < T::zero() {
        return Err(Error::Domain { what: format!("f00 needs t >= 0 (got {})", t) });
    }
    Ok(Complex::new(c1_closed(params, t), s1_direct(params, t, quad)?))
}

fn check_pole<T: Real>(params: &ModelParams<T>, omega: T) -> Result<()> {
    if !(omega > T::zero()) {
        return Err(Error::Domain { what: format!("bath frequency must be positive (got {})", omega) });
    }
    let scale = omega.max(params.omega_bar);
    if params.lorentz_denominator(omega) <= T::lit(1e-24) * scale * scale * scale * scale {
        return Err(Error::DegeneratePole { omega: omega.f64() });
    }
    Ok(())
}

/// C2(ω, t) in closed form.
pub fn c2_closed<T: Real>(params: &ModelParams<T>, omega: T, t: T) -> T {
    if params.g == T::zero() {
        return T::zero();
    }
    let hw = params.half_width();
    let wb2 = params.omega_bar * params.omega_bar;
    let w2 = omega * omega;
    let d = params.lorentz_denominator(omega);
    let (sk, ck) = (params.kappa * t).sin_cos();
    let damped = (-hw * t).exp() * ((w2 - wb2) / d * ck - hw / params.kappa * (w2 + wb2) / d * sk);
    (T::lit(2.0) * params.g).sqrt() * (damped + T::PI() * params.g * omega / d * (omega * t).sin())
}

/// S2(ω, t) = −(2g)^{3/2} PV∫ α² sin(αt)/((ω² − α²)((α² − ω̄²)² + π²g²α²)) dα
/// by principal-value quadrature.
pub fn s2_direct<T: Real>(params: &ModelParams<T>, omega: T, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(T::zero());
    }
    check_pole(params, omega)?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    let scale = -(T::lit(2.0) * params.g).powf(T::lit(1.5));
    let integrand = |a: T| scale * a * a * (a * t).sin() / ((omega - a) * (omega + a) * params.lorentz_denominator(a));
    let half_width = (omega / T::lit(2.0)).min(T::lit(10.0) * T::PI() * params.g);
    let spec = line_spec(params, quad, 4.0).with_hint(Some(t));
    let ctx = || format!("S2 principal value at omega = {}, t = {}", omega, t);
    let r = integrate_pv(integrand, T::zero(), T::infinity(), omega, Some(half_width), &spec).map_err(quad_err(ctx()))?;
    require(r, ctx)
}

/// Algebraically decaying part (2g)^{3/2}∫ y² e^{-yt}/((ω² + y²)((y² + ω̄²)² − π²g²y²)) dy
/// of S2; it approaches 4√2 g^{3/2}/(ω²ω̄⁴t³) at long times.
pub fn s2_algebraic<T: Real>(params: &ModelParams<T>, omega: T, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    let scale = (T::lit(2.0) * params.g).powf(T::lit(1.5));
    Ok(scale * laplace_part(params, Some(omega), t, quad)?)
}

/// C2 + iS2 after rotating the contour: pole terms in closed form plus
/// [`s2_algebraic`].
pub fn c2s2_contour<T: Real>(params: &ModelParams<T>, omega: T, t: T, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
    if params.g == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    check_pole(params, omega)?;
    let hw = params.half_width();
    let root2g = (T::lit(2.0) * params.g).sqrt();
    let a0 = Complex::new(params.kappa, -hw);
    let decay = Complex::from_polar((-hw * t).exp(), -params.kappa * t);
    let pole = a0 * decay * root2g / ((Complex::new(omega * omega, T::zero()) - a0 * a0) * params.kappa);
    let d = params.lorentz_denominator(omega);
    let (sw, cw) = (omega * t).sin_cos();
    let real_axis = Complex::new(sw, cw) * (root2g * T::PI() * params.g * omega / d);
    let branch = Complex::new(T::zero(), s2_algebraic(params, omega, t, quad)?);
    Ok(pole + real_axis + branch)
}

/// f_{0ω}(t)/(ω√Δω) = C2 + iS2, with S2 by principal-value quadrature.
pub fn f0w_continuum<T: Real>(params: &ModelParams<T>, omega: T, t: T, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
    if t < T::zero() {
        return Err(Error::Domain { what: format!("f0w needs t >= 0 (got {})", t) });
    }
    check_pole(params, omega)?;
    Ok(Complex::new(c2_closed(params, omega, t), s2_direct(params, omega, t, quad)?))
}

/// Particle→bath amplitude per unit ω√Δω for the chosen kernel.
pub fn bath_amplitude<T: Real>(
    params: &ModelParams<T>,
    omega: T,
    t: T,
    kernel: BathKernel,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    let full = c2s2_contour(params, omega, t, quad)?;
    Ok(match kernel {
        BathKernel::PrincipalValue => full,
        BathKernel::Subtracted => full - Complex::from_polar(c2_closed(params, omega, T::zero()), -omega * t),
    })
}

fn f00_smooth<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
    Ok(Complex::new(c1_closed(params, t), s1_contour(params, t, quad)?))
}

/// Dressed particle occupation in free space,
/// |f00|²·n₀ + ∫ ω²|A(ω,t)|² n_B(ω) dω with A from `kernel`.
pub fn occupation_dressed_continuum<T: Real>(
    params: &ModelParams<T>,
    t: T,
    kernel: BathKernel,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    if t < T::zero() || params.g == T::zero() {
        return Ok(params.n0_initial);
    }
    let memory = f00_smooth(params, t, quad)?.norm_sqr() * params.n0_initial;
    let beta = params.beta;
    let inner = quad.clone().with_tolerances(quad.rel_tol, quad.abs_tol * T::lit(1e-2));
    let failure = std::cell::RefCell::new(None);
    let integrand = |w: T| match bath_amplitude(params, w, t, kernel, &inner) {
        Ok(a) => w * w * a.norm_sqr() / (beta * w).exp_m1(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            T::nan()
        }
    };
    let spec = quad
        .clone()
        .with_tail(TailPolicy::ExpWeight { beta })
        .with_hint(Some(T::lit(2.0) * t))
        .with_breakpoints([params.omega_bar]);
    let ctx = || format!("dressed thermal integral at t = {}", t);
    let r = integrate_semi_infinite(integrand, &spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let thermal = require(r.map_err(quad_err(ctx()))?, ctx)?;
    Ok((memory + thermal).max(T::zero()))
}

/// |f00(t)|² + ∫ ω²|A(ω,t)|² dω, which is 1 for a probability-conserving kernel.
///
/// The ω integral runs to `cutoff`; beyond it A ≈ √(2g)(f00 − e^{-iωt})/ω²
/// (subtracted) or √(2g)f00/ω² (principal value), whose smooth part is added
/// in closed form.
pub fn continuum_unit_sum<T: Real>(
    params: &ModelParams<T>,
    t: T,
    kernel: BathKernel,
    cutoff: T,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    if !(cutoff > T::lit(10.0) * params.omega_bar) {
        return Err(Error::Domain { what: format!("cutoff {} must exceed 10 omega_bar", cutoff) });
    }
    let f00 = f00_smooth(params, t, quad)?;
    if params.g == T::zero() {
        return Ok(f00.norm_sqr());
    }
    let inner = quad.clone().with_tolerances(quad.rel_tol, quad.abs_tol * T::lit(1e-2));
    let failure = std::cell::RefCell::new(None);
    let integrand = |w: T| match bath_amplitude(params, w, t, kernel, &inner) {
        Ok(a) => w * w * a.norm_sqr(),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            T::nan()
        }
    };
    let spec = quad.clone().with_hint(Some(T::lit(2.0) * t)).with_breakpoints([params.omega_bar]);
    let ctx = || format!("unit-sum integral at t = {}", t);
    let r = integrate(integrand, T::zero(), cutoff, &spec);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let body = require(r.map_err(quad_err(ctx()))?, ctx)?;
    let smooth = match kernel {
        BathKernel::Subtracted => T::one() + f00.norm_sqr(),
        BathKernel::PrincipalValue => f00.norm_sqr(),
    };
    Ok(f00.norm_sqr() + body + T::lit(2.0) * params.g * smooth / cutoff)
}

/// t → ∞ limit of [`occupation_dressed_continuum`] with the subtracted kernel:
/// ∫ 2gω²/D(ω)·n_B(ω) dω.
pub fn occupation_dressed_limit<T: Real>(params: &ModelParams<T>, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(params.n0_initial);
    }
    let beta = params.beta;
    let spec = quad
        .clone()
        .with_tail(TailPolicy::ExpWeight { beta })
        .with_hint(None)
        .with_breakpoints([params.omega_bar]);
    let ctx = || "dressed equilibrium integral".to_string();
    let r = integrate_semi_infinite(|w: T| resonance_weight(params, w) / (beta * w).exp_m1(), &spec)
        .map_err(quad_err(ctx()))?;
    require(r, ctx)
}

/// Long-time form e^{-πgt}[cos κt − (πg/2κ) sin κt]² + 16g²/(ω̄⁸t⁶) of |f00(t)|².
pub fn f00_sq_asymptotic<T: Real>(params: &ModelParams<T>, t: T) -> Result<T> {
    if !(t > T::zero()) {
        return Err(Error::Domain { what: format!("long-time form needs t > 0 (got {})", t) });
    }
    let c1 = c1_closed(params, t);
    let wb4 = params.omega_bar.powi(4);
    let tail = T::lit(16.0) * params.g * params.g / (wb4 * wb4 * t.powi(6));
    Ok(c1 * c1 + tail)
}

/// A00(ω̄, g) = ω̄^{-1/2}∫ 2gΩ²√Ω/((Ω² − ω̄²)² + π²g²Ω²) dΩ, the weight of the
/// bare particle coordinate in the dressed one.
pub fn dressing_factor_a00<T: Real>(params: &ModelParams<T>, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(T::one());
    }
    let integrand = |w: T| resonance_weight(params, w) * w.sqrt();
    let hw = params.half_width();
    let wb = params.omega_bar;
    let spec = quad
        .clone()
        .with_tail(TailPolicy::PowerDecay { exponent: T::lit(1.5) })
        .with_hint(None)
        .with_breakpoints([wb - hw, wb, wb + hw].into_iter().filter(|&x| x > T::zero()));
    let ctx = || "dressing factor integral".to_string();
    let r = integrate_semi_infinite(integrand, &spec).map_err(quad_err(ctx()))?;
    Ok(require(r, ctx)? / wb.sqrt())
}
