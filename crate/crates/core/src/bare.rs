//! Bare-coordinate evolution: Bogoliubov coefficients from finite sums and
//! their free-space closed forms, the particle occupation and the
//! renormalized continuum occupation.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cavity::{ModeSpectrum, TransformMatrix};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::quadrature::{integrate, integrate_semi_infinite, QuadError, QuadratureResult, QuadratureSpec, TailPolicy};
use crate::scalar::Real;

/// Label of the second index of a coefficient: a cavity mode or a point of
/// the continuous bath spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModeIndex<T> {
    Discrete(usize),
    Continuum(T),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovPair<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub mu: usize,
    pub nu: ModeIndex<T>,
    pub t: T,
}

/// Which closed-form coefficient pair to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel<T> {
    Particle,
    /// Bath mode at frequency ω; the result is the coefficient of √Δω.
    Bath(T),
}

fn check_index(index: usize, max: usize) -> Result<()> {
    if index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(())
    }
}

// Per-normal-mode pieces of B_{μν}(t) and its time derivative.
fn evolution_weights<T: Real>(spectrum: &ModeSpectrum<T>, tm: &TransformMatrix<T>, mu: usize, t: T) -> Vec<(Complex<T>, Complex<T>)> {
    let w_mu = spectrum.bare_frequency(mu);
    let norm = T::one() / (T::lit(8.0) * w_mu).sqrt();
    spectrum
        .omegas
        .iter()
        .enumerate()
        .map(|(r, &omega)| {
            let t_mu = tm.get(mu, r);
            let ratio = w_mu / omega;
            let a = Complex::new(T::zero(), t_mu * norm * (T::one() - ratio));
            let b = Complex::new(T::zero(), t_mu * norm * (T::one() + ratio));
            let phase = Complex::from_polar(T::one(), omega * t);
            let (ep, em) = (a * phase, b * phase.conj());
            let i_omega = Complex::new(T::zero(), omega);
            (ep + em, i_omega * (ep - em))
        })
        .collect()
}

fn pair_from<T: Real>(b: Complex<T>, b_dot: Complex<T>, w_nu: T, mu: usize, nu: usize, t: T) -> BogoliubovPair<T> {
    let two = T::lit(2.0);
    let p = b_dot / (two * w_nu).sqrt();
    let q = Complex::new(T::zero(), (w_nu / two).sqrt()) * b;
    BogoliubovPair { alpha: p - q, beta: p + q, mu, nu: ModeIndex::Discrete(nu), t }
}

/// α_{μν}(t), β_{μν}(t) from the finite normal-mode sums.
pub fn bogoliubov_finite<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    mu: usize,
    nu: usize,
    t: T,
) -> Result<BogoliubovPair<T>> {
    let max = spectrum.cavity.modes;
    check_index(mu, max)?;
    check_index(nu, max)?;
    let weights = evolution_weights(spectrum, tm, mu, t);
    let (mut b, mut b_dot) = (Complex::new(T::zero(), T::zero()), Complex::new(T::zero(), T::zero()));
    for (r, (p, q)) in weights.iter().enumerate() {
        let t_nu = tm.get(nu, r);
        b += *p * t_nu;
        b_dot += *q * t_nu;
    }
    Ok(pair_from(b, b_dot, spectrum.bare_frequency(nu), mu, nu, t))
}

/// All pairs (α_{μν}, β_{μν}) for ν = 0..=N.
pub fn bogoliubov_row<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    mu: usize,
    t: T,
) -> Result<Vec<BogoliubovPair<T>>> {
    let n = spectrum.cavity.modes;
    check_index(mu, n)?;
    let weights = evolution_weights(spectrum, tm, mu, t);
    let zero = Complex::new(T::zero(), T::zero());
    let mut b = vec![zero; n + 1];
    let mut b_dot = vec![zero; n + 1];
    for (r, (p, q)) in weights.iter().enumerate() {
        b[0] += *p * tm.t0[r];
        b_dot[0] += *q * tm.t0[r];
        for (k, t_k) in tm.tk.column(r).iter().enumerate() {
            b[k + 1] += *p * *t_k;
            b_dot[k + 1] += *q * *t_k;
        }
    }
    Ok((0..=n).map(|nu| pair_from(b[nu], b_dot[nu], spectrum.bare_frequency(nu), mu, nu, t)).collect())
}

/// Free-space closed forms of (α00, β00) or, for a bath channel, of
/// (α0ω, β0ω)/√Δω.
pub fn bogoliubov_closed<T: Real>(params: &ModelParams<T>, channel: Channel<T>, t: T) -> BogoliubovPair<T> {
    let c = |re: T, im: T| Complex::new(re, im);
    let two = T::lit(2.0);
    let wb = params.omega_bar;
    let k = params.kappa;
    let pg = T::PI() * params.g;
    let decay = (-pg * t / two).exp();
    let e_minus = Complex::from_polar(T::one(), -k * t);
    let e_plus = e_minus.conj();

    match channel {
        Channel::Particle => {
            let u = c(two * wb + two * k, -pg);
            let v = c(two * wb - two * k, -pg);
            let alpha = (u * u * e_minus - v * v * e_plus) * (decay / (T::lit(16.0) * wb * k));
            let beta = (c(pg, two * k) * e_minus - c(pg, -two * k) * e_plus) * (pg * decay / (T::lit(8.0) * wb * k));
            BogoliubovPair { alpha, beta, mu: 0, nu: ModeIndex::Discrete(0), t }
        }
        Channel::Bath(w) => {
            let sg = params.g.sqrt();
            let s2g = (two * params.g).sqrt();
            let free = (w / (two * wb)).sqrt() * sg;
            let dressed = (w / wb).sqrt() * s2g / (T::lit(4.0) * k);
            let lorentz = (w - wb) * (w + wb);
            let num_a = c(two * k + two * wb, -pg);
            let num_b = c(two * wb - two * k, -pg);

            let alpha = Complex::from_polar(free * (wb + w), -w * t) / c(lorentz, pg * w)
                + (num_a / c(two * k - two * w, -pg) * e_minus + num_b / c(two * k + two * w, pg) * e_plus)
                    * (dressed * decay);
            let beta = Complex::from_polar(free * (w - wb), w * t) / c(lorentz, -pg * w)
                - (num_a / c(two * k + two * w, -pg) * e_minus + num_b / c(two * k - two * w, pg) * e_plus)
                    * (dressed * decay);
            BogoliubovPair { alpha, beta, mu: 0, nu: ModeIndex::Continuum(w), t }
        }
    }
}

/// Weight K(t) of the initial occupancy in the renormalized occupation;
/// 1 before the coupling is switched on at t = 0.
pub fn k_factor<T: Real>(params: &ModelParams<T>, t: T) -> T {
    if t < T::zero() {
        return T::one();
    }
    let wb2 = params.omega_bar * params.omega_bar;
    let k = params.kappa;
    let pg = T::PI() * params.g;
    let two_kt = T::lit(2.0) * k * t;
    let bracket = wb2 * wb2 + pg * pg / T::lit(8.0) * (T::lit(2.0) * wb2 - pg * pg) * two_kt.cos()
        - pg * pg * pg * k / T::lit(4.0) * two_kt.sin();
    (-pg * t).exp() * bracket / (wb2 * k * k)
}

/// Thermal kernel F(ω, t): (g/ω̄)·F is the continuum |α0ω|² + |β0ω|².
pub fn thermal_kernel<T: Real>(params: &ModelParams<T>, w: T, t: T) -> T {
    let wb = params.omega_bar;
    let wb2 = wb * wb;
    let k = params.kappa;
    let pg = T::PI() * params.g;
    let w2 = w * w;
    let sum = w2 + wb2;
    let diff = w2 - wb2;
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let (s2k, c2k) = (two * k * t).sin_cos();
    let (sk, ck) = (k * t).sin_cos();
    let (sw, cw) = (w * t).sin_cos();

    let slow = (-pg * t).exp() / (four * k * k) * (four * wb2 - pg * pg * c2k - two * pg * k * diff / sum * s2k);
    let beat = (-pg * t / two).exp() / k
        * (two * k * cw * ck + four * w * wb2 / sum * sw * sk - pg * diff / sum * cw * sk);
    w * sum / params.lorentz_denominator(w) * (T::one() + slow - beat)
}

/// Vacuum kernel G(ω, t) multiplying the temperature-independent term.
/// Written with the (ω − ω̄)² prefactor distributed so it is finite at ω = ω̄.
pub fn vacuum_kernel<T: Real>(params: &ModelParams<T>, w: T, t: T) -> T {
    let wb = params.omega_bar;
    let wb2 = wb * wb;
    let k = params.kappa;
    let pg = T::PI() * params.g;
    let (two, four) = (T::lit(2.0), T::lit(4.0));
    let dm = w - wb;
    let dp = w + wb;
    let dm2 = dm * dm;
    let (s2k, c2k) = (two * k * t).sin_cos();
    let (sk, ck) = (k * t).sin_cos();
    let (sw, cw) = (w * t).sin_cos();
    let e1 = (-pg * t).exp();
    let e2 = (-pg * t / two).exp();

    let plain = dm2 * (T::one() + e1 * wb2 / (k * k));
    let slow = e1 / (four * k * k)
        * (two * pg * pg * wb * w - pg * pg * (w * w + wb2) * c2k - two * pg * k * dp * dm * s2k);
    let beat = e2 / k * (dm2 * (two * k * cw * ck - two * wb * sw * sk) - pg * dp * dm * cw * sk);
    w / params.lorentz_denominator(w) * (plain + slow - beat)
}

/// Finite-cavity particle occupation split into its three sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BareOccupation<T> {
    /// (|α00|² + |β00|²)·n₀
    pub memory: T,
    /// Σ_k (|α0k|² + |β0k|²)·n_B(ω_k)
    pub thermal: T,
    /// |β00|² + Σ_k |β0k|², present even at zero temperature
    pub vacuum: T,
}

impl<T: Real> BareOccupation<T> {
    pub fn total(&self) -> T {
        self.memory + self.thermal + self.vacuum
    }

    /// Occupation without the temperature-independent vacuum terms; the
    /// quantity the continuum renormalized occupation describes.
    pub fn renormalized(&self) -> T {
        self.memory + self.thermal
    }
}

/// Particle occupation n₀(t) in a finite cavity, from exact finite sums.
pub fn occupation_bare_finite<T: Real>(
    spectrum: &ModeSpectrum<T>,
    tm: &TransformMatrix<T>,
    params: &ModelParams<T>,
    t: T,
) -> Result<BareOccupation<T>> {
    let row = bogoliubov_row(spectrum, tm, 0, t)?;
    let memory = (row[0].alpha.norm_sqr() + row[0].beta.norm_sqr()) * params.n0_initial;
    let mut thermal = T::zero();
    let mut vacuum = row[0].beta.norm_sqr();
    for (pair, &wk) in row[1..].iter().zip(&spectrum.omegas_bath) {
        let weight = pair.alpha.norm_sqr() + pair.beta.norm_sqr();
        let nb = params.bose(wk)?;
        if nb > T::zero() {
            thermal += weight * nb;
        }
        vacuum += pair.beta.norm_sqr();
    }
    Ok(BareOccupation { memory, thermal, vacuum })
}

pub(crate) fn require<T: Real>(r: QuadratureResult<T>, context: impl FnOnce() -> String) -> Result<T> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::QuadratureFailure {
            context: context(),
            value: r.value.f64(),
            error_estimate: r.error_estimate.f64(),
        })
    }
}

pub(crate) fn quad_err(context: String) -> impl FnOnce(QuadError) -> Error {
    move |source| Error::Quadrature { context, source }
}

/// Renormalized continuum occupation n̄₀(t) = K(t)·n₀ + (g/ω̄)∫ F(ω,t)/(e^{βω} − 1) dω.
///
/// Before the coupling is switched on (t < 0) this is n₀.
pub fn occupation_bare_continuum<T: Real>(params: &ModelParams<T>, t: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if t < T::zero() {
        return Ok(params.n0_initial);
    }
    let memory = k_factor(params, t) * params.n0_initial;
    if params.g == T::zero() {
        return Ok(memory);
    }
    let spec = quad
        .clone()
        .with_tail(TailPolicy::ExpWeight { beta: params.beta })
        .with_hint(Some(t))
        .with_breakpoints([params.omega_bar]);
    let beta = params.beta;
    let integrand = |w: T| thermal_kernel(params, w, t) / (beta * w).exp_m1();
    let ctx = || format!("bare thermal integral at t = {}", t);
    let r = integrate_semi_infinite(integrand, &spec).map_err(quad_err(ctx()))?;
    let thermal = require(r, ctx)?;
    Ok((memory + params.g / params.omega_bar * thermal).max(T::zero()))
}

/// (g/ω̄)∫_0^Λ G(ω,t) dω, the cutoff-regularized vacuum term.
pub fn vacuum_divergence_probe<T: Real>(params: &ModelParams<T>, t: T, cutoff: T, quad: &QuadratureSpec<T>) -> Result<T> {
    if !(cutoff > T::lit(10.0) * params.omega_bar) {
        return Err(Error::Domain { what: format!("cutoff {} must exceed 10 omega_bar", cutoff) });
    }
    if params.g == T::zero() {
        return Ok(T::zero());
    }
    let spec = quad.clone().with_hint(Some(t)).with_breakpoints([params.omega_bar]);
    let ctx = || format!("vacuum integral at t = {}, cutoff = {}", t, cutoff);
    let r = integrate(|w: T| vacuum_kernel(params, w, t), T::zero(), cutoff, &spec).map_err(quad_err(ctx()))?;
    Ok(params.g / params.omega_bar * require(r, ctx)?)
}

/// t → ∞ limit of [`occupation_bare_continuum`]: (g/ω̄)∫ ω(ω² + ω̄²)/D(ω)·n_B(ω) dω.
pub fn occupation_bare_limit<T: Real>(params: &ModelParams<T>, quad: &QuadratureSpec<T>) -> Result<T> {
    if params.g == T::zero() {
        return Ok(params.n0_initial);
    }
    let wb2 = params.omega_bar * params.omega_bar;
    let beta = params.beta;
    let integrand = |w: T| w * (w * w + wb2) / params.lorentz_denominator(w) / (beta * w).exp_m1();
    let spec = quad
        .clone()
        .with_tail(TailPolicy::ExpWeight { beta })
        .with_hint(None)
        .with_breakpoints([params.omega_bar]);
    let ctx = || "bare equilibrium integral".to_string();
    let r = integrate_semi_infinite(integrand, &spec).map_err(quad_err(ctx()))?;
    Ok(params.g / params.omega_bar * require(r, ctx)?)
}
