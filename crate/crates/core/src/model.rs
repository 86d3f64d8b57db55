use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Physical inputs of the particle + ohmic bath model, in units with ħ = c = 1.
///
/// Construct through [`validate_params`]; `kappa` is derived and the weak-coupling
/// condition is guaranteed for every instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub omega_bar: T,
    pub g: T,
    pub beta: T,
    pub n0_initial: T,
    pub kappa: T,
}

fn check_finite<T: Real>(name: &'static str, x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NotFinite { name })
    }
}

/// Validates raw inputs and derives κ = √(ω̄² − π²g²/4).
pub fn validate_params<T: Real>(omega_bar: T, g: T, beta: T, n0_initial: T) -> Result<ModelParams<T>> {
    check_finite("omega_bar", omega_bar)?;
    check_finite("g", g)?;
    check_finite("beta", beta)?;
    check_finite("n0_initial", n0_initial)?;
    if omega_bar <= T::zero() {
        return Err(Error::NonPositive { name: "omega_bar", value: omega_bar.f64() });
    }
    if beta <= T::zero() {
        return Err(Error::NonPositive { name: "beta", value: beta.f64() });
    }
    if g < T::zero() {
        return Err(Error::Negative { name: "g", value: g.f64() });
    }
    if n0_initial < T::zero() {
        return Err(Error::Negative { name: "n0_initial", value: n0_initial.f64() });
    }
    let half_width = T::PI() * g / T::lit(2.0);
    let kappa_sq = (omega_bar - half_width) * (omega_bar + half_width);
    if kappa_sq <= T::zero() {
        return Err(Error::StrongCoupling { omega_bar: omega_bar.f64(), g: g.f64() });
    }
    Ok(ModelParams { omega_bar, g, beta, n0_initial, kappa: kappa_sq.sqrt() })
}

impl<T: Real> ModelParams<T> {
    /// Same physics at a different initial occupancy.
    pub fn with_n0(self, n0_initial: T) -> Result<Self> {
        validate_params(self.omega_bar, self.g, self.beta, n0_initial)
    }

    pub fn with_beta(self, beta: T) -> Result<Self> {
        validate_params(self.omega_bar, self.g, beta, self.n0_initial)
    }

    /// Half width πg/2 of the particle resonance; also the amplitude decay rate.
    pub fn half_width(&self) -> T {
        T::PI() * self.g / T::lit(2.0)
    }

    /// (ω² − ω̄²)² + π²g²ω², the Lorentzian denominator of the ohmic kernels.
    pub fn lorentz_denominator(&self, omega: T) -> T {
        let d = (omega - self.omega_bar) * (omega + self.omega_bar);
        let w = T::PI() * self.g * omega;
        d * d + w * w
    }

    /// Bose–Einstein occupation of a mode at frequency `omega`.
    pub fn bose(&self, omega: T) -> Result<T> {
        bose_occupation(omega, self.beta)
    }
}

/// Finite cavity of radius `radius` keeping `modes` bath modes ω_k = kπ/R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec<T> {
    pub radius: T,
    pub modes: usize,
}

impl<T: Real> CavitySpec<T> {
    pub fn new(radius: T, modes: usize) -> Result<Self> {
        check_finite("radius", radius)?;
        if radius <= T::zero() {
            return Err(Error::NonPositive { name: "radius", value: radius.f64() });
        }
        if modes == 0 {
            return Err(Error::NonPositive { name: "modes", value: 0.0 });
        }
        Ok(Self { radius, modes })
    }

    /// Mode spacing Δω = π/R.
    pub fn spacing(&self) -> T {
        T::PI() / self.radius
    }

    /// Bath frequency ω_k for k = 1..=N (k = 0 gives 0).
    pub fn bath_frequency(&self, k: usize) -> T {
        T::from_usize_exact(k) * self.spacing()
    }

    pub fn bath_frequencies(&self) -> Vec<T> {
        (1..=self.modes).map(|k| self.bath_frequency(k)).collect()
    }

    /// η = √(2gπ/R).
    pub fn eta(&self, g: T) -> T {
        (T::lit(2.0) * g * self.spacing()).sqrt()
    }
}

/// 1/(e^{βω} − 1).
pub fn bose_occupation<T: Real>(omega: T, beta: T) -> Result<T> {
    if !(omega > T::zero()) {
        return Err(Error::Domain { what: format!("bose_occupation needs omega > 0 (got {})", omega) });
    }
    if !(beta > T::zero()) {
        return Err(Error::Domain { what: format!("bose_occupation needs beta > 0 (got {})", beta) });
    }
    Ok(T::one() / (beta * omega).exp_m1())
}
