//! Finite-cavity normal modes: the eigenfrequency condition, the orthogonal
//! transformation to normal coordinates and a dense-matrix cross-check.

use std::io::{self, Write};

use nalgebra::{DMatrix, RealField};
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::{CavitySpec, ModelParams};
use crate::scalar::Real;

/// Location of a squared normal frequency relative to the nearest bath pole:
/// Ω² = ω_pole² + offset, with ω_0 = 0. Keeping the offset separately makes
/// ω_k² − Ω² accurate even when Ω sits next to ω_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootAnchor<T> {
    pub pole: usize,
    pub offset: T,
}

/// Normal frequencies of the particle + N-mode cavity, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSpectrum<T> {
    pub params: ModelParams<T>,
    pub cavity: CavitySpec<T>,
    pub omegas_bath: Vec<T>,
    pub omegas: Vec<T>,
    pub residuals: Vec<T>,
    pub anchors: Vec<RootAnchor<T>>,
}

impl<T: Real> ModeSpectrum<T> {
    /// Number of normal modes, N + 1.
    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// ω_k² − Ω_r² for bath mode k ≥ 1, without cancellation.
    pub fn sq_gap(&self, k: usize, r: usize) -> T {
        let a = self.anchors[r];
        pole_gap(self.cavity.spacing(), k, a.pole) - a.offset
    }

    /// Reference frequency ω̄_μ of bare mode μ (ω̄ for the particle, ω_k for bath).
    pub fn bare_frequency(&self, mu: usize) -> T {
        if mu == 0 {
            self.params.omega_bar
        } else {
            self.omegas_bath[mu - 1]
        }
    }

    /// Writes `r,Omega_r,residual` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "r,Omega_r,residual")?;
        for (r, (w, res)) in self.omegas.iter().zip(&self.residuals).enumerate() {
            writeln!(out, "{},{},{}", r, w, res)?;
        }
        Ok(())
    }
}

// ω_k² − ω_p² = Δ²(k − p)(k + p)
fn pole_gap<T: Real>(spacing: T, k: usize, p: usize) -> T {
    let diff = T::from_f64(k as f64 - p as f64).unwrap();
    let sum = T::from_usize_exact(k + p);
    spacing * spacing * diff * sum
}

struct Secular<'a, T> {
    omega_bar_sq: T,
    eta_sq: T,
    spacing: T,
    modes: usize,
    bath: &'a [T],
}

struct SecularValue<T> {
    h: T,
    slope: T,
    scale: T,
}

impl<T: Real> Secular<'_, T> {
    fn pole(&self, p: usize) -> T {
        if p == 0 {
            T::zero()
        } else {
            self.bath[p - 1] * self.bath[p - 1]
        }
    }

    // h(λ) = ω̄² − λ − η²λ Σ_k 1/(ω_k² − λ) at λ = ω_p² + δ
    fn eval(&self, p: usize, delta: T) -> SecularValue<T> {
        let lambda = self.pole(p) + delta;
        let mut sum = T::zero();
        let mut sum_abs = T::zero();
        let mut sum_sq = T::zero();
        for k in 1..=self.modes {
            let inv = T::one() / (pole_gap(self.spacing, k, p) - delta);
            let wk = self.bath[k - 1];
            sum += inv;
            sum_abs += inv.abs();
            sum_sq += wk * wk * inv * inv;
        }
        SecularValue {
            h: self.omega_bar_sq - lambda - self.eta_sq * lambda * sum,
            slope: -T::one() - self.eta_sq * sum_sq,
            scale: self.omega_bar_sq + lambda.abs() + self.eta_sq * lambda.abs() * sum_abs,
        }
    }

    // Safeguarded Newton on a decreasing h with h(lo) > 0 > h(hi).
    fn refine(&self, p: usize, mut lo: T, mut hi: T) -> T {
        let two = T::lit(2.0);
        let mut x = (lo + hi) / two;
        for _ in 0..200 {
            let v = self.eval(p, x);
            if v.h == T::zero() {
                return x;
            }
            if v.h > T::zero() {
                lo = x;
            } else {
                hi = x;
            }
            let newton = x - v.h / v.slope;
            let next = if newton > lo && newton < hi { newton } else { (lo + hi) / two };
            let step = (next - x).abs();
            x = next;
            if step <= T::lit(4.0) * T::epsilon() * x.abs().max(self.omega_bar_sq * T::epsilon()) {
                break;
            }
            if !(hi - lo > T::zero()) {
                break;
            }
        }
        x
    }
}

/// Solves the finite-cavity eigencondition
/// ω̄² − Ω² = η²Ω² Σ_k 1/(ω_k² − Ω²), one root per interval between
/// consecutive bath frequencies (plus one below ω_1 and one above ω_N).
///
/// `tol` bounds the scaled secular residual of every root.
pub fn solve_spectrum<T: Real>(params: &ModelParams<T>, cavity: &CavitySpec<T>, tol: T) -> Result<ModeSpectrum<T>> {
    if !(tol > T::zero()) {
        return Err(Error::NonPositive { name: "tol", value: tol.f64() });
    }
    let cavity = CavitySpec::new(cavity.radius, cavity.modes)?;
    let bath = cavity.bath_frequencies();
    let n = cavity.modes;

    if params.g == T::zero() {
        return Ok(decoupled_spectrum(params, &cavity, bath));
    }

    let eta = cavity.eta(params.g);
    let sec = Secular {
        omega_bar_sq: params.omega_bar * params.omega_bar,
        eta_sq: eta * eta,
        spacing: cavity.spacing(),
        modes: n,
        bath: &bath,
    };
    let top = bath[n - 1];
    let row0 = sec.omega_bar_sq + T::from_usize_exact(n) * sec.eta_sq + eta * bath.iter().fold(T::zero(), |a, &w| a + w);
    let upper = row0.max(top * top + eta * top) * T::lit(1.001) + T::one();

    let mut omegas = Vec::with_capacity(n + 1);
    let mut residuals = Vec::with_capacity(n + 1);
    let mut anchors = Vec::with_capacity(n + 1);
    let edge = T::lit(1e-12);

    for r in 0..=n {
        let left = sec.pole(r);
        let (pole, lo, hi) = if r == n {
            let width = upper - left;
            (r, width * edge, width)
        } else {
            let right = sec.pole(r + 1);
            let half = (right - left) / T::lit(2.0);
            let mid = sec.eval(r, half);
            if mid.h > T::zero() {
                (r + 1, -half, -half * T::lit(2.0) * edge)
            } else {
                let lo = if r == 0 { T::zero() } else { half * T::lit(2.0) * edge };
                (r, lo, half)
            }
        };
        if !(sec.eval(pole, lo).h > T::zero()) || !(sec.eval(pole, hi).h <= T::zero()) {
            return Err(Error::BracketFailure { branch: r });
        }
        let offset = sec.refine(pole, lo, hi);
        let v = sec.eval(pole, offset);
        let residual = v.h.abs() / v.scale;
        if !(residual < tol) {
            return Err(Error::RootNotConverged { branch: r, residual: residual.f64() });
        }
        let lambda = sec.pole(pole) + offset;
        omegas.push(lambda.sqrt());
        residuals.push(residual);
        anchors.push(RootAnchor { pole, offset });
    }

    Ok(ModeSpectrum { params: *params, cavity, omegas_bath: bath, omegas, residuals, anchors })
}

fn decoupled_spectrum<T: Real>(params: &ModelParams<T>, cavity: &CavitySpec<T>, bath: Vec<T>) -> ModeSpectrum<T> {
    let mut entries: Vec<(T, RootAnchor<T>)> = bath
        .iter()
        .enumerate()
        .map(|(i, &w)| (w, RootAnchor { pole: i + 1, offset: T::zero() }))
        .collect();
    let particle = (params.omega_bar, RootAnchor { pole: 0, offset: params.omega_bar * params.omega_bar });
    let at = entries.partition_point(|(w, _)| *w < params.omega_bar);
    entries.insert(at, particle);
    ModeSpectrum {
        params: *params,
        cavity: *cavity,
        omegas_bath: bath,
        omegas: entries.iter().map(|e| e.0).collect(),
        residuals: vec![T::zero(); entries.len()],
        anchors: entries.iter().map(|e| e.1).collect(),
    }
}

/// Orthogonal matrix t_μ^r from bare mode μ to normal mode r.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix<T: Real> {
    /// t_0^r for r = 0..=N.
    pub t0: Vec<T>,
    /// t_k^r at row k − 1, column r.
    pub tk: DMatrix<T>,
}

impl<T: Real> TransformMatrix<T> {
    /// t_μ^r with μ = 0 for the particle.
    pub fn get(&self, mu: usize, r: usize) -> T {
        if mu == 0 {
            self.t0[r]
        } else {
            self.tk[(mu - 1, r)]
        }
    }

    pub fn modes(&self) -> usize {
        self.t0.len()
    }
}

/// Builds t_0^r = [1 + η² Σ_k ω_k²/(ω_k² − Ω_r²)²]^{-1/2} and
/// t_k^r = η ω_k t_0^r / (ω_k² − Ω_r²).
pub fn transform_matrix<T: Real>(spectrum: &ModeSpectrum<T>) -> Result<TransformMatrix<T>> {
    let n = spectrum.cavity.modes;
    let size = n + 1;
    let mut t0 = vec![T::zero(); size];
    let mut tk = DMatrix::from_element(n, size, T::zero());

    if spectrum.params.g == T::zero() {
        for (r, a) in spectrum.anchors.iter().enumerate() {
            if a.pole == 0 {
                t0[r] = T::one();
            } else {
                tk[(a.pole - 1, r)] = T::one();
            }
        }
        return Ok(TransformMatrix { t0, tk });
    }

    let eta = spectrum.cavity.eta(spectrum.params.g);
    let threshold = T::lit(4.0) * T::epsilon();
    let mut gaps = vec![T::zero(); n];
    for r in 0..size {
        let omega_sq = spectrum.omegas[r] * spectrum.omegas[r];
        let mut s = T::zero();
        for k in 1..=n {
            let d = spectrum.sq_gap(k, r);
            let wk = spectrum.omegas_bath[k - 1];
            if d.abs() <= threshold * (wk * wk + omega_sq) {
                return Err(Error::DegenerateMode { r, k });
            }
            gaps[k - 1] = d;
            s += wk * wk / (d * d);
        }
        let t = T::one() / (T::one() + eta * eta * s).sqrt();
        t0[r] = t;
        for k in 1..=n {
            tk[(k - 1, r)] = eta * spectrum.omegas_bath[k - 1] * t / gaps[k - 1];
        }
    }
    Ok(TransformMatrix { t0, tk })
}

/// The infinite-cavity form of the eigencondition, multiplied through to
/// remove the cotangent poles:
/// πgRΩ cos(RΩ) − sin(RΩ)(RΩ² + πg − Rω̄²), divided by the sum of the
/// magnitudes of its terms.
pub fn free_space_eigencondition<T: Real>(params: &ModelParams<T>, radius: T, omega: T) -> T {
    let pg = T::PI() * params.g;
    let x = radius * omega;
    let a = pg * x;
    let b = radius * omega * omega + pg - radius * params.omega_bar * params.omega_bar;
    let f = a * x.cos() - x.sin() * b;
    f / (a.abs() + b.abs())
}

/// Infinite-cavity closed form
/// t_0^r ≈ ηΩ/√((Ω² − ω̄²)² + (η²/2)(3Ω² − ω̄²) + π²g²Ω²).
pub fn t0_free_space<T: Real>(params: &ModelParams<T>, cavity: &CavitySpec<T>, omega: T) -> T {
    let eta = cavity.eta(params.g);
    let wb2 = params.omega_bar * params.omega_bar;
    let w2 = omega * omega;
    let pg = T::PI() * params.g * omega;
    let den = (w2 - wb2) * (w2 - wb2) + eta * eta / T::lit(2.0) * (T::lit(3.0) * w2 - wb2) + pg * pg;
    eta * omega / den.sqrt()
}

/// Dense eigendecomposition of the potential matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleDecomposition<T: Real> {
    /// Eigenvalues Ω_r², ascending.
    pub eigenvalues: Vec<T>,
    /// Column r is the eigenvector of eigenvalue r (first component ≥ 0).
    pub eigenvectors: DMatrix<T>,
}

/// The (N+1)×(N+1) potential matrix: V₀₀ = ω̄² + Nη², V_kk = ω_k², V₀ₖ = −ηω_k.
pub fn potential_matrix<T: Real>(params: &ModelParams<T>, cavity: &CavitySpec<T>) -> DMatrix<T> {
    let n = cavity.modes;
    let eta = cavity.eta(params.g);
    let mut v = DMatrix::from_element(n + 1, n + 1, T::zero());
    v[(0, 0)] = params.omega_bar * params.omega_bar + T::from_usize_exact(n) * eta * eta;
    for k in 1..=n {
        let wk = cavity.bath_frequency(k);
        v[(k, k)] = wk * wk;
        v[(0, k)] = -eta * wk;
        v[(k, 0)] = -eta * wk;
    }
    v
}

/// Diagonalizes [`potential_matrix`] with a dense symmetric eigensolver.
///
/// Signs are fixed so the particle component is positive; columns with a
/// vanishing particle component take their largest entry positive instead.
pub fn diagonalize_oracle<T: Real + RealField>(
    params: &ModelParams<T>,
    cavity: &CavitySpec<T>,
) -> Result<OracleDecomposition<T>> {
    let cavity = CavitySpec::new(cavity.radius, cavity.modes)?;
    let v = potential_matrix(params, &cavity);
    let eig = nalgebra::SymmetricEigen::new(v);
    let size = cavity.modes + 1;

    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap_or(std::cmp::Ordering::Equal)
    });

    let tiny = T::lit(1e-12);
    let mut eigenvalues = Vec::with_capacity(size);
    let mut eigenvectors = DMatrix::from_element(size, size, T::zero());
    for (col, &i) in order.iter().enumerate() {
        let lambda = eig.eigenvalues[i];
        if lambda < T::zero() {
            return Err(Error::UnstableSystem { eigenvalue: lambda.f64() });
        }
        eigenvalues.push(lambda);
        let v = eig.eigenvectors.column(i);
        let pivot = if Float::abs(v[0]) > tiny {
            v[0]
        } else {
            v.iter().copied().fold(T::zero(), |best, x| if Float::abs(x) > Float::abs(best) { x } else { best })
        };
        let sign = if pivot < T::zero() { -T::one() } else { T::one() };
        for row in 0..size {
            eigenvectors[(row, col)] = sign * v[row];
        }
    }
    Ok(OracleDecomposition { eigenvalues, eigenvectors })
}

