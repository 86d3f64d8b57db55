//! Harmonic particle coupled to an ohmic bath of oscillators: finite-cavity
//! normal modes, bare (Bogoliubov) and dressed evolution, free-space closed
//! forms and the quadrature engine behind them.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below pin the common double-precision case.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bare;
pub mod cavity;
pub mod dressed;
pub mod error;
pub mod model;
pub mod quadrature;
pub mod scalar;
pub mod trace;

pub use bare::{
    bogoliubov_closed, bogoliubov_finite, bogoliubov_row, k_factor, occupation_bare_continuum, occupation_bare_finite,
    occupation_bare_limit,
    thermal_kernel, vacuum_divergence_probe, vacuum_kernel, BareOccupation, BogoliubovPair, Channel, ModeIndex,
};
pub use cavity::{
    diagonalize_oracle, free_space_eigencondition, potential_matrix, solve_spectrum, t0_free_space, transform_matrix,
    ModeSpectrum, OracleDecomposition, RootAnchor, TransformMatrix,
};
pub use dressed::{
    bath_amplitude, c1_by_quadrature, c1_closed, c2_closed, c2s2_contour, continuum_unit_sum, dressing_factor_a00,
    f00_continuum, f00_sq_asymptotic, f0w_continuum, f_matrix_finite, f_matrix_row, occupation_dressed_continuum,
    occupation_dressed_finite, occupation_dressed_limit, s1_algebraic, s1_contour, s1_direct, s2_algebraic, s2_direct, BathKernel,
    DressedAmplitude,
};
pub use error::{Error, Result};
pub use model::{bose_occupation, validate_params, CavitySpec, ModelParams};
pub use quadrature::{
    integrate, integrate_from, integrate_oscillatory, integrate_pv, integrate_semi_infinite, Phase,
    QuadError, QuadratureResult, QuadratureSpec, TailPolicy,
};
pub use scalar::Real;
pub use trace::{OccupationTrace, TraceKind};

pub type ModelParams64 = ModelParams<f64>;
pub type CavitySpec64 = CavitySpec<f64>;
pub type QuadratureSpec64 = QuadratureSpec<f64>;
pub type ModeSpectrum64 = ModeSpectrum<f64>;
pub type TransformMatrix64 = TransformMatrix<f64>;
pub type OccupationTrace64 = OccupationTrace<f64>;
