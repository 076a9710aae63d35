//! Exact wavelet-set decisions, interpolation maps, and finite-dimensional
//! frame constructions.
//!
//! The crate is organised in layers:
//!
//! * [`pi`] and [`set`]: exact scalars `(p/q)·π` and canonical interval unions.
//! * [`congruence`]: translation/dilation congruence with checkable witnesses,
//!   and the wavelet-set decision.
//! * [`families`]: parameterised wavelet-set constructions.
//! * [`interpolation`]: interpolation maps between wavelet sets, their group
//!   structure, dilation-periodic multipliers and the coefficient criterion.
//! * [`analysis`]: frequency symbols, closed-form Gram windows of the
//!   dilation/translation system, time-domain samples.
//! * [`lab`] and [`frames`]: finite-dimensional unitary systems, local
//!   commutants, frames, Naimark complements and rank-one decompositions.
//! * [`suite`]: the acceptance battery shared by the test suite and the CLI.
//!
//! Fourier convention: `(Ff)(s) = (2π)^{-1/2} ∫ e^{-ist} f(t) dt`, so the
//! dilation `(Df)(t) = √2 f(2t)` becomes `D^{-1}` and the translation
//! `(Tf)(t) = f(t - 1)` becomes multiplication by `e^{-is}`.

pub mod analysis;
pub mod congruence;
pub mod error;
pub mod families;
pub mod frames;
pub mod interpolation;
pub mod lab;
pub mod linalg;
pub mod pi;
pub mod set;
pub mod suite;

pub use congruence::{
    dilation_congruent, is_dilation_generator, is_spectral_for_z, is_translation_generator, is_wavelet_set,
    translation_congruent, DilationWitness, FailureReason, TranslationWitness, WaveletVerdict,
};
pub use error::{Error, Result};
pub use pi::PiRational;
pub use set::{Interval, PiSet};

/// Shared numeric tolerances.
pub mod tol {
    /// Raw arithmetic identities (per-entry Gram values, Hermitian checks).
    pub const RAW: f64 = 1e-12;
    /// Direct algebraic identities (unitarity, rank, disjointness).
    pub const ALGEBRAIC: f64 = 1e-10;
    /// Objects synthesized through accumulated rotations.
    pub const SYNTHESIS: f64 = 1e-8;
}
