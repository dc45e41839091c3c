//! Fourier-side solver for the homogeneous Boltzmann equation with a
//! fractional Laplacian diffusion term, for Maxwellian-molecule cross
//! sections.
//!
//! The crate works with radial characteristic functions `phi(|xi|, t)` and
//! solves the Duhamel integral form of
//!
//! ```text
//! (d/dt + delta_p |xi|^p) phi = B(phi),
//! ```
//!
//! where `B` is the Bobylev-transformed collision operator. Alongside the
//! solver it computes the angular-kernel constants (`gamma_alpha`,
//! `lambda_alpha`, `mu_alpha`, `C_{p,alpha}`), the `K^alpha` / `M^alpha`
//! norms and the `dis_{alpha,beta}` metric, stable densities by radial
//! Fourier inversion, and diagnostic monitors for the growth, stability,
//! a priori, Hoelder, contraction and non-existence estimates.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes
//! through `libm`, so results are bit-reproducible across platforms.
//! File formats, configuration and the CLI live in the companion crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod charfn;
pub mod collision;
pub mod evolve;
pub mod kernel;
pub(crate) mod linalg;
pub mod math;
pub mod quad;
pub mod realspace;
pub(crate) mod rng;
pub mod special;

pub use charfn::{ClosedForm, OriginModel, RadialCharFn, RadialGrid, TailModel};
pub use evolve::{EvolutionTrace, SolverConfig};
pub use kernel::{CrossSection, KernelMoments, Moment};
pub use realspace::RadialDensity;

/// Errors shared across the numerical modules.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument was outside its admissible range.
    Domain(&'static str),
    /// Evaluation exactly at a non-integrable singularity.
    Singularity(&'static str),
    /// A quadrature or iteration failed to stabilize to tolerance.
    Convergence(&'static str),
    /// Two characteristic functions do not share a grid.
    GridMismatch,
    /// An operation needed an origin or tail model that is absent/unusable.
    ModelMissing(&'static str),
    /// Interpolation was requested outside grid + tail coverage.
    InterpolationOutOfRange,
    /// A cutoff-only operation was invoked with a non-cutoff kernel.
    NonCutoffKernel,
    /// Picard iteration exceeded the theoretical contraction bound.
    NoContraction(&'static str),
    /// Picard iteration hit its iteration cap before reaching tolerance.
    ToleranceNotMet(&'static str),
    /// The truncation continuation failed to be Cauchy.
    NotCauchy(&'static str),
    /// Two traces were produced under incompatible configurations.
    ConfigMismatch(&'static str),
    /// The tail model does not decay, so the inversion integral diverges.
    NotIntegrable(&'static str),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Singularity(m) => write!(f, "singular evaluation: {m}"),
            Error::Convergence(m) => write!(f, "convergence failure: {m}"),
            Error::GridMismatch => write!(f, "grid mismatch between characteristic functions"),
            Error::ModelMissing(m) => write!(f, "model missing: {m}"),
            Error::InterpolationOutOfRange => write!(f, "interpolation outside grid coverage"),
            Error::NonCutoffKernel => write!(f, "operation requires a cutoff kernel"),
            Error::NoContraction(m) => write!(f, "no contraction: {m}"),
            Error::ToleranceNotMet(m) => write!(f, "tolerance not met: {m}"),
            Error::NotCauchy(m) => write!(f, "truncation continuation not Cauchy: {m}"),
            Error::ConfigMismatch(m) => write!(f, "config mismatch: {m}"),
            Error::NotIntegrable(m) => write!(f, "not integrable: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
