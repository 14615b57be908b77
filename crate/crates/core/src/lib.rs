//! Numerical laboratory for Fourier extension and restriction experiments.
//!
//! The crate is organized around a small set of concrete objects:
//!
//! * [`spectral`] — uniform grids, sampled complex fields, Riemann-sum
//!   discrete Fourier transforms, `L^p` norms, special window functions,
//!   and log-log slope fitting.
//! * [`surface`] — graph hypersurfaces `(ξ, ψ(ξ))`, their differential
//!   geometry, and oscillatory integrals against the pullback measure.
//! * [`extension`] — the extension operator, the restriction operator,
//!   their adjointness defect, and the parabolic rescaling identity.
//! * [`dyadic`] — dyadic cubes, Whitney decompositions, parabolic caps,
//!   separated interval partitions, and Fourier projection onto caps.
//! * [`packets`] — oriented boxes, dual boxes, wave-packet families with
//!   analysis/synthesis, and Monte Carlo box-overlap volumes.
//! * [`probes`] — one driver per measured inequality; each produces a
//!   [`probes::ProbeReport`] with per-scale measurements, a fitted
//!   exponent, and a pass/fail verdict.
//!
//! Everything is deterministic given a seed: trial randomness is derived
//! from `(seed, trial index)` and reductions are order-insensitive, so
//! results do not depend on thread count.

pub mod dyadic;
pub mod error;
pub mod exec;
pub mod extension;
pub mod linalg;
pub mod packets;
pub mod probes;
pub mod rng;
pub mod spectral;
pub mod surface;

pub use error::{Error, Result};
pub use spectral::{Grid, SampledField, SlopeFit};
pub use surface::{Density, Hypersurface, SurfaceKind};

/// Complex sample type used throughout the crate.
pub type Complex64 = num_complex::Complex<f64>;
