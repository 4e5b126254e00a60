//! Pseudo-spectral operator calculus, models and time stepping for the
//! higher-order Benjamin-Ono equation
//!
//! ```text
//! ∂t v = b 𝓗 vxx + aε vxxx + c v vx - dε ∂x(v 𝓗vx + 𝓗(v vx))
//! ```
//!
//! on a periodic grid, together with its Benjamin-Ono limit (`ε = 0`) and an
//! intermediate-long-wave variant. The crate is `no_std` with `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fft;
pub mod field;
pub mod gauge;
pub mod grid;
pub mod initial;
pub mod integrator;
pub mod littlewood_paley;
pub mod models;
pub mod multiplier;
pub mod observables;
pub mod operators;

pub use error::{Error, Result};
pub use field::{forward_transform, inverse_transform, ComplexField, RealField, SpectralField};
pub use gauge::{gauge_forward, recovery_residual_35, recovery_residual_36, GaugeState};
pub use grid::Grid;
pub use initial::Profile;
pub use integrator::{integrate, IntegratorConfig, RunStatus, Stepper, TrajectoryRecord};
pub use littlewood_paley::{project, DyadicLadder, Projection};
pub use models::{coefficients_from_physical, is_bo_compatible, Model, ModelCoefficients, ModelKind, PhysicalParams};
pub use multiplier::MultiplierSymbol;
pub use observables::ObservableSet;
pub use num_complex::Complex64;
