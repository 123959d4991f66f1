//! Harmonic-measure laboratory for planar simply connected domains.
//!
//! The crate estimates two radial harmonic-measure profiles of a domain `D`
//! containing the origin:
//!
//! * `omega(R)` — the harmonic measure at the basepoint of the far boundary
//!   `∂D ∩ {|z| >= R}` with respect to `D`;
//! * `omega_hat(R)` — the harmonic measure at the basepoint of the circle
//!   portion `D ∩ {|z| = R}` with respect to the component of
//!   `D ∩ {|z| < R}` containing the basepoint.
//!
//! Estimates come from a walk-on-spheres Monte Carlo kernel with reproducible
//! counter-based sampling ([`wos`]), cross-checked against closed-form values
//! ([`oracles`]) and hyperbolic-geometry diagnostics ([`hyperbolic`]) on a
//! catalog of exactly represented domains ([`geometry`]). The [`experiments`]
//! module packages the standard scenarios (Koebe sweep, counter-example
//! domains, starlike suite, strong-Markov check, slit-disk validation) into
//! serializable reports, and [`cli`] exposes them as a command-line tool.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod hyperbolic;
pub mod oracles;
pub mod wos;

pub use error::{Error, Result};
pub use geometry::{BoundaryPiece, DomainSpec, HitClass, Point};
pub use wos::{TallyEstimate, WosConfig};
