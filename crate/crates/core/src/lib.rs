//! Two-dimensional acoustic obstacle scattering toolkit.
//!
//! Spectrally accurate boundary-integral forward solvers for sound-soft,
//! sound-hard, impedance and penetrable obstacles, phaseless far-field data
//! synthesis under superposed plane-wave incidence, and a recursive-in-
//! frequency Levenberg-Marquardt inversion that recovers obstacle location,
//! shape and (for penetrable obstacles) the transmission constant from
//! multi-frequency phaseless far-field data.
//!
//! The modulus of the far-field pattern is invariant under obstacle
//! translations for a single incident plane wave; superposing two plane
//! waves restricts the invariance to a lattice of lines, which multiple
//! direction sets and frequencies then eliminate. See the `phaseless` module
//! for the lattice utilities and `inversion` for the reconstruction driver.
//!
//! ```no_run
//! use scatter2d::geometry::{BenchmarkCurve, Curve, StarlikeCurve};
//! use scatter2d::frechet::Physics;
//! use scatter2d::inversion::{reconstruct, InversionConfig, IterateState};
//! use scatter2d::phaseless::{add_noise, synthesize_dataset};
//! use scatter2d::{BoundaryCondition, SolverConfig};
//!
//! # fn main() -> scatter2d::Result<()> {
//! let obstacle = Curve::Benchmark(BenchmarkCurve::AppleShaped);
//! let pairs = vec![vec![0.0, 2.0944], vec![0.0, -2.0944]];
//! let ks = [0.5, 1.0, 3.0, 5.0, 7.0, 9.0, 11.0];
//! let clean = synthesize_dataset(
//!     &obstacle, &BoundaryCondition::Dirichlet, &pairs, &ks, 128,
//!     &SolverConfig::default(),
//! )?;
//! let data = add_noise(&clean, 0.05, 10)?;
//!
//! let cfg = InversionConfig::default();
//! let init = IterateState::new(
//!     StarlikeCurve::circle_with_order(0.5, [-1.5, 0.0], cfg.order), 1.0,
//! );
//! let result = reconstruct(&init, &Physics::Dirichlet, &data, &cfg)?;
//! println!("center: {:?}", result.final_state.curve.center);
//! # Ok(())
//! # }
//! ```

pub mod error;
pub mod frechet;
pub mod geometry;
pub mod incident;
pub mod inversion;
pub mod linalg;
pub mod metrics;
pub mod oracle;
pub mod phaseless;
pub mod solver;
pub mod special;
pub(crate) mod util;

pub use error::{Error, Result};
pub use geometry::{BenchmarkCurve, Curve, CurvePerturbation, StarlikeCurve, TrigPolynomial};
pub use incident::PlaneWaveSuperposition;
pub use solver::{BoundaryCondition, FarFieldPattern, SolverConfig};
