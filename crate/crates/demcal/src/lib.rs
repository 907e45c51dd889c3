//! Contact-parameter calibration toolkit for granular materials.
//!
//! The crate couples a small spherical-particle discrete-element engine
//! ([`dem`]) and a set of virtual test rigs ([`rigs`]) to a
//! design-of-experiments / response-surface statistics stack ([`doe`],
//! [`rsm`]), and wires the whole screening → bench calibration → steepest
//! ascent → response surface → verification workflow into a resumable
//! pipeline ([`pipeline`]).
//!
//! Each major capability has a runnable example under `examples/`:
//!
//! ```bash
//! cargo run --release --example two_sphere_collision
//! cargo run --release --example coarse_graining
//! cargo run --release --example repose_pile
//! cargo run --release --example incline_sweep
//! cargo run --release --example drop_bounce
//! cargo run --release --example pb_screening
//! cargo run --release --example bbd_response_surface
//! cargo run --release --example replay_calibration
//! ```
//!
//! A thin CLI (`demcal`) exposes the same operations for batch use; see the
//! README for the command reference.

pub mod dem;
pub mod doe;
pub mod pipeline;
pub mod plot;
pub mod rigs;
pub mod rsm;
pub mod scaling;
