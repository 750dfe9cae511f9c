//! Collective surrounding control for a team of underactuated unmanned
//! surface vessels (USVs).
//!
//! The library is organised around a two-level control architecture:
//!
//! * an upper level of collective protocols ([`protocols`]) that command
//!   per-vessel reference velocities so the team surrounds a target point,
//!   either in Cartesian form (surrounding control, with an optional
//!   decentralized target estimator) or in polar form (equally-surrounding
//!   control on a circle of radius `rho_o`);
//! * a lower level of trajectory regulation ([`regulation`]) that turns
//!   surge/heading references into propeller-speed and steering-angle
//!   commands for the identified vessel dynamics ([`dynamics`]), via
//!   backstepping or simplified PI/PD laws.
//!
//! [`conversion`] bridges the two levels (Cartesian/polar reference
//! conversions and the tracking perturbation `e`), [`engine`] orchestrates
//! full scenario runs and kinematic ("ideal mode") runs with Lyapunov
//! monitors recorded on every control tick, and [`verify`] hosts the
//! independent numerical oracles used to cross-check the implementation
//! (finite-difference gradients, simplex-grid hull distances, analytic
//! decay rates, grounded-Laplacian eigenvalues).

pub mod conversion;
pub mod dynamics;
pub mod engine;
pub mod fit;
pub mod geometry;
pub mod protocols;
pub mod regulation;
pub mod scenario;
pub mod trace;
pub mod verify;

/// Planar point / vector type used throughout the crate (meters).
pub type Vec2 = nalgebra::Vector2<f64>;
