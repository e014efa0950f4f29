//! Curve diffusion (and its polyharmonic relatives) for open planar curves
//! whose ends slide on the two rays of a cone.
//!
//! The crate is `no_std` + `alloc`. It holds the discrete geometry, the
//! linearly implicit solver, initial-data construction and the audit
//! machinery. File formats, configuration and the command line live in the
//! `conediff` companion crate.
//!
//! Conventions used throughout: the curve runs from the ray at angle
//! `theta1` (node 0) to the ray at angle `theta2` (node N), the normal is the
//! tangent turned a quarter counterclockwise, so a tip-centred arc of radius
//! `r` has outward normal and curvature `1/r`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod banded;
pub mod diagnostics;
pub mod flow;
pub mod geometry;
pub mod initgen;
mod math;

pub use diagnostics::{QuantityRecord, ResidualRecord};
pub use flow::{FlowParams, FlowState, RunOutcome, TerminationKind, TerminationStatus};
pub use geometry::{ArcSpec, Cone, DiscreteCurve, GeometryError, Vec2};
pub use initgen::PerturbationSpec;
