//! Analysis and simulation of uplink/downlink decoupled access in
//! cellular-V2X networks.
//!
//! The network model is a two-tier heterogeneous deployment: macro base
//! stations form a planar Poisson point process, roads form a Poisson line
//! process, and small base stations and vehicles form 1-D Poisson point
//! processes on each road (a Cox process overall). A typical vehicle sits at
//! the origin on a road through the origin and may attach its uplink and
//! downlink to different base stations.
//!
//! The crate has two independent evaluation paths for the same model:
//!
//! * [`analysis`] — numerical evaluation of the closed/semi-closed forms for
//!   joint association probabilities, serving-distance distributions,
//!   spectral efficiency and coverage probability, built on the quadrature
//!   and Laplace-transform machinery in [`numerics`];
//! * [`simulator`] — a from-scratch seeded Monte Carlo engine that samples
//!   network drops ([`geometry`]), applies the propagation model
//!   ([`channel`]) and estimates the same metrics empirically.
//!
//! The `cv2x` binary wraps both behind sweep/figure-reproduction commands
//! and emits CSV (see [`experiment`]).

pub mod analysis;
pub mod channel;
pub mod config;
mod error;
pub mod experiment;
pub mod geometry;
pub mod numerics;
pub mod simulator;

pub use error::{Error, Result};

/// Link direction of a transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Ul,
    Dl,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::Ul => "ul",
            Direction::Dl => "dl",
        }
    }
}

/// Base-station tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BsKind {
    Mbs,
    Sbs,
}

impl BsKind {
    pub fn label(self) -> &'static str {
        match self {
            BsKind::Mbs => "mbs",
            BsKind::Sbs => "sbs",
        }
    }
}
