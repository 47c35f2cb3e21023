//! Certified counting bounds for Dirichlet Laplacian eigenvalues on rectilinear domains.
//!
//! The crate has three layers:
//!
//! * exact oracles — closed-form dimensional constants ([`constants`]) and exact lattice
//!   counting / Riesz means for boxes and separated box unions ([`spectra`], with strictness
//!   resolved in rational arithmetic);
//! * explicit bounds — one-dimensional Riesz-mean bounds ([`bounds1d`]), product/cube/BLY
//!   counting bounds in any dimension ([`bounds_nd`]), and uniform two-sided remainder
//!   estimates driven by domain geometry ([`certify`]);
//! * certification — an end-to-end pipeline that solves for the eigenvalue threshold
//!   `Λ(ε, Ω)` above which the (1+ε)-relaxed Weyl bound is guaranteed, then verifies every
//!   eigenvalue below it against the exact counting oracle ([`certify::certify_epsilon_polya`]),
//!   plus checkers for disjoint-cube families ([`admissible`]).
//!
//! Geometry ([`geometry`]) works on axis-aligned boxes with rational coordinates so that set
//! operations, volumes, surfaces and squared distances are exact; everything that feeds an
//! inequality is either exact or deliberately rounded toward the safe side.

pub mod admissible;
pub mod bounds1d;
pub mod bounds_nd;
pub mod certificate;
pub mod certify;
pub mod constants;
pub mod error;
pub mod geometry;
pub mod io;
pub mod rational;
pub mod spectra;

pub use certificate::{Certificate, Claim, Hypothesis, HypothesisStatus, Verdict, WorkLog};
pub use error::{Error, Result};
pub use geometry::{DomainMetrics, RatBox, RectilinearDomain};
pub use rational::Rat;
