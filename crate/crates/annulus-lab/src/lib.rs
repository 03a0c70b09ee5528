//! Numerical laboratory for radially symmetric harmonic maps of annuli.
//!
//! The crate models maps that send a flat annulus onto a surface of
//! revolution and studies how they degenerate as the conformal modulus runs
//! to either end of moduli space. It provides:
//!
//! - closed-form radial profiles and catenoid root-finding ([`profile`]),
//! - Dirichlet energy, the curvature-ratio functional, and the
//!   energy / curvature / area inequality chain ([`energy`]),
//! - sweeps along the moduli ray with degenerate-end rows and energy
//!   minimization over the modulus ([`sweep`]),
//! - collapsing domain families, pointwise limits with convergence
//!   certificates, and bubbling detection ([`bubbling`]),
//! - lifts of curves and surfaces to position-direction measures for
//!   varifold-style limit bookkeeping ([`bundle`]),
//! - triple-junction balance, tension paths, and singular-limit
//!   classification ([`junction`]).
//!
//! The `annulus-lab` binary exposes the same operations as subcommands with
//! deterministic CSV/JSON output; see [`cli`].

// validation guards are written `!(x < y)` on purpose: the negation also
// rejects NaN, which `x >= y` would let through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bubbling;
pub mod bundle;
pub mod cli;
pub mod energy;
pub mod error;
pub mod geometry;
mod grid;
pub mod junction;
pub mod profile;
pub mod sweep;

pub use error::{Error, Result};
