#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Extremal constants for holomorphic functions omitting two values.
//!
//! The arithmetic half works with words in the level-2 congruence group
//! (exact traces, minimal-trace enumeration, closed-form bounds). The analytic
//! half computes harmonic measure on a two-circle domain, the derived
//! constants mu and s0, and the covering function h built from a Lame
//! equation.

pub mod a0_solver;
pub mod cli;
pub mod error;
pub mod hyperbolic;
pub mod lame;
pub mod mu_pipeline;
pub mod schwarz;
pub mod trace_theory;
pub mod word_algebra;

pub use error::{Error, Result};
