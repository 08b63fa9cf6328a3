#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Pre-trained Gaussian-process priors for Bayesian optimization.
//!
//! A GP prior (mean, kernel, noise) is fitted on observations from many related
//! tasks, then frozen and used to optimize a new task. The crate is split into
//! exact GP machinery ([`gp`]), pre-training objectives ([`pretrain`]),
//! acquisition functions ([`acquisition`]), the optimization loop with baselines
//! and reporting ([`bo`]), and dataset handling ([`data`]).

pub mod acquisition;
pub mod bo;
pub mod data;
pub mod error;
pub mod gp;
pub mod linalg;
pub mod pretrain;
pub mod space;

pub use error::{Error, Result};

/// A point in the (warped) search space.
pub type Point = Vec<f64>;
