//! Graph classification features from random-walk dynamics.
//!
//! A stationary random walker on a graph sees a node attribute at two
//! instants `t` steps apart; the covariance of the two readings, taken over
//! several `t`, is a graph-level feature ("generalized assortativity").
//! This crate computes those features for a set of structural attributes
//! and node labels, and evaluates them with repeated cross-validated linear
//! SVM and random-forest classifiers.

pub mod attributes;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod features;
pub mod graph;
mod parallel;
pub mod profiles;

pub use error::{Error, Result};
