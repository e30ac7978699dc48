//! Spectral bandits on graphs.

pub mod bandit;
pub mod basis;
pub mod cli;
pub mod data;
pub mod effdim;
pub mod env;
pub mod error;
pub mod graph;
pub mod output;
pub mod rng;

pub use error::{Error, Result};
