//! Reliability indices of cyber-physical power distribution systems by
//! sequential Monte Carlo simulation.
//!
//! Branch failures, communication-network failures and the operator's
//! response time during service restoration are simulated jointly over a
//! long horizon; each replication yields Failure Rate, Availability, SAIDI
//! and SAIFI.

pub mod contingency;
pub mod engine;
pub mod error;
pub mod indices;
pub mod runner;
pub mod sampling;
pub mod timeline;
pub mod topology;

pub use error::{Error, Result};
