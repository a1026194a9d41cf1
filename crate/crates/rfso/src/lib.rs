//! Performance analysis of a dual-hop mixed RF/FSO relaying link.
//!
//! The model: a source talks to one of `N` relays over Rayleigh-faded RF
//! channels, picking the relay by partial relay selection on outdated channel
//! state information; the chosen relay amplifies with a fixed gain through a
//! soft-envelope-limiter power amplifier and forwards over a free-space
//! optical hop impaired by Gamma-Gamma turbulence, beam misalignment, and
//! path loss. The crate computes outage probability, average bit error
//! probability, and ergodic capacity for that link two independent ways:
//!
//! * closed-form expressions built on Meijer-G and incomplete-gamma
//!   evaluations ([`analysis`]), plus high-SNR asymptotics;
//! * Monte Carlo simulation of the full sampling chain ([`mcsim`]).
//!
//! The two routes are developed against each other; the test suite asserts
//! their agreement. See the `examples/` directory for runnable walkthroughs
//! of each capability and `src/main.rs` for the sweep-driving CLI.

pub mod analysis;
pub mod config;
pub mod error;
pub mod fso_hop;
pub mod impairment;
pub mod mcsim;
pub mod rf_hop;
pub mod runner;
pub mod specfun;

pub use error::{Result, RfsoError};
