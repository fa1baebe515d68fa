//! Upper bounds on the sum capacity of the two-user Gaussian multiple-access
//! diamond channel: a source feeds two relays over rate-limited backhaul links,
//! and the relays reach two destinations over a real Gaussian interference
//! channel.
//!
//! The crate evaluates the classical two-cut bound, the four-cut bound that
//! adds the cross cuts through each relay, and the strengthened bound that
//! averages the backhaul-correlation penalty with the broadcast sum capacity.
//! All rates are in bits per channel use.

pub mod bounds;
pub mod closed_forms;
pub mod config;
pub mod error;
pub mod mimo_bc;
pub mod model;
pub mod oracle;
pub mod sweep;

pub use bounds::{BoundReport, XSelector};
pub use error::{Error, Result};
pub use mimo_bc::OptimizerOptions;
pub use model::{ChannelConfig, Interval, Psd2, Rho};
