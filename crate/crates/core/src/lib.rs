//! Online generalized scheduling with norm and power aggregates.
//!
//! Jobs arrive one at a time and must be placed irrevocably on a machine and
//! a processing way. The crate builds complete schedules out of budgeted
//! packing agents, and ships exact oracles for small instances.

pub mod budgeted;
pub mod cover;
pub mod error;
pub mod harness;
pub mod instance;
pub mod model;
pub mod norm;
pub mod oracle;
pub mod reductions;
pub mod rng;
pub mod single_machine;

pub use error::{Error, Result};
