//! Pretest analytics for multiple-choice exam items.
//!
//! The toolkit compares a reading-comprehension model's option probabilities
//! with the answer distributions of real candidates:
//!
//! * [`item_bank`] loads and joins items, candidate distributions and model
//!   predictions;
//! * [`reshape`] reshapes model probabilities with a redistribution weight
//!   and a temperature, and fits both per level;
//! * [`divergence`] measures KL, Hellinger and total variation distances and
//!   extracts empirical CDFs;
//! * [`detection`] ranks distractors to find those few candidates choose;
//! * [`readability`] computes classic readability indices and the
//!   classifier complexity score;
//! * [`synthetic`] generates seeded banks with known ground truth;
//! * [`report`] and [`cli`] assemble everything into tables and files.
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod cli;
pub mod detection;
pub mod divergence;
pub mod error;
pub mod item_bank;
pub mod numeric;
pub mod readability;
pub mod report;
pub mod reshape;
pub mod synthetic;

pub use error::{Error, Finding, Result};
