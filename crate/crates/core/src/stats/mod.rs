//! Correlation tests, exact pair counting and tie-induced bounds.

mod battery;
mod correlation;
pub mod dist;
mod pairs;
mod rank;
mod ties;

pub use battery::{correlate_battery, BatteryCell};
pub use correlation::{kendall, pearson, spearman, KendallVariant};
pub use pairs::{count_pairs, count_pairs_brute, PairCounts};
pub use rank::midranks;
pub use ties::{tie_stats, ties_table, TieStats, TiesRow};

use crate::error::{Error, Result};

pub(crate) fn check_pair(x: &[f64], y: &[f64], min: usize) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < min {
        return Err(Error::TooFew {
            need: min,
            got: x.len(),
        });
    }
    if let Some(i) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i % x.len()));
    }
    Ok(())
}
