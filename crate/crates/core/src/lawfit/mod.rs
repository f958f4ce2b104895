//! Frequency ranking, linear binning and power-law fits, plus the smoothing
//! and density curves drawn in the scatter figures.

mod binning;
mod powerlaw;
mod rank;
mod smooth;

pub use binning::{linear_binning, BinSeries};
pub use powerlaw::{
    fit_meaning_distribution, fit_meaning_frequency, fit_power_law, fit_zipf_rank_frequency,
    meaning_distribution_series, nls_power_law, FitMethod, FitResult, NlsOutcome,
};
pub use rank::{rank_by_frequency, RankedEntry, RankedLexicon};
pub use smooth::{density_curve, locpoly_smooth, silverman_bandwidth, Curve, GRID_POINTS};
