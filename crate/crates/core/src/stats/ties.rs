use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::pairs::count_pairs;
use crate::error::Result;
use crate::model::{Dataset, FreqSource, Role, Variable};

/// Tie proportion and the correlation lower bounds it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TieStats {
    pub upsilon: f64,
    /// Strongest achievable negative Kendall tau-a: upsilon - 1.
    pub tau_lower_bound: f64,
    /// max(3 upsilon / 2 - 1, upsilon^2 / 2) - 1, from the Daniels and
    /// Durbin-Stuart inequalities. Those assume untied data; see
    /// `rho_bound_fails_with_ties` below.
    pub rho_lower_bound: f64,
}

impl TieStats {
    pub fn from_upsilon(upsilon: f64) -> TieStats {
        TieStats {
            upsilon,
            tau_lower_bound: upsilon - 1.0,
            rho_lower_bound: (1.5 * upsilon - 1.0).max(upsilon * upsilon / 2.0) - 1.0,
        }
    }
}

pub fn tie_stats(x: &[f64], y: &[f64]) -> Result<TieStats> {
    Ok(TieStats::from_upsilon(count_pairs(x, y)?.upsilon()))
}

/// Percentage of tied pairs between one frequency source and each companion
/// variable, for one role. `None` marks a variable with fewer than two
/// complete records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TiesRow {
    pub role: Role,
    pub source: FreqSource,
    pub percent: BTreeMap<Variable, Option<f64>>,
    pub n: BTreeMap<Variable, usize>,
}

pub fn ties_table(dataset: &Dataset, source: FreqSource) -> Result<Vec<TiesRow>> {
    let mut rows = Vec::new();
    for role in Role::ALL {
        let mut percent = BTreeMap::new();
        let mut n = BTreeMap::new();
        for var in Variable::ALL {
            let (f, v) = dataset.paired(role, source, var);
            n.insert(var, f.len());
            let cell = if f.len() < 2 {
                None
            } else {
                Some(100.0 * count_pairs(&f, &v)?.upsilon())
            };
            percent.insert(var, cell);
        }
        rows.push(TiesRow {
            role,
            source,
            percent,
            n,
        });
    }
    Ok(rows)
}
