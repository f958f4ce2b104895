use serde::{Deserialize, Serialize};

use super::correlation::{kendall, pearson, spearman, KendallVariant};
use crate::error::Result;
use crate::model::{CorrelationResult, Dataset, FreqSource, Method, Role, Variable};

/// One (role, variable, method) cell of a correlation battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryCell {
    pub role: Role,
    pub source: FreqSource,
    pub variable: Variable,
    pub method: Method,
    /// Number of pairwise-complete records.
    pub n: usize,
    pub result: Option<CorrelationResult>,
    /// Why the cell could not be computed.
    pub note: Option<String>,
}

/// Correlates frequency against every companion variable, per role, with
/// Pearson, Spearman and the requested Kendall variant. Cells are ordered by
/// (role, variable, method).
pub fn correlate_battery(
    dataset: &Dataset,
    source: FreqSource,
    kendall_variant: KendallVariant,
) -> Result<Vec<BatteryCell>> {
    let methods = [Method::Pearson, Method::Spearman, kendall_variant.method()];
    let mut cells = Vec::new();
    for role in Role::ALL {
        for variable in Variable::ALL {
            let (f, v) = dataset.paired(role, source, variable);
            for method in methods {
                let outcome = match method {
                    Method::Pearson => pearson(&f, &v),
                    Method::Spearman => spearman(&f, &v),
                    Method::KendallA | Method::KendallB => kendall(&f, &v, kendall_variant),
                };
                let (result, note) = match outcome {
                    Ok(r) => (Some(r), None),
                    Err(e) => (None, Some(format!("not computable: {e}"))),
                };
                cells.push(BatteryCell {
                    role,
                    source,
                    variable,
                    method,
                    n: f.len(),
                    result,
                    note,
                });
            }
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CoverageStats, WordRecordBuilder};
    use std::collections::BTreeMap;

    fn tiny_dataset() -> Dataset {
        let recs = (1..=6)
            .map(|i| {
                WordRecordBuilder {
                    form: format!("w{i}"),
                    role: Role::Child,
                    childes_freq: i * 10,
                    reference_freq: (i < 3).then_some(i),
                    polysemy: Some(i as u32),
                    n_chars: 10 - i as u32,
                    n_phonemes: None,
                    n_syllables: None,
                }
                .build()
                .unwrap()
            })
            .collect();
        let mut cov = BTreeMap::new();
        cov.insert(Role::Child, CoverageStats::new(6, 6, 210, 210).unwrap());
        Dataset::new("t", recs, cov).unwrap()
    }

    #[test]
    fn ordering_and_not_computable_cells() {
        let ds = tiny_dataset();
        let cells = correlate_battery(&ds, FreqSource::Childes, KendallVariant::B).unwrap();
        assert_eq!(cells.len(), 2 * 4 * 3);
        assert_eq!(cells[0].method, Method::Pearson);
        assert_eq!(cells[2].method, Method::KendallB);
        assert_eq!(cells[3].variable, Variable::Chars);
        let poly_spearman = &cells[1];
        assert_eq!(poly_spearman.result.unwrap().coefficient, 1.0);
        let chars_kendall = &cells[5];
        assert_eq!(chars_kendall.result.unwrap().coefficient, -1.0);
        // no phonetics, no adults
        assert!(cells[6].result.is_none() && cells[6].note.is_some());
        assert!(cells[12..].iter().all(|c| c.result.is_none() && c.n == 0));

        let cells = correlate_battery(&ds, FreqSource::Reference, KendallVariant::B).unwrap();
        assert_eq!(cells[0].n, 2);
        assert!(cells[0].result.is_none());
    }
}
