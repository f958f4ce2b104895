use std::collections::BTreeMap;

use super::{char_length, FrequencyTables, Parsed, PhoneticEntry, Warning};
use crate::error::{Error, Result};
use crate::model::{CoverageStats, Dataset, Role, WordRecordBuilder};

/// Lexicon maps consumed by [`join_dataset`].
#[derive(Debug, Clone, Default)]
pub struct LexiconInputs {
    pub polysemy: BTreeMap<String, u32>,
    pub phonetics: BTreeMap<String, PhoneticEntry>,
    pub reference: BTreeMap<String, u64>,
}

/// Joins per-role transcript counts with the lexicons.
///
/// Only forms with a polysemy entry are retained. Forms without any
/// alphabetic character are dropped with a warning; they still count towards
/// the coverage totals.
pub fn join_dataset(
    language: &str,
    freqs: &FrequencyTables,
    lex: &LexiconInputs,
) -> Result<Parsed<Dataset>> {
    let mut records = Vec::new();
    let mut coverage = BTreeMap::new();
    let mut warnings = Vec::new();

    for role in Role::ALL {
        let Some(table) = freqs.table(role) else {
            coverage.insert(role, CoverageStats::new(0, 0, 0, 0)?);
            continue;
        };
        let (mut analyzed_types, mut analyzed_tokens) = (0u64, 0u64);
        let total_tokens: u64 = table.values().sum();
        for (form, &count) in table {
            let Some(&polysemy) = lex.polysemy.get(form) else {
                continue;
            };
            let n_chars = char_length(form);
            if n_chars == 0 {
                warnings.push(Warning {
                    source: format!("join/{role}"),
                    line: 0,
                    message: format!("{form:?} has no countable characters; excluded"),
                });
                continue;
            }
            let phon = lex.phonetics.get(form);
            records.push(
                WordRecordBuilder {
                    form: form.clone(),
                    role,
                    childes_freq: count,
                    reference_freq: lex.reference.get(form).copied(),
                    polysemy: Some(polysemy),
                    n_chars,
                    n_phonemes: phon.map(|p| p.phoneme_count),
                    n_syllables: phon.map(|p| p.syllable_count),
                }
                .build()?,
            );
            analyzed_types += 1;
            analyzed_tokens += count;
        }
        coverage.insert(
            role,
            CoverageStats::new(analyzed_types, table.len() as u64, analyzed_tokens, total_tokens)?,
        );
    }

    if records.is_empty() {
        return Err(Error::Empty("no transcript form has a polysemy entry"));
    }
    Ok(Parsed {
        value: Dataset::new(language, records, coverage)?,
        warnings,
    })
}
