use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use super::{normalize, Parsed, Warning};
use crate::error::{Error, Result};

#[derive(Default)]
struct SenseAccumulator {
    ids: BTreeSet<String>,
    max_count: u32,
}

impl SenseAccumulator {
    fn value(&self) -> u32 {
        self.max_count.max(self.ids.len() as u32)
    }
}

/// Reads a polysemy lexicon: `form<TAB>count` or `form<TAB>id[,id...]`.
///
/// A second field that parses as an integer is a count; anything else is a
/// list of synset ids and the count is the number of distinct ids. Repeated
/// forms merge by taking the union of ids and the max of counts.
pub fn load_polysemy_lexicon<R: BufRead>(
    reader: R,
    source: &str,
) -> Result<Parsed<BTreeMap<String, u32>>> {
    let mut acc: BTreeMap<String, SenseAccumulator> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut warn = |message: String| {
            warnings.push(Warning {
                source: source.to_string(),
                line: i + 1,
                message,
            })
        };
        let Some((form, value)) = line.split_once('\t') else {
            warn("expected `form<TAB>count` or `form<TAB>ids`".into());
            continue;
        };
        let Some(form) = normalize(form) else {
            warn(format!("empty form {form:?}"));
            continue;
        };
        let value = value.trim();
        if let Ok(count) = value.parse::<i64>() {
            if count < 1 {
                warn(format!("{form:?}: non-positive synset count {count}"));
                continue;
            }
            let entry = acc.entry(form).or_default();
            entry.max_count = entry.max_count.max(count.min(u32::MAX as i64) as u32);
        } else {
            let ids: BTreeSet<String> = value
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
            if ids.is_empty() {
                warn(format!("{form:?}: no synset ids"));
                continue;
            }
            acc.entry(form).or_default().ids.extend(ids);
        }
    }
    Ok(Parsed {
        value: acc.into_iter().map(|(f, a)| (f, a.value())).collect(),
        warnings,
    })
}

/// Reads `form count` lines (space or tab separated). Repeated forms sum.
pub fn load_reference_frequencies<R: BufRead>(
    reader: R,
    source: &str,
) -> Result<Parsed<BTreeMap<String, u64>>> {
    let mut map: BTreeMap<String, u64> = BTreeMap::new();
    let mut warnings = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut warn = |message: String| {
            warnings.push(Warning {
                source: source.to_string(),
                line: i + 1,
                message,
            })
        };
        let mut fields = line.split_whitespace();
        let (Some(form), Some(count), None) = (fields.next(), fields.next(), fields.next()) else {
            warn("expected `form count`".into());
            continue;
        };
        let Some(form) = normalize(form) else {
            warn(format!("empty form {form:?}"));
            continue;
        };
        match count.parse::<u64>() {
            Ok(n) if n > 0 => *map.entry(form).or_default() += n,
            _ => warn(format!("{form:?}: bad count {count:?}")),
        }
    }
    Ok(Parsed {
        value: map,
        warnings,
    })
}
