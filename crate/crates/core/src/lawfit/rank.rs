use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub form: String,
    pub frequency: u64,
    pub rank: usize,
}

/// Forms sorted by descending frequency, ranks 1..n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedLexicon {
    pub entries: Vec<RankedEntry>,
}

impl RankedLexicon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ranks forms by descending frequency; equal frequencies are ordered by
/// form so the ranking is deterministic.
pub fn rank_by_frequency<'a, I>(freqs: I) -> Result<RankedLexicon>
where
    I: IntoIterator<Item = (&'a str, u64)>,
{
    let mut pairs: Vec<(&str, u64)> = freqs.into_iter().collect();
    if pairs.is_empty() {
        return Err(Error::Empty("frequency map"));
    }
    if let Some((form, _)) = pairs.iter().find(|(_, f)| *f == 0) {
        return Err(Error::InvalidRecord(format!("{form:?} has zero frequency")));
    }
    pairs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    Ok(RankedLexicon {
        entries: pairs
            .into_iter()
            .enumerate()
            .map(|(i, (form, frequency))| RankedEntry {
                form: form.to_string(),
                frequency,
                rank: i + 1,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tie_break_is_lexicographic() {
        let r = rank_by_frequency([("c", 3), ("a", 5), ("b", 3)]).unwrap();
        let got: Vec<_> = r.entries.iter().map(|e| (e.form.as_str(), e.rank)).collect();
        assert_eq!(got, vec![("a", 1), ("b", 2), ("c", 3)]);
    }

    #[test]
    fn singleton_and_empty() {
        assert_eq!(rank_by_frequency([("x", 1)]).unwrap().entries[0].rank, 1);
        assert!(rank_by_frequency(std::iter::empty()).is_err());
        assert!(rank_by_frequency([("x", 0)]).is_err());
    }

    // Checks adjacent entries with an independently written comparator.
    #[test]
    fn thousand_random_entries_sorted() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let forms: Vec<String> = (0..1000).map(|i| format!("f{:04}", (i * 7919) % 1000)).collect();
        let input: Vec<(&str, u64)> = forms.iter().map(|f| (f.as_str(), rng.random_range(1..50))).collect();
        let r = rank_by_frequency(input.iter().copied()).unwrap();
        assert_eq!(r.len(), 1000);
        for (i, w) in r.entries.windows(2).enumerate() {
            let ok = w[0].frequency > w[1].frequency
                || (w[0].frequency == w[1].frequency && w[0].form < w[1].form);
            assert!(ok, "{:?} {:?}", w[0], w[1]);
            assert_eq!(w[0].rank, i + 1);
        }
    }
}
