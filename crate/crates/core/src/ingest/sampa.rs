use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use super::{normalize, Parsed, Warning};
use crate::error::{Error, Result};

const DEFAULT_TABLE: &str = include_str!("../../data/sampa_symbols.tsv");

/// Phoneme and syllable counts of one word form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhoneticEntry {
    pub phoneme_count: u32,
    pub syllable_count: u32,
}

/// SAMPA segment inventory used for greedy longest-match tokenization.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    phones: HashSet<String>,
    marks: HashSet<String>,
    longest: usize,
}

impl Default for SymbolTable {
    fn default() -> Self {
        SymbolTable::parse(DEFAULT_TABLE).expect("bundled SAMPA table is valid")
    }
}

impl SymbolTable {
    /// Parses `kind<TAB>symbol` lines, where kind is `phone` or `mark`.
    pub fn parse(text: &str) -> Result<SymbolTable> {
        let mut phones = HashSet::new();
        let mut marks = HashSet::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((kind, symbol)) = line.split_once('\t') else {
                return Err(Error::Config(format!("symbol table line {}: expected `kind\\tsymbol`", i + 1)));
            };
            if symbol.is_empty() || symbol.contains('-') {
                return Err(Error::Config(format!("symbol table line {}: bad symbol {symbol:?}", i + 1)));
            }
            match kind {
                "phone" => phones.insert(symbol.to_string()),
                "mark" => marks.insert(symbol.to_string()),
                other => {
                    return Err(Error::Config(format!("symbol table line {}: unknown kind {other:?}", i + 1)))
                }
            };
        }
        if phones.is_empty() {
            return Err(Error::Config("symbol table has no phones".into()));
        }
        let longest = phones
            .iter()
            .chain(marks.iter())
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        Ok(SymbolTable {
            phones,
            marks,
            longest,
        })
    }

    /// Counts segments in one syllable. On failure returns the byte offset of
    /// the first untokenizable character.
    fn count_segments(&self, syllable: &str) -> std::result::Result<u32, usize> {
        let chars: Vec<(usize, char)> = syllable.char_indices().collect();
        let mut pos = 0;
        let mut count = 0;
        while pos < chars.len() {
            let max = self.longest.min(chars.len() - pos);
            let mut matched = None;
            for len in (1..=max).rev() {
                let start = chars[pos].0;
                let end = chars.get(pos + len).map_or(syllable.len(), |c| c.0);
                let piece = &syllable[start..end];
                if self.phones.contains(piece) {
                    matched = Some((len, true));
                    break;
                }
                if self.marks.contains(piece) {
                    matched = Some((len, false));
                    break;
                }
            }
            match matched {
                Some((len, phone)) => {
                    count += u32::from(phone);
                    pos += len;
                }
                None => return Err(chars[pos].0),
            }
        }
        Ok(count)
    }

    /// Tokenizes a syllabified transcription (`-` separates syllables).
    ///
    /// The error carries a message with the byte offset of the problem.
    pub fn analyze(&self, transcription: &str) -> std::result::Result<PhoneticEntry, String> {
        let mut phonemes = 0;
        let mut syllables = 0;
        let mut offset = 0;
        for syl in transcription.split('-') {
            match self.count_segments(syl) {
                Ok(0) => return Err(format!("syllable without phonemes at byte {offset}")),
                Ok(n) => phonemes += n,
                Err(at) => {
                    return Err(format!("untokenizable residue {:?} at byte {}", &syl[at..], offset + at))
                }
            }
            syllables += 1;
            offset += syl.len() + 1;
        }
        Ok(PhoneticEntry {
            phoneme_count: phonemes,
            syllable_count: syllables,
        })
    }
}

/// Reads `form<TAB>syllabified-SAMPA` lines. The first entry for a form wins.
pub fn load_phonetic_lexicon<R: BufRead>(
    reader: R,
    source: &str,
    table: &SymbolTable,
) -> Result<Parsed<BTreeMap<String, PhoneticEntry>>> {
    let mut map = BTreeMap::new();
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
        let mut fields = line.split('\t');
        let (Some(form), Some(trans)) = (fields.next(), fields.next()) else {
            warn("expected `form<TAB>transcription`".into());
            continue;
        };
        let Some(form) = normalize(form) else {
            warn(format!("empty form {form:?}"));
            continue;
        };
        match table.analyze(trans.trim()) {
            Ok(entry) => {
                if let Some(prev) = map.get(&form) {
                    if *prev != entry {
                        warn(format!("duplicate entry for {form:?} ignored"));
                    }
                } else {
                    map.insert(form, entry);
                }
            }
            Err(message) => warn(format!("{form:?}: {message}")),
        }
    }
    Ok(Parsed {
        value: map,
        warnings,
    })
}
