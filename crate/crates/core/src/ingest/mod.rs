//! Parsing of transcripts and lexicon files, and the join into a [`Dataset`].
//!
//! [`Dataset`]: crate::model::Dataset

mod join;
mod lexicon;
mod sampa;
mod transcript;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

pub use join::{join_dataset, LexiconInputs};
pub use lexicon::{load_polysemy_lexicon, load_reference_frequencies};
pub use sampa::{load_phonetic_lexicon, PhoneticEntry, SymbolTable};
pub use transcript::{parse_transcript_dir, parse_transcripts, FrequencyTables, RoleMap, TranscriptLine};

/// A recoverable problem found while reading an input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Warning {
    pub source: String,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.source, self.line, self.message)
    }
}

/// A parsed value together with the warnings raised while producing it.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

/// Lowercases a raw token and strips leading/trailing punctuation.
///
/// Returns `None` when nothing is left. Internal apostrophes and hyphens are
/// kept so that forms stay joinable to lexicon entries.
pub fn normalize(token: &str) -> Option<String> {
    let trimmed = token.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_lowercase())
    }
}

/// Number of alphabetic characters in a form; digits, apostrophes, hyphens
/// and other separators do not count.
pub fn char_length(form: &str) -> u32 {
    form.chars().filter(|c| c.is_alphabetic()).count() as u32
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// Paths of all regular files below `dir`, sorted.
pub(crate) fn files_in(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).map_err(|e| Error::io(&d, e))? {
            let entry = entry.map_err(|e| Error::io(&d, e))?;
            let path = entry.path();
            let ty = entry.file_type().map_err(|e| Error::io(&path, e))?;
            if ty.is_dir() {
                stack.push(path);
            } else if ty.is_file() {
                out.push(path);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalization() {
        assert_eq!(normalize("Book,").as_deref(), Some("book"));
        assert_eq!(normalize("\"it's\"").as_deref(), Some("it's"));
        assert_eq!(normalize("well-known.").as_deref(), Some("well-known"));
        assert_eq!(normalize("..."), None);
        assert_eq!(normalize("[/]"), None);
    }

    #[test]
    fn char_length_examples() {
        assert_eq!(char_length("book"), 4);
        assert_eq!(char_length("it's"), 3);
        assert_eq!(char_length("well-known"), 9);
        assert_eq!(char_length("2nd"), 2);
        assert_eq!(char_length("42"), 0);
        assert_eq!(char_length("año"), 3);
    }

    // Independent oracle: the ASCII letter test, applied to forms drawn from a
    // mixed alphabet of ASCII letters, digits and separators.
    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn char_length_matches_manual_filter(form in "[a-zA-Z0-9'\\-]{1,20}") {
            let mut expected = 0u32;
            for b in form.bytes() {
                if let b'a'..=b'z' | b'A'..=b'Z' = b {
                    expected += 1;
                }
            }
            prop_assert_eq!(char_length(&form), expected);
        }
    }
}
