//! Domain types shared by every stage of the pipeline.
//!
//! All types are immutable once built. Constructors validate their
//! invariants, and deserialization goes through the same constructors, so a
//! value that exists is a valid value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speaker role. `Adult` aggregates every non-child speaker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Child,
    Adult,
}

impl Role {
    pub const ALL: [Role; 2] = [Role::Child, Role::Adult];

    pub fn label(self) -> &'static str {
        match self {
            Role::Child => "Children",
            Role::Adult => "Adults",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Child => "child",
            Role::Adult => "adult",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "child" | "children" | "chi" => Ok(Role::Child),
            "adult" | "adults" => Ok(Role::Adult),
            other => Err(Error::Config(format!("unknown role `{other}`"))),
        }
    }
}

/// Where a word's frequency comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreqSource {
    /// Token counts in the role-tagged transcripts.
    Childes,
    /// Counts from an external reference corpus.
    Reference,
}

impl FreqSource {
    pub const ALL: [FreqSource; 2] = [FreqSource::Childes, FreqSource::Reference];

    pub fn as_str(self) -> &'static str {
        match self {
            FreqSource::Childes => "childes",
            FreqSource::Reference => "reference",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FreqSource::Childes => "CHILDES",
            FreqSource::Reference => "Reference",
        }
    }
}

impl fmt::Display for FreqSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FreqSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "childes" => Ok(FreqSource::Childes),
            "reference" | "ref" | "wikipedia" => Ok(FreqSource::Reference),
            other => Err(Error::Config(format!("unknown frequency source `{other}`"))),
        }
    }
}

/// A per-word variable correlated against frequency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variable {
    Polysemy,
    Chars,
    Phonemes,
    Syllables,
}

impl Variable {
    pub const ALL: [Variable; 4] = [
        Variable::Polysemy,
        Variable::Chars,
        Variable::Phonemes,
        Variable::Syllables,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Variable::Polysemy => "polysemy",
            Variable::Chars => "chars",
            Variable::Phonemes => "phonemes",
            Variable::Syllables => "syllables",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Variable::Polysemy => "Polysemy",
            Variable::Chars => "Number of characters",
            Variable::Phonemes => "Number of phonemes",
            Variable::Syllables => "Number of syllables",
        }
    }

    pub fn is_length(self) -> bool {
        !matches!(self, Variable::Polysemy)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "polysemy" => Ok(Variable::Polysemy),
            "chars" | "characters" | "n_chars" => Ok(Variable::Chars),
            "phonemes" | "n_phonemes" => Ok(Variable::Phonemes),
            "syllables" | "n_syllables" => Ok(Variable::Syllables),
            other => Err(Error::Config(format!("unknown variable `{other}`"))),
        }
    }
}

/// One word form as produced by one role.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWordRecord", into = "RawWordRecord")]
pub struct WordRecord {
    form: String,
    role: Role,
    childes_freq: u64,
    reference_freq: Option<u64>,
    polysemy: Option<u32>,
    n_chars: u32,
    n_phonemes: Option<u32>,
    n_syllables: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawWordRecord {
    form: String,
    role: Role,
    childes_freq: u64,
    reference_freq: Option<u64>,
    polysemy: Option<u32>,
    n_chars: u32,
    n_phonemes: Option<u32>,
    n_syllables: Option<u32>,
}

impl TryFrom<RawWordRecord> for WordRecord {
    type Error = Error;

    fn try_from(raw: RawWordRecord) -> Result<Self> {
        WordRecordBuilder {
            form: raw.form,
            role: raw.role,
            childes_freq: raw.childes_freq,
            reference_freq: raw.reference_freq,
            polysemy: raw.polysemy,
            n_chars: raw.n_chars,
            n_phonemes: raw.n_phonemes,
            n_syllables: raw.n_syllables,
        }
        .build()
    }
}

impl From<WordRecord> for RawWordRecord {
    fn from(r: WordRecord) -> Self {
        RawWordRecord {
            form: r.form,
            role: r.role,
            childes_freq: r.childes_freq,
            reference_freq: r.reference_freq,
            polysemy: r.polysemy,
            n_chars: r.n_chars,
            n_phonemes: r.n_phonemes,
            n_syllables: r.n_syllables,
        }
    }
}

/// Field-by-field description of a record; `build` validates it.
#[derive(Debug, Clone)]
pub struct WordRecordBuilder {
    pub form: String,
    pub role: Role,
    pub childes_freq: u64,
    pub reference_freq: Option<u64>,
    pub polysemy: Option<u32>,
    pub n_chars: u32,
    pub n_phonemes: Option<u32>,
    pub n_syllables: Option<u32>,
}

impl WordRecordBuilder {
    pub fn build(self) -> Result<WordRecord> {
        let bad = |msg: &str| Err(Error::InvalidRecord(format!("{:?}: {msg}", self.form)));
        if self.form.is_empty() {
            return bad("empty form");
        }
        if self.form.chars().any(char::is_whitespace) {
            return bad("form contains whitespace");
        }
        if self.childes_freq == 0 {
            return bad("frequency must be >= 1");
        }
        if self.reference_freq == Some(0) {
            return bad("reference frequency must be >= 1");
        }
        if self.polysemy == Some(0) {
            return bad("polysemy must be >= 1");
        }
        if self.n_chars == 0 {
            return bad("character length must be >= 1");
        }
        if self.n_phonemes == Some(0) || self.n_syllables == Some(0) {
            return bad("phonetic lengths must be >= 1");
        }
        if let (Some(p), Some(s)) = (self.n_phonemes, self.n_syllables) {
            if s > p {
                return bad("more syllables than phonemes");
            }
        }
        Ok(WordRecord {
            form: self.form,
            role: self.role,
            childes_freq: self.childes_freq,
            reference_freq: self.reference_freq,
            polysemy: self.polysemy,
            n_chars: self.n_chars,
            n_phonemes: self.n_phonemes,
            n_syllables: self.n_syllables,
        })
    }
}

impl WordRecord {
    pub fn form(&self) -> &str {
        &self.form
    }
    pub fn role(&self) -> Role {
        self.role
    }
    pub fn childes_freq(&self) -> u64 {
        self.childes_freq
    }
    pub fn reference_freq(&self) -> Option<u64> {
        self.reference_freq
    }
    pub fn polysemy(&self) -> Option<u32> {
        self.polysemy
    }
    pub fn n_chars(&self) -> u32 {
        self.n_chars
    }
    pub fn n_phonemes(&self) -> Option<u32> {
        self.n_phonemes
    }
    pub fn n_syllables(&self) -> Option<u32> {
        self.n_syllables
    }

    pub fn frequency(&self, source: FreqSource) -> Option<u64> {
        match source {
            FreqSource::Childes => Some(self.childes_freq),
            FreqSource::Reference => self.reference_freq,
        }
    }

    pub fn variable(&self, var: Variable) -> Option<u32> {
        match var {
            Variable::Polysemy => self.polysemy,
            Variable::Chars => Some(self.n_chars),
            Variable::Phonemes => self.n_phonemes,
            Variable::Syllables => self.n_syllables,
        }
    }
}

/// Type and token coverage of the analyzed subset of one role.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoverage")]
pub struct CoverageStats {
    pub analyzed_types: u64,
    pub total_types: u64,
    pub analyzed_tokens: u64,
    pub total_tokens: u64,
    pub type_cover: f64,
    pub token_cover: f64,
}

#[derive(Deserialize)]
struct RawCoverage {
    analyzed_types: u64,
    total_types: u64,
    analyzed_tokens: u64,
    total_tokens: u64,
    type_cover: f64,
    token_cover: f64,
}

impl TryFrom<RawCoverage> for CoverageStats {
    type Error = Error;

    fn try_from(raw: RawCoverage) -> Result<Self> {
        let c = CoverageStats::new(
            raw.analyzed_types,
            raw.total_types,
            raw.analyzed_tokens,
            raw.total_tokens,
        )?;
        if c.type_cover != raw.type_cover || c.token_cover != raw.token_cover {
            return Err(Error::InvalidDataset("coverage fractions disagree with counts".into()));
        }
        Ok(c)
    }
}

impl CoverageStats {
    pub fn new(
        analyzed_types: u64,
        total_types: u64,
        analyzed_tokens: u64,
        total_tokens: u64,
    ) -> Result<Self> {
        if analyzed_types > total_types || analyzed_tokens > total_tokens {
            return Err(Error::InvalidDataset("analyzed count exceeds total".into()));
        }
        let frac = |a: u64, t: u64| if t == 0 { 0.0 } else { a as f64 / t as f64 };
        Ok(CoverageStats {
            analyzed_types,
            total_types,
            analyzed_tokens,
            total_tokens,
            type_cover: frac(analyzed_types, total_types),
            token_cover: frac(analyzed_tokens, total_tokens),
        })
    }
}

/// The analyzable word records of one language, with per-role coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDataset")]
pub struct Dataset {
    language: String,
    coverage: BTreeMap<Role, CoverageStats>,
    records: Vec<WordRecord>,
}

#[derive(Deserialize)]
struct RawDataset {
    language: String,
    coverage: BTreeMap<Role, CoverageStats>,
    records: Vec<WordRecord>,
}

impl TryFrom<RawDataset> for Dataset {
    type Error = Error;

    fn try_from(raw: RawDataset) -> Result<Self> {
        Dataset::new(raw.language, raw.records, raw.coverage)
    }
}

impl Dataset {
    /// Records are sorted by (role, form). Duplicate keys and records
    /// without polysemy are rejected.
    pub fn new(
        language: impl Into<String>,
        mut records: Vec<WordRecord>,
        coverage: BTreeMap<Role, CoverageStats>,
    ) -> Result<Self> {
        records.sort_by(|a, b| (a.role, &a.form).cmp(&(b.role, &b.form)));
        let mut seen = BTreeSet::new();
        for r in &records {
            if r.polysemy.is_none() {
                return Err(Error::InvalidDataset(format!(
                    "record {:?} ({}) has no polysemy",
                    r.form, r.role
                )));
            }
            if !seen.insert((r.role, r.form.as_str())) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate record {:?} ({})",
                    r.form, r.role
                )));
            }
        }
        Ok(Dataset {
            language: language.into(),
            coverage,
            records,
        })
    }

    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn records(&self) -> &[WordRecord] {
        &self.records
    }

    pub fn coverage(&self) -> &BTreeMap<Role, CoverageStats> {
        &self.coverage
    }

    pub fn role_records(&self, role: Role) -> impl Iterator<Item = &WordRecord> {
        self.records.iter().filter(move |r| r.role == role)
    }

    /// Pairwise-complete (frequency, variable) columns for one role.
    pub fn paired(&self, role: Role, source: FreqSource, var: Variable) -> (Vec<f64>, Vec<f64>) {
        self.role_records(role)
            .filter_map(|r| Some((r.frequency(source)? as f64, r.variable(var)? as f64)))
            .unzip()
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Correlation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    Pearson,
    Spearman,
    KendallA,
    KendallB,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pearson => "pearson",
            Method::Spearman => "spearman",
            Method::KendallA => "kendall-a",
            Method::KendallB => "kendall-b",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Method::Pearson => "Pearson",
            Method::Spearman => "Spearman",
            Method::KendallA | Method::KendallB => "Kendall",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pearson" => Ok(Method::Pearson),
            "spearman" => Ok(Method::Spearman),
            "kendall" | "kendall-b" | "kendallb" => Ok(Method::KendallB),
            "kendall-a" | "kendalla" => Ok(Method::KendallA),
            other => Err(Error::Config(format!("unknown method `{other}`"))),
        }
    }
}

/// Outcome of a two-sided correlation test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub method: Method,
    pub coefficient: f64,
    /// t for Pearson/Spearman, z for Kendall.
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
    /// Set on Kendall-A results, whose p-value is taken from the
    /// tie-corrected normal approximation of S = Nc - Nd.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub p_from_tie_corrected_s: bool,
}

impl CorrelationResult {
    pub(crate) fn new(method: Method, coefficient: f64, statistic: f64, p_value: f64, n: usize) -> Self {
        debug_assert!(n >= 3);
        CorrelationResult {
            method,
            coefficient: coefficient.clamp(-1.0, 1.0),
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            n,
            p_from_tie_corrected_s: false,
        }
    }

    pub fn is_significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}
