use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::FreqSource;

/// Settings for a full run. Read from `key = value` lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub transcripts: Option<PathBuf>,
    pub polysemy: Option<PathBuf>,
    pub phonetics: Option<PathBuf>,
    /// SAMPA symbol table replacing the bundled one.
    pub symbols: Option<PathBuf>,
    pub ref_freq: Option<PathBuf>,
    pub role_map: Option<PathBuf>,
    pub language: String,
    pub sources: Vec<FreqSource>,
    pub lambdas: Vec<usize>,
    pub alpha: f64,
    /// Not part of the manifest, so the bundle does not depend on where it
    /// is written.
    #[serde(skip)]
    pub out: PathBuf,
    /// Seeds the synthetic corpus used when no inputs are configured.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            transcripts: None,
            polysemy: None,
            phonetics: None,
            symbols: None,
            ref_freq: None,
            role_map: None,
            language: "synthetic".to_string(),
            sources: FreqSource::ALL.to_vec(),
            lambdas: vec![100, 500],
            alpha: 0.05,
            out: PathBuf::from("lexlaw-out"),
            seed: 42,
        }
    }
}

fn parse_list<T>(value: &str, key: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    let items: Vec<T> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(f)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::Config(format!("`{key}` must list at least one value")));
    }
    Ok(items)
}

pub fn parse_lambdas(value: &str) -> Result<Vec<usize>> {
    parse_list(value, "lambdas", |s| {
        s.parse::<usize>()
            .map_err(|_| Error::Config(format!("bad bin width `{s}`")))
    })
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Relative paths are
    /// resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Config(format!("line {}: expected `key = value`", i + 1)));
            };
            let (key, value) = (key.trim(), value.trim());
            let path = || Some(base.join(value));
            match key {
                "transcripts" => cfg.transcripts = path(),
                "polysemy" => cfg.polysemy = path(),
                "phonetics" => cfg.phonetics = path(),
                "symbols" => cfg.symbols = path(),
                "ref_freq" => cfg.ref_freq = path(),
                "role_map" => cfg.role_map = path(),
                "language" => cfg.language = value.to_string(),
                "sources" => cfg.sources = parse_list(value, key, |s| s.parse())?,
                "lambdas" => cfg.lambdas = parse_lambdas(value)?,
                "alpha" => {
                    cfg.alpha = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad alpha `{value}`")))?
                }
                "out" => cfg.out = base.join(value),
                "seed" => {
                    cfg.seed = value
                        .parse()
                        .map_err(|_| Error::Config(format!("bad seed `{value}`")))?
                }
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", i + 1))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.lambdas.is_empty() || self.lambdas.contains(&0) {
            return Err(Error::Config("bin widths must be >= 1".into()));
        }
        if self.sources.is_empty() {
            return Err(Error::Config("no frequency sources selected".into()));
        }
        let given = [&self.phonetics, &self.symbols, &self.ref_freq, &self.role_map]
            .iter()
            .any(|p| p.is_some());
        if (self.transcripts.is_some() != self.polysemy.is_some()) || (given && self.transcripts.is_none()) {
            return Err(Error::Config(
                "set both `transcripts` and `polysemy` (or no inputs, for the synthetic corpus)".into(),
            ));
        }
        Ok(())
    }

    /// True when no inputs are configured and the synthetic corpus is used.
    pub fn is_synthetic(&self) -> bool {
        self.transcripts.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_keys() {
        let text = "# run\nlanguage = English\nlambdas = 100, 500,1000\nsources = childes\nalpha=0.01\ntranscripts = t\npolysemy = p.tsv # lexicon\nsymbols = sampa.tsv\nseed = 9\n";
        let c = RunConfig::parse(text, Path::new("/data")).unwrap();
        assert_eq!(c.language, "English");
        assert_eq!(c.lambdas, vec![100, 500, 1000]);
        assert_eq!(c.sources, vec![FreqSource::Childes]);
        assert_eq!(c.alpha, 0.01);
        assert_eq!(c.polysemy, Some(PathBuf::from("/data/p.tsv")));
        assert_eq!(c.symbols, Some(PathBuf::from("/data/sampa.tsv")));
        assert_eq!(c.seed, 9);
        assert!(!c.is_synthetic());
    }

    #[test]
    fn invalid_configs() {
        let base = Path::new(".");
        for text in [
            "alpha = 1.5",
            "alpha = 0",
            "lambdas = 0,100",
            "lambdas = ",
            "unknown = 3",
            "no equals sign",
            "transcripts = t",
            "phonetics = p",
            "symbols = s",
            "sources = wordnet",
        ] {
            assert!(RunConfig::parse(text, base).is_err(), "{text}");
        }
        assert!(RunConfig::parse("", base).unwrap().is_synthetic());
    }
}
