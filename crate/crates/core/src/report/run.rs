use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::svg::{render_scatter, ScatterLabels};
use super::tables::{
    correlation_table, fit_table, law_table, steiger_analytic_table, steiger_symbol_table, ties_table_files, FitRow,
    LawRow, TableFiles,
};
use crate::error::{Error, Result};
use crate::ingest::{
    join_dataset, load_phonetic_lexicon, load_polysemy_lexicon, load_reference_frequencies, parse_transcript_dir,
    parse_transcripts, FrequencyTables, LexiconInputs, Parsed, RoleMap, SymbolTable, Warning,
};
use crate::lawfit::{fit_meaning_distribution, fit_meaning_frequency, fit_zipf_rank_frequency, rank_by_frequency, FitMethod};
use crate::model::{Dataset, FreqSource, Method, Role, Variable};
use crate::stats::{correlate_battery, ties_table, KendallVariant};
use crate::steiger::steiger_table;
use crate::synth::{generate, SynthCorpus, SynthParams};

const MANIFEST: &str = "manifest.json";

fn open(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?))
}

fn name(path: &Path) -> String {
    path.display().to_string()
}

/// Builds a dataset from files on disk. `transcripts` may be one file or a
/// directory; the phonetic and reference lexicons are optional.
pub fn ingest_files(
    language: &str,
    transcripts: &Path,
    polysemy: &Path,
    phonetics: Option<&Path>,
    symbols: Option<&Path>,
    ref_freq: Option<&Path>,
    role_map: Option<&Path>,
) -> Result<Parsed<Dataset>> {
    let roles = match role_map {
        Some(p) => RoleMap::load(p)?,
        None => RoleMap::default(),
    };
    let mut warnings = Vec::new();
    let freqs = if transcripts.is_dir() {
        parse_transcript_dir(transcripts, &roles)?
    } else {
        parse_transcripts(open(transcripts)?, &name(transcripts), &roles)?
    };
    warnings.extend(freqs.warnings);
    let mut lex = LexiconInputs::default();
    let poly = load_polysemy_lexicon(open(polysemy)?, &name(polysemy))?;
    warnings.extend(poly.warnings);
    lex.polysemy = poly.value;
    if let Some(p) = phonetics {
        let table = match symbols {
            Some(s) => SymbolTable::parse(&std::fs::read_to_string(s).map_err(|e| Error::io(s, e))?)?,
            None => SymbolTable::default(),
        };
        let ph = load_phonetic_lexicon(open(p)?, &name(p), &table)?;
        warnings.extend(ph.warnings);
        lex.phonetics = ph.value;
    }
    if let Some(p) = ref_freq {
        let rf = load_reference_frequencies(open(p)?, &name(p))?;
        warnings.extend(rf.warnings);
        lex.reference = rf.value;
    }
    finish(language, &freqs.value, &lex, warnings)
}

/// Builds a dataset from an in-memory synthetic corpus.
pub fn ingest_corpus(language: &str, corpus: &SynthCorpus) -> Result<Parsed<Dataset>> {
    let roles = RoleMap::parse(&corpus.role_map)?;
    let mut warnings = Vec::new();
    let mut freqs = FrequencyTables::default();
    for (file, text) in &corpus.transcripts {
        let parsed = parse_transcripts(text.as_bytes(), file, &roles)?;
        freqs.merge(parsed.value);
        warnings.extend(parsed.warnings);
    }
    let poly = load_polysemy_lexicon(corpus.polysemy.as_bytes(), "polysemy.tsv")?;
    let ph = load_phonetic_lexicon(corpus.phonetics.as_bytes(), "phonetics.tsv", &SymbolTable::default())?;
    let rf = load_reference_frequencies(corpus.reference.as_bytes(), "ref_freq.txt")?;
    warnings.extend(poly.warnings);
    warnings.extend(ph.warnings);
    warnings.extend(rf.warnings);
    let lex = LexiconInputs {
        polysemy: poly.value,
        phonetics: ph.value,
        reference: rf.value,
    };
    finish(language, &freqs, &lex, warnings)
}

fn finish(language: &str, freqs: &FrequencyTables, lex: &LexiconInputs, mut warnings: Vec<Warning>) -> Result<Parsed<Dataset>> {
    let joined = join_dataset(language, freqs, lex)?;
    warnings.extend(joined.warnings);
    Ok(Parsed {
        value: joined.value,
        warnings,
    })
}

/// Loads the configured inputs, or generates the synthetic corpus from the
/// seed when none are configured.
pub fn load_dataset(cfg: &RunConfig) -> Result<Parsed<Dataset>> {
    match (&cfg.transcripts, &cfg.polysemy) {
        (Some(t), Some(p)) => ingest_files(
            &cfg.language,
            t,
            p,
            cfg.phonetics.as_deref(),
            cfg.symbols.as_deref(),
            cfg.ref_freq.as_deref(),
            cfg.role_map.as_deref(),
        ),
        _ => ingest_corpus(&cfg.language, &generate(&SynthParams::new(cfg.seed))?),
    }
}

/// Report files keyed by bundle-relative path.
pub type Bundle = BTreeMap<String, Vec<u8>>;

fn insert_table(bundle: &mut Bundle, stem: &str, t: TableFiles) {
    bundle.insert(format!("{stem}.csv"), t.csv);
    bundle.insert(format!("{stem}.json"), t.json);
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn correlation_stage(cfg: &RunConfig, ds: &Dataset, bundle: &mut Bundle) -> Result<()> {
    for &source in &cfg.sources {
        let cells = correlate_battery(ds, source, KendallVariant::B)?;
        for method in [Method::Pearson, Method::Spearman, Method::KendallB] {
            let subset: Vec<_> = cells.iter().filter(|c| c.method == method).cloned().collect();
            let stem = format!("correlations/{}_{}", source.as_str(), method.as_str());
            insert_table(bundle, &stem, correlation_table(&subset, cfg.alpha)?);
        }
    }
    Ok(())
}

fn ties_stage(cfg: &RunConfig, ds: &Dataset, bundle: &mut Bundle) -> Result<()> {
    let mut rows = Vec::new();
    for &source in &cfg.sources {
        rows.extend(ties_table(ds, source)?);
    }
    rows.sort_by_key(|r| (r.role, r.source));
    insert_table(bundle, "ties", ties_table_files(&rows)?);
    Ok(())
}

fn steiger_stage(cfg: &RunConfig, ds: &Dataset, bundle: &mut Bundle) -> Result<()> {
    let cells: Vec<_> = steiger_table(ds, cfg.alpha)
        .into_iter()
        .filter(|c| cfg.sources.contains(&c.source))
        .collect();
    insert_table(bundle, "steiger_analytic", steiger_analytic_table(&cells)?);
    insert_table(bundle, "steiger_symbols", steiger_symbol_table(&cells)?);
    Ok(())
}

fn note(e: &Error) -> Option<String> {
    Some(format!("not computable: {e}"))
}

/// Meaning-distribution fits for one bin width.
pub fn fit_rows(ds: &Dataset, sources: &[FreqSource], lambda: usize) -> Vec<FitRow> {
    let mut rows = Vec::new();
    for role in Role::ALL {
        for &source in sources {
            for method in FitMethod::ALL {
                let (fit, note) = match fit_meaning_distribution(ds, role, source, lambda, method) {
                    Ok(f) => (Some(f), None),
                    Err(e) => (None, note(&e)),
                };
                rows.push(FitRow {
                    role,
                    source,
                    lambda,
                    method,
                    fit,
                    note,
                });
            }
        }
    }
    rows
}

fn law_rows(ds: &Dataset, sources: &[FreqSource]) -> Vec<LawRow> {
    let mut rows = Vec::new();
    for role in Role::ALL {
        for &source in sources {
            let freqs: Vec<(&str, u64)> = ds
                .role_records(role)
                .filter_map(|r| Some((r.form(), r.frequency(source)?)))
                .collect();
            let zipf = rank_by_frequency(freqs).and_then(|r| fit_zipf_rank_frequency(&r));
            let meaning = fit_meaning_frequency(ds, role, source);
            for (law, outcome) in [("zipf_rank_frequency", zipf), ("meaning_frequency", meaning)] {
                let (fit, note) = match outcome {
                    Ok(f) => (Some(f), None),
                    Err(e) => (None, note(&e)),
                };
                rows.push(LawRow {
                    role,
                    source,
                    law,
                    fit,
                    note,
                });
            }
        }
    }
    rows
}

fn lawfit_stage(cfg: &RunConfig, ds: &Dataset, bundle: &mut Bundle) -> Result<()> {
    let mut lambdas = cfg.lambdas.clone();
    lambdas.sort_unstable();
    lambdas.dedup();
    for lambda in lambdas {
        let rows = fit_rows(ds, &cfg.sources, lambda);
        insert_table(bundle, &format!("fits_lambda{lambda}"), fit_table(&rows)?);
    }
    insert_table(bundle, "laws", law_table(&law_rows(ds, &cfg.sources))?);
    Ok(())
}

#[derive(Serialize)]
struct FigureEntry {
    file: String,
    role: Role,
    source: FreqSource,
    variable: Variable,
    points: usize,
    dropped: usize,
    note: Option<String>,
}

/// Renders every (role, source, variable) scatter figure; figures are
/// independent, so they are rendered on separate threads.
fn plot_stage(cfg: &RunConfig, ds: &Dataset, bundle: &mut Bundle) -> Result<()> {
    let mut jobs = Vec::new();
    for role in Role::ALL {
        for &source in &cfg.sources {
            for variable in Variable::ALL {
                jobs.push((role, source, variable));
            }
        }
    }
    let rendered: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(role, source, variable)| {
                s.spawn(move || {
                    let (x, y) = ds.paired(role, source, variable);
                    let labels = ScatterLabels {
                        title: format!("{} ({}), {}", ds.language(), role.label(), source.label()),
                        x: format!("Frequency ({})", source.label()),
                        y: variable.label().to_string(),
                    };
                    render_scatter(&x, &y, &labels)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("figure thread panicked")).collect()
    });
    let mut index = Vec::new();
    for ((role, source, variable), outcome) in jobs.into_iter().zip(rendered) {
        let file = format!("figures/{}_{}_{}.svg", role.as_str(), source.as_str(), variable.as_str());
        let entry = match outcome {
            Ok(fig) => {
                bundle.insert(file.clone(), fig.svg.into_bytes());
                FigureEntry {
                    file,
                    role,
                    source,
                    variable,
                    points: fig.points,
                    dropped: fig.dropped,
                    note: None,
                }
            }
            Err(e) => FigureEntry {
                file,
                role,
                source,
                variable,
                points: 0,
                dropped: 0,
                note: note(&e),
            },
        };
        index.push(entry);
    }
    bundle.insert("figures/index.json".to_string(), json(&index)?);
    Ok(())
}

/// One manifest line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    generator: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    files: &'a [ManifestEntry],
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Computes every report file in memory.
pub fn build_bundle(cfg: &RunConfig, dataset: &Parsed<Dataset>) -> Result<Bundle> {
    cfg.validate()?;
    let ds = &dataset.value;
    let mut bundle = Bundle::new();
    bundle.insert("dataset.json".to_string(), ds.to_json()?.into_bytes());
    bundle.insert("ingest_warnings.json".to_string(), json(&dataset.warnings)?);
    correlation_stage(cfg, ds, &mut bundle).map_err(|e| e.in_stage("correlate"))?;
    ties_stage(cfg, ds, &mut bundle).map_err(|e| e.in_stage("ties"))?;
    steiger_stage(cfg, ds, &mut bundle).map_err(|e| e.in_stage("steiger"))?;
    lawfit_stage(cfg, ds, &mut bundle).map_err(|e| e.in_stage("lawfit"))?;
    plot_stage(cfg, ds, &mut bundle).map_err(|e| e.in_stage("plot"))?;
    let files: Vec<ManifestEntry> = bundle
        .iter()
        .map(|(path, bytes)| ManifestEntry {
            path: path.clone(),
            bytes: bytes.len(),
            sha256: sha256_hex(bytes),
        })
        .collect();
    let manifest = Manifest {
        generator: "lexlaw",
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
        files: &files,
    };
    bundle.insert(MANIFEST.to_string(), json(&manifest)?);
    Ok(bundle)
}

/// Writes a bundle to `out` atomically: files are staged in a sibling
/// temporary directory that is renamed into place. An existing `out` is
/// only replaced if it is empty or holds a previous bundle (has a manifest).
pub fn write_bundle(out: &Path, bundle: &Bundle) -> Result<()> {
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&parent).map_err(|e| Error::io(&parent, e))?;
    let empty_dir = std::fs::read_dir(out).is_ok_and(|mut d| d.next().is_none());
    if out.exists() && !empty_dir && !out.join(MANIFEST).is_file() {
        return Err(Error::Config(format!(
            "refusing to replace {}: it is not a lexlaw output directory",
            out.display()
        )));
    }
    let staging = tempfile::Builder::new()
        .prefix(".lexlaw-staging-")
        .tempdir_in(&parent)
        .map_err(|e| Error::io(&parent, e))?;
    for (rel, bytes) in bundle {
        let path = staging.path().join(rel);
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    if out.exists() {
        std::fs::remove_dir_all(out).map_err(|e| Error::io(out, e))?;
    }
    let staged = staging.keep();
    std::fs::rename(&staged, out).map_err(|e| {
        let _ = std::fs::remove_dir_all(&staged);
        Error::io(out, e)
    })
}

/// Summary of a completed run.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub out: PathBuf,
    pub files: Vec<String>,
    pub warnings: usize,
}

/// Ingests, analyzes and writes the full report bundle to `cfg.out`.
pub fn run_all(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let dataset = load_dataset(cfg).map_err(|e| e.in_stage("ingest"))?;
    let bundle = build_bundle(cfg, &dataset)?;
    write_bundle(&cfg.out, &bundle).map_err(|e| e.in_stage("write"))?;
    Ok(RunSummary {
        out: cfg.out.clone(),
        files: bundle.keys().cloned().collect(),
        warnings: dataset.warnings.len(),
    })
}
