use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lexlaw::ingest::{Parsed, Warning};
use lexlaw::report::{
    correlation_table, fit_rows, fit_table, ingest_files, parse_lambdas, render_scatter, run_all,
    steiger_analytic_table, steiger_symbol_table, ties_table_files, RunConfig, ScatterLabels, TableFiles,
};
use lexlaw::stats::{correlate_battery, ties_table, KendallVariant};
use lexlaw::steiger::steiger_table;
use lexlaw::synth::{generate, SynthParams};
use lexlaw::{Dataset, Error, FreqSource, Method, Result, Role, Variable};

#[derive(Parser)]
#[command(name = "lexlaw", version, about = "Frequency, meaning and length laws in child and adult speech")]
struct Cli {
    /// key = value run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for the synthetic corpus
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Only report errors
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Join transcripts and lexicons into a dataset JSON file
    Ingest {
        #[arg(long)]
        transcripts: PathBuf,
        #[arg(long)]
        polysemy: PathBuf,
        #[arg(long)]
        phonetics: Option<PathBuf>,
        /// SAMPA symbol table (`phone|mark<TAB>symbol` lines) replacing the bundled one
        #[arg(long)]
        symbols: Option<PathBuf>,
        #[arg(long)]
        ref_freq: Option<PathBuf>,
        #[arg(long)]
        role_map: Option<PathBuf>,
        #[arg(long, default_value = "unknown")]
        language: String,
    },
    /// Correlate frequency with polysemy and length
    Correlate {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "childes")]
        freq: FreqSource,
        /// pearson, spearman, kendall-a or kendall-b (default: pearson, spearman, kendall-b)
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Percentage of tied pairs per role and frequency source
    Ties {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Compare length measures with Steiger's test; the symbol table is
    /// written next to the output as <stem>_symbols.<ext>
    Steiger {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Fit the meaning distribution power law on binned ranks
    Lawfit {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value = "childes")]
        freq: FreqSource,
        #[arg(long, default_value = "adult")]
        role: Role,
        /// Comma-separated bin widths
        #[arg(long, default_value = "100,500")]
        bin: String,
    },
    /// Render frequency scatter plots as SVG
    Plot {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        freq: Option<FreqSource>,
        #[arg(long)]
        role: Option<Role>,
        #[arg(long)]
        variable: Option<Variable>,
    },
    /// Run the whole pipeline and write a report bundle
    All {
        /// Comma-separated bin widths
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Write the synthetic corpus to a directory
    Synth {
        #[arg(long)]
        types: Option<usize>,
    },
}

struct Ctx {
    config: RunConfig,
    out: Option<PathBuf>,
    quiet: bool,
}

impl Ctx {
    fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn warnings(&self, warnings: &[Warning]) {
        const SHOWN: usize = 20;
        for w in warnings.iter().take(SHOWN) {
            self.info(format!("warning: {w}"));
        }
        if warnings.len() > SHOWN {
            self.info(format!("warning: ... {} more", warnings.len() - SHOWN));
        }
    }

    fn alpha(&self, flag: Option<f64>) -> Result<f64> {
        let a = flag.unwrap_or(self.config.alpha);
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {a}")));
        }
        Ok(a)
    }

    fn out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| Error::Config("--out is required".into()))
    }

    fn write(&self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        std::fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
        self.info(format!("wrote {}", path.display()));
        Ok(())
    }

    /// Writes a table as JSON when the path ends in `.json`, else as CSV;
    /// without --out the CSV goes to stdout.
    fn emit_table(&self, table: &TableFiles) -> Result<()> {
        match &self.out {
            Some(p) => self.write(p, if is_json(p) { &table.json } else { &table.csv }),
            None => {
                print!("{}", String::from_utf8_lossy(&table.csv));
                Ok(())
            }
        }
    }
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn load(path: &Path) -> Result<Dataset> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Dataset::from_json(&text)
}

fn run(cli: Cli) -> Result<()> {
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let ctx = Ctx {
        config,
        out: cli.out,
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Ingest {
            transcripts,
            polysemy,
            phonetics,
            symbols,
            ref_freq,
            role_map,
            language,
        } => {
            let out = ctx.out()?.to_path_buf();
            let Parsed { value, warnings } = ingest_files(
                &language,
                &transcripts,
                &polysemy,
                phonetics.as_deref(),
                symbols.as_deref(),
                ref_freq.as_deref(),
                role_map.as_deref(),
            )?;
            ctx.warnings(&warnings);
            ctx.info(format!("{} records", value.records().len()));
            ctx.write(&out, value.to_json()?.as_bytes())
        }
        Command::Correlate {
            dataset,
            freq,
            method,
            alpha,
        } => {
            let alpha = ctx.alpha(alpha)?;
            let ds = load(&dataset)?;
            let variant = if method == Some(Method::KendallA) {
                KendallVariant::A
            } else {
                KendallVariant::B
            };
            let cells: Vec<_> = correlate_battery(&ds, freq, variant)?
                .into_iter()
                .filter(|c| method.is_none_or(|m| m == c.method))
                .collect();
            ctx.emit_table(&correlation_table(&cells, alpha)?)
        }
        Command::Ties { dataset } => {
            let ds = load(&dataset)?;
            let mut rows = Vec::new();
            for source in FreqSource::ALL {
                rows.extend(ties_table(&ds, source)?);
            }
            ctx.emit_table(&ties_table_files(&rows)?)
        }
        Command::Steiger { dataset, alpha } => {
            let alpha = ctx.alpha(alpha)?;
            let ds = load(&dataset)?;
            let cells = steiger_table(&ds, alpha);
            let analytic = steiger_analytic_table(&cells)?;
            let symbols = steiger_symbol_table(&cells)?;
            match &ctx.out {
                Some(p) => {
                    ctx.emit_table(&analytic)?;
                    let stem = p.file_stem().unwrap_or_default().to_string_lossy();
                    let ext = p.extension().map(|e| e.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
                    let sym = p.with_file_name(format!("{stem}_symbols.{ext}"));
                    ctx.write(&sym, if is_json(&sym) { &symbols.json } else { &symbols.csv })
                }
                None => {
                    ctx.emit_table(&analytic)?;
                    println!();
                    ctx.emit_table(&symbols)
                }
            }
        }
        Command::Lawfit {
            dataset,
            freq,
            role,
            bin,
        } => {
            let ds = load(&dataset)?;
            let mut rows = Vec::new();
            for lambda in parse_lambdas(&bin)? {
                if lambda == 0 {
                    return Err(Error::Config("bin widths must be >= 1".into()));
                }
                rows.extend(fit_rows(&ds, &[freq], lambda).into_iter().filter(|r| r.role == role));
            }
            ctx.emit_table(&fit_table(&rows)?)
        }
        Command::Plot {
            dataset,
            freq,
            role,
            variable,
        } => {
            let out = ctx.out()?.to_path_buf();
            let ds = load(&dataset)?;
            let mut jobs = Vec::new();
            for r in Role::ALL.into_iter().filter(|r| role.is_none_or(|x| x == *r)) {
                for s in FreqSource::ALL.into_iter().filter(|s| freq.is_none_or(|x| x == *s)) {
                    for v in Variable::ALL.into_iter().filter(|v| variable.is_none_or(|x| x == *v)) {
                        jobs.push((r, s, v));
                    }
                }
            }
            let single = out.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
            if single && jobs.len() != 1 {
                return Err(Error::Config(
                    "an .svg output needs --role, --freq and --variable to select one figure".into(),
                ));
            }
            for (r, s, v) in jobs {
                let (x, y) = ds.paired(r, s, v);
                let labels = ScatterLabels {
                    title: format!("{} ({}), {}", ds.language(), r.label(), s.label()),
                    x: format!("Frequency ({})", s.label()),
                    y: v.label().to_string(),
                };
                let fig = render_scatter(&x, &y, &labels)?;
                let path = if single {
                    out.clone()
                } else {
                    out.join(format!("{}_{}_{}.svg", r.as_str(), s.as_str(), v.as_str()))
                };
                ctx.write(&path, fig.svg.as_bytes())?;
            }
            Ok(())
        }
        Command::All { lambdas, alpha } => {
            let mut cfg = ctx.config.clone();
            if let Some(l) = lambdas {
                cfg.lambdas = parse_lambdas(&l)?;
            }
            if let Some(a) = alpha {
                cfg.alpha = a;
            }
            if let Some(o) = &ctx.out {
                cfg.out = o.clone();
            }
            cfg.validate()?;
            if cfg.is_synthetic() {
                ctx.info(format!("no inputs configured; using the synthetic corpus (seed {})", cfg.seed));
            }
            let summary = run_all(&cfg)?;
            ctx.info(format!(
                "wrote {} files to {} ({} ingest warnings)",
                summary.files.len(),
                summary.out.display(),
                summary.warnings
            ));
            Ok(())
        }
        Command::Synth { types } => {
            let out = ctx.out()?.to_path_buf();
            let mut params = SynthParams::new(ctx.config.seed);
            if let Some(t) = types {
                params.types = t;
                params.child_types = params.child_types.min(t.max(1) * 2 / 5).max(1);
            }
            generate(&params)?.write_to(&out)?;
            ctx.info(format!("wrote synthetic corpus to {}", out.display()));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
