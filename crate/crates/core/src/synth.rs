//! Deterministic synthetic corpus with planted frequency laws.
//!
//! Adult frequencies follow Zipf's law (f ~ 1/rank), the number of meanings
//! grows as f^0.5 with log-normal noise, and word length in syllables
//! grows with log rank, so all three length measures fall with frequency.
//! Child speech uses the most frequent part of the adult vocabulary with a
//! jittered ranking.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

const ONSETS: [(&str, &str); 17] = [
    ("b", "b"),
    ("d", "d"),
    ("g", "g"),
    ("k", "k"),
    ("l", "l"),
    ("m", "m"),
    ("n", "n"),
    ("p", "p"),
    ("r", "r"),
    ("s", "s"),
    ("t", "t"),
    ("v", "v"),
    ("z", "z"),
    ("ch", "tS"),
    ("sh", "S"),
    ("th", "T"),
    ("", ""),
];
const VOWELS: [(&str, &str); 9] = [
    ("a", "{"),
    ("e", "e"),
    ("i", "I"),
    ("o", "Q"),
    ("u", "V"),
    ("ee", "i:"),
    ("oo", "u:"),
    ("ai", "eI"),
    ("ou", "aU"),
];
const CODAS: [(&str, &str); 7] = [("", ""), ("n", "n"), ("t", "t"), ("k", "k"), ("s", "s"), ("m", "m"), ("ng", "N")];

const TRANSCRIPT_FILES: usize = 8;

/// Generation parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub seed: u64,
    /// Adult vocabulary size.
    pub types: usize,
    /// Child vocabulary size (a subset of the adult one).
    pub child_types: usize,
    /// Planted meaning-frequency exponent.
    pub delta: f64,
}

impl SynthParams {
    pub fn new(seed: u64) -> SynthParams {
        SynthParams {
            seed,
            types: 20_000,
            child_types: 8_000,
            delta: 0.5,
        }
    }
}

/// Corpus files as text, keyed by their conventional file names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthCorpus {
    /// (file name, CHAT-style content)
    pub transcripts: Vec<(String, String)>,
    pub polysemy: String,
    pub phonetics: String,
    pub reference: String,
    pub role_map: String,
}

impl SynthCorpus {
    /// Writes `transcripts/*.cha`, `polysemy.tsv`, `phonetics.tsv`,
    /// `ref_freq.txt` and `role_map.tsv` below `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        let tdir = dir.join("transcripts");
        std::fs::create_dir_all(&tdir).map_err(|e| Error::io(&tdir, e))?;
        for (name, text) in &self.transcripts {
            let p = tdir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        }
        for (name, text) in [
            ("polysemy.tsv", &self.polysemy),
            ("phonetics.tsv", &self.phonetics),
            ("ref_freq.txt", &self.reference),
            ("role_map.tsv", &self.role_map),
        ] {
            let p = dir.join(name);
            std::fs::write(&p, text).map_err(|e| Error::io(&p, e))?;
        }
        Ok(())
    }
}

struct Word {
    form: String,
    sampa: String,
}

fn make_word(rng: &mut ChaCha8Rng, syllables: usize) -> Word {
    let mut form = String::new();
    let mut parts = Vec::with_capacity(syllables);
    for _ in 0..syllables {
        let (o, so) = ONSETS[rng.random_range(0..ONSETS.len())];
        let (v, sv) = VOWELS[rng.random_range(0..VOWELS.len())];
        let (c, sc) = CODAS[rng.random_range(0..CODAS.len())];
        form.push_str(o);
        form.push_str(v);
        form.push_str(c);
        parts.push(format!("{so}{sv}{sc}"));
    }
    Word {
        form,
        sampa: parts.join("-"),
    }
}

fn normal(mean: f64, sd: f64) -> Normal<f64> {
    Normal::new(mean, sd).expect("finite parameters")
}

/// Builds the corpus. Identical parameters give identical text.
pub fn generate(params: &SynthParams) -> Result<SynthCorpus> {
    if params.types < 10 || params.child_types == 0 || params.child_types > params.types {
        return Err(Error::Config("synthetic corpus needs types >= 10 and 0 < child_types <= types".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let noise = normal(0.0, 1.0);

    // Vocabulary in adult rank order; shorter words at higher ranks.
    let mut seen = BTreeSet::new();
    let mut words = Vec::with_capacity(params.types);
    for rank in 1..=params.types {
        let mean = 0.6 + 0.55 * (rank as f64).log10();
        let mut syl = (mean + 0.6 * noise.sample(&mut rng)).round().clamp(1.0, 6.0) as usize;
        let mut tries = 0;
        let word = loop {
            let w = make_word(&mut rng, syl);
            if !w.form.is_empty() && seen.insert(w.form.clone()) {
                break w;
            }
            tries += 1;
            if tries % 20 == 0 {
                syl += 1;
            }
        };
        words.push(word);
    }

    let adult_scale = params.types as f64;
    let adult: Vec<u64> = (1..=params.types)
        .map(|r| ((adult_scale / r as f64) * (0.1 * noise.sample(&mut rng)).exp()).round().max(1.0) as u64)
        .collect();

    let mut child_order: Vec<(f64, usize)> = (0..params.child_types)
        .map(|i| (((i + 1) as f64).ln() + 0.5 * noise.sample(&mut rng), i))
        .collect();
    child_order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let child_scale = params.child_types as f64;
    let mut child = vec![0u64; params.types];
    for (rho, &(_, i)) in child_order.iter().enumerate() {
        child[i] = (child_scale / (rho + 1) as f64).round().max(1.0) as u64;
    }

    let mut polysemy = String::new();
    let mut phonetics = String::new();
    let mut reference = String::new();
    for (i, w) in words.iter().enumerate() {
        let f = adult[i] as f64;
        if rng.random_bool(0.92) {
            let m = (0.35 * f.powf(params.delta) * (0.3 * noise.sample(&mut rng)).exp()).round().max(1.0);
            writeln!(polysemy, "{}\t{}", w.form, m as u64).unwrap();
        }
        if rng.random_bool(0.85) {
            writeln!(phonetics, "{}\t{}", w.form, w.sampa).unwrap();
        }
        if rng.random_bool(0.9) {
            let r = (50.0 * f * (0.5 * noise.sample(&mut rng)).exp()).round().max(1.0);
            writeln!(reference, "{} {}", w.form, r as u64).unwrap();
        }
    }

    let mut transcripts: Vec<String> = (0..TRANSCRIPT_FILES)
        .map(|k| format!("@Begin\n@Languages:\teng\n@Participants:\tCHI Target_Child, MOT Mother, FAT Father\n@Comment:\tsynthetic session {}\n", k + 1))
        .collect();
    for (speakers, counts) in [(&["CHI"][..], &child), (&["MOT", "FAT"][..], &adult)] {
        let mut tokens: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c as usize))
            .collect();
        tokens.shuffle(&mut rng);
        let mut pos = 0;
        let mut utterance = 0;
        while pos < tokens.len() {
            let len = rng.random_range(3..=8).min(tokens.len() - pos);
            let speaker = speakers[utterance % speakers.len()];
            let text = &mut transcripts[utterance % TRANSCRIPT_FILES];
            write!(text, "*{speaker}:\t").unwrap();
            for (j, &t) in tokens[pos..pos + len].iter().enumerate() {
                let form = &words[t].form;
                if j == 0 {
                    let mut cs = form.chars();
                    let first = cs.next().map(|c| c.to_ascii_uppercase()).unwrap_or_default();
                    write!(text, "{first}{} ", cs.as_str()).unwrap();
                } else {
                    write!(text, "{form} ").unwrap();
                }
            }
            text.push_str(if utterance % 5 == 0 { "?\n" } else { ".\n" });
            if utterance % 7 == 0 {
                text.push_str("%com:\tsynthetic comment line\n");
            }
            pos += len;
            utterance += 1;
        }
    }
    let transcripts = transcripts
        .into_iter()
        .enumerate()
        .map(|(k, mut text)| {
            text.push_str("@End\n");
            (format!("session{:02}.cha", k + 1), text)
        })
        .collect();

    Ok(SynthCorpus {
        transcripts,
        polysemy,
        phonetics,
        reference,
        role_map: "# speaker code, role\nCHI\tchild\nMOT\tadult\nFAT\tadult\n".to_string(),
    })
}
