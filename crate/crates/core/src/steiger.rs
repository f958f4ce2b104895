//! Comparison of two dependent correlations that share the frequency
//! variable (Williams' T2 form of Steiger's test), and the relation tables
//! built from it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Dataset, FreqSource, Method, Role, Variable};
use crate::stats::dist::student_t_two_sided;
use crate::stats::{kendall, midranks, pearson, KendallVariant};

/// Tolerance below zero accepted for the correlation-matrix determinant.
const DET_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteigerStat {
    pub t: f64,
    pub p_value: f64,
    pub df: usize,
}

/// Tests r12 = r13 for correlations sharing variable 1, given r23 and n.
///
/// t = (r12 - r13) sqrt((n-1)(1+r23) / (2 (n-1)/(n-3) |R| + rbar^2 (1-r23)^3))
/// with n - 3 degrees of freedom.
pub fn steiger_test(r12: f64, r13: f64, r23: f64, n: usize) -> Result<SteigerStat> {
    if n < 4 {
        return Err(Error::TooFew { need: 4, got: n });
    }
    for r in [r12, r13, r23] {
        if !(-1.0..=1.0).contains(&r) {
            return Err(Error::CorrelationOutOfRange(r));
        }
    }
    let det = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23;
    if det < -DET_TOLERANCE {
        return Err(Error::NotPositiveSemidefinite { det });
    }
    let df = n - 3;
    if r12 == r13 {
        return Ok(SteigerStat {
            t: 0.0,
            p_value: 1.0,
            df,
        });
    }
    let nf = n as f64;
    let rbar = (r12 + r13) / 2.0;
    let denom = 2.0 * ((nf - 1.0) / (nf - 3.0)) * det.max(0.0) + rbar * rbar * (1.0 - r23).powi(3);
    let t = (r12 - r13) * ((nf - 1.0) * (1.0 + r23) / denom).sqrt();
    Ok(SteigerStat {
        t,
        p_value: student_t_two_sided(t, df as f64),
        df,
    })
}

/// Outcome of comparing |r(F, L1)| with |r(F, L2)|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    GtSig,
    LtSig,
    GtNs,
    LtNs,
}

impl Relation {
    pub fn new(first_stronger: bool, significant: bool) -> Relation {
        match (first_stronger, significant) {
            (true, true) => Relation::GtSig,
            (false, true) => Relation::LtSig,
            (true, false) => Relation::GtNs,
            (false, false) => Relation::LtNs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::GtSig => ">*",
            Relation::LtSig => "<*",
            Relation::GtNs => ">",
            Relation::LtNs => "<",
        }
    }

    pub fn is_significant(self) -> bool {
        matches!(self, Relation::GtSig | Relation::LtSig)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteigerResult {
    pub r_fl1: f64,
    pub r_fl2: f64,
    pub r_l1l2: f64,
    pub n: usize,
    pub t: f64,
    pub p_value: f64,
    pub relation: Relation,
}

/// The three length pairs, in table column order.
pub const LENGTH_PAIRS: [(Variable, Variable); 3] = [
    (Variable::Chars, Variable::Phonemes),
    (Variable::Phonemes, Variable::Syllables),
    (Variable::Chars, Variable::Syllables),
];

fn short_label(v: Variable) -> &'static str {
    match v {
        Variable::Chars => "Char.",
        Variable::Phonemes => "Phon.",
        Variable::Syllables => "Syllables",
        Variable::Polysemy => "Polysemy",
    }
}

pub fn pair_label(pair: (Variable, Variable)) -> String {
    format!("{} vs {}", short_label(pair.0), short_label(pair.1))
}

/// Columns (F, L1, L2) restricted to records valid on all three.
fn complete_triples(
    dataset: &Dataset,
    role: Role,
    source: FreqSource,
    l1: Variable,
    l2: Variable,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut f = Vec::new();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for r in dataset.role_records(role) {
        if let (Some(fr), Some(x), Some(y)) = (r.frequency(source), r.variable(l1), r.variable(l2)) {
            f.push(fr as f64);
            a.push(x as f64);
            b.push(y as f64);
        }
    }
    (f, a, b)
}

fn check_lengths(l1: Variable, l2: Variable) -> Result<()> {
    if !l1.is_length() || !l2.is_length() {
        return Err(Error::Config("Steiger comparisons take two length variables".into()));
    }
    if l1 == l2 {
        return Err(Error::SameLengthVariable);
    }
    Ok(())
}

/// Compares the correlation of frequency with two length measures on the
/// records valid on all three variables. Spearman uses mid-ranks of that
/// filtered set.
pub fn compare_lengths(
    dataset: &Dataset,
    role: Role,
    source: FreqSource,
    kind: Method,
    l1: Variable,
    l2: Variable,
    alpha: f64,
) -> Result<SteigerResult> {
    check_lengths(l1, l2)?;
    let (mut f, mut a, mut b) = complete_triples(dataset, role, source, l1, l2);
    match kind {
        Method::Pearson => {}
        Method::Spearman => {
            f = midranks(&f);
            a = midranks(&a);
            b = midranks(&b);
        }
        Method::KendallA | Method::KendallB => return Err(Error::KendallSteiger),
    }
    let n = f.len();
    if n < 4 {
        return Err(Error::TooFew { need: 4, got: n });
    }
    let r12 = pearson(&f, &a)?.coefficient;
    let r13 = pearson(&f, &b)?.coefficient;
    let r23 = pearson(&a, &b)?.coefficient;
    let stat = steiger_test(r12, r13, r23, n)?;
    Ok(SteigerResult {
        r_fl1: r12,
        r_fl2: r13,
        r_l1l2: r23,
        n,
        t: stat.t,
        p_value: stat.p_value,
        relation: Relation::new(r12.abs() > r13.abs(), stat.p_value < alpha),
    })
}

/// One cell of the relation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteigerCell {
    pub role: Role,
    pub source: FreqSource,
    pub kind: Method,
    pub first: Variable,
    pub second: Variable,
    pub n: usize,
    /// Present for Pearson and Spearman cells.
    pub test: Option<SteigerResult>,
    pub relation: Option<Relation>,
    pub note: Option<String>,
}

/// Relation table over roles x frequency sources x correlation kinds x
/// length pairs. Kendall cells compare |tau_b| on the filtered records and
/// are always reported as non-significant.
pub fn steiger_table(dataset: &Dataset, alpha: f64) -> Vec<SteigerCell> {
    let mut cells = Vec::new();
    for role in Role::ALL {
        for source in FreqSource::ALL {
            for kind in [Method::Pearson, Method::Spearman, Method::KendallB] {
                for (first, second) in LENGTH_PAIRS {
                    let (f, a, b) = complete_triples(dataset, role, source, first, second);
                    let n = f.len();
                    let outcome = if kind == Method::KendallB {
                        kendall_relation(&f, &a, &b).map(|rel| (None, rel))
                    } else {
                        compare_lengths(dataset, role, source, kind, first, second, alpha)
                            .map(|res| (Some(res), res.relation))
                    };
                    let (test, relation, note) = match outcome {
                        Ok((test, rel)) => (test, Some(rel), None),
                        Err(e) => (None, None, Some(format!("not computable: {e}"))),
                    };
                    cells.push(SteigerCell {
                        role,
                        source,
                        kind,
                        first,
                        second,
                        n,
                        test,
                        relation,
                        note,
                    });
                }
            }
        }
    }
    cells
}

fn kendall_relation(f: &[f64], a: &[f64], b: &[f64]) -> Result<Relation> {
    if f.len() < 4 {
        return Err(Error::TooFew { need: 4, got: f.len() });
    }
    let t1 = kendall(f, a, KendallVariant::B)?.coefficient;
    let t2 = kendall(f, b, KendallVariant::B)?.coefficient;
    Ok(Relation::new(t1.abs() > t2.abs(), false))
}
