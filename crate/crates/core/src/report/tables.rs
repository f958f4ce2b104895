use serde::Serialize;

use super::format::{format_num, format_p};
use crate::error::Result;
use crate::lawfit::{FitMethod, FitResult};
use crate::model::{CorrelationResult, FreqSource, Method, Role, Variable};
use crate::stats::{BatteryCell, TiesRow};
use crate::steiger::{pair_label, Relation, SteigerCell, SteigerResult, LENGTH_PAIRS};

/// A table rendered as CSV (for people) and JSON (for programs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFiles {
    pub csv: Vec<u8>,
    pub json: Vec<u8>,
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush().map_err(|e| crate::Error::io("<csv>", e))?;
    w.into_inner().map_err(|e| crate::Error::io("<csv>", e.into_error()))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn star(significant: bool) -> &'static str {
    if significant {
        "*"
    } else {
        ""
    }
}

#[derive(Serialize)]
struct CorrelationRow<'a> {
    role: Role,
    source: FreqSource,
    variable: Variable,
    method: Method,
    n: usize,
    result: Option<&'a CorrelationResult>,
    significant: bool,
    note: Option<&'a str>,
}

/// Correlation cells with the coefficient starred when p < alpha.
pub fn correlation_table(cells: &[BatteryCell], alpha: f64) -> Result<TableFiles> {
    let header = ["variable", "role", "method", "coefficient", "p_value", "n"];
    let mut rows = Vec::new();
    let mut json = Vec::new();
    let mut ordered: Vec<&BatteryCell> = cells.iter().collect();
    ordered.sort_by_key(|c| (c.variable, c.role, c.method));
    for c in ordered {
        let sig = c.result.is_some_and(|r| r.is_significant(alpha));
        let (coef, p) = match &c.result {
            Some(r) => (format!("{}{}", format_num(Some(r.coefficient), 3), star(sig)), format_p(r.p_value)),
            None => ("NA".to_string(), "NA".to_string()),
        };
        rows.push(vec![
            c.variable.label().to_string(),
            c.role.label().to_string(),
            c.method.label().to_string(),
            coef,
            p,
            c.n.to_string(),
        ]);
        json.push(CorrelationRow {
            role: c.role,
            source: c.source,
            variable: c.variable,
            method: c.method,
            n: c.n,
            result: c.result.as_ref(),
            significant: sig,
            note: c.note.as_deref(),
        });
    }
    Ok(TableFiles {
        csv: csv_bytes(&header, &rows)?,
        json: json_bytes(&json)?,
    })
}

/// Percentage of tied pairs, one row per role and frequency source.
pub fn ties_table_files(rows: &[TiesRow]) -> Result<TableFiles> {
    let mut header = vec!["role", "source"];
    header.extend(Variable::ALL.iter().map(|v| v.as_str()));
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![r.role.label().to_string(), r.source.label().to_string()];
            row.extend(Variable::ALL.iter().map(|v| format_num(r.percent.get(v).copied().flatten(), 1)));
            row
        })
        .collect();
    Ok(TableFiles {
        csv: csv_bytes(&header, &csv_rows)?,
        json: json_bytes(&rows)?,
    })
}

#[derive(Serialize)]
struct SteigerRow<'a> {
    role: Role,
    source: FreqSource,
    method: Method,
    first: Variable,
    second: Variable,
    n: usize,
    test: Option<&'a SteigerResult>,
    relation: Option<&'static str>,
    note: Option<&'a str>,
}

/// t statistics and p-values of the Pearson and Spearman comparisons.
pub fn steiger_analytic_table(cells: &[SteigerCell]) -> Result<TableFiles> {
    let header = [
        "role", "source", "method", "comparison", "n", "r_first", "r_second", "r_between", "t", "p_value",
    ];
    let mut rows = Vec::new();
    let mut json = Vec::new();
    for c in cells.iter().filter(|c| c.kind != Method::KendallA && c.kind != Method::KendallB) {
        let t = c.test.as_ref();
        let sig = t.is_some_and(|t| t.relation.is_significant());
        rows.push(vec![
            c.role.label().to_string(),
            c.source.label().to_string(),
            c.kind.label().to_string(),
            pair_label((c.first, c.second)),
            c.n.to_string(),
            format_num(t.map(|t| t.r_fl1), 3),
            format_num(t.map(|t| t.r_fl2), 3),
            format_num(t.map(|t| t.r_l1l2), 3),
            t.map_or("NA".into(), |t| format!("{}{}", format_num(Some(t.t), 2), star(sig))),
            t.map_or("NA".into(), |t| format_p(t.p_value)),
        ]);
        json.push(SteigerRow {
            role: c.role,
            source: c.source,
            method: c.kind,
            first: c.first,
            second: c.second,
            n: c.n,
            test: t,
            relation: c.relation.map(Relation::symbol),
            note: c.note.as_deref(),
        });
    }
    Ok(TableFiles {
        csv: csv_bytes(&header, &rows)?,
        json: json_bytes(&json)?,
    })
}

/// Relation symbols (`>*`, `<*`, `>`, `<`) for every method, one column per
/// length pair.
pub fn steiger_symbol_table(cells: &[SteigerCell]) -> Result<TableFiles> {
    let labels: Vec<String> = LENGTH_PAIRS.iter().map(|&p| pair_label(p)).collect();
    let mut header = vec!["role", "source", "method"];
    header.extend(labels.iter().map(String::as_str));
    let mut rows = Vec::new();
    let mut json = Vec::new();
    for group in cells.chunks(LENGTH_PAIRS.len()) {
        let c0 = &group[0];
        let mut row = vec![
            c0.role.label().to_string(),
            c0.source.label().to_string(),
            c0.kind.label().to_string(),
        ];
        let mut symbols = std::collections::BTreeMap::new();
        for (c, label) in group.iter().zip(&labels) {
            let s = c.relation.map_or("NA", Relation::symbol);
            row.push(s.to_string());
            symbols.insert(label.clone(), s);
        }
        rows.push(row);
        json.push(serde_json::json!({
            "role": c0.role,
            "source": c0.source,
            "method": c0.kind,
            "relations": symbols,
        }));
    }
    Ok(TableFiles {
        csv: csv_bytes(&header, &rows)?,
        json: json_bytes(&json)?,
    })
}

/// One fitted row of a fits table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub role: Role,
    pub source: FreqSource,
    pub lambda: usize,
    pub method: FitMethod,
    pub fit: Option<FitResult>,
    pub note: Option<String>,
}

pub fn fit_table(rows: &[FitRow]) -> Result<TableFiles> {
    let header = [
        "role", "source", "lambda", "method", "N", "slope", "intercept", "prefactor", "r_squared",
    ];
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let f = r.fit.as_ref();
            vec![
                r.role.label().to_string(),
                r.source.label().to_string(),
                r.lambda.to_string(),
                r.method.label().to_string(),
                f.map_or("NA".into(), |f| f.n_points.to_string()),
                format_num(f.map(|f| f.exponent), 4),
                format_num(f.map(|f| f.intercept_log), 4),
                format_num(f.map(|f| f.prefactor), 4),
                format_num(f.map(|f| f.r_squared_loglog), 4),
            ]
        })
        .collect();
    Ok(TableFiles {
        csv: csv_bytes(&header, &csv_rows)?,
        json: json_bytes(&rows)?,
    })
}

/// Exponent of a frequency law fitted by log-log OLS on raw records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawRow {
    pub role: Role,
    pub source: FreqSource,
    /// `zipf_rank_frequency` or `meaning_frequency`.
    pub law: &'static str,
    pub fit: Option<FitResult>,
    pub note: Option<String>,
}

pub fn law_table(rows: &[LawRow]) -> Result<TableFiles> {
    let header = ["role", "source", "law", "n", "exponent", "intercept", "r_squared"];
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let f = r.fit.as_ref();
            vec![
                r.role.label().to_string(),
                r.source.label().to_string(),
                r.law.to_string(),
                f.map_or("NA".into(), |f| f.n_points.to_string()),
                format_num(f.map(|f| f.exponent), 4),
                format_num(f.map(|f| f.intercept_log), 4),
                format_num(f.map(|f| f.r_squared_loglog), 4),
            ]
        })
        .collect();
    Ok(TableFiles {
        csv: csv_bytes(&header, &csv_rows)?,
        json: json_bytes(&rows)?,
    })
}
