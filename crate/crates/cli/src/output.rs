//! Text, JSON and CSV renderings of series and maps.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use vsc_core::algebra::{format_rational, FormalMap, GradedSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Serialize)]
pub struct TermRow {
    pub series: String,
    pub q: String,
    pub monomial: String,
    pub coeff: String,
}

fn monomial(s: &GradedSeries, e: &[u16]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            let name = s.space().name(i);
            if k == 1 {
                name.to_string()
            } else {
                format!("{name}^{k}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" * ")
    }
}

pub fn rows(name: &str, s: &GradedSeries) -> Vec<TermRow> {
    s.terms()
        .map(|(q, e, c)| TermRow {
            series: name.to_string(),
            q: q.to_string(),
            monomial: monomial(s, e),
            coeff: format_rational(c),
        })
        .collect()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render_rows(rows: &[TermRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut out = String::from("series,q,monomial,coeff\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&r.series),
                    csv_field(&r.q),
                    csv_field(&r.monomial),
                    csv_field(&r.coeff)
                );
            }
            out
        }
        Format::Text => unreachable!("text output is rendered per series"),
    }
}

pub fn render_series(name: &str, s: &GradedSeries, format: Format) -> String {
    match format {
        Format::Text => s.to_text(),
        _ => render_rows(&rows(name, s), format),
    }
}

/// `t0 = ...`, `t1 = x1 + ...`, `t2 = ...` for a mirror map.
pub fn render_map(map: &FormalMap, format: Format) -> String {
    let dom = map.domain();
    let cod = map.codomain();
    let mut named: Vec<(String, String, &GradedSeries)> = (0..cod.len())
        .map(|i| (cod.name(i).to_string(), dom.name(i).to_string(), map.component(i)))
        .collect();
    let shift_from = named.first().map(|(_, x, _)| x.trim_end_matches(char::is_numeric).to_string());
    let shift_to = named.first().map(|(t, _, _)| t.trim_end_matches(char::is_numeric).to_string());
    let (t1, x1) = (
        format!("{}1", shift_to.unwrap_or_else(|| "t".into())),
        format!("{}1", shift_from.unwrap_or_else(|| "x".into())),
    );
    named.insert(1.min(named.len()), (t1.clone(), x1.clone(), map.shift()));
    match format {
        Format::Text => {
            let mut out = String::new();
            for (t, x, s) in &named {
                if *t == t1 {
                    let rest = s.pretty();
                    let _ = match rest.as_str() {
                        "0" => writeln!(out, "{t} = {x}"),
                        r if r.starts_with('-') => writeln!(out, "{t} = {x} - {}", &r[1..]),
                        r => writeln!(out, "{t} = {x} + {r}"),
                    };
                } else {
                    let _ = writeln!(out, "{t} = {}", s.pretty());
                }
            }
            out
        }
        _ => {
            let mut all = Vec::new();
            for (t, x, s) in &named {
                let label = if *t == t1 { format!("{t} - {x}") } else { t.clone() };
                all.extend(rows(&label, s));
            }
            render_rows(&all, format)
        }
    }
}
