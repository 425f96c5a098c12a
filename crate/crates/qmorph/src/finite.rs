//! Finite groups from text, and fragmentation norm reports.
//!
//! ```text
//! # S5 from a transposition and a 5-cycle
//! perm 5
//! 21345
//! 23451
//! ```
//!
//! or a multiplication table on `0..n`, one row per line:
//!
//! ```text
//! table 2
//! 0 1
//! 1 0
//! ```
//!
//! Permutations are in 1-based one-line notation: concatenated digits when
//! the degree is below ten, otherwise separated by spaces, dots or commas.
//! Subgroup generators and elements use the same notation (indices for
//! tables); several are separated by `;`.

use std::collections::BTreeMap;

use qmorph_core::group::FiniteGroup;
use qmorph_core::norms::{fragmentation_table, Extended};
use qmorph_core::perm::{Permutation, PermutationGroup, TableGroup};
use serde_json::{json, Value};

use crate::context::SpecError;

pub enum FiniteSpec {
    Perm(PermutationGroup),
    Table(TableGroup),
}

pub fn parse_permutation(text: &str, degree: usize) -> Result<Permutation, SpecError> {
    let t = text.trim();
    let parts: Vec<&str> = t.split([' ', '.', ',']).filter(|s| !s.is_empty()).collect();
    let values: Vec<usize> = if parts.len() == 1 && degree < 10 && t.len() == degree {
        t.chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| SpecError::at(0, format!("'{t}' is not a permutation")))?
    } else {
        parts
            .iter()
            .map(|p| p.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| SpecError::at(0, format!("'{t}' is not a permutation")))?
    };
    if values.len() != degree {
        return Err(SpecError::at(0, format!("'{t}' has {} entries, expected {degree}", values.len())));
    }
    Permutation::from_one_line(&values).map_err(|e| SpecError::at(0, e.to_string()))
}

pub fn parse_finite(text: &str) -> Result<FiniteSpec, SpecError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| SpecError::at(0, "empty group file"))?;
    let bad = |line: usize, msg: String| SpecError::Parse {
        position: line,
        message: format!("line {line}: {msg}"),
    };
    let (kind, n) = header
        .split_once(char::is_whitespace)
        .ok_or_else(|| bad(hline, String::from("expected 'perm N' or 'table N'")))?;
    let n: usize = n.trim().parse().map_err(|_| bad(hline, format!("bad size '{n}'")))?;
    if n == 0 {
        return Err(bad(hline, String::from("size must be positive")));
    }
    match kind {
        "perm" => {
            let gens = lines
                .map(|(i, l)| parse_permutation(l, n).map_err(|e| bad(i, e.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            PermutationGroup::new(n, gens)
                .map(FiniteSpec::Perm)
                .map_err(|e| bad(hline, e.to_string()))
        }
        "table" => {
            let rows = lines
                .map(|(i, l)| {
                    l.split_whitespace()
                        .map(|v| v.parse::<usize>().map_err(|_| bad(i, format!("bad entry '{v}'"))))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            if rows.len() != n {
                return Err(bad(hline, format!("expected {n} rows, found {}", rows.len())));
            }
            TableGroup::new(rows)
                .map(FiniteSpec::Table)
                .map_err(|e| bad(hline, e.to_string()))
        }
        other => Err(bad(hline, format!("unknown group kind '{other}'"))),
    }
}

fn list<T>(text: &str, item: impl Fn(&str) -> Result<T, SpecError>) -> Result<Vec<T>, SpecError> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

fn report<G: FiniteGroup>(
    group: &G,
    subgroup: &[G::Elem],
    element: Option<&G::Elem>,
    fmt: impl Fn(&G::Elem) -> String,
) -> Value {
    let table = fragmentation_table(group, subgroup);
    let elements = group.elements();
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for e in &elements {
        *histogram.entry(table.norm(e).to_string()).or_default() += 1;
    }
    let mut out = json!({
        "order": elements.len(),
        "subgroup_generators": subgroup.iter().map(&fmt).collect::<Vec<_>>(),
        "subgroup_order": table.subgroup_order,
        "conjugates": table.generator_count,
        "max_finite_norm": table.max_finite(),
        "histogram": histogram,
    });
    if let Some(e) = element {
        let norm = table.norm(e);
        let witness: Vec<Value> = table
            .witness(e)
            .unwrap_or_default()
            .iter()
            .map(|(g, h)| json!({"g": fmt(g), "h": fmt(h)}))
            .collect();
        out["element"] = json!({
            "element": fmt(e),
            "norm": norm.to_string(),
            "finite": !matches!(norm, Extended::Infinite),
            "witness": witness,
        });
    }
    out
}

/// The fragmentation norm report for `--file`, `--subgroup` and optionally
/// `--element`.
pub fn fragmentation_report(spec: &FiniteSpec, subgroup: &str, element: Option<&str>) -> Result<Value, SpecError> {
    match spec {
        FiniteSpec::Perm(g) => {
            let n = g.degree();
            let h = list(subgroup, |s| parse_permutation(s, n))?;
            let e = element.map(|s| parse_permutation(s, n)).transpose()?;
            Ok(report(g, &h, e.as_ref(), Permutation::one_line))
        }
        FiniteSpec::Table(g) => {
            let idx = |s: &str| -> Result<usize, SpecError> {
                s.parse::<usize>()
                    .ok()
                    .filter(|&i| i < g.order())
                    .ok_or_else(|| SpecError::at(0, format!("'{s}' is not an element index")))
            };
            let h = list(subgroup, idx)?;
            let e = element.map(idx).transpose()?;
            Ok(report(g, &h, e.as_ref(), |i: &usize| i.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s5_transposition() {
        let spec = parse_finite("# S5\nperm 5\n21345\n23451\n").unwrap();
        let r = fragmentation_report(&spec, "21345", Some("23451")).unwrap();
        assert_eq!(r["order"], 120);
        assert_eq!(r["max_finite_norm"], 4);
        assert_eq!(r["element"]["norm"], "4");
        assert_eq!(r["element"]["witness"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn table_format() {
        let spec = parse_finite("table 3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        let r = fragmentation_report(&spec, "", Some("1")).unwrap();
        assert_eq!(r["element"]["norm"], "inf");
        assert!(parse_finite("table 2\n0 1\n0 1\n").is_err());
        assert!(parse_finite("").is_err());
        assert!(parse_finite("perm 3\n1234\n").is_err());
    }

    #[test]
    fn permutation_notation() {
        assert_eq!(parse_permutation("2 1 3", 3).unwrap(), parse_permutation("213", 3).unwrap());
        let p = parse_permutation("2.1.3.4.5.6.7.8.9.10", 10).unwrap();
        assert_eq!(p.one_line(), "2.1.3.4.5.6.7.8.9.10");
        assert!(parse_permutation("113", 3).is_err());
    }
}
