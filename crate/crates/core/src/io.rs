//! JSON encoding (schema `bimono/1`) and plain-text tables.
//!
//! Rationals are strings such as `"7455/2"`; on input, JSON integers are
//! accepted too. Every top-level document carries `"schema": "bimono/1"`
//! on output; input documents may omit it but must not name another schema.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::cumulants::CumulantTable;
use crate::distributions::{Atom, AtomicPlanarMeasure, GridDistribution, WordDistribution};
use crate::error::{Error, Result};
use crate::partitions::{word_to_string, Side};
use crate::rational::{format_rational, parse_rational, Q};
use crate::series::{TruncatedSeries1, TruncatedSeries2};
use crate::type2::{LocalOperator, PointedSpace};

pub const SCHEMA: &str = "bimono/1";

/// Wraps `fields` in an object tagged with the schema and `kind`.
pub fn document(kind: &str, fields: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("kind".into(), json!(kind));
    if let Value::Object(m) = fields {
        out.extend(m);
    }
    Value::Object(out)
}

pub fn error_document(e: &Error) -> Value {
    json!({
        "schema": SCHEMA,
        "error": { "kind": e.kind(), "message": e.to_string() },
    })
}

pub fn rational_json(x: &Q) -> Value {
    Value::String(format_rational(x))
}

pub fn rational_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        _ => Err(Error::invalid(format!("expected a rational string, got {v}"))),
    }
}

pub fn vector_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(rational_json).collect())
}

pub fn matrix_json(rows: &[Vec<Q>]) -> Value {
    Value::Array(rows.iter().map(|r| vector_json(r)).collect())
}

pub fn matrix_from_json(v: &Value) -> Result<Vec<Vec<Q>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::invalid("expected an array of rows"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::invalid("expected a row array"))?
                .iter()
                .map(rational_from_json)
                .collect()
        })
        .collect()
}

fn check_schema(v: &Value) -> Result<()> {
    match v.get("schema") {
        None => Ok(()),
        Some(Value::String(s)) if s == SCHEMA => Ok(()),
        Some(other) => Err(Error::invalid(format!("unsupported schema {other}"))),
    }
}

fn word_map_json(entries: impl IntoIterator<Item = (String, Q)>) -> Value {
    // Length-then-lexicographic order keeps short words first.
    let mut entries: Vec<(String, Q)> = entries.into_iter().collect();
    entries.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k, rational_json(&v));
    }
    Value::Object(m)
}

fn word_map_from_json(v: &Value) -> Result<BTreeMap<String, Q>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::invalid("expected an object keyed by L/R words"))?;
    obj.iter()
        .map(|(k, v)| Ok((k.clone(), rational_from_json(v)?)))
        .collect()
}

/// A moment table in either representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distribution {
    Word(WordDistribution),
    Grid(GridDistribution),
}

pub fn word_distribution_json(d: &WordDistribution) -> Value {
    document(
        "word-moments",
        json!({
            "max_len": d.max_len(),
            "moments": word_map_json(d.iter().map(|(w, m)| (word_to_string(&w), m.clone()))),
        }),
    )
}

pub fn grid_distribution_json(g: &GridDistribution) -> Value {
    document(
        "grid-moments",
        json!({ "order": g.order(), "moments": matrix_json(g.rows()) }),
    )
}

pub fn distribution_json(d: &Distribution) -> Value {
    match d {
        Distribution::Word(w) => word_distribution_json(w),
        Distribution::Grid(g) => grid_distribution_json(g),
    }
}

/// Accepts a `word-moments` or `grid-moments` document, a bare object keyed
/// by words, or a bare nested array (grid).
pub fn distribution_from_json(v: &Value) -> Result<Distribution> {
    check_schema(v)?;
    let body = v.get("moments").unwrap_or(v);
    match body {
        Value::Array(_) => Ok(Distribution::Grid(GridDistribution::new(matrix_from_json(
            body,
        )?)?)),
        Value::Object(_) => {
            let map = word_map_from_json(body)?;
            let max_len = match v.get("max_len") {
                Some(n) => n
                    .as_u64()
                    .ok_or_else(|| Error::invalid("max_len must be a nonnegative integer"))?
                    as usize,
                None => map.keys().map(|k| k.len()).max().unwrap_or(0),
            };
            if max_len > 20 {
                return Err(Error::limit("word tables longer than 20"));
            }
            Ok(Distribution::Word(WordDistribution::from_map(max_len, &map)?))
        }
        _ => Err(Error::invalid("expected a moment table")),
    }
}

/// Word cumulants are written up to `max_len`; grid tables as a nested array.
pub fn cumulants_json(k: &CumulantTable, max_len: usize) -> Result<Value> {
    Ok(match k.grid_order() {
        Some(order) => document(
            "grid-cumulants",
            json!({ "order": order, "cumulants": matrix_json(&k.grid_rows(order)?) }),
        ),
        None => document(
            "word-cumulants",
            json!({ "max_len": max_len, "cumulants": word_map_json(k.to_map(max_len)) }),
        ),
    })
}

/// Accepts a `word-cumulants`/`grid-cumulants` document or a bare table.
pub fn cumulants_from_json(v: &Value) -> Result<CumulantTable> {
    check_schema(v)?;
    let body = v.get("cumulants").unwrap_or(v);
    match body {
        Value::Array(_) => CumulantTable::from_grid(matrix_from_json(body)?),
        Value::Object(_) => CumulantTable::from_map(&word_map_from_json(body)?),
        _ => Err(Error::invalid("expected a cumulant table")),
    }
}

pub fn measure_json(mu: &AtomicPlanarMeasure) -> Value {
    document(
        "measure",
        json!({
            "atoms": mu.atoms().iter().map(|a| json!({
                "s": rational_json(&a.s),
                "t": rational_json(&a.t),
                "w": rational_json(&a.w),
            })).collect::<Vec<_>>(),
        }),
    )
}

/// Accepts `[{"s":"1","t":"-1","w":"15"}, …]` or `{"atoms": [...]}`.
pub fn measure_from_json(v: &Value) -> Result<AtomicPlanarMeasure> {
    check_schema(v)?;
    let atoms = v
        .get("atoms")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| Error::invalid("expected an array of atoms"))?;
    let field = |a: &Value, k: &str| {
        a.get(k)
            .ok_or_else(|| Error::invalid(format!("atom missing field {k:?}")))
            .and_then(rational_from_json)
    };
    AtomicPlanarMeasure::new(
        atoms
            .iter()
            .map(|a| {
                Ok(Atom {
                    s: field(a, "s")?,
                    t: field(a, "t")?,
                    w: field(a, "w")?,
                })
            })
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `{"i": "p/q"}` over all coefficients up to the truncation order.
pub fn series1_json(s: &TruncatedSeries1<Q>) -> Value {
    let mut m = Map::new();
    for (i, c) in s.coeffs().iter().enumerate() {
        m.insert(i.to_string(), rational_json(c));
    }
    Value::Object(m)
}

/// `{"i,j": "p/q"}` over all coefficients up to the truncation order, in
/// row-major order.
pub fn series2_json(s: &TruncatedSeries2<Q>) -> Value {
    let mut m = Map::new();
    for (i, row) in s.rows().iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            m.insert(format!("{i},{j}"), rational_json(c));
        }
    }
    Value::Object(m)
}

/// Type II input: `{"spaces": [{"dim": 2}, …]}` or `{"spaces": [2, …]}`.
pub fn spaces_from_json(v: &Value) -> Result<Vec<PointedSpace>> {
    check_schema(v)?;
    let list = v
        .get("spaces")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| Error::invalid("expected a list of spaces"))?;
    list.iter()
        .map(|s| {
            let dim = s
                .get("dim")
                .unwrap_or(s)
                .as_u64()
                .ok_or_else(|| Error::invalid("space dimension must be a positive integer"))?;
            PointedSpace::new(dim as usize)
        })
        .collect()
}

/// Type II word: `{"word": [{"side": "L", "family": 1, "matrix": [[…]]}, …]}`
/// read left to right, with 1-based family labels.
pub fn type2_word_from_json(v: &Value) -> Result<Vec<(Side, LocalOperator)>> {
    check_schema(v)?;
    let letters = v
        .get("word")
        .unwrap_or(v)
        .as_array()
        .ok_or_else(|| Error::invalid("expected a list of letters"))?;
    letters
        .iter()
        .map(|l| {
            let side = l
                .get("side")
                .and_then(Value::as_str)
                .and_then(|s| {
                    let mut c = s.chars();
                    match (c.next(), c.next()) {
                        (Some(ch), None) => Side::from_char(ch).ok(),
                        _ => None,
                    }
                })
                .ok_or_else(|| Error::invalid("letter side must be \"L\" or \"R\""))?;
            let family = l
                .get("family")
                .and_then(Value::as_u64)
                .filter(|&f| f >= 1)
                .ok_or_else(|| Error::invalid("letter family must be an integer ≥ 1"))?;
            let matrix = matrix_from_json(
                l.get("matrix")
                    .ok_or_else(|| Error::invalid("letter missing matrix"))?,
            )?;
            Ok((side, LocalOperator::new(family as usize - 1, matrix)?))
        })
        .collect()
}

/// Right-aligned text table with row labels `m` and column labels `n`.
pub fn text_table(rows: &[Vec<Q>]) -> String {
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect();
    let cols = cells.first().map_or(0, Vec::len);
    let label_w = rows.len().saturating_sub(1).to_string().len().max(3);
    let widths: Vec<usize> = (0..cols)
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].len())
                .chain([j.to_string().len()])
                .max()
                .unwrap_or(1)
        })
        .collect();
    let mut out = format!("{:>label_w$}", "m\\n");
    for (j, w) in widths.iter().enumerate() {
        out.push_str(&format!("  {:>w$}", j));
    }
    out.push('\n');
    for (i, r) in cells.iter().enumerate() {
        out.push_str(&format!("{:>label_w$}", i));
        for (c, w) in r.iter().zip(&widths) {
            out.push_str(&format!("  {:>w$}", c));
        }
        out.push('\n');
    }
    out
}

/// Two-column `word  value` listing.
pub fn word_table(entries: &BTreeMap<String, Q>) -> String {
    let mut entries: Vec<(&String, &Q)> = entries.iter().collect();
    entries.sort_by(|a, b| (a.0.len(), a.0).cmp(&(b.0.len(), b.0)));
    let w = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0).max(4);
    entries
        .iter()
        .map(|(k, v)| {
            let k = if k.is_empty() { "()" } else { k.as_str() };
            format!("{k:<w$}  {}\n", format_rational(v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::parse_word;
    use crate::rational::{q, qi};

    #[test]
    fn grid_round_trip() {
        let g = GridDistribution::from_fn(2, |m, n| q(m as i64 + 1, n as i64 + 2));
        let v = grid_distribution_json(&g);
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["moments"][1][1], "2/3");
        assert_eq!(distribution_from_json(&v).unwrap(), Distribution::Grid(g));
    }

    #[test]
    fn word_round_trip_and_bare_map() {
        let d = WordDistribution::from_fn(2, |w| qi(w.len() as i64));
        let v = word_distribution_json(&d);
        assert_eq!(distribution_from_json(&v).unwrap(), Distribution::Word(d.clone()));
        let bare = json!({"L": 1, "R": "1", "LL": "2", "LR": "2", "RL": "2", "RR": "2"});
        assert_eq!(distribution_from_json(&bare).unwrap(), Distribution::Word(d));
    }

    #[test]
    fn measures_and_errors() {
        let v = json!([{"s":"1","t":"-1","w":"15"}, {"s":"0","t":"0","w":"-14"}]);
        let mu = measure_from_json(&v).unwrap();
        assert_eq!(mu.total_mass(), qi(1));
        assert_eq!(measure_from_json(&measure_json(&mu)).unwrap(), mu);
        assert!(measure_from_json(&json!([{"s":"1","t":"x","w":"1"}])).is_err());
        assert!(distribution_from_json(&json!({"schema": "other/2", "moments": [["1"]]})).is_err());
        let e = error_document(&Error::invalid("boom"));
        assert_eq!(e["error"]["kind"], "invalid-input");
    }

    #[test]
    fn cumulant_documents() {
        let k = CumulantTable::from_fn(2, |w| qi(w.len() as i64));
        let v = cumulants_json(&k, 2).unwrap();
        assert_eq!(v["kind"], "word-cumulants");
        assert_eq!(cumulants_from_json(&v).unwrap().get(&parse_word("LR").unwrap()).unwrap(), qi(2));
        let g = CumulantTable::grid_from_fn(1, |m, n| qi((m + n) as i64));
        let v = cumulants_json(&g, 0).unwrap();
        assert_eq!(v["cumulants"][1][0], "1");
        assert_eq!(cumulants_from_json(&v).unwrap(), g);
    }

    #[test]
    fn type2_inputs() {
        let spaces = spaces_from_json(&json!({"spaces": [{"dim": 2}, 3]})).unwrap();
        assert_eq!(spaces.len(), 2);
        let word = type2_word_from_json(&json!({"word": [
            {"side": "L", "family": 1, "matrix": [["1","2"],["0","1/3"]]},
            {"side": "R", "family": 2, "matrix": [[1,0,0],[0,1,0],[0,0,1]]},
        ]}))
        .unwrap();
        assert_eq!(word[0].0, Side::Left);
        assert_eq!(word[1].1.family, 1);
        assert!(type2_word_from_json(&json!([{"side": "X", "family": 1, "matrix": [["1"]]}])).is_err());
    }

    #[test]
    fn tables_align() {
        let t = text_table(&[vec![qi(1), q(1, 2)], vec![qi(-10), qi(0)]]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.len() == lines[0].len()));
    }
}
