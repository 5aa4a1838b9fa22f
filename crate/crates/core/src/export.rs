//! File formats for generator matrices, evaluation sets and sweep tables.
//!
//! JSON writes field elements as coefficient vectors (constant term first);
//! the flat generator CSV writes canonical integer indices, row-major.

use serde::Serialize;
use serde_json::{json, Value};

use crate::code::{Code, GeneratorMatrix, Monomial};
use crate::gf::{Elem, Field, FieldParams};

#[derive(Debug, Serialize)]
struct PointRow {
    index: usize,
    x: Vec<u32>,
    y: Vec<u32>,
    z: Vec<u32>,
}

pub fn generator_json(g: &GeneratorMatrix) -> Value {
    let f = &g.field;
    let coeffs = |e: &Elem| f.coeffs(*e);
    json!({
        "field": f.params(),
        "basis": g.basis.iter().map(|m: &Monomial| [m.i, m.j, m.k]).collect::<Vec<_>>(),
        "points": g.points.iter().map(|p| [coeffs(&p.x), coeffs(&p.y), coeffs(&p.z)]).collect::<Vec<_>>(),
        "rows": g.rows.iter().map(|r| r.iter().map(coeffs).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// One line per row, entries as canonical indices.
pub fn generator_csv(g: &GeneratorMatrix) -> String {
    let mut out = String::new();
    for row in &g.rows {
        let line: Vec<String> = row.iter().map(|e| e.index().to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn joined(field: &Field, e: Elem) -> String {
    field.coeffs(e).iter().map(u32::to_string).collect::<Vec<_>>().join(";")
}

/// `index,x,y,z` with coefficient vectors joined by `;`.
pub fn evaluation_set_csv(code: &Code) -> Result<String, csv::Error> {
    let f = code.field();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "x", "y", "z"])?;
    for (i, p) in code.points().iter().enumerate() {
        w.write_record([i.to_string(), joined(f, p.x), joined(f, p.y), joined(f, p.z)])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv output is utf-8"))
}

pub fn evaluation_set_json(code: &Code) -> Value {
    let f = code.field();
    let rows: Vec<PointRow> = code
        .points()
        .iter()
        .enumerate()
        .map(|(index, p)| PointRow { index, x: f.coeffs(p.x), y: f.coeffs(p.y), z: f.coeffs(p.z) })
        .collect();
    json!({
        "field": f.params(),
        "eta": code.eta(),
        "gammas": code.evaluation_set().gammas.iter().map(|&g| f.coeffs(g)).collect::<Vec<_>>(),
        "points": rows,
    })
}

/// Reads back a generator CSV written by [`generator_csv`].
pub fn parse_generator_csv(field: &Field, text: &str) -> Result<Vec<Vec<Elem>>, String> {
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|line| {
            line.split(',')
                .map(|t| {
                    let v: u32 = t.trim().parse().map_err(|e| format!("bad entry {t:?}: {e}"))?;
                    field.from_index(v).map_err(|e| e.to_string())
                })
                .collect()
        })
        .collect()
}

pub fn field_summary(params: &FieldParams) -> String {
    let m: Vec<String> = params.modulus.iter().map(u32::to_string).collect();
    format!("GF({}^{}) modulus [{}]", params.p, params.h, m.join(", "))
}
