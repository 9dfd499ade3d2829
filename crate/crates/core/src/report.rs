//! Machine-readable renderings: exact rationals as decimal strings with an
//! advisory 15-significant-digit float column, plus the JSON shapes shared by
//! the CLI subcommands.

use num::{BigRational, ToPrimitive};
use serde::Serialize;

use crate::alpha::Alpha;

/// An exact rational plus its advisory float rendering.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
    pub float: String,
}

/// 15 significant digits, scientific notation; the advisory column.
pub fn float15(x: f64) -> String {
    format!("{x:.14e}")
}

impl From<&BigRational> for RationalRepr {
    fn from(r: &BigRational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
            float: float15(r.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

/// The wire form of an alpha: prefix elements, tail, horizon and exact value.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaJson {
    pub elements: Vec<u64>,
    pub tail: Option<u64>,
    pub horizon_j: u64,
    pub value_num: String,
    pub value_den: String,
}

impl From<&Alpha> for AlphaJson {
    fn from(a: &Alpha) -> Self {
        AlphaJson {
            elements: a.cf().elements().to_vec(),
            tail: a.tail(),
            horizon_j: a.horizon_j(),
            value_num: a.value().numer().to_string(),
            value_den: a.value().denom().to_string(),
        }
    }
}

/// One CSV line: comma separated, no quoting (fields are numeric or 0/1
/// words by construction), LF ending appended by the writer.
pub fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

/// Assemble a CSV payload: `# key=value` config comments, a header row, then
/// data rows, LF line endings throughout.
pub fn csv_document(config: &[(String, String)], header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    for (k, v) in config {
        out.push_str(&format!("# {k}={v}\n"));
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&csv_line(row));
        out.push('\n');
    }
    out
}

/// CSV dump of a coding partition: one row per atom with exact endpoints and
/// the atom's coding word.
pub fn atom_partition_csv(
    alpha: &Alpha,
    part: &crate::coding::AtomPartition,
) -> crate::error::Result<String> {
    let codings = part.codings(alpha)?;
    let rows: Vec<Vec<String>> = part
        .atoms
        .iter()
        .zip(&codings)
        .map(|(arc, word)| {
            let end = arc.start() + arc.measure();
            vec![
                part.j.to_string(),
                arc.start().numer().to_string(),
                arc.start().denom().to_string(),
                end.numer().to_string(),
                end.denom().to_string(),
                word.as_string(),
            ]
        })
        .collect();
    Ok(csv_document(
        &[("j".to_string(), part.j.to_string())],
        &[
            "j",
            "left_num",
            "left_den",
            "right_num",
            "right_den",
            "coding",
        ],
        &rows,
    ))
}
