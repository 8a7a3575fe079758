//! Text and structured encodings beyond the single-matrix plain format.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, UomError};
use crate::matrix::{Label, Uom};

/// Reads a matrix of symbols such as `a11 a13'`. Within a column, `x` and
/// `x'` are an orthogonal pair; distinct bases are unrelated states. Labels
/// are then assigned top-down, so the result is canonically named.
pub fn parse_symbolic(text: &str) -> Result<Uom> {
    let mut rows: Vec<Vec<Label>> = Vec::new();
    let mut names: Vec<HashMap<String, Label>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut row = Vec::new();
        for (c, tok) in line.split_whitespace().enumerate() {
            let base = tok.trim_end_matches('\'');
            let primes = tok.len() - base.len();
            if base.is_empty() || primes > 1 || base.contains('\'') {
                return Err(UomError::BadToken {
                    line: lineno + 1,
                    token: tok.to_string(),
                });
            }
            if names.len() <= c {
                names.push(HashMap::new());
            }
            let next = 2 * names[c].len() as Label + 1;
            let odd = *names[c].entry(base.to_string()).or_insert(next);
            row.push(odd + primes as Label);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(UomError::Ragged {
                    line: lineno + 1,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        rows.push(row);
    }
    Ok(Uom::from_rows(&rows)?.rename_canonical())
}

/// A matrix with the `#` lines written directly above it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Block {
    pub header: Vec<String>,
    pub matrix: Uom,
}

/// Splits text into matrices at blank lines. Comment lines belong to the
/// matrix that follows them; a trailing comment-only block is dropped.
pub fn parse_blocks(text: &str) -> Result<Vec<Block>> {
    let mut out = Vec::new();
    let mut header = Vec::new();
    let mut body = String::new();
    let mut flush = |header: &mut Vec<String>, body: &mut String| -> Result<()> {
        if !body.is_empty() {
            out.push(Block {
                header: std::mem::take(header),
                matrix: Uom::parse(body)?,
            });
            body.clear();
        }
        Ok(())
    };
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() {
            flush(&mut header, &mut body)?;
        } else if let Some(c) = t.strip_prefix('#') {
            if !body.is_empty() {
                flush(&mut header, &mut body)?;
            }
            header.push(c.trim().to_string());
        } else {
            body.push_str(t);
            body.push('\n');
        }
    }
    flush(&mut header, &mut body)?;
    Ok(out)
}

pub fn write_blocks(blocks: &[Block]) -> String {
    let mut s = String::new();
    for (i, b) in blocks.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        for h in &b.header {
            s.push_str("# ");
            s.push_str(h);
            s.push('\n');
        }
        s.push_str(&b.matrix.to_string());
    }
    s
}

/// Serialized form `{m, n, entries, provenance}`, entries row by row.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct StructuredUom {
    pub m: usize,
    pub n: usize,
    pub entries: Vec<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl StructuredUom {
    pub fn new(u: &Uom, provenance: Option<String>) -> Self {
        Self {
            m: u.rows(),
            n: u.cols(),
            entries: u.to_rows(),
            provenance,
        }
    }

    pub fn to_uom(&self) -> Result<Uom> {
        let u = Uom::from_rows(&self.entries)?;
        if u.shape() != (self.m, self.n) {
            return Err(UomError::ShapeMismatch(self.m, self.n, u.rows(), u.cols()));
        }
        Ok(u)
    }
}

pub fn to_json(u: &Uom, provenance: Option<String>) -> String {
    serde_json::to_string(&StructuredUom::new(u, provenance)).expect("serializable")
}

/// Accepts a single object or an array of them.
pub fn from_json(text: &str) -> Result<Vec<StructuredUom>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| UomError::Structured(e.to_string()))?;
    let items = match value {
        serde_json::Value::Array(v) => v,
        v => vec![v],
    };
    items
        .into_iter()
        .map(|v| serde_json::from_value(v).map_err(|e| UomError::Structured(e.to_string())))
        .collect()
}
