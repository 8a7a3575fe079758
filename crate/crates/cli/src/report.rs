use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};
use uom_core::format::{from_json, parse_blocks, parse_symbolic, write_blocks, Block, StructuredUom};
use uom_core::Uom;

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// What a command did, in a form that only depends on its inputs (apart
/// from `wall_seconds`).
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub verdicts: BTreeMap<String, String>,
    pub counts: BTreeMap<String, u64>,
    pub limit_status: String,
    pub wall_seconds: f64,
    #[serde(skip)]
    pub blocks: Vec<Block>,
}

impl RunReport {
    pub fn new(command: &str, digest: String) -> Self {
        Self {
            command: command.to_string(),
            inputs_digest: digest,
            verdicts: BTreeMap::new(),
            counts: BTreeMap::new(),
            limit_status: "complete".to_string(),
            wall_seconds: 0.0,
            blocks: Vec::new(),
        }
    }

    pub fn verdict(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.verdicts.insert(key.to_string(), value.to_string());
        self
    }

    pub fn count(&mut self, key: &str, value: usize) -> &mut Self {
        self.counts.insert(key.to_string(), value as u64);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut s = String::new();
                writeln!(s, "command: {}", self.command).unwrap();
                writeln!(s, "inputs: {}", self.inputs_digest).unwrap();
                for (k, v) in &self.verdicts {
                    writeln!(s, "{k}: {v}").unwrap();
                }
                for (k, v) in &self.counts {
                    writeln!(s, "{k}: {v}").unwrap();
                }
                writeln!(s, "status: {}", self.limit_status).unwrap();
                if !self.blocks.is_empty() {
                    s.push('\n');
                    s.push_str(&write_blocks(&self.blocks));
                }
                s
            }
            Format::Structured => {
                #[derive(Serialize)]
                struct Out<'a> {
                    report: &'a RunReport,
                    matrices: Vec<StructuredUom>,
                }
                let matrices = self
                    .blocks
                    .iter()
                    .map(|b| StructuredUom::new(&b.matrix, (!b.header.is_empty()).then(|| b.header.join("; "))))
                    .collect();
                let mut s = serde_json::to_string_pretty(&Out { report: self, matrices }).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// SHA-256 over the command line and the bytes of every input file.
pub fn digest(parts: &[&[u8]]) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

pub struct Input {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
    pub matrix: Uom,
}

/// Reads one matrix: JSON (`{m, n, entries}`), primed symbols, or plain
/// integers. `-` is standard input.
pub fn read_matrix(path: &Path) -> Result<Input, String> {
    let bytes = if path == Path::new("-") {
        let mut b = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut b).map_err(|e| format!("stdin: {e}"))?;
        b
    } else {
        std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    let text = String::from_utf8(bytes.clone()).map_err(|_| format!("{}: not UTF-8", path.display()))?;
    let matrix = parse_matrix(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(Input {
        path: path.to_path_buf(),
        bytes,
        matrix,
    })
}

fn parse_matrix(text: &str) -> Result<Uom, String> {
    let body = text.trim_start();
    if body.starts_with('{') || body.starts_with('[') {
        let items = from_json(body).map_err(|e| e.to_string())?;
        return match items.as_slice() {
            [one] => one.to_uom().map_err(|e| e.to_string()),
            _ => Err(format!("expected one matrix, found {}", items.len())),
        };
    }
    let symbolic = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .any(|l| l.chars().any(|c| c.is_alphabetic() || c == '\''));
    if symbolic {
        return parse_symbolic(text).map_err(|e| e.to_string());
    }
    let blocks = parse_blocks(text).map_err(|e| e.to_string())?;
    match blocks.len() {
        1 => Ok(blocks.into_iter().next().unwrap().matrix),
        k => Err(format!("expected one matrix, found {k}")),
    }
}
