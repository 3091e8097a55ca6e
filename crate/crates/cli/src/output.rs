//! Deterministic CSV/JSON emitters with atomic writes.
//!
//! Floats use Rust's shortest round-trip formatting. Every CSV file starts
//! with a header row followed by a `# config_sha256=<hex>` comment row; JSON
//! documents carry the same hash in a `config_sha256` field.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

/// SHA-256 of the canonical JSON serialization of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canonical = serde_json::to_vec(config).expect("configurations serialize");
    hex::encode(Sha256::digest(canonical))
}

/// One CSV cell.
pub enum Field {
    Num(f64),
    Int(usize),
    Text(&'static str),
    Missing,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) => format!("{v}"),
            Field::Int(v) => format!("{v}"),
            Field::Text(s) => (*s).to_string(),
            Field::Missing => String::new(),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Missing, Field::Num)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v)
    }
}

impl From<&'static str> for Field {
    fn from(v: &'static str) -> Self {
        Field::Text(v)
    }
}

/// A CSV table held in memory until written.
pub struct Table {
    header: &'static [&'static str],
    rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self, hash: &str) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        out.push_str(&format!("# config_sha256={hash}\n"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes `contents` to `dir/name` through a temporary file in the same
/// directory and an atomic rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let mut temp = tempfile::NamedTempFile::new_in(dir)?;
    temp.write_all(contents)?;
    temp.as_file().sync_all()?;
    let path = dir.join(name);
    temp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// Pretty-printed JSON of `body` with the config hash as first field.
pub fn json_document<T: Serialize>(hash: &str, body: &T) -> Vec<u8> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        config_sha256: &'a str,
        #[serde(flatten)]
        body: &'a T,
    }
    let mut bytes = serde_json::to_vec_pretty(&Document {
        config_sha256: hash,
        body,
    })
    .expect("outputs serialize");
    bytes.push(b'\n');
    bytes
}
