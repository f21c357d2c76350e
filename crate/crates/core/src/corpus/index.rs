//! Persisted per-place corpus index: a magic/version line followed by JSON.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::Corpus;
use crate::{Error, Result};

pub const INDEX_MAGIC: &str = "OPINSUM-CORPUS";
const INDEX_VERSION: u32 = 1;

pub fn save_index(corpus: &Corpus, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut out = Vec::new();
    writeln!(out, "{INDEX_MAGIC} {INDEX_VERSION}").expect("write to vec");
    serde_json::to_writer(&mut out, corpus).map_err(|e| Error::Index {
        path: path.into(),
        message: e.to_string(),
    })?;
    out.push(b'\n');
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_index(path: &Path) -> Result<Corpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut header = String::new();
    reader
        .read_line(&mut header)
        .map_err(|e| Error::io(path, e))?;
    let bad = |message: String| Error::Index {
        path: path.into(),
        message,
    };
    let mut parts = header.split_whitespace();
    if parts.next() != Some(INDEX_MAGIC) {
        return Err(bad("missing magic header".into()));
    }
    match parts.next().and_then(|v| v.parse::<u32>().ok()) {
        Some(INDEX_VERSION) => {}
        Some(v) => return Err(bad(format!("unsupported index version {v}"))),
        None => return Err(bad("malformed version".into())),
    }
    serde_json::from_reader(reader).map_err(|e| bad(e.to_string()))
}
