#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use opinsum_cli::store::DataDir;
use tempfile::TempDir;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/fixtures")
}

pub fn opinsum(data_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opinsum"))
        .arg("--data-dir")
        .arg(data_dir)
        .args(args)
        .env_remove("OPINSUM_DATA_DIR")
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

/// A data directory with the desk fixture indexed and its vectors installed.
pub fn desk_data_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("desk/vectors.txt"), dir.path().join("vectors.txt")).unwrap();
    DataDir::new(dir.path())
        .ingest(&fixtures().join("desk/reviews.jsonl"), None)
        .unwrap();
    dir
}

/// A data directory with the seven-place fixture indexed, no vectors.
pub fn seven_places_data_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    DataDir::new(dir.path())
        .ingest(&fixtures().join("seven-places/reviews.jsonl"), None)
        .unwrap();
    dir
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}
