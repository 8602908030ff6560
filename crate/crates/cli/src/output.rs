//! Writing result files with a provenance comment line.

use std::fs;
use std::path::{Path, PathBuf};

use hyqoc::export::CsvTable;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL: &str = concat!("hyqoc ", env!("CARGO_PKG_VERSION"));

/// Output directory plus the identity of the run that fills it.
pub struct Output {
    dir: PathBuf,
    comment: String,
    written: Vec<PathBuf>,
}

/// Hex SHA-256 of `text`.
pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Output {
    pub fn create(dir: &Path, config_json: &str, seed: u64) -> Result<Self, CliError> {
        fs::create_dir_all(dir)
            .map_err(|e| CliError::config(format!("cannot create output directory {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            comment: format!("{TOOL} config_sha256={} seed={seed}", sha256_hex(config_json)),
            written: Vec::new(),
        })
    }

    pub fn comment(&self) -> &str {
        &self.comment
    }

    pub fn csv(&mut self, name: &str, table: &CsvTable) -> Result<(), CliError> {
        self.text(name, &table.render(Some(&self.comment)))
    }

    pub fn json<T: serde::Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::config(e.to_string()))?;
        text.push('\n');
        self.text(name, &text)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}
