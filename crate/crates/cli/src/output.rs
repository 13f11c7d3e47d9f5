//! File emission. Every artifact goes through [`Outputs`], which records its
//! path once.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Output directory plus the files written so far.
#[derive(Debug)]
pub struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    /// Creates the directory if needed.
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self, CliError> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self {
            dir,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Path of `name` inside the output directory, registered as written.
    /// Writing the same name twice keeps a single entry.
    fn claim(&mut self, name: &str) -> PathBuf {
        let path = self.dir.join(name);
        if !self.written.contains(&path) {
            self.written.push(path.clone());
        }
        path
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.claim(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    /// Pretty-printed JSON with a trailing newline. Floats are written with
    /// the shortest digits that read back to the same value.
    pub fn write_json<T: Serialize + ?Sized>(
        &mut self,
        name: &str,
        value: &T,
    ) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::ConfigParse(format!("cannot serialise {name}: {e}")))?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// Comma-separated rows with a header and LF line endings.
    pub fn write_csv<H, HF, R, F>(
        &mut self,
        name: &str,
        header: H,
        rows: R,
    ) -> Result<PathBuf, CliError>
    where
        H: IntoIterator<Item = HF>,
        HF: AsRef<[u8]>,
        R: IntoIterator,
        R::Item: IntoIterator<Item = F>,
        F: AsRef<[u8]>,
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::ConfigParse(format!("cannot write {name}: {e}"));
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.write_record(row).map_err(csv_err)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::ConfigParse(format!("cannot write {name}: {e}")))?;
        self.write_bytes(name, &bytes)
    }
}

/// Shortest text that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
