//! Provenance-stamped output writers.
//!
//! Every CSV starts with a `#` header line and every JSON document carries a
//! `_provenance` object; re-running a command with identical inputs yields
//! byte-identical files unless `--stamp` adds a timestamp.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use fomc_core::provenance::Provenance;
use serde::Serialize;

pub struct OutputDir {
    dir: PathBuf,
    provenance: Provenance,
}

impl OutputDir {
    pub fn create(dir: impl Into<PathBuf>, provenance: Provenance) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(OutputDir { dir, provenance })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Open a CSV file with the provenance header already written.
    pub fn csv_file(&self, name: &str) -> Result<File> {
        let path = self.path(name);
        let mut file =
            File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
        writeln!(file, "{}", self.provenance.header_line())?;
        Ok(file)
    }

    /// Write a CSV from rows of string fields.
    pub fn write_csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let file = self.csv_file(name)?;
        let mut w = csv::Writer::from_writer(file);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Write a JSON document wrapping the payload with provenance.
    pub fn write_json<T: Serialize>(&self, name: &str, payload: &T) -> Result<()> {
        #[derive(Serialize)]
        struct Wrapped<'a, T> {
            _provenance: &'a Provenance,
            #[serde(flatten)]
            payload: &'a T,
        }
        let path = self.path(name);
        let body = serde_json::to_string_pretty(&Wrapped {
            _provenance: &self.provenance,
            payload,
        })?;
        std::fs::write(&path, body + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
        Ok(())
    }

    pub fn header_line(&self) -> String {
        self.provenance.header_line()
    }
}

/// Format a float for CSV output with stable precision.
pub fn num(value: f64) -> String {
    format!("{value:.10}")
}
