//! CSV and JSON writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Output directory; `None` discards everything (used by tests and dry runs).
#[derive(Debug, Default)]
pub struct Outputs {
    dir: Option<PathBuf>,
    written: Vec<PathBuf>,
}

impl Outputs {
    pub fn new(dir: Option<&Path>) -> Result<Self> {
        if let Some(d) = dir {
            std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Self { dir: dir.map(Path::to_path_buf), written: Vec::new() })
    }

    pub fn discard() -> Self {
        Self::default()
    }

    /// Files created so far.
    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    /// Opens `file` and writes its header row.
    pub fn csv(&mut self, file: &str, header: &[&str]) -> Result<CsvSink> {
        let Some(dir) = &self.dir else {
            return Ok(CsvSink { w: None, path: PathBuf::from(file) });
        };
        let path = dir.join(file);
        let f = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
        self.written.push(path.clone());
        let mut sink = CsvSink { w: Some(BufWriter::new(f)), path };
        sink.raw_row(header.iter().map(|h| h.to_string()))?;
        Ok(sink)
    }

    pub fn json<S: Serialize>(&mut self, file: &str, value: &S) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let path = dir.join(file);
        let text = serde_json::to_string_pretty(value).context("serializing summary")?;
        std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
        self.written.push(path);
        Ok(())
    }
}

/// A CSV file flushed after every row.
#[derive(Debug)]
pub struct CsvSink {
    w: Option<BufWriter<File>>,
    path: PathBuf,
}

/// A CSV cell.
pub enum Cell<'a> {
    Int(usize),
    Float(f64),
    Text(&'a str),
}

impl Cell<'_> {
    fn render(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            // shortest round-trip representation, so values survive re-reading exactly
            Cell::Float(x) => format!("{x:e}"),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.to_string(),
        }
    }
}

impl CsvSink {
    pub fn row(&mut self, cells: &[Cell<'_>]) -> Result<()> {
        self.raw_row(cells.iter().map(Cell::render))
    }

    fn raw_row(&mut self, cells: impl Iterator<Item = String>) -> Result<()> {
        let Some(w) = &mut self.w else { return Ok(()) };
        let line = cells.collect::<Vec<_>>().join(",");
        writeln!(w, "{line}").and_then(|_| w.flush()).with_context(|| format!("writing {}", self.path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [1e-14, 0.1 + 0.2, -3.0, 123456.789, f64::MIN_POSITIVE] {
            let s = Cell::Float(x).render();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(Cell::Text("a,b").render(), "\"a,b\"");
    }
}
