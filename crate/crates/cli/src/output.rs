//! CSV and JSON-lines tables, written atomically.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    UInt(u64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}
impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::UInt(x)
    }
}
impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}
impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}
impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Str(x.to_string())
    }
}
impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Str(x)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Null, Into::into)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::UInt(x) => x.to_string(),
            Cell::Float(x) => x.to_string(),
            Cell::Bool(x) => x.to_string(),
            Cell::Null => String::new(),
            Cell::Str(s) if s.contains([',', '"', '\n']) => {
                format!("\"{}\"", s.replace('"', "\"\""))
            }
            Cell::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Int(x) => x.to_string(),
            Cell::UInt(x) => x.to_string(),
            Cell::Float(x) if x.is_finite() => x.to_string(),
            Cell::Float(_) | Cell::Null => "null".into(),
            Cell::Bool(x) => x.to_string(),
            Cell::Str(s) => serde_json::to_string(s).expect("string serialization"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Jsonl,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" | "json-lines" => Ok(Format::Jsonl),
            _ => bail!("format must be csv or jsonl, got {s:?}"),
        }
    }
}

/// Fixed columns; every row has one cell per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    /// Appends provenance columns to every row.
    pub fn with_provenance(mut self, seed: u64, streams: &[u64], hash: &str) -> Self {
        self.columns.extend(["seed", "stream", "config_hash"]);
        for (k, row) in self.rows.iter_mut().enumerate() {
            let stream = streams.get(k).or(streams.last()).copied().unwrap_or(0);
            row.extend([Cell::from(seed), Cell::from(stream), Cell::from(hash)]);
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        let mut s = String::new();
        match format {
            Format::Csv => {
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    s.push('{');
                    for (k, (c, v)) in self.columns.iter().zip(row).enumerate() {
                        if k > 0 {
                            s.push(',');
                        }
                        let _ = write!(s, "\"{c}\":{}", v.json());
                    }
                    s.push_str("}\n");
                }
            }
        }
        s
    }
}

/// Writes `text` to `out` via a temporary file renamed into place, or to
/// stdout when `out` is `None`. A failed run leaves no file behind.
pub fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())?;
            so.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)
                .with_context(|| format!("creating temporary file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new(&["n", "x", "label"]);
        t.push(vec![1u64.into(), 0.5.into(), "a,b".into()]);
        t.push(vec![2u64.into(), f64::INFINITY.into(), Cell::Null]);
        t
    }

    #[test]
    fn csv_and_jsonl_mirror_columns() {
        let t = table().with_provenance(7, &[3], "abcd");
        assert_eq!(
            t.render(Format::Csv),
            "n,x,label,seed,stream,config_hash\n1,0.5,\"a,b\",7,3,abcd\n2,inf,,7,3,abcd\n"
        );
        let j = t.render(Format::Jsonl);
        let first: serde_json::Value = serde_json::from_str(j.lines().next().unwrap()).unwrap();
        assert_eq!(first["label"], "a,b");
        assert_eq!(first["stream"], 3);
        assert!(j.lines().nth(1).unwrap().contains("\"x\":null"));
    }

    #[test]
    fn emit_replaces_atomically() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("o.csv");
        emit(Some(&p), "a\n").unwrap();
        emit(Some(&p), "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
