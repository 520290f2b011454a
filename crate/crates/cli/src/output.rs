//! Deterministic CSV and manifest emission: UTF-8, '.' decimal separator,
//! 17 significant digits, byte-identical across reruns of the same config.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::CliError;

/// One CSV cell.
#[derive(Debug, Clone)]
pub enum Cell {
    Number(f64),
    Integer(u64),
    Text(String),
    Empty,
}

/// Formats with 17 significant digits, enough to round-trip any f64.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    format!("{x:.16e}")
}

/// Rectangular table with a header row.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "ragged CSV row");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Number(x) => format_g17(*x),
                    Cell::Integer(n) => n.to_string(),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// Writes a file and returns its SHA-256.
pub fn write_output(dir: &Path, name: &str, contents: &str) -> Result<(PathBuf, String), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("creating {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    Ok((path, sha256_hex(contents.as_bytes())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for x in [0.1, 1.0 / 3.0, 6.02e23, -7.25e-300, 0.0] {
            let s = format_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn table_renders_with_header() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::Number(0.5), Cell::Integer(1)]);
        t.push(vec![Cell::Empty, Cell::Text("x".into())]);
        assert_eq!(t.render(), "a,b\n5.0000000000000000e-1,1\n,x\n");
    }

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
