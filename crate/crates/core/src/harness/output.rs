use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Round-trip exact decimal form (17 significant digits).
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV file to be written into the run directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file_name: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file_name: &str, header: &[&'static str]) -> Self {
        Table { file_name: file_name.to_string(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.rows.push(row.iter().map(|&x| fmt_float(x)).collect());
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

/// Summary statistics of a run. Only finite values are kept.
#[derive(Debug, Clone, Default, PartialEq, serde::Serialize)]
pub struct Summary(pub BTreeMap<String, f64>);

impl Summary {
    pub fn insert(&mut self, key: &str, value: f64) {
        if value.is_finite() {
            self.0.insert(key.to_string(), value);
        }
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.0.get(key).copied()
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<PathBuf> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(path.to_path_buf())
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0] {
            assert_eq!(fmt_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new("x.csv", &["a", "b"]);
        t.push_floats(&[1.0, 2.0]);
        assert_eq!(t.to_csv(), "a,b\n1.0000000000000000e0,2.0000000000000000e0\n");
    }

    #[test]
    fn non_finite_summary_values_are_dropped() {
        let mut s = Summary::default();
        s.insert("a", f64::INFINITY);
        s.insert("b", 1.0);
        assert_eq!(s.get("a"), None);
        assert_eq!(s.get("b"), Some(1.0));
    }
}
