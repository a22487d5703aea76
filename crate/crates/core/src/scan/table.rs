use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Significant digits in every emitted number.
pub const SIGNIFICANT_DIGITS: usize = 6;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest decimal string of `x` rounded to six significant digits.
/// Re-parsing and re-formatting the output reproduces it exactly.
pub fn format_sig(x: f64) -> String {
    format!("{}", round_sig(x))
}

/// Tabular scan output. Missing cells (e.g. a masked relative gap) are empty in CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

impl ScanTable {
    pub fn new(columns: &[&str]) -> Self {
        ScanTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of one column, `None` where the cell is empty.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn write_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let io_err = |e: csv::Error| Error::Config(format!("csv write: {e}"));
        w.write_record(&self.columns).map_err(io_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.map(format_sig).unwrap_or_default()))
                .map_err(io_err)?;
        }
        w.flush()
            .map_err(|e| Error::Config(format!("csv write: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn write_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.write_csv(io::BufWriter::new(file))
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let bad = |e: csv::Error| Error::Config(format!("csv read: {e}"));
        let columns: Vec<String> = r.headers().map_err(bad)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>()
                            .map(Some)
                            .map_err(|_| Error::Config(format!("csv read: bad number `{cell}`")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(ScanTable { columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(format_sig(0.634461487179311), "0.634461");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-1.0874884969), "-1.08749");
        assert_eq!(format_sig(0.0051), "0.0051");
        assert_eq!(format_sig(9.9999996), "10");
        assert_eq!(format_sig(1234567.0), "1234570");
    }

    #[test]
    fn csv_layout() {
        let mut t = ScanTable::new(&["tau", "gap"]);
        t.push(vec![Some(0.0), None]);
        t.push(vec![Some(0.5), Some(0.123456789)]);
        assert_eq!(t.to_csv_string(), "tau,gap\n0,\n0.5,0.123457\n");
    }

    #[test]
    fn rejects_garbage() {
        assert!(ScanTable::from_csv_str("a,b\n1,x\n").is_err());
    }

    proptest! {
        #[test]
        fn reemitting_is_byte_identical(
            values in proptest::collection::vec(proptest::option::of(-1e6f64..1e6), 1..60)
        ) {
            let mut t = ScanTable::new(&["x", "y", "z"]);
            for chunk in values.chunks(3) {
                let mut row = chunk.to_vec();
                row.resize(3, None);
                t.push(row);
            }
            let first = t.to_csv_string();
            let second = ScanTable::from_csv_str(&first).unwrap().to_csv_string();
            prop_assert_eq!(first, second);
        }
    }
}
