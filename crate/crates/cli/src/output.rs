//! CSV emission with 17 significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};

use crate::error::{CliError, CliResult};

/// A real with 17 significant digits, `NaN`/`inf` for non-finite values.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

/// Column names plus rows of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new(header: Vec<String>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn write<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|&x| fmt17(x)))?;
        }
        out.flush().map_err(|e| CliError::io("csv output", e))?;
        Ok(())
    }

    /// Write to `path`, or to standard output when `path` is `None`.
    pub fn write_to(&self, path: Option<&str>) -> CliResult<()> {
        match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::io(p, e))?;
                self.write(BufWriter::new(f))
            }
            None => self.write(io::stdout().lock()),
        }
    }

    pub fn to_string(&self) -> CliResult<String> {
        let mut buf = Vec::new();
        self.write(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
