use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::LossMatrix;

/// A loss table read from CSV: risk names plus the positive data matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub data: LossMatrix,
}

pub fn load_csv(path: &Path) -> Result<Dataset> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    parse_csv(&fs::read_to_string(path)?)
}

/// Parses a header row of risk names followed by numeric rows. Blank lines
/// and lines starting with `#` are skipped. Row numbers in errors are 1-based
/// line numbers of the file.
pub fn parse_csv(text: &str) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines.next().ok_or(Error::Empty("CSV file has no header"))?;
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let cols = names.len();

    let mut values = Vec::new();
    let mut rows = 0;
    for (line, content) in lines {
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != cols {
            return Err(Error::Ragged {
                row: line,
                found: fields.len(),
                expected: cols,
            });
        }
        for (c, cell) in fields.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::NonNumeric {
                row: line,
                column: c + 1,
                cell: cell.to_string(),
            })?;
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::NonPositive {
                    row: line,
                    column: c + 1,
                    value,
                });
            }
            values.push(value);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::Empty("CSV file has no data rows"));
    }
    Ok(Dataset {
        names,
        data: LossMatrix::from_flat(rows, cols, values)?,
    })
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Accumulates a CSV document with a `#` metadata preamble.
#[derive(Debug, Default)]
pub(crate) struct CsvDoc {
    buf: String,
}

impl CsvDoc {
    pub fn new(command: &str) -> Self {
        let mut doc = Self::default();
        doc.meta("generator", concat!("pbscen ", env!("CARGO_PKG_VERSION")));
        doc.meta("command", command);
        doc
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.buf, "# {key}: {value}");
    }

    pub fn row<I, T>(&mut self, cells: I)
    where
        I: IntoIterator<Item = T>,
        T: std::fmt::Display,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.buf.push(',');
            }
            let _ = write!(self.buf, "{cell}");
            first = false;
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}
