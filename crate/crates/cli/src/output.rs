//! Reports on stdout and trajectories in CSV, floats always with 17
//! significant digits so every value round-trips.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter};

use crate::error::{CliError, CliResult};

struct Sig17;

impl Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            w.write_all(float(value).as_bytes())
        } else {
            CompactFormatter.write_null(w)
        }
    }
}

/// `-0` is written as `0`.
pub fn float(v: f64) -> String {
    format!("{:.16e}", v + 0.0)
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Internal(format!("report serialization: {e}")))?;
    String::from_utf8(buf).map_err(|e| CliError::Internal(e.to_string()))
}

/// Header plus rows, comma-separated, LF line endings.
pub fn write_csv(path: &Path, header: &[String], rows: &[Vec<f64>]) -> CliResult<()> {
    let io_err = |source: io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let csv_err = |e: csv::Error| io_err(io::Error::other(e));
    let file = File::create(path).map_err(io_err)?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.iter().map(|&v| float(v))).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}
