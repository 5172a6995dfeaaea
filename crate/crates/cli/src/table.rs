//! Row-oriented output as CSV or JSON lines.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::args::Format;
use crate::{CliError, CliResult};

/// A table cell: numbers stay numbers in JSON, exact rationals are strings.
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(*v),
            Cell::Text(v) => Value::from(v.as_str()),
        }
    }
}

pub struct TableWriter {
    out: Box<dyn Write>,
    format: Format,
    header: Vec<String>,
}

pub fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

fn io_error(e: io::Error) -> CliError {
    CliError::Usage(format!("write failed: {e}"))
}

impl TableWriter {
    pub fn new(out: Box<dyn Write>, format: Format, header: Vec<String>) -> CliResult<Self> {
        let mut w = TableWriter { out, format, header };
        if w.format == Format::Csv {
            let line = w.header.join(",");
            writeln!(w.out, "{line}").map_err(io_error)?;
        }
        Ok(w)
    }

    pub fn row(&mut self, cells: &[Cell]) -> CliResult<()> {
        debug_assert_eq!(cells.len(), self.header.len());
        match self.format {
            Format::Csv => {
                let line = cells.iter().map(Cell::csv).collect::<Vec<_>>().join(",");
                writeln!(self.out, "{line}").map_err(io_error)
            }
            Format::Jsonl => {
                let record: Map<String, Value> =
                    self.header.iter().cloned().zip(cells.iter().map(Cell::json)).collect();
                writeln!(self.out, "{}", Value::Object(record)).map_err(io_error)
            }
        }
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.out.flush().map_err(io_error)
    }
}
