use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};
use symtomo::export::format_float;

use crate::args::Format;
use crate::error::CliError;

/// Column-oriented numeric output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_float(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({ "columns": self.columns, "rows": self.rows })
    }
}

/// What a subcommand produces: a table, optionally with extra JSON fields.
pub struct Report {
    pub table: Table,
    pub extra: Option<Value>,
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Report { table, extra: None }
    }
}

pub fn emit(report: &Report, format: Format, path: Option<&Path>) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match format {
        Format::Csv => report.table.write_csv(&mut sink)?,
        Format::Json => {
            let mut v = report.table.to_json();
            if let (Some(Value::Object(extra)), Value::Object(obj)) = (&report.extra, &mut v) {
                for (k, x) in extra {
                    obj.insert(k.clone(), x.clone());
                }
            }
            serde_json::to_writer_pretty(&mut sink, &v).map_err(io::Error::from)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}
