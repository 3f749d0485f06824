use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "cmc-rot/v1";

/// A JSON report or a CSV table, rendered once at the end of a run.
pub enum Document {
    Json(Value),
    Table(Table),
}

impl Document {
    /// `{"schema", "command", "metadata", ...report fields}`.
    pub fn json(command: &str, metadata: Value, report: Value) -> Self {
        let mut out = Map::new();
        out.insert("schema".into(), json!(SCHEMA));
        out.insert("command".into(), json!(command));
        out.insert("metadata".into(), metadata);
        match report {
            Value::Object(fields) => out.extend(fields),
            other => {
                out.insert("report".into(), other);
            }
        }
        Document::Json(Value::Object(out))
    }

    pub fn write(&self, path: Option<&Path>) -> io::Result<()> {
        match path {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                self.render(&mut w)?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                self.render(&mut w)?;
                w.flush()
            }
        }
    }

    fn render<W: Write>(&self, w: &mut W) -> io::Result<()> {
        match self {
            Document::Json(value) => {
                serde_json::to_writer_pretty(&mut *w, value)?;
                writeln!(w)
            }
            Document::Table(table) => table.render(w),
        }
    }
}

/// CSV with a `# key: value` preamble carrying the schema, the run metadata
/// and scalar results, followed by a header row.
pub struct Table {
    preamble: Vec<(String, String)>,
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(command: &str, metadata: Value, header: &[&str]) -> Self {
        let mut preamble = vec![
            ("schema".to_string(), SCHEMA.to_string()),
            ("command".to_string(), command.to_string()),
        ];
        if let Value::Object(meta) = metadata {
            for (k, v) in meta {
                preamble.push((k, v.to_string()));
            }
        }
        Table {
            preamble,
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, key: &str, value: impl Display) {
        self.preamble.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.header.len());
        self.rows.push(values.to_vec());
    }

    fn render<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for (k, v) in &self.preamble {
            writeln!(w, "# {k}: {v}")?;
        }
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(|x| x.to_string()))?;
        }
        csv.flush()
    }
}
