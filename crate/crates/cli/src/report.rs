//! Output assembly. Every command builds one [`Report`] and renders it in the
//! requested format; nothing in the payload depends on wall-clock time.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};

pub const REPORT_SCHEMA: &str = "treetwist.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

pub struct Report {
    pub command: &'static str,
    /// Command-specific fields, merged into the top-level JSON object.
    pub fields: serde_json::Map<String, Value>,
    /// Which operation produced each numeric field.
    pub provenance: BTreeMap<&'static str, &'static str>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// Free-form lines shown above the table in plain output.
    pub summary: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Report {
        Report {
            command,
            fields: serde_json::Map::new(),
            provenance: BTreeMap::new(),
            header: Vec::new(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Report {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    pub fn provenance(&mut self, key: &'static str, source: &'static str) -> &mut Report {
        self.provenance.insert(key, source);
        self
    }

    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        out.insert("schema".into(), json!(REPORT_SCHEMA));
        out.insert("command".into(), json!(self.command));
        for (k, v) in &self.fields {
            out.insert(k.clone(), v.clone());
        }
        out.insert("provenance".into(), json!(self.provenance));
        Value::Object(out)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                if !self.header.is_empty() {
                    s.push_str(&self.header.join(","));
                    s.push('\n');
                }
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Plain => {
                let mut s = String::new();
                for line in &self.summary {
                    let _ = writeln!(s, "{line}");
                }
                if !self.rows.is_empty() {
                    let widths: Vec<usize> = (0..self.header.len())
                        .map(|i| {
                            self.rows
                                .iter()
                                .map(|r| r.get(i).map_or(0, |c| c.len()))
                                .chain([self.header[i].len()])
                                .max()
                                .unwrap_or(0)
                        })
                        .collect();
                    let line = |cells: Vec<&str>| {
                        cells
                            .iter()
                            .zip(&widths)
                            .map(|(c, w)| format!("{c:>w$}"))
                            .collect::<Vec<_>>()
                            .join("  ")
                    };
                    let _ = writeln!(s, "{}", line(self.header.clone()));
                    for row in &self.rows {
                        let _ = writeln!(s, "{}", line(row.iter().map(String::as_str).collect()));
                    }
                }
                s
            }
        }
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let mut r = Report::new("t");
        r.header = vec!["a", "b"];
        r.rows.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(r.render(Format::Csv), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn json_has_schema_and_provenance() {
        let mut r = Report::new("t");
        r.field("order", 8).provenance("order", "bfs");
        let v = r.to_json();
        assert_eq!(v["schema"], REPORT_SCHEMA);
        assert_eq!(v["provenance"]["order"], "bfs");
        assert_eq!(v["order"], 8);
    }
}
