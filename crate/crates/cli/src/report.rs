//! Report bundles: JSON with provenance, CSV tables and SVG figures.

use std::fs;
use std::path::{Path, PathBuf};

use camlab::{Citation, Error};
use serde::Serialize;
use serde_json::Value;

use crate::config::{RunConfig, ROUNDING_NOTE};

pub const TOOL: &str = "camlab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// The shipped JSON schema for every report.
pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub rounding: String,
    pub citations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure {
    pub name: String,
    #[serde(skip)]
    pub svg: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBundle {
    pub provenance: Provenance,
    pub data: Value,
    pub tables: Vec<Table>,
    pub figures: Vec<Figure>,
}

impl ReportBundle {
    pub fn new(config: &RunConfig, data: impl Serialize, citations: &[Citation]) -> Self {
        let mut keys: Vec<String> = citations.iter().map(|c| c.key().to_string()).collect();
        keys.sort();
        keys.dedup();
        ReportBundle {
            provenance: Provenance {
                tool: TOOL.into(),
                version: VERSION.into(),
                config: config.clone(),
                rounding: ROUNDING_NOTE.into(),
                citations: keys,
            },
            data: serde_json::to_value(data).expect("report data serializes"),
            tables: Vec::new(),
            figures: Vec::new(),
        }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }

    pub fn with_figure(mut self, name: &str, svg: String) -> Self {
        self.figures.push(Figure { name: name.to_string(), svg });
        self
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("bundle serializes");
        s.push('\n');
        s
    }

    /// Writes `<cmd>.json`, one CSV per table and one SVG per figure into
    /// `dir`; returns the paths in write order.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, Error> {
        let io = |e: std::io::Error, p: &Path| Error::Parameter(format!("cannot write {}: {e}", p.display()));
        fs::create_dir_all(dir).map_err(|e| io(e, dir))?;
        let mut written = Vec::new();
        let json = dir.join(format!("{}.json", self.provenance.config.subcommand));
        fs::write(&json, self.to_json()).map_err(|e| io(e, &json))?;
        written.push(json);
        for t in &self.tables {
            let p = dir.join(format!("{}.csv", t.name));
            fs::write(&p, t.to_csv()).map_err(|e| io(e, &p))?;
            written.push(p);
        }
        for f in &self.figures {
            let p = dir.join(&f.name);
            fs::write(&p, &f.svg).map_err(|e| io(e, &p))?;
            written.push(p);
        }
        Ok(written)
    }
}

/// Shortest round-trip formatting used in every table cell.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else {
        format!("{x:?}")
    }
}
