//! Line-delimited JSON report records.

use std::io::{self, Write};

use serde::Serialize;

use crate::decomp::{DecompWitness, SearchReport};
use crate::suites::SuiteSummary;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessRecord {
    #[serde(rename = "A")]
    pub a: Vec<u32>,
    #[serde(rename = "B", skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<u32>>,
}

impl From<&DecompWitness> for WitnessRecord {
    fn from(w: &DecompWitness) -> Self {
        Self { a: w.a.to_vec(), b: w.b.as_ref().map(|b| b.to_vec()) }
    }
}

/// One output line. Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRecord {
    pub task: String,
    pub p: Option<u32>,
    pub subgroup_order: Option<u32>,
    pub params: serde_json::Value,
    pub witnesses: Vec<WitnessRecord>,
    pub exhaustive: bool,
    pub nodes: u64,
    pub elapsed_ms: u64,
}

impl ReportRecord {
    pub fn from_search(report: &SearchReport, timing: bool) -> Self {
        Self {
            task: report.task.name.clone(),
            p: report.task.p,
            subgroup_order: report.task.subgroup_order,
            params: report.task.params.clone(),
            witnesses: report.witnesses.iter().map(WitnessRecord::from).collect(),
            exhaustive: report.exhaustive,
            nodes: report.nodes_explored,
            elapsed_ms: if timing { report.elapsed.as_millis() as u64 } else { 0 },
        }
    }

    /// Suites have no witnesses; `nodes` counts cases and `params` carries the
    /// summary.
    pub fn from_suite(task: &str, suite: &SuiteSummary, elapsed_ms: u64) -> Self {
        Self {
            task: format!("{task}/{}", suite.name),
            p: None,
            subgroup_order: None,
            params: serde_json::json!({
                "passed": suite.passed(),
                "failures": suite.failures,
                "details": suite.details,
            }),
            witnesses: Vec::new(),
            exhaustive: true,
            nodes: suite.cases as u64,
            elapsed_ms,
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }
}

/// Writes records one per line.
pub struct ReportWriter<W: Write> {
    out: W,
}

impl<W: Write> ReportWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn emit(&mut self, record: &ReportRecord) -> io::Result<()> {
        writeln!(self.out, "{}", record.to_line())
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}
