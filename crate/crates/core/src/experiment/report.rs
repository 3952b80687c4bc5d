use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// One CSV line of a report.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReportRow {
    pub command: String,
    #[serde(rename = "space-id")]
    pub space_id: String,
    pub sigma: Option<f64>,
    pub mu: Option<f64>,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
    pub alive_count: Option<usize>,
    pub component_count: Option<usize>,
    pub unbounded_count: Option<usize>,
    pub trusted: Option<u8>,
    pub verdict: String,
    pub value: String,
}

fn sort_key(x: Option<f64>) -> (u8, f64) {
    match x {
        None => (0, 0.0),
        Some(v) => (1, v),
    }
}

/// Rows plus a JSON summary for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub id: String,
    pub rows: Vec<ReportRow>,
    pub summary: Value,
}

impl Report {
    /// Stable sort by `(sigma, mu, R)`, empty cells first.
    pub fn sort(&mut self) {
        self.rows.sort_by(|a, b| {
            let ka = [sort_key(a.sigma), sort_key(a.mu), sort_key(a.radius)];
            let kb = [sort_key(b.sigma), sort_key(b.mu), sort_key(b.radius)];
            ka.iter()
                .zip(&kb)
                .map(|(x, y)| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record([
                "command", "space-id", "sigma", "mu", "R", "alive_count", "component_count",
                "unbounded_count", "trusted", "verdict", "value",
            ])
            .map_err(|e| Error::Consistency(e.to_string()))?;
        }
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::Consistency(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Consistency(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Consistency(e.to_string()))
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary).expect("summary is plain JSON") + "\n"
    }

    /// The summary's `final_verdict`, when the command produces one.
    pub fn final_verdict(&self) -> Option<&str> {
        self.summary.get("final_verdict").and_then(Value::as_str)
    }
}
