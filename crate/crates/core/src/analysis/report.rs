use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::AnalysisError;
use crate::pixel::FilterKind;

/// Report JSON Schema (draft 2020-12).
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    HigherBetter,
    LowerBetter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Score,
    Fd,
    IntraFd,
    Precision,
    Recall,
    Density,
    Coverage,
    Top1Accuracy,
    Top5Accuracy,
}

impl MetricKind {
    pub fn direction(self) -> Direction {
        match self {
            MetricKind::Fd | MetricKind::IntraFd => Direction::LowerBetter,
            _ => Direction::HigherBetter,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricEntry {
    pub name: String,
    pub kind: MetricKind,
    pub value: f64,
    pub direction: Direction,
}

impl MetricEntry {
    pub fn new(name: impl Into<String>, kind: MetricKind, value: f64) -> Self {
        MetricEntry { name: name.into(), kind, value, direction: kind.direction() }
    }
}

/// Filters used on each resampling route.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resizers {
    /// Filter used when preparing images, if this run prepared any.
    pub preprocess: Option<FilterKind>,
    /// Filter actually used to feed the backbone.
    pub backbone: FilterKind,
    /// The backbone's friendly filter.
    pub friendly: FilterKind,
    /// Set when `backbone != friendly` was explicitly requested.
    pub override_acknowledged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol {
    pub reference_split: String,
    pub reference_count: usize,
    pub generated_count: usize,
    pub resizers: Resizers,
    pub toolkit_version: String,
    pub k_pr: usize,
    pub k_dc: usize,
    pub splits: usize,
    /// Ties share the minimum rank ("1,1,3").
    pub tie_rank: String,
}

impl Protocol {
    pub fn new(
        reference_split: impl Into<String>,
        reference_count: usize,
        generated_count: usize,
        resizers: Resizers,
    ) -> Self {
        Protocol {
            reference_split: reference_split.into(),
            reference_count,
            generated_count,
            resizers,
            toolkit_version: TOOLKIT_VERSION.into(),
            k_pr: 3,
            k_dc: 5,
            splits: 10,
            tie_rank: "min".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub model_name: String,
    pub backbone: String,
    pub entries: Vec<MetricEntry>,
    pub protocol: Protocol,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl MetricReport {
    pub fn new(model_name: impl Into<String>, backbone: impl Into<String>, protocol: Protocol) -> Self {
        MetricReport {
            model_name: model_name.into(),
            backbone: backbone.into(),
            entries: Vec::new(),
            protocol,
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, entry: MetricEntry) {
        self.entries.push(entry);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn get(&self, name: &str) -> Option<&MetricEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn metric_names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    /// Checks structural invariants: distinct names, finite values,
    /// directions consistent with kinds, non-empty reference split.
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.protocol.reference_split.trim().is_empty() {
            return Err(AnalysisError::InvalidReport("reference split is empty".into()));
        }
        let r = &self.protocol.resizers;
        if r.backbone != r.friendly && !r.override_acknowledged {
            return Err(AnalysisError::InvalidReport(format!(
                "backbone resizer {} differs from friendly {} without acknowledgement",
                r.backbone, r.friendly
            )));
        }
        for (i, e) in self.entries.iter().enumerate() {
            if !e.value.is_finite() {
                return Err(AnalysisError::InvalidReport(format!("{} is not finite", e.name)));
            }
            if e.direction != e.kind.direction() {
                return Err(AnalysisError::InvalidReport(format!("{} has the wrong direction", e.name)));
            }
            if self.entries[..i].iter().any(|o| o.name == e.name) {
                return Err(AnalysisError::InvalidReport(format!("duplicate metric {}", e.name)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, AnalysisError> {
        let r: MetricReport = serde_json::from_str(text).map_err(|e| AnalysisError::InvalidReport(e.to_string()))?;
        r.validate()?;
        Ok(r)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,backbone,metric,value,direction\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{},{:?}", self.model_name, self.backbone, e.name, e.value, e.direction);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let p = &self.protocol;
        let mut out = String::new();
        let _ = writeln!(out, "model     {}", self.model_name);
        let _ = writeln!(out, "backbone  {}", self.backbone);
        let _ = writeln!(
            out,
            "reference {} ({} samples), generated {}",
            p.reference_split, p.reference_count, p.generated_count
        );
        let pre = p.resizers.preprocess.map_or("-".to_string(), |f| f.to_string());
        let _ = writeln!(
            out,
            "resizers  preprocess {}, backbone {}{}",
            pre,
            p.resizers.backbone,
            if p.resizers.override_acknowledged { " (OVERRIDE of friendly resizer)" } else { "" }
        );
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(6).max(6);
        let _ = writeln!(out, "{:<width$}  {:>14}  better", "metric", "value");
        for e in &self.entries {
            let arrow = match e.direction {
                Direction::HigherBetter => "higher",
                Direction::LowerBetter => "lower",
            };
            let _ = writeln!(out, "{:<width$}  {:>14.6}  {}", e.name, e.value, arrow);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
