use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::report::{Direction, MetricReport};
use super::AnalysisError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankCell {
    pub value: f64,
    pub rank: usize,
    pub top1: bool,
    pub top2: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub model_name: String,
    /// One cell per entry of [`RankingTable::metrics`].
    pub cells: Vec<RankCell>,
    pub average_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub backbone: String,
    pub metrics: Vec<String>,
    pub directions: Vec<Direction>,
    /// Always `"min"`: tied values share the best rank of their group.
    pub tie_rank: String,
    /// Sorted by average rank, then model name.
    pub rows: Vec<RankRow>,
}

/// Competition ranks ("1,1,3") for one column.
fn column_ranks(values: &[f64], direction: Direction) -> Vec<usize> {
    let better = |a: f64, b: f64| match direction {
        Direction::HigherBetter => a > b,
        Direction::LowerBetter => a < b,
    };
    values.iter().map(|&v| 1 + values.iter().filter(|&&o| better(o, v)).count()).collect()
}

/// Ranks models metric by metric and averages the ranks.
///
/// Every report must share the backbone and the exact metric list (names,
/// order and directions).
pub fn rank_models(reports: &[MetricReport]) -> Result<RankingTable, AnalysisError> {
    let first = reports.first().ok_or(AnalysisError::NoReports)?;
    let metrics: Vec<String> = first.entries.iter().map(|e| e.name.clone()).collect();
    let directions: Vec<Direction> = first.entries.iter().map(|e| e.direction).collect();
    for r in reports {
        if r.backbone != first.backbone {
            return Err(AnalysisError::HeterogeneousReports(format!(
                "backbone {} differs from {}",
                r.backbone, first.backbone
            )));
        }
        let same = r.entries.len() == metrics.len()
            && r.entries.iter().zip(&metrics).zip(&directions).all(|((e, m), d)| &e.name == m && e.direction == *d);
        if !same {
            return Err(AnalysisError::HeterogeneousReports(format!("{} has a different metric set", r.model_name)));
        }
        if let Some(e) = r.entries.iter().find(|e| e.value.is_nan()) {
            return Err(AnalysisError::InvalidReport(format!("{} of {} is NaN", e.name, r.model_name)));
        }
    }

    let ranks: Vec<Vec<usize>> = (0..metrics.len())
        .map(|m| {
            let col: Vec<f64> = reports.iter().map(|r| r.entries[m].value).collect();
            column_ranks(&col, directions[m])
        })
        .collect();

    let mut rows: Vec<RankRow> = reports
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let cells: Vec<RankCell> = (0..metrics.len())
                .map(|m| {
                    let rank = ranks[m][i];
                    RankCell { value: r.entries[m].value, rank, top1: rank == 1, top2: rank == 2 }
                })
                .collect();
            let average_rank = if cells.is_empty() {
                1.0
            } else {
                cells.iter().map(|c| c.rank as f64).sum::<f64>() / cells.len() as f64
            };
            RankRow { model_name: r.model_name.clone(), cells, average_rank }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.average_rank
            .partial_cmp(&b.average_rank)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.model_name.cmp(&b.model_name))
    });

    Ok(RankingTable { backbone: first.backbone.clone(), metrics, directions, tie_rank: "min".into(), rows })
}

impl RankingTable {
    pub fn row(&self, model: &str) -> Option<&RankRow> {
        self.rows.iter().find(|r| r.model_name == model)
    }

    /// One line per model: value and rank for each metric, then the average.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("model");
        for m in &self.metrics {
            let _ = write!(out, ",{m},{m}_rank");
        }
        out.push_str(",avg_rank\n");
        for r in &self.rows {
            out.push_str(&r.model_name);
            for c in &r.cells {
                let _ = write!(out, ",{},{}", c.value, c.rank);
            }
            let _ = writeln!(out, ",{}", r.average_rank);
        }
        out
    }

    /// Fixed-width table; `*` marks Top-1 and `+` marks Top-2.
    pub fn to_text(&self) -> String {
        let name_w = self.rows.iter().map(|r| r.model_name.len()).max().unwrap_or(5).max(5);
        let col_w = self.metrics.iter().map(|m| m.len()).max().unwrap_or(0).max(12);
        let mut out = format!("{:<name_w$}", "model");
        for m in &self.metrics {
            let _ = write!(out, "  {m:>col_w$}");
        }
        let _ = writeln!(out, "  {:>8}", "avg rank");
        for r in &self.rows {
            let _ = write!(out, "{:<name_w$}", r.model_name);
            for c in &r.cells {
                let mark = if c.top1 {
                    "*"
                } else if c.top2 {
                    "+"
                } else {
                    " "
                };
                let cell = format!("{:.4}{mark}", c.value);
                let _ = write!(out, "  {cell:>col_w$}");
            }
            let _ = writeln!(out, "  {:>8.2}", r.average_rank);
        }
        out.push_str("* Top-1, + Top-2; ties share the minimum rank\n");
        out
    }
}
