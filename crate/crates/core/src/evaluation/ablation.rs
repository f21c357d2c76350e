use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::rouge::{build_proxy_gold, RougeReport, RougeScores};
use crate::summarizer::{ControlParams, Engine};

/// One row of the ablation table: which objective terms and score factors
/// are switched on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AblationConfig {
    pub label: String,
    /// Nesting level of the label in the printed table.
    pub depth: usize,
    pub fairness: bool,
    pub redundancy: bool,
    pub readability: bool,
    pub sentiment: bool,
}

impl AblationConfig {
    pub fn new(label: &str, depth: usize, fairness: bool, redundancy: bool, readability: bool, sentiment: bool) -> Self {
        AblationConfig {
            label: label.to_string(),
            depth,
            fairness,
            redundancy,
            readability,
            sentiment,
        }
    }

    /// `base` with this row's switches applied. Redundancy off means λ = 0.
    pub fn apply(&self, base: &ControlParams) -> ControlParams {
        ControlParams {
            fairness: self.fairness,
            penalty_weight: if self.redundancy { base.penalty_weight } else { 0.0 },
            use_readability: self.readability,
            use_sentiment: self.sentiment,
            ..base.clone()
        }
    }
}

/// The seven configurations: the full objective, each constraint removed,
/// and the unconstrained objective with each score factor removed.
pub fn ablation_grid() -> Vec<AblationConfig> {
    vec![
        AblationConfig::new("with all constraints", 0, true, true, true, true),
        AblationConfig::new("w/o Fairness", 0, false, true, true, true),
        AblationConfig::new("w/o Redundancy", 0, true, false, true, true),
        AblationConfig::new("basic", 1, false, false, true, true),
        AblationConfig::new("w/o Readability", 1, false, false, false, true),
        AblationConfig::new("w/o Sentiment", 1, false, false, true, false),
        AblationConfig::new("w/o both", 1, false, false, false, false),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellError {
    pub place: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationRow {
    pub config: AblationConfig,
    pub report: RougeReport,
    pub errors: Vec<CellError>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationReport {
    pub places: Vec<String>,
    pub rows: Vec<AblationRow>,
}

impl AblationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned table of macro-averaged precision (percent), one row per
    /// configuration.
    pub fn render_table(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| 2 * r.config.depth + r.config.label.len())
            .max()
            .unwrap_or(0)
            .max("Method".len());
        let mut out = String::new();
        let _ = writeln!(out, "{:<width$}  {:>7}  {:>7}  {:>7}", "Method", "ROUGE-1", "ROUGE-2", "ROUGE-L");
        let mut nested = false;
        for row in &self.rows {
            if row.config.depth > 0 && !nested {
                let _ = writeln!(out, "{:<width$}", "w/o both constraints");
                nested = true;
            }
            let label = format!("{}{}", "  ".repeat(row.config.depth), row.config.label);
            match row.report.macro_average {
                Some(m) => {
                    let _ = writeln!(
                        out,
                        "{label:<width$}  {:>7.1}  {:>7.1}  {:>7.1}",
                        100.0 * m.rouge1_p,
                        100.0 * m.rouge2_p,
                        100.0 * m.rouge_l_p
                    );
                }
                None => {
                    let _ = writeln!(out, "{label:<width$}  {:>7}  {:>7}  {:>7}", "n/a", "n/a", "n/a");
                }
            }
            for e in &row.errors {
                let _ = writeln!(out, "{:<width$}  error at {}: {}", "", e.place, e.message);
            }
        }
        let _ = writeln!(out, "\nmacro-averaged ROUGE precision over {} places", self.places.len());
        out
    }
}

/// Summarizes every place under every configuration and scores the summary
/// against that place's proxy-gold reference. A failing cell is recorded and
/// the remaining cells still run.
pub fn run_ablation(engine: &Engine, grid: &[AblationConfig], base: &ControlParams) -> AblationReport {
    let places: Vec<String> = engine.places().map(|c| c.place.clone()).collect();
    let references: BTreeMap<&str, String> = engine
        .places()
        .map(|c| (c.place.as_str(), build_proxy_gold(&c.reviews)))
        .collect();
    let rows = grid
        .iter()
        .map(|config| {
            let mut scores = BTreeMap::new();
            let mut errors = Vec::new();
            for place in &places {
                let controls = config.apply(&ControlParams {
                    place: place.clone(),
                    ..base.clone()
                });
                let cell = engine.summarize(&controls).and_then(|summary| {
                    let candidate = summary
                        .entries
                        .iter()
                        .map(|e| e.text.as_str())
                        .collect::<Vec<_>>()
                        .join(" ");
                    RougeScores::compute(&candidate, &references[place.as_str()])
                });
                match cell {
                    Ok(s) => {
                        scores.insert(place.clone(), s);
                    }
                    Err(e) => {
                        tracing::warn!(config = %config.label, %place, error = %e, "ablation cell failed");
                        errors.push(CellError {
                            place: place.clone(),
                            message: e.to_string(),
                        });
                    }
                }
            }
            AblationRow {
                config: config.clone(),
                report: RougeReport::from_places(scores),
                errors,
            }
        })
        .collect();
    AblationReport { places, rows }
}
