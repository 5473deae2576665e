//! Precision, recall, F1 and confusion matrices over the four emotions.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Emotion;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{gold} gold labels but {pred} predictions")]
    LengthMismatch { gold: usize, pred: usize },
    #[error("nothing to evaluate")]
    Empty,
    #[error("unknown report format {0:?} (expected tsv, json or pretty)")]
    UnknownFormat(String),
    #[error("report json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub class: Emotion,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Gold instances of the class.
    pub support: u64,
    /// No predictions of the class, so precision is reported as 0.
    pub precision_undefined: bool,
    /// No gold instances of the class, so recall is reported as 0.
    pub recall_undefined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    /// `confusion[gold][predicted]`, indexed by emotion ordinal.
    pub confusion: [[u64; Emotion::COUNT]; Emotion::COUNT],
    /// Classes occurring in gold or predictions, in ordinal order.
    pub per_class: Vec<ClassScores>,
    pub micro_precision: f64,
    pub micro_recall: f64,
    pub micro_f1: f64,
    pub n_instances: u64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

pub fn evaluate(gold: &[Emotion], pred: &[Emotion]) -> Result<EvalReport, EvalError> {
    if gold.len() != pred.len() {
        return Err(EvalError::LengthMismatch { gold: gold.len(), pred: pred.len() });
    }
    if gold.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut confusion = [[0u64; Emotion::COUNT]; Emotion::COUNT];
    for (g, p) in gold.iter().zip(pred) {
        confusion[g.index()][p.index()] += 1;
    }

    let mut per_class = Vec::new();
    let (mut tp_all, mut fp_all, mut fn_all) = (0, 0, 0);
    for class in Emotion::ALL {
        let k = class.index();
        let tp = confusion[k][k];
        let support: u64 = confusion[k].iter().sum();
        let predicted: u64 = confusion.iter().map(|row| row[k]).sum();
        tp_all += tp;
        fp_all += predicted - tp;
        fn_all += support - tp;
        if support == 0 && predicted == 0 {
            continue;
        }
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, support);
        per_class.push(ClassScores {
            class,
            precision,
            recall,
            f1: harmonic(precision, recall),
            support,
            precision_undefined: predicted == 0,
            recall_undefined: support == 0,
        });
    }
    let micro_precision = ratio(tp_all, tp_all + fp_all);
    let micro_recall = ratio(tp_all, tp_all + fn_all);
    Ok(EvalReport {
        confusion,
        per_class,
        micro_precision,
        micro_recall,
        micro_f1: harmonic(micro_precision, micro_recall),
        n_instances: gold.len() as u64,
    })
}

impl EvalReport {
    pub fn accuracy(&self) -> f64 {
        let correct: u64 = (0..Emotion::COUNT).map(|k| self.confusion[k][k]).sum();
        ratio(correct, self.n_instances)
    }

    pub fn class(&self, class: Emotion) -> Option<&ClassScores> {
        self.per_class.iter().find(|c| c.class == class)
    }

    pub fn from_json(json: &str) -> Result<Self, EvalError> {
        Ok(serde_json::from_str(json)?)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    #[default]
    Tsv,
    Json,
    Pretty,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Tsv => "tsv",
            ReportFormat::Json => "json",
            ReportFormat::Pretty => "txt",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(ReportFormat::Tsv),
            "json" => Ok(ReportFormat::Json),
            "pretty" => Ok(ReportFormat::Pretty),
            _ => Err(EvalError::UnknownFormat(s.to_string())),
        }
    }
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Tsv => {
            let mut out = String::from("class\tprecision\trecall\tf1\n");
            for row in &report.per_class {
                let _ = writeln!(out, "{}\t{:.3}\t{:.3}\t{:.3}", row.class, row.precision, row.recall, row.f1);
            }
            let _ = writeln!(
                out,
                "micro\t{:.3}\t{:.3}\t{:.3}",
                report.micro_precision, report.micro_recall, report.micro_f1
            );
            out
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_string_pretty(report).expect("report serializes");
            out.push('\n');
            out
        }
        ReportFormat::Pretty => {
            let mut out = format!("{:<10}{:>10}{:>10}{:>10}{:>10}\n", "class", "precision", "recall", "f1", "support");
            for row in &report.per_class {
                let mark = |undefined: bool, v: f64| if undefined { format!("{v:.3}*") } else { format!("{v:.3}") };
                let _ = writeln!(
                    out,
                    "{:<10}{:>10}{:>10}{:>10.3}{:>10}",
                    row.class.name(),
                    mark(row.precision_undefined, row.precision),
                    mark(row.recall_undefined, row.recall),
                    row.f1,
                    row.support
                );
            }
            let _ = writeln!(
                out,
                "{:<10}{:>10.3}{:>10.3}{:>10.3}{:>10}",
                "micro", report.micro_precision, report.micro_recall, report.micro_f1, report.n_instances
            );
            if report.per_class.iter().any(|r| r.precision_undefined || r.recall_undefined) {
                out.push_str("* undefined (zero denominator), shown as 0\n");
            }
            out.push_str("\nconfusion (rows gold, columns predicted)\n");
            let _ = write!(out, "{:<10}", "");
            for e in Emotion::ALL {
                let _ = write!(out, "{:>10}", e.name());
            }
            out.push('\n');
            for e in Emotion::ALL {
                let _ = write!(out, "{:<10}", e.name());
                for count in report.confusion[e.index()] {
                    let _ = write!(out, "{count:>10}");
                }
                out.push('\n');
            }
            out
        }
    }
}
