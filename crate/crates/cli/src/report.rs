// SPDX-License-Identifier: Apache-2.0

//! Sweep reports in JSON, CSV and plain text.
//!
//! Every integer is written as a decimal string so consumers with 53-bit or
//! 64-bit numbers never see a rounded radicand. The JSON form is the
//! canonical one: parsing it back and serializing again gives the same bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use quadclass::{Budgets, InvariantCheck, OrderPrediction, Summary, SweepReport, TheoremVerdict};

use crate::config::{Format, SweepConfig};

pub const TOOL: &str = "quadclass";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub config: BTreeMap<String, String>,
    pub verdicts: Vec<VerdictRow>,
    pub summary: SummaryRow,
    pub invariants: Vec<InvariantRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub theorem: String,
    pub budgets: BudgetRow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetRow {
    pub factor_cap: String,
    pub disc_cap: String,
    pub witness_bound: String,
}

impl From<&Budgets> for BudgetRow {
    fn from(b: &Budgets) -> Self {
        Self {
            factor_cap: b.factor_cap.to_string(),
            disc_cap: b.disc_cap.to_string(),
            witness_bound: b.witness_bound.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRow {
    /// `name=value` pairs in parameter order, e.g. `q=5 n=2 e=2`.
    pub point: String,
    pub m: Option<String>,
    pub a: Option<String>,
    pub d: Option<String>,
    pub case: String,
    pub expected_divisor: String,
    pub nominal_divisor: String,
    pub h: Option<String>,
    pub published_h: Option<String>,
    pub order_s: Option<String>,
    pub order_prediction: Option<String>,
    pub status: String,
    pub notes: String,
}

fn opt<T: ToString>(v: Option<T>) -> Option<String> {
    v.map(|x| x.to_string())
}

pub fn point_label(v: &TheoremVerdict) -> String {
    v.params
        .iter()
        .map(|(k, x)| format!("{k}={x}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn prediction_text(p: OrderPrediction) -> String {
    match p {
        OrderPrediction::Exact(n) => n.to_string(),
        OrderPrediction::HalfOrFull(n) => format!("{} or {n}", n / 2),
    }
}

impl From<&TheoremVerdict> for VerdictRow {
    fn from(v: &TheoremVerdict) -> Self {
        let dec = v.decomposition.as_ref();
        Self {
            point: point_label(v),
            m: dec.map(|s| s.m.to_string()),
            a: dec.map(|s| s.a.to_string()),
            d: dec.map(|s| s.d.to_string()),
            case: v.case_label.clone(),
            expected_divisor: v.expected_divisor.to_string(),
            nominal_divisor: v.nominal_divisor.to_string(),
            h: opt(v.h),
            published_h: opt(v.published_h),
            order_s: opt(v.order_s),
            order_prediction: v.order_prediction.map(prediction_text),
            status: v.status.to_string(),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub total: String,
    pub pass: String,
    pub fail: String,
    pub not_applicable: String,
    pub excluded: String,
    pub skipped: String,
}

impl From<&Summary> for SummaryRow {
    fn from(s: &Summary) -> Self {
        Self {
            total: s.total.to_string(),
            pass: s.pass.to_string(),
            fail: s.fail.to_string(),
            not_applicable: s.not_applicable.to_string(),
            excluded: s.excluded.to_string(),
            skipped: s.skipped.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantRow {
    pub name: String,
    pub holds: bool,
    pub checked: String,
    pub detail: String,
}

impl From<&InvariantCheck> for InvariantRow {
    fn from(c: &InvariantCheck) -> Self {
        Self {
            name: c.name.clone(),
            holds: c.holds,
            checked: c.checked.to_string(),
            detail: c.detail.clone(),
        }
    }
}

impl Report {
    pub fn build(cfg: &SweepConfig, sweep: &SweepReport) -> Self {
        Self {
            meta: Meta {
                tool: TOOL.into(),
                version: VERSION.into(),
                theorem: sweep.theorem.to_string(),
                budgets: (&cfg.budgets).into(),
            },
            config: cfg.echo(),
            verdicts: sweep.verdicts.iter().map(VerdictRow::from).collect(),
            summary: (&sweep.summary).into(),
            invariants: sweep.invariants.iter().map(InvariantRow::from).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.verdicts {
            w.serialize(row).expect("csv row");
        }
        String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} {}",
            self.meta.tool, self.meta.version, self.meta.theorem
        );
        for v in &self.verdicts {
            let _ = write!(out, "{:<16} {:<15} {:<22}", v.point, v.status, v.case);
            if let Some(d) = &v.d {
                let _ = write!(out, " d={d}");
            }
            if let Some(h) = &v.h {
                let _ = write!(out, " h={h}");
            }
            if let Some(s) = &v.order_s {
                let _ = write!(out, " s={s}");
            }
            if !v.notes.is_empty() {
                let _ = write!(out, "  ({})", v.notes);
            }
            out.push('\n');
        }
        for c in &self.invariants {
            let mark = if c.holds { "ok" } else { "VIOLATED" };
            let _ = write!(out, "invariant {}: {mark} over {}", c.name, c.checked);
            if !c.detail.is_empty() {
                let _ = write!(out, " ({})", c.detail);
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{}", self.summary_line());
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        format!(
            "{}: {} points, {} pass, {} fail, {} not applicable, {} excluded, {} skipped",
            self.meta.theorem, s.total, s.pass, s.fail, s.not_applicable, s.excluded, s.skipped
        )
    }
}

/// Process exit code for a finished sweep: 1 on any failure or broken
/// invariant, or on a skipped point under `strict`; 0 otherwise.
pub fn exit_code(summary: &Summary, invariants_hold: bool, strict: bool) -> i32 {
    if summary.fail > 0 || !invariants_hold || (strict && summary.skipped > 0) {
        1
    } else {
        0
    }
}
