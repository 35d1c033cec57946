// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{verify, Budgets, Status, TheoremId, TheoremVerdict};
use crate::error::{Error, Result};

/// Values taken by one grid axis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisSpec {
    Values(Vec<u64>),
    /// Every admissible value given the other coordinates. Only defined for
    /// `e` in T6, where it means all `e >= 1` with `3^(2e) < 4q^n`.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub theorem: TheoremId,
    pub axes: BTreeMap<String, AxisSpec>,
}

impl GridSpec {
    pub fn new(theorem: TheoremId) -> Self {
        Self {
            theorem,
            axes: BTreeMap::new(),
        }
    }

    pub fn axis(mut self, name: &str, spec: AxisSpec) -> Self {
        self.axes.insert(name.to_string(), spec);
        self
    }

    pub fn values(self, name: &str, values: impl IntoIterator<Item = u64>) -> Self {
        self.axis(name, AxisSpec::Values(values.into_iter().collect()))
    }

    /// Grid points in parameter order, last axis varying fastest.
    pub fn points(&self) -> Result<Vec<Vec<u64>>> {
        let names = self.theorem.param_names();
        for key in self.axes.keys() {
            if !names.contains(&key.as_str()) {
                return Err(Error::Precondition(format!(
                    "{} has no parameter {key:?}",
                    self.theorem
                )));
            }
        }
        let mut points: Vec<Vec<u64>> = vec![Vec::new()];
        for &name in names {
            let spec = self.axes.get(name).ok_or_else(|| {
                Error::Precondition(format!(
                    "missing values for {name} in {} grid",
                    self.theorem
                ))
            })?;
            let mut next = Vec::new();
            for prefix in &points {
                let values = match spec {
                    AxisSpec::Values(v) => v.clone(),
                    AxisSpec::Auto if self.theorem == TheoremId::T6 && name == "e" => {
                        auto_e(prefix[0], prefix[1])
                    }
                    AxisSpec::Auto => {
                        return Err(Error::Precondition(format!(
                            "axis {name} of {} has no automatic range",
                            self.theorem
                        )))
                    }
                };
                for value in values {
                    let mut p = prefix.clone();
                    p.push(value);
                    next.push(p);
                }
            }
            points = next;
        }
        if names.is_empty() || points.iter().any(|p| p.len() != names.len()) {
            return Ok(Vec::new());
        }
        Ok(points)
    }
}

/// All `e >= 1` with `9^e < 4 q^n`.
fn auto_e(q: u64, n: u64) -> Vec<u64> {
    let bound = num_traits::pow(BigInt::from(q), n as usize) * 4;
    let mut out = Vec::new();
    let mut nine = BigInt::from(9);
    let mut e = 1;
    while nine < bound {
        out.push(e);
        e += 1;
        nine *= 9;
    }
    out
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_applicable: usize,
    pub excluded: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn from_verdicts(verdicts: &[TheoremVerdict]) -> Self {
        let mut s = Summary {
            total: verdicts.len(),
            ..Summary::default()
        };
        for v in verdicts {
            match v.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::NotApplicable => s.not_applicable += 1,
                Status::Excluded => s.excluded += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

/// A property checked across all points of a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantCheck {
    pub name: String,
    pub holds: bool,
    /// Number of points (or groups of points) the check looked at.
    pub checked: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub theorem: TheoremId,
    pub verdicts: Vec<TheoremVerdict>,
    pub summary: Summary,
    pub invariants: Vec<InvariantCheck>,
}

impl SweepReport {
    pub fn from_verdicts(theorem: TheoremId, verdicts: Vec<TheoremVerdict>) -> Self {
        let summary = Summary::from_verdicts(&verdicts);
        let invariants = invariants(theorem, &verdicts);
        Self {
            theorem,
            verdicts,
            summary,
            invariants,
        }
    }

    pub fn invariants_hold(&self) -> bool {
        self.invariants.iter().all(|c| c.holds)
    }
}

/// Evaluates every grid point on `workers` threads. Verdicts come back in
/// grid order whatever the thread count.
pub fn sweep(grid: &GridSpec, budgets: &Budgets, workers: usize) -> Result<SweepReport> {
    let points = grid.points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let theorem = grid.theorem;
    let verdicts: Vec<TheoremVerdict> = pool.install(|| {
        points
            .par_iter()
            .map(|p| verify(theorem, p, budgets))
            .collect()
    });
    Ok(SweepReport::from_verdicts(theorem, verdicts))
}

fn check(name: &str, checked: usize, failures: Vec<String>) -> InvariantCheck {
    InvariantCheck {
        name: name.to_string(),
        holds: failures.is_empty(),
        checked,
        detail: failures.join("; "),
    }
}

fn point_label(v: &TheoremVerdict) -> String {
    let parts: Vec<String> = v.params.iter().map(|(k, x)| format!("{k}={x}")).collect();
    parts.join(",")
}

fn invariants(theorem: TheoremId, verdicts: &[TheoremVerdict]) -> Vec<InvariantCheck> {
    let mut out = vec![decomposition_identity(theorem, verdicts)];
    match theorem {
        TheoremId::T5 => {
            out.push(t5_at_most_one_exception(verdicts));
            out.push(t5_d_not_minus_three(verdicts));
            out.push(order_strengthening(verdicts, |_| false));
        }
        TheoremId::T6 => {
            out.push(t6_congruence(verdicts));
            out.push(order_strengthening(verdicts, |v| v.case_label == "(3.2)"));
        }
        _ => {}
    }
    out
}

/// `a^2 d` equals the radicand at every decomposed point.
fn decomposition_identity(theorem: TheoremId, verdicts: &[TheoremVerdict]) -> InvariantCheck {
    let mut checked = 0;
    let mut bad = Vec::new();
    for v in verdicts {
        let Some(dec) = &v.decomposition else {
            continue;
        };
        checked += 1;
        let params: Vec<u64> = v.params.iter().map(|&(_, x)| x).collect();
        let m = theorem.radicand(&params);
        if &dec.a * &dec.a * &dec.d != m || dec.m != m {
            bad.push(point_label(v));
        }
    }
    check("a^2 d = m", checked, bad)
}

/// For each `k` outside `{5, 13}`, at most one `n` with `n` not dividing
/// `h`, and that `n` is 2 or 4.
fn t5_at_most_one_exception(verdicts: &[TheoremVerdict]) -> InvariantCheck {
    let mut by_k: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
    for v in verdicts {
        let (Some(k), Some(n)) = (v.param("k"), v.param("n")) else {
            continue;
        };
        if k == 5 || k == 13 || v.status == Status::NotApplicable {
            continue;
        }
        let entry = by_k.entry(k).or_default();
        if v.full_divisibility() == Some(false) {
            entry.insert(n);
        }
    }
    let mut bad = Vec::new();
    for (k, ns) in &by_k {
        if ns.len() > 1 || ns.iter().any(|n| *n != 2 && *n != 4) {
            bad.push(format!("k={k}: n not dividing h: {ns:?}"));
        }
    }
    check(
        "at most one exceptional n per k, in {2, 4}",
        by_k.len(),
        bad,
    )
}

fn t5_d_not_minus_three(verdicts: &[TheoremVerdict]) -> InvariantCheck {
    let mut checked = 0;
    let mut bad = Vec::new();
    for v in verdicts {
        let (Some(k), Some(n), Some(d)) = (v.param("k"), v.param("n"), v.d()) else {
            continue;
        };
        let allowed = match k {
            5 => n == 2 || n == 4,
            13 => n == 2 || n == 8,
            _ => n == 2,
        };
        if allowed {
            continue;
        }
        checked += 1;
        if d == -3 {
            bad.push(point_label(v));
        }
    }
    check("d != -3", checked, bad)
}

/// Order is `n` at points with an exact prediction, `n/2` or `n` otherwise.
fn order_strengthening(
    verdicts: &[TheoremVerdict],
    skip: impl Fn(&TheoremVerdict) -> bool,
) -> InvariantCheck {
    let mut checked = 0;
    let mut bad = Vec::new();
    for v in verdicts {
        let (Some(s), Some(pred)) = (v.order_s, v.order_prediction) else {
            continue;
        };
        if skip(v) {
            continue;
        }
        checked += 1;
        if !pred.admits(s) {
            bad.push(format!("{}: s = {s}, predicted {pred:?}", point_label(v)));
        }
    }
    check("class order strengthening", checked, bad)
}

/// `d = 5 mod 8` for odd `q`, `d = 1 mod 8` for `q = 2`.
fn t6_congruence(verdicts: &[TheoremVerdict]) -> InvariantCheck {
    let mut checked = 0;
    let mut bad = Vec::new();
    for v in verdicts {
        let (Some(q), Some(d)) = (v.param("q"), v.d()) else {
            continue;
        };
        if v.status == Status::NotApplicable {
            continue;
        }
        checked += 1;
        let want = if q == 2 { 1 } else { 5 };
        if d.rem_euclid(8) != want {
            bad.push(format!("{}: d = {d}", point_label(v)));
        }
    }
    check("d mod 8", checked, bad)
}
