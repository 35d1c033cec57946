// SPDX-License-Identifier: Apache-2.0

//! A fixed list of numeric claims, each recomputed from scratch and compared
//! with its stated value. Equation checks are bounded searches; the bound is
//! part of the line.

use num_bigint::BigInt;

use quadclass::arith::is_perfect_square;
use quadclass::diophantine::{
    count_solutions, lucas_squares_upto, solve_2x2_plus_1_eq_3y, solve_x2_plus_1_eq_2kz,
    solve_x4_minus_2y2, BSInstance, Gamma, EXCEPTIONAL_E,
};
use quadclass::{class_number, squarefree_decompose, verify, Budgets, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub label: String,
    pub expected: String,
    pub computed: String,
}

impl Claim {
    fn new(
        label: impl Into<String>,
        expected: impl Into<String>,
        computed: impl Into<String>,
    ) -> Self {
        Self {
            label: label.into(),
            expected: expected.into(),
            computed: computed.into(),
        }
    }

    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }

    pub fn line(&self) -> String {
        let mark = if self.matches() { "match" } else { "MISMATCH" };
        format!(
            "[{mark}] {}: expected {}, computed {}",
            self.label, self.expected, self.computed
        )
    }
}

fn h_text(d: i128) -> String {
    match class_number(d) {
        Ok(h) => h.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn pairs<A: ToString, B: ToString>(sols: &[(A, B)]) -> String {
    if sols.is_empty() {
        return "none".into();
    }
    sols.iter()
        .map(|(a, b)| format!("({},{})", a.to_string(), b.to_string()))
        .collect::<Vec<_>>()
        .join(",")
}

/// Squarefree part of a radicand, or the error text.
fn field_text(m: BigInt) -> String {
    match squarefree_decompose(&m) {
        Ok(s) => s.d.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

fn pow(base: u64, e: u32) -> BigInt {
    BigInt::from(base).pow(e)
}

fn class_number_claims(out: &mut Vec<Claim>) {
    for (d, h) in [
        (-11, 1),
        (-51, 2),
        (-3, 1),
        (-6347, 28),
        (-187, 2),
        (-19, 1),
        (-7, 1),
    ] {
        out.push(Claim::new(
            format!("h({d}) = {h}"),
            h.to_string(),
            h_text(d),
        ));
    }
}

fn field_claims(out: &mut Vec<Claim>) {
    let one_minus = |k: u64, n: u32| 1 - pow(k, n) * 4;
    let t6 = |q: u64, n: u32, e: u32| pow(9, e) - pow(q, n) * 4;
    let cases = [
        ("1 - 4*5^2", one_minus(5, 2), "-11"),
        ("1 - 4*5^4", one_minus(5, 4), "-51"),
        ("1 - 4*13^2", one_minus(13, 2), "-3"),
        ("1 - 4*13^8", one_minus(13, 8), "-6347"),
        ("1 - 4*29^4", one_minus(29, 4), "-187"),
        ("3^4 - 4*5^2", t6(5, 2, 2), "-19"),
        ("3^2 - 4*2^2", t6(2, 2, 1), "-7"),
        ("3^4 - 4*2^6", t6(2, 6, 2), "-7"),
    ];
    for (label, m, d) in cases {
        out.push(Claim::new(
            format!("squarefree part of {label} is {d}"),
            d,
            field_text(m),
        ));
    }
    let sq =
        |v: BigInt| is_perfect_square(&v).map_or("not a square".to_string(), |r| format!("{r}^2"));
    out.push(Claim::new(
        "2*5^1 - (-3)^2 is a square",
        "1^2",
        sq(BigInt::from(10) - 9),
    ));
    out.push(Claim::new(
        "2^(1+1) - 3^1 is a square",
        "1^2",
        sq(BigInt::from(4) - 3),
    ));
}

fn theorem_point_claims(out: &mut Vec<Claim>) {
    let budgets = Budgets::default();
    let points: [(TheoremId, &[u64], u64); 8] = [
        (TheoremId::T5, &[5, 2], 1),
        (TheoremId::T5, &[5, 4], 2),
        (TheoremId::T5, &[13, 2], 1),
        (TheoremId::T5, &[13, 8], 28),
        (TheoremId::T5, &[29, 4], 2),
        (TheoremId::T6, &[5, 2, 2], 1),
        (TheoremId::T6, &[2, 2, 1], 1),
        (TheoremId::T6, &[2, 6, 2], 1),
    ];
    let describe = |h: u64, n: u64| {
        let half = if n % 2 == 0 && h % (n / 2) == 0 {
            "n/2 divides h"
        } else {
            "n/2 does not divide h"
        };
        let full = if h % n == 0 {
            "n divides h"
        } else {
            "n does not divide h"
        };
        format!("h = {h}, {half}, {full}")
    };
    for (theorem, params, h) in points {
        let v = verify(theorem, params, &budgets);
        let label = format!("{theorem} at {}", crate::report::point_label(&v));
        let computed = match v.h {
            Some(got) => describe(got, v.nominal_divisor),
            None => format!("no class number ({})", v.notes),
        };
        out.push(Claim::new(label, describe(h, v.nominal_divisor), computed));
    }
}

fn equation_claims(out: &mut Vec<Claim>) {
    out.push(Claim::new(
        "x^2+1=2*13^z solutions (z <= 60)",
        "(5,1),(239,4)",
        pairs(&solve_x2_plus_1_eq_2kz(13, 60)),
    ));
    out.push(Claim::new(
        "2x^2+1=3^y solutions (y <= 300)",
        "(1,1),(2,2),(11,5)",
        pairs(&solve_2x2_plus_1_eq_3y(300)),
    ));
    out.push(Claim::new(
        "x^4-2y^2=1 solutions (x <= 100000)",
        "none",
        solve_x4_minus_2y2(1, 100_000).map_or_else(|e| e.to_string(), |s| pairs(&s)),
    ));
    out.push(Claim::new(
        "x^4-2y^2=-1 solutions (x <= 100000)",
        "(1,1)",
        solve_x4_minus_2y2(-1, 100_000).map_or_else(|e| e.to_string(), |s| pairs(&s)),
    ));
    let squares = lucas_squares_upto(1000);
    out.push(Claim::new(
        "square Lucas numbers L_n (n <= 1000)",
        "n = 1, 3",
        format!(
            "n = {}",
            squares
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));

    // x^2 + 1 = 2y^4 with y > 1: only y = 13.
    let ys: Vec<u64> = (2..=200_000u64)
        .filter(|&y| is_perfect_square(&(pow(y, 4) * 2 - 1)).is_some())
        .collect();
    out.push(Claim::new(
        "x^2+1=2y^4 with 1 < y <= 200000",
        "y = 13",
        format!(
            "y = {}",
            ys.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
        ),
    ));

    // x^2 + 1 = 2y^z with y > 1 and odd z > 1: no solutions.
    let mut odd_hits = Vec::new();
    for y in 2..=300u64 {
        for (x, z) in solve_x2_plus_1_eq_2kz(y, 41) {
            if z > 1 && z % 2 == 1 {
                odd_hits.push((x, format!("{y}^{z}")));
            }
        }
    }
    out.push(Claim::new(
        "x^2+1=2y^z with 1 < y <= 300, odd 1 < z <= 41",
        "none",
        pairs(&odd_hits),
    ));

    // Solutions at both z = 1 and z = 2 force k = 1 or 5.
    let both: Vec<u64> = (1..=1_000_000u64)
        .filter(|&k| {
            is_perfect_square(&BigInt::from(2 * k - 1)).is_some()
                && is_perfect_square(&(pow(k, 2) * 2 - 1)).is_some()
        })
        .collect();
    out.push(Claim::new(
        "x^2+1=2k^z solvable at z = 1 and z = 2 (k <= 1000000)",
        "k = 1, 5",
        format!(
            "k = {}",
            both.iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));
}

fn exceptional_set_claims(out: &mut Vec<Claim>) {
    for (g2, d1, d2, p) in EXCEPTIONAL_E {
        let label = format!("D1 x^2 + D2 = gamma^2 p^y has two or more solutions at (gamma^2, D1, D2, p) = ({g2}, {d1}, {d2}, {p})");
        let computed = match Gamma::from_square(g2).and_then(|g| BSInstance::new(g, d1, d2, p)) {
            Ok(inst) => {
                let n = count_solutions(&inst, 40).len();
                if n >= 2 {
                    "two or more".to_string()
                } else {
                    format!("{n} found (y <= 40)")
                }
            }
            Err(e) => e.to_string(),
        };
        out.push(Claim::new(label, "two or more", computed));
    }
}

/// Every claim, in a fixed order.
pub fn claims() -> Vec<Claim> {
    let mut out = Vec::new();
    class_number_claims(&mut out);
    field_claims(&mut out);
    theorem_point_claims(&mut out);
    equation_claims(&mut out);
    exceptional_set_claims(&mut out);
    out
}
