// SPDX-License-Identifier: Apache-2.0

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, TestRng, TestRunner};
use quadclass::arith::is_prime;
use quadclass::diophantine::{
    lucas_squares_upto, solve_2x2_plus_1_eq_3y, solve_x2_plus_1_eq_2kz, solve_x4_minus_2y2,
    thm6_square_condition, SquareCondition,
};
use quadclass::quadfield::{class_number, fundamental_discriminant, reduced_forms};
use quadclass::theorems::verify_thm6;
use quadclass::{sweep, AxisSpec, Budgets, GridSpec, Status, SweepReport, TheoremId};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(2, |n| n.get())
}

/// Default budgets with the discriminant cap lifted to the factorization
/// cap, so every point whose radicand can be factored is decided.
fn budgets() -> Budgets {
    let b = Budgets::default();
    Budgets {
        disc_cap: b.factor_cap,
        ..b
    }
}

fn run_sweep(grid: GridSpec) -> Result<SweepReport, String> {
    sweep(&grid, &budgets(), workers()).map_err(|e| e.to_string())
}

fn no_failures(r: &SweepReport) -> Result<(), String> {
    let failed: Vec<String> = r
        .verdicts
        .iter()
        .filter(|v| v.status == Status::Fail)
        .map(|v| format!("{:?}: {}", v.params, v.notes))
        .collect();
    ensure(failed.is_empty(), || {
        format!("failures: {}", failed.join(" | "))
    })?;
    let broken: Vec<String> = r
        .invariants
        .iter()
        .filter(|c| !c.holds)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    ensure(broken.is_empty(), || {
        format!("invariants: {}", broken.join(" | "))
    })
}

fn summary_line(r: &SweepReport) -> String {
    let s = r.summary;
    format!(
        "{} points: {} pass, {} fail, {} n/a, {} excluded, {} skipped",
        s.total, s.pass, s.fail, s.not_applicable, s.excluded, s.skipped
    )
}

fn published_values() -> Outcome {
    for (d, h) in [
        (-11, 1),
        (-51, 2),
        (-3, 1),
        (-6347, 28),
        (-187, 2),
        (-19, 1),
        (-7, 1),
    ] {
        let got = class_number(d).map_err(|e| e.to_string())?;
        ensure(got == h, || format!("h({d}) = {got}, expected {h}"))?;
    }
    let v = verify_thm6(2, 6, 2, &Budgets::default());
    ensure(v.d() == Some(-7) && v.h == Some(1), || {
        format!("(2,6,2) gave {v:?}")
    })?;
    Ok("h(-11), h(-51), h(-3), h(-6347), h(-187), h(-19), h(-7); (2,6,2) -> Q(sqrt(-7))".into())
}

fn diophantine_lists() -> Outcome {
    let b = |x: i64| BigInt::from(x);
    let s = solve_x2_plus_1_eq_2kz(13, 20);
    ensure(s == vec![(b(5), 1), (b(239), 4)], || {
        format!("x^2+1=2*13^z: {s:?}")
    })?;
    let s = solve_2x2_plus_1_eq_3y(40);
    ensure(s == vec![(b(1), 1), (b(2), 2), (b(11), 5)], || {
        format!("2x^2+1=3^y: {s:?}")
    })?;
    let s = solve_x4_minus_2y2(1, 10_000).map_err(|e| e.to_string())?;
    ensure(s.is_empty(), || format!("x^4-2y^2=1: {s:?}"))?;
    let s = solve_x4_minus_2y2(-1, 10_000).map_err(|e| e.to_string())?;
    ensure(s == vec![(1, b(1))], || format!("x^4-2y^2=-1: {s:?}"))?;
    let s = lucas_squares_upto(1000);
    ensure(s == vec![1, 3], || format!("Lucas squares: {s:?}"))?;
    Ok("all four lists exact".into())
}

fn thm2_sweep() -> Outcome {
    let r = run_sweep(
        GridSpec::new(TheoremId::T2)
            .values("k", 2..=50)
            .values("n", [3, 5, 7, 9]),
    )?;
    no_failures(&r)?;
    ensure(r.summary.pass > 0, || "no point was computed".into())?;
    Ok(summary_line(&r))
}

fn thm5_sweep() -> Outcome {
    let r = run_sweep(
        GridSpec::new(TheoremId::T5)
            .values("k", (3..=99).step_by(2))
            .values("n", 2..=10),
    )?;
    no_failures(&r)?;
    let stray: Vec<_> = r
        .verdicts
        .iter()
        .filter(|v| v.full_divisibility() == Some(false))
        .filter_map(|v| Some((v.param("k")?, v.param("n")?)))
        .filter(|&(k, n)| !(n == 2 || n == 4 || (k, n) == (13, 8)))
        .collect();
    ensure(stray.is_empty(), || {
        format!("exceptional points off {{2, 4}}: {stray:?}")
    })?;
    let exceptional = r
        .verdicts
        .iter()
        .filter(|v| v.full_divisibility() == Some(false))
        .count();
    Ok(format!(
        "{}; {exceptional} exceptional points",
        summary_line(&r)
    ))
}

fn thm6_sweep() -> Outcome {
    let primes: Vec<u64> = (2..=47)
        .filter(|&q| q != 3 && is_prime(q as u128))
        .collect();
    let r = run_sweep(
        GridSpec::new(TheoremId::T6)
            .values("q", primes)
            .values("n", 1..=10)
            .axis("e", AxisSpec::Auto),
    )?;
    no_failures(&r)?;
    let mut half_points = 0;
    let mut orders = 0;
    for v in &r.verdicts {
        let (Some(h), Some(n)) = (v.h, v.param("n")) else {
            continue;
        };
        let half = matches!(v.case_label.as_str(), "(2.2)" | "(3.1.3)");
        if half {
            half_points += 1;
            ensure(h % (n / 2) == 0, || {
                format!("{:?}: n/2 does not divide {h}", v.params)
            })?;
        }
        if v.case_label == "(3.2)" {
            continue;
        }
        let Some(s) = v.order_s else { continue };
        orders += 1;
        ensure(s == n || 2 * s == n, || {
            format!("{:?}: order {s}", v.params)
        })?;
        ensure(half || s == n, || {
            format!("{:?}: order {s} at a full point", v.params)
        })?;
    }
    Ok(format!(
        "{}; {half_points} half-case points, {orders} class orders checked",
        summary_line(&r)
    ))
}

fn section4_sweeps() -> Outcome {
    let r1 = run_sweep(
        GridSpec::new(TheoremId::T41)
            .values("x", [1, 3, 5])
            .values("k", 2..=20)
            .values("n", 3..=8),
    )?;
    no_failures(&r1)?;
    let r2 = run_sweep(
        GridSpec::new(TheoremId::T42)
            .values("l", [3, 5, 7, 11])
            .values("e", 0..=3)
            .values("n", 1..=8),
    )?;
    no_failures(&r2)?;
    ensure(r2.summary.excluded == 4, || {
        "expected (4, 0) excluded once per l".into()
    })?;
    Ok(format!(
        "t41 {}; t42 {}",
        summary_line(&r1),
        summary_line(&r2)
    ))
}

fn sample<S: Strategy>(runner: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(runner).expect("strategy").current()
}

fn properties() -> Outcome {
    let mut runner = TestRunner::new_with_rng(
        Config::default(),
        TestRng::deterministic_rng(Default::default()),
    );

    // Traces of odd prime powers of non-units.
    let fields = [
        -7i64, -11, -15, -19, -23, -31, -35, -43, -51, -1, -2, -5, -6,
    ];
    let mut trace_samples = 0;
    let mut i = 0;
    while trace_samples < 1200 {
        let d = fields[i % fields.len()];
        let rho = sample(&mut runner, &(-60i64..=60));
        let theta = sample(&mut runner, &(-60i64..=60));
        let p = [3, 5, 7][i % 3];
        if common::trace_one_power_is_unit(rho, theta, d, p)? {
            trace_samples += 1;
        }
        i += 1;
    }

    let powers = power_tests_on_grids()?;

    // Group laws.
    let discs = [
        -23i128, -47, -71, -143, -187, -499, -2491, -3999, -6347, -777923,
    ];
    let mut triples = 0;
    for &disc in &discs {
        for _ in 0..100 {
            let [a, b, c] = sample(&mut runner, &[0u64..10_000, 0u64..10_000, 0u64..10_000]);
            common::group_laws(
                common::form_from_seed(disc, a),
                common::form_from_seed(disc, b),
                common::form_from_seed(disc, c),
            )?;
            triples += 1;
        }
    }

    // Both roots above a split prime.
    let mut split = 0;
    for &disc in &discs {
        for p in (2u64..2000).filter(|&p| is_prime(p as u128)) {
            match common::conjugate_roots_agree(p, disc) {
                Ok(()) => split += 1,
                Err(e) if e.contains("split") || e.contains("ramified") => {}
                Err(e) => return Err(e),
            }
        }
    }
    ensure(split >= 100, || format!("only {split} split primes"))?;
    Ok(format!(
        "{trace_samples} trace samples, {powers} power tests, {triples} form triples, {split} split primes"
    ))
}

/// No unit multiple of `(x + a sqrt d)/2` is a `p`-th power at the grid
/// points where the proofs rule that out.
fn power_tests_on_grids() -> Result<usize, String> {
    let mut tests = 0;
    let mut check = |x: BigInt, m: BigInt, p: u32, label: String| -> Result<(), String> {
        let Some(elt) = common::half_element(&x, &m) else {
            return Ok(());
        };
        tests += 1;
        ensure(!common::plus_minus_power(&elt, p), || {
            format!("{label}: {elt} is a {p}-th power")
        })
    };

    for k in (3u64..=99).step_by(2) {
        let mut squares_at_2_and_4 = 0;
        for n in 2u64..=10 {
            let m: BigInt = BigInt::from(1) - num_traits::pow(BigInt::from(k), n as usize) * 4;
            for p in common::primes_dividing(n, false) {
                check(BigInt::from(1), m.clone(), p, format!("k={k}, n={n}"))?;
            }
            if n % 2 == 0 {
                let rules_out = match k {
                    13 => n != 2 && n != 8,
                    _ => n != 2 && n != 4,
                };
                if rules_out {
                    check(BigInt::from(1), m.clone(), 2, format!("k={k}, n={n}"))?;
                } else if k != 5 && k != 13 {
                    if let Some(elt) = common::half_element(&BigInt::from(1), &m) {
                        if common::plus_minus_power(&elt, 2) {
                            squares_at_2_and_4 += 1;
                        }
                    }
                }
            }
        }
        ensure(squares_at_2_and_4 < 2, || {
            format!("k={k}: squares at both n = 2 and n = 4")
        })?;
    }

    for q in (2u64..=47).filter(|&q| q != 3 && is_prime(q as u128)) {
        for n in 1u64..=10 {
            let four_qn = num_traits::pow(BigInt::from(q), n as usize) * 4;
            let mut e = 1u32;
            loop {
                let three_e = num_traits::pow(BigInt::from(3), e as usize);
                if &three_e * &three_e >= four_qn {
                    break;
                }
                if (q, n, e) == (2, 6, 2) {
                    e += 1;
                    continue;
                }
                let half_case = n % 4 == 2
                    && (q == 2 || q % 3 == 2)
                    && matches!(
                        thm6_square_condition(q, n as u32, e),
                        Ok(SquareCondition::Square(_))
                    );
                let m = &three_e * &three_e - &four_qn;
                for p in common::primes_dividing(n, !half_case) {
                    check(
                        three_e.clone(),
                        m.clone(),
                        p,
                        format!("q={q}, n={n}, e={e}"),
                    )?;
                }
                e += 1;
            }
        }
    }
    Ok(tests)
}

fn oracle_equivalence() -> Outcome {
    let discs = common::fundamental_discriminants(-10_000);
    for &disc in &discs {
        let want = common::brute_class_number(disc);
        let d = common::field_of(disc);
        ensure(
            fundamental_discriminant(d as i128).ok() == Some(disc as i128),
            || format!("fundamental discriminant of {d}"),
        )?;
        let got = class_number(d as i128).map_err(|e| e.to_string())?;
        ensure(got == want, || {
            format!("h({disc}): library {got}, brute force {want}")
        })?;
        let forms = reduced_forms(disc as i128).map_err(|e| e.to_string())?;
        ensure(forms.len() as u64 == want, || {
            format!("form list of {disc}")
        })?;
    }
    Ok(format!("{} fundamental discriminants", discs.len()))
}

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 published class numbers", published_values, 5),
        ("2 diophantine lists", diophantine_lists, 10),
        ("3 t2 sweep", thm2_sweep, 120),
        ("4 t5 sweep", thm5_sweep, 300),
        ("5 t6 sweep", thm6_sweep, 300),
        ("6 t41/t42 sweeps", section4_sweeps, 180),
        ("7 property suites", properties, 120),
        ("8 oracle equivalence", oracle_equivalence, 60),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{msg}; took {elapsed:.1?}, limit {limit}s"))
            }
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {name} ({elapsed:.1?}): {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({elapsed:.1?}): {msg}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
