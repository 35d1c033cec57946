// SPDX-License-Identifier: Apache-2.0

//! Command-line front end for the `quadclass` library.
//!
//! [`run`] does all the work and returns the exit code, so the binary is a
//! thin wrapper and tests can drive commands in-process.
//!
//! Exit codes: 0 success, 1 a failed verdict, broken invariant or claim
//! mismatch, 2 a usage or configuration error.

pub mod cache;
pub mod checklist;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use quadclass::diophantine::{
    classify_bs, count_solutions, lemma32_uniqueness, lucas_squares_upto, solve_2x2_plus_1_eq_3y,
    solve_x2_plus_1_eq_2kz, solve_x4_minus_2y2, thm6_square_condition, BSInstance, Gamma,
    SquareCondition, DEFAULT_WITNESS_BOUND,
};
use quadclass::quadfield::{class_group, fundamental_discriminant};
use quadclass::{squarefree_decompose, sweep, ClassGroupCache};

use crate::config::{RawConfig, SweepConfig};
use crate::report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Forms are listed only up to this `|D|`; larger groups print `h` alone.
const FORM_LISTING_DISC: i128 = 1_000_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "quadclass",
    version,
    about = "Class numbers of imaginary quadratic fields Q(sqrt(x^2 - 4k^n))"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class number and reduced forms of Q(sqrt(d)) for negative d.
    Classnum {
        #[arg(allow_negative_numbers = true)]
        d: BigInt,
        /// List at most this many reduced forms.
        #[arg(long, default_value_t = 20)]
        max_forms: usize,
    },
    /// Writes m as a^2 * d with d squarefree.
    Squarefree {
        #[arg(allow_negative_numbers = true)]
        m: BigInt,
    },
    /// Checks a theorem at one point or over ranges, e.g. `verify t5 --k 29 --n 4`.
    #[command(disable_help_flag = true)]
    Verify {
        theorem: String,
        /// Axis and option flags, as in a config file: --k 3..99:2, --format csv, --config FILE.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        rest: Vec<String>,
    },
    /// Runs a sweep described by a config file. Extra flags override it.
    #[command(disable_help_flag = true)]
    Sweep {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        rest: Vec<String>,
    },
    /// Bounded solution search for one of the auxiliary equations.
    Dioph {
        /// x2+1=2kz, x4-2y2=1, x4-2y2=-1, 2x2+1=3y, lucas-squares,
        /// d1x2+9e=4qy or square-condition.
        equation: String,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        e: Option<u32>,
        #[arg(long)]
        d1: Option<u64>,
        /// Search bound on the free exponent or variable.
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Membership of (gamma, D1, D2, p) in the exceptional parameter sets.
    BsClassify {
        /// gamma^2: 1, 2 or 4.
        #[arg(long)]
        gamma_sq: u64,
        #[arg(long)]
        d1: u64,
        #[arg(long)]
        d2: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = DEFAULT_WITNESS_BOUND)]
        bound: u64,
        /// Also list solutions of D1 x^2 + D2 = gamma^2 p^y with y up to this.
        #[arg(long, default_value_t = 40)]
        y_max: u32,
    },
    /// Recomputes every stated numeric example and prints a checklist.
    #[command(name = "paper-examples")]
    Examples,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// A message for stderr plus an exit code.
struct Failure(i32, String);

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn io_err(e: std::io::Error) -> Failure {
    Failure(EXIT_FAIL, format!("i/o error: {e}"))
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut io = Io { out, err };

    let mut disk = cache::DiskCache::from_env();
    if let Some(disk) = disk.as_mut() {
        for w in disk.load_into(ClassGroupCache::global()) {
            let _ = writeln!(io.err, "warning: {w}");
        }
    }

    let result = match cli.command {
        Command::Classnum { d, max_forms } => cmd_classnum(&d, max_forms, &mut io),
        Command::Squarefree { m } => cmd_squarefree(&m, &mut io),
        Command::Verify { theorem, rest } => {
            let mut raw = RawConfig::new();
            match raw.set("theorem", &theorem) {
                Ok(()) => cmd_sweep(raw, &rest, &mut io),
                Err(e) => Err(usage(e.0)),
            }
        }
        Command::Sweep { rest } => {
            if !rest
                .iter()
                .any(|a| a == "--config" || a.starts_with("--config="))
            {
                Err(usage("sweep needs --config <file>"))
            } else {
                cmd_sweep(RawConfig::new(), &rest, &mut io)
            }
        }
        Command::Dioph {
            equation,
            k,
            q,
            n,
            e,
            d1,
            bound,
        } => cmd_dioph(
            &equation,
            DiophArgs {
                k,
                q,
                n,
                e,
                d1,
                bound,
            },
            &mut io,
        ),
        Command::BsClassify {
            gamma_sq,
            d1,
            d2,
            p,
            bound,
            y_max,
        } => cmd_bs_classify(gamma_sq, d1, d2, p, bound, y_max, &mut io),
        Command::Examples => cmd_examples(&mut io),
    };

    if let Some(disk) = disk.as_mut() {
        if let Err(e) = disk.save_from(ClassGroupCache::global()) {
            let _ = writeln!(
                io.err,
                "warning: cannot update {}: {e}",
                disk.path().display()
            );
        }
    }

    match result {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(io.err, "error: {msg}");
            code
        }
    }
}

fn cmd_classnum(d: &BigInt, max_forms: usize, io: &mut Io) -> CmdResult {
    if d.sign() != num_bigint::Sign::Minus {
        return Err(usage(format!("classnum needs a negative d, got {d}")));
    }
    let dec = squarefree_decompose(d).map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
    if dec.a != BigInt::from(1) {
        writeln!(io.out, "{d} = {}^2 * {}; using d = {}", dec.a, dec.d, dec.d).map_err(io_err)?;
    }
    let sd: i128 =
        i128::try_from(&dec.d).map_err(|_| usage(format!("d = {} is out of range", dec.d)))?;
    let disc = fundamental_discriminant(sd).map_err(|e| usage(e.to_string()))?;
    let h = quadclass::class_number(sd).map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
    writeln!(io.out, "d = {sd}").map_err(io_err)?;
    writeln!(io.out, "discriminant = {disc}").map_err(io_err)?;
    writeln!(io.out, "h = {h}").map_err(io_err)?;
    if max_forms > 0 && -disc <= FORM_LISTING_DISC {
        let group = class_group(disc).map_err(|e| Failure(EXIT_FAIL, e.to_string()))?;
        writeln!(io.out, "reduced forms:").map_err(io_err)?;
        for f in group.forms.iter().take(max_forms) {
            writeln!(io.out, "  {f}").map_err(io_err)?;
        }
        if group.forms.len() > max_forms {
            writeln!(io.out, "  ... {} more", group.forms.len() - max_forms).map_err(io_err)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_squarefree(m: &BigInt, io: &mut Io) -> CmdResult {
    let dec = squarefree_decompose(m).map_err(|e| usage(e.to_string()))?;
    writeln!(io.out, "{} = {}^2 * {}", dec.m, dec.a, dec.d).map_err(io_err)?;
    Ok(EXIT_OK)
}

/// Resolves `base` + optional `--config` file + the remaining flags.
fn resolve_config(base: RawConfig, rest: &[String]) -> Result<SweepConfig, Failure> {
    let mut file = None;
    let mut flags = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        if let Some(p) = rest[i].strip_prefix("--config=") {
            file = Some(PathBuf::from(p));
        } else if rest[i] == "--config" {
            let p = rest
                .get(i + 1)
                .ok_or_else(|| usage("--config needs a path"))?;
            file = Some(PathBuf::from(p));
            i += 1;
        } else {
            flags.push(rest[i].clone());
        }
        i += 1;
    }
    let from_file = match file {
        Some(p) => RawConfig::load(&p).map_err(|e| usage(e.0))?,
        None => RawConfig::new(),
    };
    let from_flags = RawConfig::parse_flags(&flags).map_err(|e| usage(e.0))?;
    let merged = from_file
        .merged(&base)
        .and_then(|r| r.merged(&from_flags))
        .map_err(|e| usage(e.0))?;
    merged.resolve().map_err(|e| usage(e.0))
}

/// Runs the sweep a config describes. Returns the report and its exit code.
pub fn run_config(cfg: &SweepConfig) -> quadclass::Result<(Report, i32)> {
    let result = sweep(&cfg.grid(), &cfg.budgets, cfg.workers)?;
    let report = Report::build(cfg, &result);
    let code = report::exit_code(&result.summary, result.invariants_hold(), cfg.strict);
    Ok((report, code))
}

fn cmd_sweep(base: RawConfig, rest: &[String], io: &mut Io) -> CmdResult {
    let cfg = resolve_config(base, rest)?;
    let (report, code) = run_config(&cfg).map_err(|e| usage(e.to_string()))?;
    let text = report.render(cfg.format);
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).map_err(io_err)?;
            writeln!(io.out, "{}", report.summary_line()).map_err(io_err)?;
        }
        None => {
            io.out.write_all(text.as_bytes()).map_err(io_err)?;
            writeln!(io.err, "{}", report.summary_line()).map_err(io_err)?;
        }
    }
    Ok(code)
}

struct DiophArgs {
    k: Option<u64>,
    q: Option<u64>,
    n: Option<u32>,
    e: Option<u32>,
    d1: Option<u64>,
    bound: u64,
}

fn need<T>(v: Option<T>, flag: &str, equation: &str) -> Result<T, Failure> {
    v.ok_or_else(|| usage(format!("{equation} needs --{flag}")))
}

fn small_bound(bound: u64) -> Result<u32, Failure> {
    u32::try_from(bound).map_err(|_| usage(format!("--bound {bound} is too large for an exponent")))
}

fn show_pairs<A: std::fmt::Display, B: std::fmt::Display>(sols: &[(A, B)]) -> String {
    if sols.is_empty() {
        return "none".into();
    }
    sols.iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_dioph(equation: &str, a: DiophArgs, io: &mut Io) -> CmdResult {
    let line = match equation {
        "x2+1=2kz" => {
            let k = need(a.k, "k", equation)?;
            let sols = solve_x2_plus_1_eq_2kz(k, small_bound(a.bound)?);
            format!(
                "x^2 + 1 = 2*{k}^z, z <= {}: (x, z) = {}",
                a.bound,
                show_pairs(&sols)
            )
        }
        "x4-2y2=1" | "x4-2y2=-1" => {
            let rhs = if equation.ends_with("=-1") { -1 } else { 1 };
            let sols = solve_x4_minus_2y2(rhs, a.bound).map_err(|e| usage(e.to_string()))?;
            format!(
                "x^4 - 2y^2 = {rhs}, x <= {}: (x, y) = {}",
                a.bound,
                show_pairs(&sols)
            )
        }
        "2x2+1=3y" => {
            let sols = solve_2x2_plus_1_eq_3y(small_bound(a.bound)?);
            format!(
                "2x^2 + 1 = 3^y, y <= {}: (x, y) = {}",
                a.bound,
                show_pairs(&sols)
            )
        }
        "lucas-squares" => {
            let idx = lucas_squares_upto(small_bound(a.bound)?);
            let list: Vec<_> = idx.iter().map(|n| format!("L_{n}")).collect();
            format!(
                "square Lucas numbers up to L_{}: {}",
                a.bound,
                list.join(" ")
            )
        }
        "d1x2+9e=4qy" => {
            let d1 = need(a.d1, "d1", equation)?;
            let e = need(a.e, "e", equation)?;
            let q = need(a.q, "q", equation)?;
            let check = lemma32_uniqueness(d1, e, q, small_bound(a.bound)?)
                .map_err(|e| usage(e.to_string()))?;
            format!(
                "{d1} x^2 + 3^{} = 4*{q}^y, y <= {}: (x, y) = {}; at most one: {}",
                2 * e,
                a.bound,
                show_pairs(&check.solutions),
                check.holds()
            )
        }
        "square-condition" => {
            let q = need(a.q, "q", equation)?;
            let n = need(a.n, "n", equation)?;
            let e = need(a.e, "e", equation)?;
            let cond = thm6_square_condition(q, n, e).map_err(|e| usage(e.to_string()))?;
            let what = if q == 2 {
                format!("2^({n}/2 + 1) - 3^{e}")
            } else {
                format!("2*{q}^({n}/2) - (-3)^{e}")
            };
            match cond {
                SquareCondition::Square(r) => format!("{what} = {r}^2 is a square"),
                SquareCondition::NotSquare => format!("{what} is not a square"),
                SquareCondition::NotApplicable => "q = 2 with even e: no square condition".into(),
            }
        }
        other => {
            return Err(usage(format!(
                "unknown equation {other:?}; expected x2+1=2kz, x4-2y2=1, x4-2y2=-1, 2x2+1=3y, \
                 lucas-squares, d1x2+9e=4qy or square-condition"
            )))
        }
    };
    writeln!(io.out, "{line}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_bs_classify(
    gamma_sq: u64,
    d1: u64,
    d2: u64,
    p: u64,
    bound: u64,
    y_max: u32,
    io: &mut Io,
) -> CmdResult {
    let inst = Gamma::from_square(gamma_sq)
        .and_then(|g| BSInstance::new(g, d1, d2, p))
        .map_err(|e| usage(e.to_string()))?;
    let c = classify_bs(&inst, bound);
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let w = &mut io.out;
    let lines = [
        format!("instance: {d1} x^2 + {d2} = {gamma_sq} * {p}^y"),
        format!("in E: {}", yes_no(c.in_e)),
        match c.in_f {
            Some(f) => format!("in F: yes (h1 = {}, eps = {})", f.h1, f.eps),
            None => "in F: no".into(),
        },
        match c.in_g {
            Some(h2) => format!("in G: yes (h2 = {h2})"),
            None => "in G: no".into(),
        },
        match c.in_h {
            Some((s0, t0)) => format!("in H: yes (s0 = {s0}, t0 = {t0})"),
            None => format!("in H: no witness with s0, t0 <= {bound}"),
        },
        format!("exceptional: {}", yes_no(c.is_exceptional())),
        format!(
            "solutions with y <= {y_max}: {}",
            show_pairs(&count_solutions(&inst, y_max))
        ),
    ];
    for l in lines {
        writeln!(w, "{l}").map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn cmd_examples(io: &mut Io) -> CmdResult {
    let claims = checklist::claims();
    let mut mismatches = 0;
    for c in &claims {
        writeln!(io.out, "{}", c.line()).map_err(io_err)?;
        if !c.matches() {
            mismatches += 1;
        }
    }
    writeln!(
        io.out,
        "{} of {} claims match",
        claims.len() - mismatches,
        claims.len()
    )
    .map_err(io_err)?;
    Ok(if mismatches == 0 { EXIT_OK } else { EXIT_FAIL })
}
