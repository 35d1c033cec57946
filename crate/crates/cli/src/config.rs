// SPDX-License-Identifier: Apache-2.0

//! Sweep configuration: a flat `key = value` file whose keys are the long
//! flag names, so `--k-range 2..50` on the command line and `k-range = 2..50`
//! in a file mean the same thing. Flags override the file.
//!
//! Axis keys take the parameter name plus an optional filter suffix:
//! `k`, `k-range`, `k-odd`, `k-even`, `k-prime`. Values are a single number,
//! a comma list, or an inclusive range `lo..hi` with optional `:step`.
//! `e = auto` selects every admissible `e` for t6.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quadclass::arith::is_prime;
use quadclass::{AxisSpec, Budgets, GridSpec, TheoremId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => err(format!("unknown format {other:?} (json, csv or text)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    Odd,
    Even,
    Prime,
}

impl Filter {
    fn suffix(self) -> &'static str {
        match self {
            Filter::All => "",
            Filter::Odd => "-odd",
            Filter::Even => "-even",
            Filter::Prime => "-prime",
        }
    }

    fn keep(self, v: u64) -> bool {
        match self {
            Filter::All => true,
            Filter::Odd => v % 2 == 1,
            Filter::Even => v % 2 == 0,
            Filter::Prime => is_prime(v as u128),
        }
    }
}

/// The values one axis takes, as written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    pub filter: Filter,
    /// `None` for `auto`.
    pub values: Option<Vec<u64>>,
    /// The value text, kept for echoing into reports.
    pub raw: String,
    /// The key it came from, e.g. `k-range`.
    pub key: String,
}

impl Axis {
    pub fn spec(&self) -> AxisSpec {
        match &self.values {
            None => AxisSpec::Auto,
            Some(v) => {
                AxisSpec::Values(v.iter().copied().filter(|&x| self.filter.keep(x)).collect())
            }
        }
    }
}

/// A fully resolved sweep configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub theorem: TheoremId,
    pub axes: BTreeMap<String, Axis>,
    pub budgets: Budgets,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub strict: bool,
    pub workers: usize,
}

impl SweepConfig {
    pub fn grid(&self) -> GridSpec {
        let mut grid = GridSpec::new(self.theorem);
        for (name, axis) in &self.axes {
            grid = grid.axis(name, axis.spec());
        }
        grid
    }

    /// Settings that determine the report contents, as sorted key/value
    /// text. Output path and worker count are left out.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("theorem".to_string(), self.theorem.to_string());
        for axis in self.axes.values() {
            m.insert(axis.key.clone(), axis.raw.clone());
        }
        m.insert("format".into(), self.format.to_string());
        m.insert("strict".into(), self.strict.to_string());
        m.insert("budget-factor".into(), self.budgets.factor_cap.to_string());
        m.insert("budget-disc".into(), self.budgets.disc_cap.to_string());
        m.insert(
            "witness-bound".into(),
            self.budgets.witness_bound.to_string(),
        );
        m
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Raw `key -> value` settings in the order of precedence they were merged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

const BOOL_KEYS: [&str; 1] = ["strict"];

impl RawConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines. Blank lines and `#` comments are skipped.
    pub fn parse_file_text(text: &str) -> Result<Self, ConfigError> {
        let mut raw = Self::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return err(format!(
                    "line {}: expected key = value, got {line:?}",
                    i + 1
                ));
            };
            raw.set(k.trim(), v.trim())?;
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_file_text(&text)
    }

    /// Parses `--key value`, `--key=value` and bare boolean `--strict`.
    pub fn parse_flags<S: AsRef<str>>(args: &[S]) -> Result<Self, ConfigError> {
        let mut raw = Self::new();
        let mut i = 0;
        while i < args.len() {
            let arg = args[i].as_ref();
            let Some(body) = arg.strip_prefix("--") else {
                return err(format!("unexpected argument {arg:?}"));
            };
            if let Some((k, v)) = body.split_once('=') {
                raw.set(k, v)?;
                i += 1;
                continue;
            }
            if BOOL_KEYS.contains(&body) {
                let next = args.get(i + 1).map(|s| s.as_ref());
                match next {
                    Some(v @ ("true" | "false")) => {
                        raw.set(body, v)?;
                        i += 2;
                    }
                    _ => {
                        raw.set(body, "true")?;
                        i += 1;
                    }
                }
                continue;
            }
            let Some(value) = args.get(i + 1) else {
                return err(format!("flag --{body} needs a value"));
            };
            raw.set(body, value.as_ref())?;
            i += 2;
        }
        Ok(raw)
    }

    /// Sets a key. An axis key replaces any other filter form of the same
    /// axis (`k-odd` replaces an earlier `k-range`).
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if key.is_empty() {
            return err("empty key");
        }
        if let Some((axis, _)) = split_axis_key(key) {
            self.entries
                .retain(|k, _| split_axis_key(k).map(|(a, _)| a) != Some(axis));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// `self` with every key of `over` applied on top.
    pub fn merged(mut self, over: &RawConfig) -> Result<Self, ConfigError> {
        for (k, v) in &over.entries {
            self.set(k, v)?;
        }
        Ok(self)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn resolve(&self) -> Result<SweepConfig, ConfigError> {
        let theorem: TheoremId = match self.get("theorem") {
            Some(t) => t
                .parse()
                .map_err(|e: quadclass::Error| ConfigError(e.to_string()))?,
            None => return err("no theorem given"),
        };
        let names = theorem.param_names();
        let mut axes = BTreeMap::new();
        let mut budgets = Budgets::default();
        let mut format = Format::default();
        let mut out = None;
        let mut strict = false;
        let mut workers = default_workers();
        for (key, value) in &self.entries {
            if let Some((axis, filter)) = split_axis_key(key) {
                if !names.contains(&axis) {
                    return err(format!(
                        "{theorem} has no parameter {axis:?} (has {names:?})"
                    ));
                }
                check_filter(theorem, axis, filter)?;
                let values = parse_values(value).map_err(|e| ConfigError(format!("{key}: {e}")))?;
                match &values {
                    None if !(theorem == TheoremId::T6 && axis == "e") => {
                        return err(format!("{key}: auto is only defined for e in t6"));
                    }
                    Some(v) => check_bounds(theorem, axis, v)
                        .map_err(|e| ConfigError(format!("{key}: {e}")))?,
                    None => {}
                }
                axes.insert(
                    axis.to_string(),
                    Axis {
                        filter,
                        values,
                        raw: value.clone(),
                        key: key.clone(),
                    },
                );
                continue;
            }
            match key.as_str() {
                "theorem" => {}
                "format" => format = value.parse()?,
                "out" => out = Some(PathBuf::from(value)),
                "strict" => {
                    strict = match value.as_str() {
                        "true" => true,
                        "false" => false,
                        v => return err(format!("strict: expected true or false, got {v:?}")),
                    }
                }
                "workers" => workers = positive(key, value)? as usize,
                "budget-factor" => budgets.factor_cap = positive(key, value)? as u128,
                "budget-disc" => budgets.disc_cap = positive(key, value)? as u128,
                "witness-bound" => budgets.witness_bound = positive(key, value)?,
                other => return err(format!("unknown key {other:?}")),
            }
        }
        for name in names {
            if !axes.contains_key(*name) {
                return err(format!("{theorem} needs values for {name}"));
            }
        }
        Ok(SweepConfig {
            theorem,
            axes,
            budgets,
            format,
            out,
            strict,
            workers,
        })
    }
}

fn positive(key: &str, value: &str) -> Result<u64, ConfigError> {
    match value.parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => err(format!("{key}: expected a positive integer, got {value:?}")),
    }
}

/// `k-odd` -> `("k", Odd)`. Only single-letter parameter names are axes.
fn split_axis_key(key: &str) -> Option<(&str, Filter)> {
    let (name, rest) = key.split_at_checked(1)?;
    if !name.chars().all(|c| c.is_ascii_lowercase()) {
        return None;
    }
    let filter = match rest {
        "" | "-range" => Filter::All,
        "-odd" => Filter::Odd,
        "-even" => Filter::Even,
        "-prime" => Filter::Prime,
        _ => return None,
    };
    Some((name, filter))
}

/// Rejects filters that contradict a theorem's hypotheses.
fn check_filter(theorem: TheoremId, axis: &str, filter: Filter) -> Result<(), ConfigError> {
    let clash = matches!(
        (theorem, axis, filter),
        (TheoremId::T2, "n", Filter::Even)
            | (TheoremId::T4, "n", Filter::Odd)
            | (TheoremId::T4 | TheoremId::T5, "k", Filter::Even)
            | (TheoremId::T41, "x", Filter::Even)
            | (TheoremId::T42, "l", Filter::Even)
    );
    if clash {
        return err(format!(
            "{axis}{} contradicts the hypotheses of {theorem}",
            filter.suffix()
        ));
    }
    Ok(())
}

/// Every value must be positive, except `e` in t42 which may be 0.
fn check_bounds(theorem: TheoremId, axis: &str, values: &[u64]) -> Result<(), String> {
    let zero_ok = theorem == TheoremId::T42 && axis == "e";
    if !zero_ok && values.contains(&0) {
        return Err("values must be positive".into());
    }
    Ok(())
}

/// Parses `5`, `3,5,7`, `2..50`, `3..99:2` or `auto` (as `None`).
pub fn parse_values(text: &str) -> Result<Option<Vec<u64>>, String> {
    let text = text.trim();
    if text == "auto" {
        return Ok(None);
    }
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((lo, rest)) = part.split_once("..") {
            let (hi, step) = match rest.split_once(':') {
                Some((hi, step)) => (hi, step),
                None => (rest, "1"),
            };
            let lo = parse_u64(lo)?;
            let hi = parse_u64(hi)?;
            let step = parse_u64(step)?;
            if step == 0 {
                return Err(format!("step must be positive in {part:?}"));
            }
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            out.extend((lo..=hi).step_by(step as usize));
        } else {
            out.push(parse_u64(part)?);
        }
    }
    Ok(Some(out))
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("expected a nonnegative integer, got {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_syntax() {
        assert_eq!(parse_values("5").unwrap(), Some(vec![5]));
        assert_eq!(parse_values("3, 5,7").unwrap(), Some(vec![3, 5, 7]));
        assert_eq!(parse_values("2..5").unwrap(), Some(vec![2, 3, 4, 5]));
        assert_eq!(parse_values("3..11:4").unwrap(), Some(vec![3, 7, 11]));
        assert_eq!(parse_values("1,4..5").unwrap(), Some(vec![1, 4, 5]));
        assert_eq!(parse_values("auto").unwrap(), None);
        assert!(parse_values("5..2").is_err());
        assert!(parse_values("1..4:0").is_err());
        assert!(parse_values("x").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = RawConfig::parse_file_text(
            "# t5 grid\ntheorem = t5\nk-odd = 3..9\nn = 2..4\nformat = csv\n",
        )
        .unwrap();
        let flags = RawConfig::parse_flags(&["--k", "29", "--format=text", "--strict"]).unwrap();
        let cfg = file.merged(&flags).unwrap().resolve().unwrap();
        assert_eq!(cfg.theorem, TheoremId::T5);
        assert_eq!(cfg.axes["k"].spec(), AxisSpec::Values(vec![29]));
        assert_eq!(cfg.axes["n"].spec(), AxisSpec::Values(vec![2, 3, 4]));
        assert_eq!(cfg.format, Format::Text);
        assert!(cfg.strict);
        assert_eq!(cfg.echo().get("k").map(String::as_str), Some("29"));
        assert!(!cfg.echo().contains_key("k-odd"));
    }

    #[test]
    fn filters_apply() {
        let raw =
            RawConfig::parse_flags(&["--theorem", "t2", "--k-prime", "2..12", "--n-odd", "1..6"])
                .unwrap();
        let cfg = raw.resolve().unwrap();
        assert_eq!(cfg.axes["k"].spec(), AxisSpec::Values(vec![2, 3, 5, 7, 11]));
        assert_eq!(cfg.axes["n"].spec(), AxisSpec::Values(vec![1, 3, 5]));
    }

    #[test]
    fn rejected_configs() {
        let bad = |args: &[&str]| {
            RawConfig::parse_flags(args)
                .and_then(|r| r.resolve())
                .is_err()
        };
        assert!(bad(&["--k", "2", "--n", "3"]));
        assert!(bad(&["--theorem", "t9", "--k", "2", "--n", "3"]));
        assert!(bad(&["--theorem", "t2", "--k", "2"]));
        assert!(bad(&["--theorem", "t2", "--k", "2", "--n-even", "2..8"]));
        assert!(bad(&["--theorem", "t2", "--k", "0", "--n", "3"]));
        assert!(bad(&[
            "--theorem",
            "t2",
            "--k",
            "2",
            "--n",
            "3",
            "--q",
            "5"
        ]));
        assert!(bad(&["--theorem", "t2", "--k", "2", "--n", "auto"]));
        assert!(bad(&[
            "--theorem",
            "t2",
            "--k",
            "2",
            "--n",
            "3",
            "--workers",
            "0"
        ]));
        assert!(bad(&[
            "--theorem",
            "t2",
            "--k",
            "2",
            "--n",
            "3",
            "--colour",
            "red"
        ]));
        assert!(bad(&["--theorem", "t2", "--k"]));
        assert!(bad(&["t2"]));
        assert!(RawConfig::parse_file_text("theorem t2").is_err());
    }

    #[test]
    fn t42_allows_zero_e_and_t6_auto() {
        let ok = |args: &[&str]| {
            RawConfig::parse_flags(args)
                .and_then(|r| r.resolve())
                .is_ok()
        };
        assert!(ok(&[
            "--theorem",
            "t42",
            "--l",
            "3",
            "--e",
            "0..3",
            "--n",
            "1..8"
        ]));
        assert!(ok(&[
            "--theorem",
            "t6",
            "--q-prime",
            "2..47",
            "--n",
            "1..10",
            "--e",
            "auto"
        ]));
    }
}
