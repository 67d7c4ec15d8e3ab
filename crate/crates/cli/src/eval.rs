//! Batch runs against the exhaustive oracle, reported as CSV.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use incknap::bounded::solve_bounded_public;
use incknap::oracle::{exact_opt, OracleBudget};
use incknap::rational::{format_rational, to_f64};
use incknap::{general, Error, Instance, Rational, Solution};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::gen::{generate, Profile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Bounded,
    General,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Bounded => "bounded",
            Mode::General => "general",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [Mode::Exact, Mode::Bounded, Mode::General]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected exact, bounded or general)"))
    }
}

/// Runs one solver; returns the solution and its objective value.
pub fn run_solver(inst: &Instance, mode: Mode, eps: &Rational, budget: OracleBudget) -> Result<(Solution, Rational), Error> {
    match mode {
        Mode::Exact => exact_opt(inst, budget).map(|(p, s)| (s, p)),
        Mode::Bounded => solve_bounded_public(inst, eps).map(|o| (o.solution, o.profit)),
        Mode::General => general::solve(inst, eps).map(|r| (r.solution, r.profit)),
    }
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub seed: u64,
    pub count: usize,
    pub n: usize,
    pub t: usize,
    pub profile: Profile,
    pub eps: Vec<Rational>,
    pub modes: Vec<Mode>,
    pub oracle: bool,
    pub budget: OracleBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub id: u64,
    pub mode: String,
    pub eps: String,
    pub solver_profit: String,
    pub oracle_profit: String,
    pub ratio: String,
    pub weight: String,
    pub ms: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalSummary {
    pub rows: Vec<Row>,
    /// Rows whose profit is below `(1 - eps)` of the oracle value.
    pub violations: usize,
    pub budget_errors: usize,
    pub other_errors: usize,
}

impl EvalSummary {
    /// 0 when clean, 1 on a guarantee violation or solver failure, 3 when the
    /// only problems are oracle budget overruns.
    pub fn exit_code(&self) -> i32 {
        if self.violations > 0 || self.other_errors > 0 {
            1
        } else if self.budget_errors > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.rows.is_empty() {
            w.write_record(["id", "mode", "eps", "solver_profit", "oracle_profit", "ratio", "weight", "ms"])
                .expect("in-memory write");
        }
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

enum Outcome {
    Ok(Row),
    Violation(Row),
    BudgetError(Row),
    OtherError(Row),
}

fn error_text(e: &Error) -> String {
    format!("ERR: {e}")
}

fn evaluate_instance(id: u64, inst: &Instance, cfg: &EvalConfig) -> Vec<Outcome> {
    let oracle = cfg.oracle.then(|| exact_opt(inst, cfg.budget).map(|(p, _)| p));
    let mut out = Vec::new();
    for eps in &cfg.eps {
        for &mode in &cfg.modes {
            let start = Instant::now();
            let result = run_solver(inst, mode, eps, cfg.budget);
            let ms = format!("{:.3}", start.elapsed().as_secs_f64() * 1e3);
            let mut row = Row {
                id,
                mode: mode.to_string(),
                eps: format_rational(eps),
                solver_profit: String::new(),
                oracle_profit: String::new(),
                ratio: String::new(),
                weight: String::new(),
                ms,
            };
            let (solution, profit) = match result {
                Ok(pair) => pair,
                Err(e) => {
                    let budget = matches!(e, Error::BudgetExceeded { .. });
                    row.solver_profit = error_text(&e);
                    out.push(if budget { Outcome::BudgetError(row) } else { Outcome::OtherError(row) });
                    continue;
                }
            };
            row.solver_profit = format_rational(&profit);
            row.weight = inst
                .weights_by_period(&solution)
                .last()
                .map(format_rational)
                .unwrap_or_default();
            match &oracle {
                None => out.push(Outcome::Ok(row)),
                Some(Err(e)) => {
                    row.oracle_profit = error_text(e);
                    out.push(if matches!(e, Error::BudgetExceeded { .. }) {
                        Outcome::BudgetError(row)
                    } else {
                        Outcome::OtherError(row)
                    });
                }
                Some(Ok(opt)) => {
                    row.oracle_profit = format_rational(opt);
                    let ratio = if opt.is_zero() { Rational::one() } else { &profit / opt };
                    row.ratio = format!("{:.6}", to_f64(&ratio));
                    let floor = match mode {
                        Mode::Exact => Rational::one(),
                        _ => Rational::one() - eps,
                    };
                    if ratio < floor || ratio > Rational::one() {
                        out.push(Outcome::Violation(row));
                    } else {
                        out.push(Outcome::Ok(row));
                    }
                }
            }
        }
    }
    out
}

/// Generates instances `seed, seed + 1, ...` and runs every (eps, mode) pair
/// on each. Rows come out in seed order whatever the scheduling.
pub fn run_eval(cfg: &EvalConfig) -> EvalSummary {
    let per_instance: Vec<Vec<Outcome>> = (0..cfg.count as u64)
        .into_par_iter()
        .map(|i| {
            let id = cfg.seed.wrapping_add(i);
            evaluate_instance(id, &generate(id, cfg.n, cfg.t, cfg.profile), cfg)
        })
        .collect();
    let mut summary = EvalSummary::default();
    for outcome in per_instance.into_iter().flatten() {
        let row = match outcome {
            Outcome::Ok(r) => r,
            Outcome::Violation(r) => {
                summary.violations += 1;
                r
            }
            Outcome::BudgetError(r) => {
                summary.budget_errors += 1;
                r
            }
            Outcome::OtherError(r) => {
                summary.other_errors += 1;
                r
            }
        };
        summary.rows.push(row);
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use incknap::rational::ratio;

    fn config(count: usize) -> EvalConfig {
        EvalConfig {
            seed: 1,
            count,
            n: 4,
            t: 2,
            profile: Profile::Uniform,
            eps: vec![ratio(1, 2)],
            modes: vec![Mode::General],
            oracle: true,
            budget: OracleBudget::default(),
        }
    }

    #[test]
    fn empty_batch_is_header_only() {
        let s = run_eval(&config(0));
        assert_eq!(s.to_csv(), "id,mode,eps,solver_profit,oracle_profit,ratio,weight,ms\n");
        assert_eq!(s.exit_code(), 0);
    }

    #[test]
    fn small_batch_meets_guarantee() {
        let s = run_eval(&config(10));
        assert_eq!(s.rows.len(), 10);
        assert_eq!(s.exit_code(), 0);
        assert_eq!(s.rows.iter().map(|r| r.id).collect::<Vec<_>>(), (1..=10).collect::<Vec<_>>());
        for r in &s.rows {
            let v: f64 = r.ratio.parse().unwrap();
            assert!((0.5..=1.0).contains(&v));
        }
        let csv = s.to_csv();
        assert!(csv.starts_with("id,mode,eps,solver_profit,oracle_profit,ratio,weight,ms\n1,general,0.5,"));
    }

    #[test]
    fn over_budget_oracle_gives_error_row() {
        let mut cfg = config(1);
        cfg.budget = OracleBudget::new(1);
        let s = run_eval(&cfg);
        assert_eq!(s.rows.len(), 1);
        assert!(s.rows[0].oracle_profit.starts_with("ERR:"));
        assert_ne!(s.exit_code(), 0);
    }

    #[test]
    fn modes_parse() {
        for m in [Mode::Exact, Mode::Bounded, Mode::General] {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("greedy".parse::<Mode>().is_err());
    }
}
