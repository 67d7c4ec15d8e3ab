//! JSON formats for instances and solutions. Numbers travel as decimal or
//! `a/b` strings so that values stay exact.

use std::path::Path;

use incknap::rational::{format_rational, parse_rational, ParseRationalError};
use incknap::{Instance, Item, Rational, Solution};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Number { field: String, source: ParseRationalError },
    #[error("intro[{item}]: period {period} is not in 1..={horizon}")]
    Period { item: usize, period: usize, horizon: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ItemRecord {
    pub p: String,
    pub w: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub items: Vec<ItemRecord>,
    pub capacities: Vec<String>,
    pub lambdas: Vec<String>,
}

/// Introduction periods are 1-based in files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub intro: Vec<Option<usize>>,
    pub profit: String,
    pub weights_by_period: Vec<String>,
}

fn number(field: impl FnOnce() -> String, s: &str) -> Result<Rational, IoError> {
    parse_rational(s).map_err(|source| IoError::Number { field: field(), source })
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            items: inst
                .items
                .iter()
                .map(|it| ItemRecord {
                    p: format_rational(&it.profit),
                    w: format_rational(&it.weight),
                })
                .collect(),
            capacities: inst.capacities.iter().map(format_rational).collect(),
            lambdas: inst.lambdas.iter().map(format_rational).collect(),
        }
    }

    /// Parses the numbers; does not check the model constraints.
    pub fn to_instance(&self) -> Result<Instance, IoError> {
        let items = self
            .items
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Ok(Item::new(
                    number(|| format!("items[{i}].p"), &r.p)?,
                    number(|| format!("items[{i}].w"), &r.w)?,
                ))
            })
            .collect::<Result<Vec<_>, IoError>>()?;
        let capacities = self
            .capacities
            .iter()
            .enumerate()
            .map(|(t, s)| number(|| format!("capacities[{t}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        let lambdas = self
            .lambdas
            .iter()
            .enumerate()
            .map(|(t, s)| number(|| format!("lambdas[{t}]"), s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Instance::new(items, capacities, lambdas))
    }
}

impl SolutionFile {
    pub fn new(inst: &Instance, solution: &Solution, profit: &Rational) -> Self {
        Self {
            intro: solution.intro.iter().map(|t| t.map(|t| t + 1)).collect(),
            profit: format_rational(profit),
            weights_by_period: inst.weights_by_period(solution).iter().map(format_rational).collect(),
        }
    }

    pub fn to_solution(&self, horizon: usize) -> Result<Solution, IoError> {
        let intro = self
            .intro
            .iter()
            .enumerate()
            .map(|(item, t)| match *t {
                None => Ok(None),
                Some(period) if (1..=horizon).contains(&period) => Ok(Some(period - 1)),
                Some(period) => Err(IoError::Period { item, period, horizon }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Solution::new(intro))
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, IoError> {
    serde_json::from_str::<InstanceFile>(text)?.to_instance()
}

pub fn instance_to_json(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("plain strings serialize");
    s.push('\n');
    s
}

pub fn solution_to_json(file: &SolutionFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("plain values serialize");
    s.push('\n');
    s
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    parse_instance(&read_text(path)?)
}

pub fn read_solution(path: &Path) -> Result<SolutionFile, IoError> {
    Ok(serde_json::from_str(&read_text(path)?)?)
}

fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), IoError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| IoError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use incknap::rational::{int, ratio};

    const E1: &str = r#"{"items":[{"p":"2","w":"1"},{"p":"3","w":"2"}],"capacities":["2","3"],"lambdas":["1","1"]}"#;

    #[test]
    fn parses_example() {
        let inst = parse_instance(E1).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.items[1].profit, int(3));
        assert_eq!(inst.capacities, vec![int(2), int(3)]);
    }

    #[test]
    fn accepts_decimals_and_ratios() {
        let text = r#"{"items":[{"p":"1.25","w":"3/4"}],"capacities":["0.75"],"lambdas":["2/6"]}"#;
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.items[0].profit, ratio(5, 4));
        assert_eq!(inst.items[0].weight, ratio(3, 4));
        assert_eq!(inst.lambdas[0], ratio(1, 3));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_instance("{"), Err(IoError::Json(_))));
        assert!(matches!(parse_instance(r#"{"items":[],"capacities":[1],"lambdas":["1"]}"#), Err(IoError::Json(_))));
        let bad = r#"{"items":[{"p":"x","w":"1"}],"capacities":["1"],"lambdas":["1"]}"#;
        match parse_instance(bad) {
            Err(IoError::Number { field, .. }) => assert_eq!(field, "items[0].p"),
            other => panic!("unexpected {other:?}"),
        }
        let extra = r#"{"items":[],"capacities":["1"],"lambdas":["1"],"x":1}"#;
        assert!(parse_instance(extra).is_err());
    }

    #[test]
    fn round_trip() {
        let inst = parse_instance(E1).unwrap();
        let json = instance_to_json(&inst);
        assert_eq!(parse_instance(&json).unwrap(), inst);
        assert_eq!(instance_to_json(&parse_instance(&json).unwrap()), json);
    }

    #[test]
    fn solution_periods_are_one_based() {
        let inst = parse_instance(E1).unwrap();
        let sol = Solution::new(vec![Some(1), Some(0)]);
        let file = SolutionFile::new(&inst, &sol, &int(8));
        assert_eq!(file.intro, vec![Some(2), Some(1)]);
        assert_eq!(file.weights_by_period, vec!["2", "3"]);
        assert_eq!(file.to_solution(2).unwrap(), sol);
        assert!(matches!(file.to_solution(1), Err(IoError::Period { item: 0, period: 2, horizon: 1 })));
    }
}
