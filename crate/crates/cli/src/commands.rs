//! Subcommand implementations; each returns the text to print on success.

use blowuplab::coeffs::{SymPoly, Symbol};
use blowuplab::error::Error;
use blowuplab::expander::{self, Seed};
use blowuplab::galerkin::{self, TruncatedState};
use blowuplab::golden;
use blowuplab::hermite;
use blowuplab::rational::{format_q, parse_q, to_f64, Q};
use blowuplab::recenter::{dominance_sort, mode_table, BnShape, Floor, ShiftSpec};
use blowuplab::regimes::{self, FormSpec, RegimeConfig};
use blowuplab::series::{AsymSeries, ModeIndex};
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Malformed flag values (exit status 2).
    Usage(String),
    /// Valid request the domain rejects, or unreadable input (exit status 1).
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e.to_string())
    }
}

pub type Outcome = Result<String, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn split_list(text: &str) -> Vec<&str> {
    // commas inside brackets belong to symbol names such as C[4,0]
    let mut out = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (i, ch) in text.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

fn parse_coefficient(text: &str) -> Result<(u32, u32), Failure> {
    Symbol::parse(text)
        .ok()
        .and_then(|s| s.as_c())
        .ok_or_else(|| usage(format!("expected a constant C[k,j], got {text:?}")))
}

fn parse_bindings(text: &str) -> Result<BTreeMap<Symbol, Q>, Failure> {
    let mut out = BTreeMap::new();
    for item in split_list(text) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("binding {item:?} needs NAME=VALUE")))?;
        let sym = Symbol::parse(name.trim()).map_err(|e| usage(e.to_string()))?;
        let v = parse_q(value).map_err(|e| usage(e.to_string()))?;
        out.insert(sym, v);
    }
    Ok(out)
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Domain(format!("{} is not valid JSON: {e}", path.display())))
}

fn read_series(path: &Path) -> Result<AsymSeries, Failure> {
    Ok(AsymSeries::from_json_value(&read_json(path)?)?)
}

fn q_list(values: &BTreeSet<Q>) -> Vec<String> {
    values.iter().map(format_q).collect()
}

pub fn hermite(j: u32) -> Outcome {
    let h = hermite::hermite_coefficients(j);
    let coeffs: Vec<String> = h.coeffs().iter().map(format_q).collect();
    Ok(format!("{}\n", coeffs.join(",")))
}

pub fn gamma(l: i64, m: i64, n: i64) -> Outcome {
    Ok(format!("{}\n", format_q(&hermite::gamma(l, m, n))))
}

pub fn expand(m: u32, seed: &str, zero: &str, order: u32, json: bool) -> Outcome {
    let mut zero_set = BTreeSet::new();
    for item in split_list(zero) {
        zero_set.insert(parse_coefficient(item)?);
    }
    let seed = if seed.trim() == "generic" {
        Seed::symbolic(m, zero_set)
    } else {
        let mut leading = BTreeMap::new();
        for item in split_list(seed) {
            let (name, value) = match item.split_once('=') {
                Some((n, v)) => (n.trim(), Some(v)),
                None => (item, None),
            };
            let (k, j) = parse_coefficient(name)?;
            if k != m {
                return Err(usage(format!(
                    "seed coefficient C[{k},{j}] is not of grade m = {m}"
                )));
            }
            let coef = match value {
                Some(v) => SymPoly::constant(parse_q(v).map_err(|e| usage(e.to_string()))?),
                None => SymPoly::c(k, j),
            };
            leading.insert(j, coef);
        }
        Seed::new(m, leading, zero_set)
    };
    let series = expander::expand(&seed, order)?;
    Ok(if json {
        pretty(&series.to_json_value())
    } else {
        series.to_string()
    })
}

/// Flags of `recenter-table`.
pub struct RecenterRequest<'a> {
    pub series: &'a Path,
    pub shift: &'a str,
    pub modes: &'a str,
    pub theta: Option<&'a str>,
    pub alpha: &'a str,
    pub json: bool,
}

fn parse_modes(text: &str) -> Result<Vec<ModeIndex>, Failure> {
    split_list(text)
        .into_iter()
        .map(|m| {
            let digits: Vec<u32> = m.chars().filter_map(|c| c.to_digit(10)).collect();
            match (digits.as_slice(), m.len()) {
                ([a, b], 2) => Ok(ModeIndex::new(*a, *b)),
                _ => Err(usage(format!("mode {m:?} must be two digits such as 10"))),
            }
        })
        .collect()
}

pub fn recenter_table(req: &RecenterRequest) -> Outcome {
    let series = read_series(req.series)?;
    let shift = ShiftSpec::parse(req.shift).map_err(|e| usage(e.to_string()))?;
    let modes = parse_modes(req.modes)?;
    let table = mode_table(&series, &shift, &modes);
    let shape = match req.theta {
        None => None,
        Some(t) => {
            let theta = parse_q(t).map_err(|e| usage(e.to_string()))?;
            let alpha = parse_q(req.alpha).map_err(|e| usage(e.to_string()))?;
            Some(BnShape::new(theta, alpha))
        }
    };
    // everything strictly above the first omitted grade is kept
    let floor = Floor {
        rate: Q::new((series.order() as i64 - 1).into(), 2.into()),
        spow: Q::from_integer(0.into()),
    };

    if req.json {
        let mut value = table.to_json_value();
        if let Some(shape) = &shape {
            let groups: Vec<Value> = modes
                .iter()
                .map(|mode| {
                    let sorted = dominance_sort(table.column(*mode), shape, &floor);
                    let gs: Vec<Value> = sorted
                        .groups
                        .iter()
                        .map(|g| {
                            let mut sum = SymPoly::zero();
                            for t in &g.terms {
                                sum.add_assign_ref(&t.coef);
                            }
                            json!({"rate": format_q(&g.rate), "spow": format_q(&g.spow), "sum": sum.to_string()})
                        })
                        .collect();
                    json!({"mode": [mode.a, mode.b], "groups": gs})
                })
                .collect();
            value["theta"] = json!(format_q(&shape.theta));
            value["alpha"] = json!(format_q(&shape.alpha));
            value["dominance"] = Value::Array(groups);
        }
        return Ok(pretty(&value));
    }

    let mut out = String::new();
    for mode in &modes {
        let lambda = mode.eigenvalue();
        let _ = writeln!(
            out,
            "mode ({},{})  eigenvalue {}",
            mode.a,
            mode.b,
            format_q(&lambda)
        );
        let rows: Vec<(String, String)> = table
            .column(*mode)
            .iter()
            .map(|t| {
                (
                    format!("{:?}", t.kind(&lambda)).to_lowercase(),
                    t.to_string(),
                )
            })
            .collect();
        let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
        for (kind, entry) in &rows {
            let _ = writeln!(out, "  {kind:<width$}  {entry}");
        }
        if let Some(shape) = &shape {
            let sorted = dominance_sort(table.column(*mode), shape, &floor);
            let _ = writeln!(
                out,
                "  dominance at θ={} α={}:",
                format_q(&shape.theta),
                format_q(&shape.alpha)
            );
            for g in &sorted.groups {
                let mut sum = SymPoly::zero();
                for t in &g.terms {
                    sum.add_assign_ref(&t.coef);
                }
                let _ = writeln!(
                    out,
                    "    rate {} sn^{}  {}",
                    format_q(&g.rate),
                    format_q(&g.spow),
                    sum
                );
            }
        }
    }
    Ok(out)
}

pub fn exponent_sets(m: u32, json: bool) -> Outcome {
    let sets = regimes::exponent_sets(m)?;
    let (e1, e2, e3) = (q_list(&sets.e1), q_list(&sets.e2), q_list(&sets.e3));
    if json {
        return Ok(pretty(&json!({"m": m, "E1": e1, "E2": e2, "E3": e3})));
    }
    Ok(format!(
        "E1: {}\nE2: {}\nE3: {}\n",
        e1.join(", "),
        e2.join(", "),
        e3.join(", ")
    ))
}

pub fn regimes(m: u32, bind: &str, delta0: &str, json: bool) -> Outcome {
    let bindings = parse_bindings(bind)?;
    let delta0 = parse_q(delta0).map_err(|e| usage(e.to_string()))?;
    let config = RegimeConfig::new(delta0)?.with_bindings(bindings);
    let provider = regimes::CachedExpander::new();
    let results = if m == 4 {
        regimes::regime_search_m4(&provider, config)?
    } else {
        regimes::regime_search_general(m, &provider, config)?
    };
    if json {
        let betas: BTreeSet<Q> = regimes::search::betas(&results);
        let list: Vec<Value> = results.iter().map(|r| r.to_json_value()).collect();
        return Ok(pretty(
            &json!({"m": m, "betas": q_list(&betas), "regimes": list}),
        ));
    }
    let mut out = String::new();
    for r in &results {
        let _ = writeln!(out, "{r}");
    }
    Ok(out)
}

/// Flags of `galerkin`.
pub struct GalerkinRequest<'a> {
    pub degree: u32,
    pub init: &'a Path,
    pub from: f64,
    pub until: f64,
    pub step: f64,
    pub bind: &'a str,
    pub expect: Option<&'a Path>,
    pub every: usize,
    pub csv: Option<&'a Path>,
}

fn parse_state(value: &Value, degree: u32) -> Result<TruncatedState, Failure> {
    let bad = |what: &str| Failure::Domain(format!("initial state JSON: {what}"));
    let s = value.get("s").and_then(Value::as_f64).unwrap_or(0.0);
    let modes = value
        .get("modes")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("needs a \"modes\" array"))?;
    let mut values = BTreeMap::new();
    for entry in modes {
        let idx = entry
            .get("mode")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("entry without \"mode\""))?;
        let (Some(a), Some(b)) = (
            idx.first().and_then(Value::as_u64),
            idx.get(1).and_then(Value::as_u64),
        ) else {
            return Err(bad("\"mode\" must be [a, b]"));
        };
        let v = entry
            .get("value")
            .and_then(Value::as_f64)
            .ok_or_else(|| bad("entry without numeric \"value\""))?;
        values.insert(ModeIndex::new(a as u32, b as u32), v);
    }
    Ok(TruncatedState::new(degree, s, values)?)
}

pub fn galerkin(req: &GalerkinRequest) -> Outcome {
    if req.step.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) || req.every == 0 {
        return Err(usage("--step must be positive and --every at least 1"));
    }
    let bindings: BTreeMap<Symbol, f64> = parse_bindings(req.bind)?
        .iter()
        .map(|(s, v)| (*s, to_f64(v)))
        .collect();
    let init = read_json(req.init)?;
    let start = if init.get("terms").is_some() {
        let series = AsymSeries::from_json_value(&init)?;
        TruncatedState::from_series(req.degree, &series, req.from, &bindings)?
    } else {
        parse_state(&init, req.degree)?
    };
    let traj = galerkin::integrate(&start, req.until, req.step)?;
    let csv = traj.to_csv(req.every);
    if let Some(path) = req.csv {
        std::fs::write(path, &csv)
            .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
    }
    let Some(expect) = req.expect else {
        return Ok(if req.csv.is_some() {
            String::new()
        } else {
            csv
        });
    };
    let series = read_series(expect)?;
    let dev = galerkin::compare_with_expansion(&traj, &series, &bindings)?;
    let mut out = String::from("mode,max_relative_deviation\n");
    for (m, d) in &dev {
        let _ = writeln!(out, "{}_{},{:e}", m.a, m.b, d);
    }
    match traj.blowup_time() {
        Some(t) => {
            let _ = writeln!(
                out,
                "# overflow guard tripped after s = {t} (step {})",
                req.step
            );
        }
        None => {
            let _ = writeln!(out, "# integrated to s = {}", traj.last().s);
        }
    }
    Ok(out)
}

pub fn form(coeffs: &str) -> Outcome {
    let values: Vec<Q> = split_list(coeffs)
        .into_iter()
        .map(parse_q)
        .collect::<Result<_, _>>()
        .map_err(|e| usage(e.to_string()))?;
    if values.len() < 2 {
        return Err(usage("a form needs at least two coefficients"));
    }
    let form = FormSpec::new(values.len() as u32 - 1, values);
    let report = regimes::validate_form(&form)?;
    Ok(format!("{}\n", regimes::form::describe(&report)))
}

pub fn golden_check() -> Outcome {
    let rows = golden::run_suite();
    let passed = rows.iter().filter(|r| r.pass).count();
    let mut out = String::new();
    for r in &rows {
        let _ = writeln!(out, "{r}");
    }
    let _ = writeln!(out, "{passed}/{} checks passed", rows.len());
    if passed == rows.len() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Domain(format!(
            "{} golden checks failed",
            rows.len() - passed
        )))
    }
}
