//! Built-in reproduction suite: the published formulas this crate is meant
//! to regenerate, each checked against the engine and reported as one row.

use crate::coeffs::{SymPoly, Symbol};
use crate::error::Result;
use crate::expander::{expand, Seed};
use crate::galerkin;
use crate::hermite;
use crate::rational::{format_q, q, qi, Q};
use crate::regimes::search::{betas, Origin, Pipeline, RegimeConfig, Verdict};
use crate::regimes::{exponent_sets, regime_search_general, regime_search_m4, CachedExpander};
use crate::series::{AsymSeries, TermKey};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::time::Instant;

/// One row of the suite.
#[derive(Debug, Clone)]
pub struct GoldenCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for GoldenCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<34} {:>7.3}s  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

type Check = fn() -> Result<(bool, String)>;

fn c40_seed(zero: &[(u32, u32)]) -> Seed {
    Seed::new(
        4,
        BTreeMap::from([(0, SymPoly::c(4, 0))]),
        zero.iter().copied().collect(),
    )
}

fn check_gamma() -> Result<(bool, String)> {
    let want = [
        (0, qi(384)),
        (2, qi(768)),
        (4, qi(288)),
        (6, qi(32)),
        (8, qi(1)),
    ];
    let got: Vec<Q> = want.iter().map(|(n, _)| hermite::gamma(4, 4, *n)).collect();
    let ok = want.iter().zip(&got).all(|((_, w), g)| w == g);
    let shown: Vec<String> = got.iter().map(format_q).collect();
    Ok((ok, format!("γ(4,4,0..8 step 2) = {}", shown.join(", "))))
}

fn check_grade_six() -> Result<(bool, String)> {
    let grade5: Vec<(u32, u32)> = (0..=5).map(|j| (5, j)).collect();
    let s = expand(&c40_seed(&grade5), 6)?;
    let c2 = SymPoly::c(4, 0).pow(2);
    let mut want = AsymSeries::zero(6);
    want.add_term(TermKey::new(4, 0, 4, 0), &SymPoly::c(4, 0));
    for (a, i, c) in [
        (0, 0, q(-384, 3)),
        (2, 0, q(-768, 2)),
        (4, 0, qi(-288)),
        (6, 1, qi(32)),
        (8, 0, qi(1)),
    ] {
        want.add_term(TermKey::new(6, i, a, 0), &c2.scale(&c));
    }
    for j in 0..=6 {
        want.add_term(TermKey::new(6, 0, 6 - j, j), &SymPoly::c(6, j));
    }
    Ok((s == want, format!("{} terms", s.len())))
}

fn check_residual() -> Result<(bool, String)> {
    let s = expand(&c40_seed(&[(5, 3), (5, 4), (6, 5), (6, 6)]), 9)?;
    let r = s.apply_flow_residual();
    Ok((
        r.is_zero(),
        format!("order 9, {} terms, residual {} terms", s.len(), r.len()),
    ))
}

fn check_constraints() -> Result<(bool, String)> {
    let provider = CachedExpander::new();
    let pipe = Pipeline::new(4, &provider, RegimeConfig::default())?;
    let got: Vec<SymPoly> = pipe
        .quadratic()?
        .into_iter()
        .filter_map(|r| r.constraint)
        .collect();
    let want = [
        "2*C[4,2]*L + C[5,4]",
        "2*L*C[5,3] + C[6,5]",
        "4*L^3*C[4,0] + 3*L^2*C[5,2] + 2*L*C[6,4] + C[7,6]",
    ]
    .map(|t| SymPoly::parse(t).expect("literal"));
    let law = match pipe.run_stage(&q(1, 4), &qi(0), &BTreeSet::new())?.verdict {
        Verdict::Survives { primary, .. } => Some(primary.poly),
        _ => None,
    };
    let law_ok = law == Some(SymPoly::parse("4*C[4,0]*L^2 + 2*C[5,3]")?);
    Ok((
        got == want && law_ok,
        format!(
            "{} quadratic stages, θ=1/4 law {}",
            got.len(),
            if law_ok { "exact" } else { "differs" }
        ),
    ))
}

fn check_m4() -> Result<(bool, String)> {
    let provider = CachedExpander::new();
    let all = regime_search_m4(&provider, RegimeConfig::default())?;
    let b = betas(&all);
    let ok = b == BTreeSet::from([q(3, 2), qi(2)]) && all.iter().all(|r| r.alpha == qi(0));
    let shown: Vec<String> = b.iter().map(format_q).collect();
    Ok((ok, format!("β ∈ {{{}}}, α = 0", shown.join(", "))))
}

fn check_l0() -> Result<(bool, String)> {
    // L0² = -C53/(2 C40): positive only when C53 and C40 have opposite signs
    let provider = CachedExpander::new();
    let root = |c53: i64| -> Result<Vec<f64>> {
        let bind = BTreeMap::from([(Symbol::c(5, 3), qi(c53)), (Symbol::c(4, 0), qi(-1))]);
        let all = regime_search_m4(&provider, RegimeConfig::default().with_bindings(bind))?;
        Ok(all
            .iter()
            .find(|r| r.beta == Some(q(3, 2)))
            .and_then(|r| {
                r.positive_roots()
                    .map(|p| p.iter().map(|x| x.value()).collect())
            })
            .unwrap_or_default())
    };
    let pos = root(2)?;
    let neg = root(-2)?;
    let ok = pos.len() == 1 && (pos[0] - 1.0).abs() < 1e-12 && neg.is_empty();
    Ok((ok, format!("C40=-1: C53=2 → {pos:?}, C53=-2 → {neg:?}")))
}

fn check_m6() -> Result<(bool, String)> {
    let provider = CachedExpander::new();
    let all = regime_search_general(6, &provider, RegimeConfig::default())?;
    let power: BTreeSet<Q> = all
        .iter()
        .filter(|r| r.origin == Origin::PowerLaw)
        .filter_map(|r| r.beta.clone())
        .collect();
    let sets = exponent_sets(6)?;
    let thetas_ok = [q(1, 6), q(1, 4), q(1, 3)]
        .iter()
        .all(|t| sets.e1.contains(t) || sets.e2.contains(t));
    let ok = power == BTreeSet::from([q(4, 3), q(3, 2), q(5, 3)]) && thetas_ok;
    let shown: Vec<String> = power.iter().map(format_q).collect();
    Ok((ok, format!("power-law β ∈ {{{}}}", shown.join(", "))))
}

fn check_riccati() -> Result<(bool, String)> {
    let start = galerkin::TruncatedState::new(
        0,
        0.0,
        BTreeMap::from([(crate::series::ModeIndex::new(0, 0), 0.1)]),
    )?;
    let t = galerkin::integrate(&start, 3.0, 1e-4)?;
    let err = t
        .blowup_time()
        .map_or(f64::INFINITY, |s| (s - 11f64.ln()).abs());
    Ok((err < 1e-4, format!("|s* - ln 11| = {err:.1e}")))
}

/// Runs every check in a fixed order.
pub fn run_suite() -> Vec<GoldenCheck> {
    let checks: [(&str, Check); 8] = [
        ("triple products γ(4,4,n)", check_gamma),
        ("expansion m=4 through grade 6", check_grade_six),
        ("flow residual through grade 9", check_residual),
        ("constraint polynomials", check_constraints),
        ("m=4 regime exponents", check_m4),
        ("m=4 regime constant L0", check_l0),
        ("m=6 regime exponents", check_m6),
        ("Riccati blow-up time", check_riccati),
    ];
    checks
        .iter()
        .map(|(name, run)| {
            let t = Instant::now();
            let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
            GoldenCheck {
                name,
                pass,
                detail,
                seconds: t.elapsed().as_secs_f64(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let rows = run_suite();
        assert_eq!(rows.len(), 8);
        for r in &rows {
            assert!(r.pass, "{r}");
        }
    }
}
