//! The cancellation cascade and the regime searches.
//!
//! For a candidate `Bn = L·A^{2θ}·e^{-θsₙ}·sₙ^α` the expansion (truncated at
//! `M(θ)`) is recentered on the expanding modes, and the growth rows of each
//! column are sorted by dominance. The dominant group of a column must not
//! drive the mode past `δ0`:
//!
//! - a group carrying a single power of `L` forces its coefficient to
//!   vanish; when that coefficient is a single cancellable constant the
//!   constant is recorded as zero and the cascade restarts, otherwise the
//!   candidate is contradictory;
//! - a group carrying two or more powers of `L` yields a polynomial
//!   equation for `L`.
//!
//! A candidate survives when, once no further cancellation applies, some
//! column's dominant group is such an equation.

use super::exponents::{alpha_set, case_threshold, secular_powers, theta_sets};
use super::form::{validate_form, FormSpec};
use super::upoly::{RealRoot, UPoly};
use crate::coeffs::{SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::expander::{expand, Seed};
use crate::rational::{format_q, q, qi, Q};
use crate::recenter::{
    dominance_sort, expanding_modes, extract_constraint, mode_table, BnShape, Constraint, Floor,
    RowKind, ScaleTerm, ShiftSpec,
};
use crate::series::{AsymSeries, ModeIndex};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

/// Parameters of a regime search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeConfig {
    /// Growth threshold of the contradiction arguments (`δ0 > 0`).
    pub delta0: Q,
    /// Truncation order used instead of `M(θ)`; must not be smaller.
    pub m_override: Option<u32>,
    /// Concrete values substituted for free constants before recentering.
    pub bindings: BTreeMap<Symbol, Q>,
}

impl RegimeConfig {
    pub fn new(delta0: Q) -> Result<RegimeConfig> {
        if !delta0.is_positive() {
            return Err(Error::Parse(format!(
                "delta0 must be positive, got {}",
                format_q(&delta0)
            )));
        }
        Ok(RegimeConfig {
            delta0,
            m_override: None,
            bindings: BTreeMap::new(),
        })
    }

    pub fn with_bindings(mut self, bindings: BTreeMap<Symbol, Q>) -> RegimeConfig {
        self.bindings = bindings;
        self
    }
}

impl Default for RegimeConfig {
    fn default() -> RegimeConfig {
        RegimeConfig {
            delta0: q(1, 10),
            m_override: None,
            bindings: BTreeMap::new(),
        }
    }
}

/// Free constants vanishing for every normalized order-`m` profile: the
/// degenerate direction is the `x2` axis (`C[m,m] = C[m,m-1] = 0`) and the
/// next homogeneous grade carries no `h_{m+1}(y2)` term.
pub fn base_zeros(m: u32) -> BTreeSet<(u32, u32)> {
    BTreeSet::from([(m, m), (m, m - 1), (m + 1, m + 1)])
}

/// Source of normalized generic expansions.
pub trait ExpansionProvider: Sync {
    /// The expansion of the symbolic order-`m` seed with [`base_zeros`],
    /// up to grade `order`.
    fn expansion(&self, m: u32, order: u32) -> Result<Arc<AsymSeries>>;
}

/// [`ExpansionProvider`] computing with the expander and memoizing the
/// longest expansion per `m` (shorter orders are truncations of it).
#[derive(Debug, Default)]
pub struct CachedExpander {
    cache: Mutex<BTreeMap<u32, Arc<AsymSeries>>>,
}

impl CachedExpander {
    pub fn new() -> CachedExpander {
        CachedExpander::default()
    }
}

impl ExpansionProvider for CachedExpander {
    fn expansion(&self, m: u32, order: u32) -> Result<Arc<AsymSeries>> {
        if let Some(s) = self.cache.lock().expect("expansion cache poisoned").get(&m) {
            if s.order() >= order as i32 {
                return Ok(if s.order() == order as i32 {
                    s.clone()
                } else {
                    Arc::new(s.with_order(order as i32))
                });
            }
        }
        let s = Arc::new(expand(&Seed::symbolic(m, base_zeros(m)), order)?);
        let mut cache = self.cache.lock().expect("expansion cache poisoned");
        let keep = cache.get(&m).is_none_or(|old| old.order() < s.order());
        if keep {
            cache.insert(m, s.clone());
        }
        Ok(s)
    }
}

/// Truncation order `M(θ) = max(m+1, ⌊(2θ+1)(m-1)⌋ + 1)`: the first grade
/// whose remainder decays strictly faster than `e^{-(2θ+1)(m-1)/2·sₙ}`.
pub fn truncation_order(m: u32, theta: &Q) -> u32 {
    let x = (qi(2) * theta + Q::one()) * qi(m as i64 - 1);
    let fl = x.floor().to_integer().to_u32().unwrap_or(0);
    (m + 1).max(fl + 1)
}

/// How a free constant behaves in the cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolRole {
    /// May be forced to vanish by a single-power dominant group.
    Cancellable,
    /// A leading coefficient that the form assumptions keep generic.
    Structural,
}

/// Role of a constant for profile order `m`: `C[k,j]` with `k > m`, and
/// `C[m,m-2]`, `C[m,m-3]`, are cancellable; the other leading coefficients
/// are structural.
pub fn symbol_role(sym: Symbol, m: u32) -> SymbolRole {
    match sym.as_c() {
        Some((k, _)) if k > m => SymbolRole::Cancellable,
        Some((k, j)) if k == m && j + 3 >= m && j + 2 <= m => SymbolRole::Cancellable,
        _ => SymbolRole::Structural,
    }
}

/// Constants forced to vanish together with `sym`: for a nonpositive form,
/// `C[m,m-2] = 0` forces `C[m,m-3] = 0` (otherwise the form changes sign
/// near the `x2` axis).
pub fn consequences(sym: Symbol, m: u32) -> Vec<Symbol> {
    match sym.as_c() {
        Some((k, j)) if k == m && j + 2 == m => vec![Symbol::c(m, m - 3)],
        _ => Vec::new(),
    }
}

/// A constant recorded as zero during the cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cancellation {
    pub symbol: Symbol,
    pub mode: ModeIndex,
    pub reason: String,
}

/// Verdict of one cascade run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Some column's dominant group is an equation in `L`; `primary` is the
    /// one of the first such column in the order `(1,0)`, `(0,1)`, `(0,0)`.
    Survives {
        primary: Box<Constraint>,
        columns: Vec<Constraint>,
    },
    /// A single-power dominant group cannot vanish.
    Excluded {
        mode: ModeIndex,
        obstruction: SymPoly,
    },
    /// No growth row dominates the remainder.
    Vacuous,
}

/// Outcome of [`Pipeline::run_stage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageOutcome {
    pub theta: Q,
    pub alpha: Q,
    pub order: u32,
    pub cancellations: Vec<Cancellation>,
    pub verdict: Verdict,
}

/// Origin of a regime result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Origin {
    /// `a_{n,1} = o(a_{n,2}²)`: no constraint on `L` is produced.
    SubquadraticExcluded,
    /// `β = 2`.
    Quadratic,
    /// `β = 2θ+1 ∈ (1,2)`.
    PowerLaw,
}

impl Origin {
    pub fn name(&self) -> &'static str {
        match self {
            Origin::SubquadraticExcluded => "subquadratic_excluded",
            Origin::Quadratic => "quadratic",
            Origin::PowerLaw => "power_law",
        }
    }
}

/// Real roots of a constraint once it only involves `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootReport {
    /// Other free constants remain.
    Symbolic,
    /// All real roots, and the positive ones.
    Roots {
        real: Vec<RealRoot>,
        positive: Vec<RealRoot>,
    },
}

/// One admissible law `a_{n,1} ∼ L·a_{n,2}^β·|log a_{n,2}|^α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegimeResult {
    /// `2θ+1`; `None` for the subquadratic marker.
    pub beta: Option<Q>,
    pub alpha: Q,
    pub theta: Option<Q>,
    /// Polynomial in `L` (and free constants) that must vanish.
    pub constraint: Option<SymPoly>,
    pub origin: Origin,
    /// Index of the stage within a forked branch (0 for the first).
    pub stage: usize,
    pub order: Option<u32>,
    /// Constants assumed zero when entering the stage.
    pub assumed_zero: Vec<Symbol>,
    pub cancellations: Vec<Cancellation>,
    pub column_constraints: Vec<Constraint>,
    pub roots: RootReport,
}

impl RegimeResult {
    fn subquadratic_marker() -> RegimeResult {
        RegimeResult {
            beta: None,
            alpha: Q::zero(),
            theta: None,
            constraint: None,
            origin: Origin::SubquadraticExcluded,
            stage: 0,
            order: None,
            assumed_zero: Vec::new(),
            cancellations: Vec::new(),
            column_constraints: Vec::new(),
            roots: RootReport::Symbolic,
        }
    }

    /// Positive real roots, when the constraint only involves `L`.
    pub fn positive_roots(&self) -> Option<&[RealRoot]> {
        match &self.roots {
            RootReport::Roots { positive, .. } => Some(positive),
            RootReport::Symbolic => None,
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let opt_q = |x: &Option<Q>| x.as_ref().map(format_q);
        let roots = match &self.roots {
            RootReport::Symbolic => serde_json::Value::Null,
            RootReport::Roots { real, positive } => serde_json::json!({
                "real": real.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "positive": positive.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
            }),
        };
        serde_json::json!({
            "beta": opt_q(&self.beta),
            "alpha": format_q(&self.alpha),
            "theta": opt_q(&self.theta),
            "origin": self.origin.name(),
            "stage": self.stage,
            "order": self.order,
            "constraint": self.constraint.as_ref().map(|p| p.to_string()),
            "assumed_zero": self.assumed_zero.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "cancellations": self.cancellations.iter().map(|c| serde_json::json!({
                "symbol": c.symbol.to_string(),
                "mode": [c.mode.a, c.mode.b],
                "reason": c.reason,
            })).collect::<Vec<_>>(),
            "columns": self.column_constraints.iter().map(|c| serde_json::json!({
                "mode": [c.mode.a, c.mode.b],
                "rate": format_q(&c.rate),
                "spow": format_q(&c.spow),
                "constraint": c.poly.to_string(),
            })).collect::<Vec<_>>(),
            "roots": roots,
        })
    }
}

impl fmt::Display for RegimeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(beta) = &self.beta else {
            return write!(
                f,
                "{:<22} a_n1 = o(a_n2^2), unconstrained",
                self.origin.name()
            );
        };
        write!(
            f,
            "{:<22} beta={} alpha={}",
            self.origin.name(),
            format_q(beta),
            format_q(&self.alpha)
        )?;
        if self.origin == Origin::Quadratic {
            write!(f, " stage={}", self.stage)?;
        }
        if let Some(p) = &self.constraint {
            write!(f, "  {p} = 0")?;
        }
        if !self.cancellations.is_empty() {
            let c: Vec<String> = self
                .cancellations
                .iter()
                .map(|c| c.symbol.to_string())
                .collect();
            write!(f, "  [forced zero: {}]", c.join(", "))?;
        }
        if let RootReport::Roots { positive, .. } = &self.roots {
            if positive.is_empty() {
                write!(f, "  no positive root")?;
            } else {
                let r: Vec<String> = positive.iter().map(|r| r.to_string()).collect();
                write!(f, "  L = {}", r.join(", "))?;
            }
        }
        Ok(())
    }
}

/// Real roots of `poly` when it is a polynomial in `L` alone.
pub fn roots_in_l(poly: &SymPoly) -> RootReport {
    if poly.symbols().iter().any(|s| *s != Symbol::L) {
        return RootReport::Symbolic;
    }
    let by_power = poly.collect_in(Symbol::L);
    let top = by_power.keys().next_back().copied().unwrap_or(0);
    let coeffs: Vec<Q> = (0..=top)
        .map(|d| {
            by_power
                .get(&d)
                .and_then(SymPoly::as_constant)
                .unwrap_or_else(Q::zero)
        })
        .collect();
    let u = UPoly::new(coeffs);
    if u.is_zero() {
        return RootReport::Symbolic;
    }
    let real = u.real_roots();
    let positive = real.iter().filter(|r| r.is_positive()).cloned().collect();
    RootReport::Roots { real, positive }
}

/// Growth rows of the expanding modes and the remainder floor of one
/// truncation order.
#[derive(Debug, Clone)]
struct Prepared {
    columns: BTreeMap<ModeIndex, Vec<ScaleTerm>>,
    floor: Floor,
}

/// Column order of the cascade.
fn cascade_modes() -> [ModeIndex; 3] {
    [
        ModeIndex::new(1, 0),
        ModeIndex::new(0, 1),
        ModeIndex::new(0, 0),
    ]
}

/// The cascade for one profile order, bindings and `δ0`.
pub struct Pipeline<'a> {
    m: u32,
    provider: &'a dyn ExpansionProvider,
    config: RegimeConfig,
    prepared: Mutex<BTreeMap<u32, Arc<Prepared>>>,
}

impl<'a> Pipeline<'a> {
    /// Checks the normalization and, when every leading coefficient is
    /// bound, the nonpositivity of the form.
    pub fn new(
        m: u32,
        provider: &'a dyn ExpansionProvider,
        config: RegimeConfig,
    ) -> Result<Pipeline<'a>> {
        if m < 4 || m % 2 == 1 {
            return Err(Error::UnsupportedOrder {
                m,
                reason: "profile order must be even and at least 4".into(),
            });
        }
        if !config.delta0.is_positive() {
            return Err(Error::Parse("delta0 must be positive".into()));
        }
        for j in [m - 1, m] {
            if config
                .bindings
                .get(&Symbol::c(m, j))
                .is_some_and(|v| !v.is_zero())
            {
                return Err(Error::NotNormalized { m });
            }
        }
        let leading: Option<Vec<Q>> = (0..=m)
            .map(|j| {
                if j + 1 >= m {
                    Some(Q::zero())
                } else {
                    config.bindings.get(&Symbol::c(m, j)).cloned()
                }
            })
            .collect();
        if let Some(coeffs) = leading {
            if !validate_form(&FormSpec::new(m, coeffs))?.nonpositive {
                return Err(Error::NotNonpositive(m));
            }
        }
        Ok(Pipeline {
            m,
            provider,
            config,
            prepared: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Truncation order used for `θ`.
    pub fn order_for(&self, theta: &Q) -> Result<u32> {
        let needed = truncation_order(self.m, theta);
        match self.config.m_override {
            Some(given) if given < needed => Err(Error::InsufficientOrder { given, needed }),
            Some(given) => Ok(given),
            None => Ok(needed),
        }
    }

    fn prepare(&self, order: u32) -> Result<Arc<Prepared>> {
        if let Some(p) = self
            .prepared
            .lock()
            .expect("table cache poisoned")
            .get(&order)
        {
            return Ok(p.clone());
        }
        let longer = self.provider.expansion(self.m, order + 1)?;
        let longer = if self.config.bindings.is_empty() {
            (*longer).clone()
        } else {
            longer.substitute(&self.config.bindings)
        };
        let floor = Floor::from_expansion(&longer, order);
        let table = mode_table(
            &longer.with_order(order as i32),
            &ShiftSpec::canonical(),
            &expanding_modes(),
        );
        let columns = table
            .columns
            .into_iter()
            .map(|(mode, rows)| {
                let lambda = mode.eigenvalue();
                (
                    mode,
                    rows.into_iter()
                        .filter(|r| r.kind(&lambda) == RowKind::Growth)
                        .collect(),
                )
            })
            .collect();
        let p = Arc::new(Prepared { columns, floor });
        self.prepared
            .lock()
            .expect("table cache poisoned")
            .insert(order, p.clone());
        Ok(p)
    }

    fn cancellable_factor(&self, poly: &SymPoly, zeros: &BTreeSet<Symbol>) -> Option<Symbol> {
        if poly.len() != 1 {
            return None;
        }
        let (mono, _) = poly.terms().next()?;
        let mut found =
            mono.factors().iter().map(|(s, _)| *s).filter(|s| {
                symbol_role(*s, self.m) == SymbolRole::Cancellable && !zeros.contains(s)
            });
        let first = found.next()?;
        found.next().is_none().then_some(first)
    }

    /// Runs the cascade for `Bn = L·A^{2θ}e^{-θsₙ}sₙ^α` starting from the
    /// constants in `zeros`.
    pub fn run_stage(
        &self,
        theta: &Q,
        alpha: &Q,
        zeros: &BTreeSet<Symbol>,
    ) -> Result<StageOutcome> {
        let order = self.order_for(theta)?;
        let prepared = self.prepare(order)?;
        let shape = BnShape::new(theta.clone(), alpha.clone());
        let mut zeros = zeros.clone();
        let mut cancellations = Vec::new();
        let outcome = |cancellations, verdict| StageOutcome {
            theta: theta.clone(),
            alpha: alpha.clone(),
            order,
            cancellations,
            verdict,
        };
        'restart: loop {
            let mut found = Vec::new();
            for mode in cascade_modes() {
                let rows: Vec<ScaleTerm> = prepared
                    .columns
                    .get(&mode)
                    .into_iter()
                    .flatten()
                    .map(|r| ScaleTerm {
                        coef: r.coef.zero_out(&zeros),
                        ..r.clone()
                    })
                    .filter(|r| !r.coef.is_zero())
                    .collect();
                let sorted = dominance_sort(&rows, &shape, &prepared.floor);
                let mut dominant = None;
                for g in &sorted.groups {
                    let c = extract_constraint(g, mode, &prepared.floor, &self.config.delta0)?;
                    if !c.poly.is_zero() {
                        dominant = Some(c);
                        break;
                    }
                }
                let Some(c) = dominant else { continue };
                if c.poly.collect_in(Symbol::L).len() >= 2 {
                    found.push(c);
                    continue;
                }
                let Some(sym) = self.cancellable_factor(&c.poly, &zeros) else {
                    return Ok(outcome(
                        cancellations,
                        Verdict::Excluded {
                            mode,
                            obstruction: c.poly,
                        },
                    ));
                };
                let reason = format!("{} = 0 on {}", c.poly, mode);
                for s in std::iter::once(sym).chain(consequences(sym, self.m)) {
                    if zeros.insert(s) {
                        cancellations.push(Cancellation {
                            symbol: s,
                            mode,
                            reason: reason.clone(),
                        });
                    }
                }
                continue 'restart;
            }
            let verdict = match found.first() {
                Some(primary) => Verdict::Survives {
                    primary: Box::new(primary.clone()),
                    columns: found.clone(),
                },
                None => Verdict::Vacuous,
            };
            return Ok(outcome(cancellations, verdict));
        }
    }

    fn result_from(
        &self,
        stage: StageOutcome,
        origin: Origin,
        index: usize,
        assumed: &BTreeSet<Symbol>,
    ) -> Option<RegimeResult> {
        let Verdict::Survives { primary, columns } = stage.verdict else {
            return None;
        };
        let beta = qi(2) * &stage.theta + Q::one();
        Some(RegimeResult {
            beta: Some(beta),
            alpha: stage.alpha,
            theta: Some(stage.theta),
            roots: roots_in_l(&primary.poly),
            constraint: Some(primary.poly),
            origin,
            stage: index,
            order: Some(stage.order),
            assumed_zero: assumed.iter().copied().collect(),
            cancellations: stage.cancellations,
            column_constraints: columns,
        })
    }

    /// Candidate pairs `(θ, α)` with `θ ∈ (E1∪E2) ∩ (0, 1/2)`; `α = 0` below
    /// the case threshold and `α ∈ {0} ∪ E3` above it.
    pub fn power_law_candidates(&self) -> Result<Vec<(Q, Q)>> {
        let (e1, e2) = theta_sets(self.m);
        let thetas: BTreeSet<Q> = e1
            .into_iter()
            .chain(e2)
            .filter(|t| t.is_positive() && *t < q(1, 2))
            .collect();
        let threshold = case_threshold(self.m);
        let mut alphas: Option<BTreeSet<Q>> = None;
        let mut out = Vec::new();
        for t in thetas {
            if t < threshold {
                out.push((t, Q::zero()));
                continue;
            }
            if alphas.is_none() {
                let order = 2 * self.m - 2;
                let mut a = alpha_set(self.m, order, &secular_powers(self.m, order)?);
                a.insert(Q::zero());
                alphas = Some(a);
            }
            for a in alphas.iter().flatten() {
                out.push((t.clone(), a.clone()));
            }
        }
        Ok(out)
    }

    /// Power-law regimes `β ∈ (1,2)` surviving the cascade.
    pub fn power_law(&self) -> Result<Vec<RegimeResult>> {
        let candidates = self.power_law_candidates()?;
        let orders: BTreeSet<u32> = candidates
            .iter()
            .map(|(t, _)| self.order_for(t))
            .collect::<Result<_>>()?;
        orders
            .into_par_iter()
            .map(|o| self.prepare(o).map(|_| ()))
            .collect::<Result<Vec<()>>>()?;
        let none = BTreeSet::new();
        let stages: Vec<StageOutcome> = candidates
            .par_iter()
            .map(|(t, a)| self.run_stage(t, a, &none))
            .collect::<Result<_>>()?;
        Ok(stages
            .into_iter()
            .filter_map(|s| self.result_from(s, Origin::PowerLaw, 0, &none))
            .collect())
    }

    /// The quadratic branch `θ = 1/2`, `α = 0`: while every coefficient of
    /// the equation for `L` is a single cancellable constant, the branch
    /// forks into "equation holds" (emitted) and "all those constants
    /// vanish" (the next stage).
    pub fn quadratic(&self) -> Result<Vec<RegimeResult>> {
        let theta = q(1, 2);
        let mut zeros = BTreeSet::new();
        let mut out = Vec::new();
        for index in 0.. {
            let stage = self.run_stage(&theta, &Q::zero(), &zeros)?;
            let mut next = zeros.clone();
            next.extend(stage.cancellations.iter().map(|c| c.symbol));
            let Some(result) = self.result_from(stage, Origin::Quadratic, index, &zeros) else {
                break;
            };
            let fork = self.fork_symbols(
                result
                    .constraint
                    .as_ref()
                    .expect("surviving stage has a constraint"),
            );
            out.push(result);
            let Some(fork) = fork else { break };
            for s in fork {
                next.insert(s);
                next.extend(consequences(s, self.m));
            }
            zeros = next;
        }
        Ok(out)
    }

    fn fork_symbols(&self, poly: &SymPoly) -> Option<Vec<Symbol>> {
        let mut out = Vec::new();
        for coef in poly.collect_in(Symbol::L).values() {
            let syms = coef.symbols();
            if coef.len() != 1 || syms.len() != 1 || coef.degree_in(*syms.first()?) != 1 {
                return None;
            }
            let s = *syms.first()?;
            if symbol_role(s, self.m) != SymbolRole::Cancellable {
                return None;
            }
            out.push(s);
        }
        Some(out)
    }

    /// All regimes: power laws, the quadratic stages and the subquadratic
    /// marker, sorted by `(β, α)` with the marker last.
    pub fn search(&self) -> Result<Vec<RegimeResult>> {
        let mut out = self.power_law()?;
        out.extend(self.quadratic()?);
        out.sort_by(|x, y| (&x.beta, &x.alpha, x.stage).cmp(&(&y.beta, &y.alpha, y.stage)));
        out.push(RegimeResult::subquadratic_marker());
        Ok(out)
    }
}

/// Regime search for `m = 4`.
pub fn regime_search_m4(
    provider: &dyn ExpansionProvider,
    config: RegimeConfig,
) -> Result<Vec<RegimeResult>> {
    Pipeline::new(4, provider, config)?.search()
}

/// Regime search for even `m ≥ 6`.
pub fn regime_search_general(
    m: u32,
    provider: &dyn ExpansionProvider,
    config: RegimeConfig,
) -> Result<Vec<RegimeResult>> {
    if m < 6 || m.is_odd() {
        return Err(Error::UnsupportedOrder {
            m,
            reason: "the general search needs an even order m >= 6".into(),
        });
    }
    Pipeline::new(m, provider, config)?.search()
}

/// Distinct exponents `β` of the non-marker results.
pub fn betas(results: &[RegimeResult]) -> BTreeSet<Q> {
    results.iter().filter_map(|r| r.beta.clone()).collect()
}
