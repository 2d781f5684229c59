//! Recentering an expansion at a nearby point and collecting the projections
//! on the expanding modes as structured scale expressions.
//!
//! With `y = y_b + shift` and `s = sₙ + τ`, a term
//! `coef·s^i·e^{(1-k/2)s}·h_a(y1)h_b(y2)` contributes to the target mode
//! `(c,d)` the entry `C(a,c)C(b,d)·shift1^{a-c}·shift2^{b-d}·coef·(sₙ+τ)^i·
//! e^{(1-k/2)(sₙ+τ)}`. Each shift component is a monomial
//! `scale·A^p·Bn^q·e^{rτ}`, so every entry is a [`ScaleTerm`].
//!
//! For a structured `Bn = L·A^{2θ}·e^{-θsₙ}·sₙ^α` (optionally times `psi`)
//! the entries become [`BoundTerm`]s that can be ordered by dominance: a
//! smaller decay rate in `sₙ` dominates, and at equal rate a larger power of
//! `sₙ` dominates.

use crate::coeffs::{Monomial, SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::rational::{binom, format_q, parse_q, qb, qi, Q};
use crate::series::{AsymSeries, ModeIndex};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// One shift component `scale·A^a_pow·Bn^bn_pow·e^{tau_rate·τ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftComponent {
    pub scale: Q,
    pub a_pow: u32,
    pub bn_pow: u32,
    pub tau_rate: Q,
}

impl ShiftComponent {
    fn parse(text: &str) -> Result<Option<ShiftComponent>> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::ShiftGrammar("empty shift component".into()));
        }
        let mut comp = ShiftComponent {
            scale: Q::one(),
            a_pow: 0,
            bn_pow: 0,
            tau_rate: Q::zero(),
        };
        for factor in split_top_level(&s, '*') {
            comp.absorb(factor, &s)?;
        }
        Ok((!comp.scale.is_zero()).then_some(comp))
    }

    fn absorb(&mut self, factor: &str, whole: &str) -> Result<()> {
        let bad = || Error::ShiftGrammar(format!("cannot read factor {factor:?} in {whole:?}"));
        if let Some(inner) = factor.strip_prefix("e(").and_then(|r| r.strip_suffix(')')) {
            if !inner.contains("tau") {
                return Err(bad());
            }
            let mut rate = Q::one();
            for part in inner.replace("tau", "1").split('*') {
                rate *= parse_q(part).map_err(|_| bad())?;
            }
            self.tau_rate += rate;
            return Ok(());
        }
        let (base, exp) = match factor.split_once('^') {
            Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
            None => (factor, 1),
        };
        match base {
            "A" => self.a_pow += exp,
            "Bn" => self.bn_pow += exp,
            _ => {
                let v = parse_q(base).map_err(|_| bad())?;
                self.scale *= num_traits::pow(v, exp as usize);
            }
        }
        Ok(())
    }
}

impl fmt::Display for ShiftComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.scale.is_one() {
            parts.push(format_q(&self.scale));
        }
        for (name, e) in [("A", self.a_pow), ("Bn", self.bn_pow)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if !self.tau_rate.is_zero() {
            let r = &self.tau_rate;
            let num = match r.numer().to_string().as_str() {
                "1" => "tau".to_string(),
                "-1" => "-tau".to_string(),
                n => format!("{n}*tau"),
            };
            if r.is_integer() {
                parts.push(format!("e({num})"));
            } else {
                parts.push(format!("e({num}/{})", r.denom()));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Splits on `sep` outside parentheses.
fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Per-dimension shift; `None` is the zero shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSpec {
    pub components: [Option<ShiftComponent>; 2],
}

impl ShiftSpec {
    /// The canonical shift `(A·Bn·e^{τ/2}, A·e^{τ/2})`.
    pub fn canonical() -> ShiftSpec {
        let half = Q::new(1.into(), 2.into());
        ShiftSpec {
            components: [
                Some(ShiftComponent {
                    scale: Q::one(),
                    a_pow: 1,
                    bn_pow: 1,
                    tau_rate: half.clone(),
                }),
                Some(ShiftComponent {
                    scale: Q::one(),
                    a_pow: 1,
                    bn_pow: 0,
                    tau_rate: half,
                }),
            ],
        }
    }

    /// No shift at all.
    pub fn zero() -> ShiftSpec {
        ShiftSpec {
            components: [None, None],
        }
    }

    /// Parses `"A*Bn*e(tau/2),A*e(tau/2)"`; each component is `0` or a
    /// product of rationals, `A^p`, `Bn^q` and `e(r*tau)` factors.
    pub fn parse(text: &str) -> Result<ShiftSpec> {
        let parts = split_top_level(text, ',');
        if parts.len() != 2 {
            return Err(Error::ShiftGrammar(format!(
                "expected two comma-separated components in {text:?}"
            )));
        }
        Ok(ShiftSpec {
            components: [
                ShiftComponent::parse(parts[0])?,
                ShiftComponent::parse(parts[1])?,
            ],
        })
    }
}

impl fmt::Display for ShiftSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show =
            |c: &Option<ShiftComponent>| c.as_ref().map_or("0".to_string(), |c| c.to_string());
        write!(
            f,
            "{},{}",
            show(&self.components[0]),
            show(&self.components[1])
        )
    }
}

/// Recentered entry `coef·A^a_pow·Bn^bn_pow·e^{-rate·sₙ}·(sₙ+τ)^spow·e^{tau_rate·τ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleTerm {
    pub coef: SymPoly,
    pub a_pow: u32,
    pub bn_pow: u32,
    /// Decay rate in `sₙ` before the `Bn` substitution: `k/2 - 1`.
    pub rate: Q,
    /// Power of `(sₙ+τ)`.
    pub spow: u32,
    /// Exponent of `e^{τ}`.
    pub tau_rate: Q,
}

/// Key under which entries with identical scales are merged.
type ScaleKey = (u32, u32, Q, u32, Q);

impl ScaleTerm {
    fn key(&self) -> ScaleKey {
        (
            self.a_pow,
            self.bn_pow,
            self.rate.clone(),
            self.spow,
            self.tau_rate.clone(),
        )
    }

    /// Classification against the eigenvalue `λ` of the target mode.
    pub fn kind(&self, lambda: &Q) -> RowKind {
        if !self.tau_rate.is_positive() {
            RowKind::NonGrowing
        } else if &self.tau_rate > lambda {
            RowKind::Artificial
        } else {
            RowKind::Growth
        }
    }

    /// Substitutes the structured `Bn`.
    pub fn bind(&self, shape: &BnShape) -> BoundTerm {
        let p = self.bn_pow;
        let pq = qi(p as i64);
        let mut mono = vec![(Symbol::L, p)];
        if shape.psi {
            mono.push((Symbol::Psi, p));
        }
        BoundTerm {
            coef: self.coef.mul_monomial(&Monomial::from_factors(mono)),
            a_pow: qi(self.a_pow as i64) + qi(2) * &shape.theta * &pq,
            bn_pow: p,
            rate: &self.rate + &shape.theta * &pq,
            spow: qi(self.spow as i64) + &shape.alpha * &pq,
            i: self.spow,
            tau_rate: self.tau_rate.clone(),
        }
    }
}

fn show_pow(name: &str, e: &str) -> String {
    match e {
        "0" => String::new(),
        "1" => format!("·{name}"),
        e => format!("·{name}^{e}"),
    }
}

/// `e^{c·var}` with unit coefficients elided; empty for `c = 0`.
fn show_exp(c: &Q, var: &str) -> String {
    match format_q(c).as_str() {
        "0" => String::new(),
        "1" => format!("·e^{{{var}}}"),
        "-1" => format!("·e^{{-{var}}}"),
        t => format!("·e^{{{t}·{var}}}"),
    }
}

impl fmt::Display for ScaleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coef = if self.coef.len() > 1 {
            format!("({})", self.coef)
        } else {
            self.coef.to_string()
        };
        write!(f, "{coef}")?;
        write!(f, "{}", show_pow("A", &self.a_pow.to_string()))?;
        write!(f, "{}", show_pow("Bn", &self.bn_pow.to_string()))?;
        write!(f, "{}", show_exp(&-&self.rate, "sn"))?;
        write!(f, "{}", show_pow("(sn+tau)", &self.spow.to_string()))?;
        write!(f, "{}", show_exp(&self.tau_rate, "tau"))?;
        Ok(())
    }
}

/// How a recentered entry behaves as `τ` grows, relative to the target
/// eigenvalue `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RowKind {
    /// `0 < tau_rate ≤ λ`: genuine growth along the expanding mode.
    Growth,
    /// `tau_rate > λ`: an artefact of evaluating the expansion at large `τ`;
    /// flagged and ignored in constraint extraction.
    Artificial,
    /// `tau_rate ≤ 0`: does not grow.
    NonGrowing,
}

/// Structured `Bn = L·A^{2θ}·e^{-θsₙ}·sₙ^α` (times `psi` when requested).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BnShape {
    pub theta: Q,
    pub alpha: Q,
    pub psi: bool,
}

impl BnShape {
    pub fn new(theta: Q, alpha: Q) -> BnShape {
        BnShape {
            theta,
            alpha,
            psi: false,
        }
    }
}

/// A [`ScaleTerm`] after the `Bn` substitution, with exact rational
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTerm {
    /// Coefficient including `L^{bn_pow}` (and `psi^{bn_pow}`).
    pub coef: SymPoly,
    pub a_pow: Q,
    pub bn_pow: u32,
    /// Decay rate `k/2 - 1 + θ·bn_pow`.
    pub rate: Q,
    /// Power of `sₙ` at `τ = 0`: `i + α·bn_pow`.
    pub spow: Q,
    /// Power `i` of `(sₙ+τ)`.
    pub i: u32,
    pub tau_rate: Q,
}

/// Dominance order on `(rate, spow)`: `Less` means `x` dominates `y`.
pub fn dominance_cmp(x: (&Q, &Q), y: (&Q, &Q)) -> Ordering {
    x.0.cmp(y.0).then_with(|| y.1.cmp(x.1))
}

/// Remainder scale `sₙ^spow·e^{-rate·sₙ}` of a truncated expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Floor {
    pub rate: Q,
    pub spow: Q,
}

impl Floor {
    /// Default floor `sₙ·e^{(2-m)sₙ}` of a grade-`(2m-3)` truncation.
    pub fn default_for(m: u32) -> Floor {
        Floor {
            rate: qi(m as i64 - 2),
            spow: Q::one(),
        }
    }

    /// Floor of a truncation at grade `order`, read off an expansion that
    /// reaches grade `order + 1`: rate `(order-1)/2` and the largest power of
    /// `s` at grade `order + 1`.
    pub fn from_expansion(longer: &AsymSeries, order: u32) -> Floor {
        let next = order as i32 + 1;
        let spow = longer.max_s_power().get(&next).copied().unwrap_or(0);
        Floor {
            rate: Q::new((order as i64 - 1).into(), 2.into()),
            spow: qi(spow as i64),
        }
    }

    /// True when `(rate, spow)` strictly dominates the floor.
    pub fn is_dominated_by(&self, rate: &Q, spow: &Q) -> bool {
        dominance_cmp((rate, spow), (&self.rate, &self.spow)) == Ordering::Less
    }
}

/// Recentered entries per target mode.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModeTable {
    pub columns: BTreeMap<ModeIndex, Vec<ScaleTerm>>,
}

impl ModeTable {
    pub fn column(&self, mode: ModeIndex) -> &[ScaleTerm] {
        self.columns.get(&mode).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.columns.values().all(Vec::is_empty)
    }

    /// JSON form: `{"columns":[{"mode":[c,d],"entries":[...]}]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let columns: Vec<serde_json::Value> = self
            .columns
            .iter()
            .map(|(mode, terms)| {
                let lambda = mode.eigenvalue();
                let entries: Vec<serde_json::Value> = terms
                    .iter()
                    .map(|t| {
                        serde_json::json!({
                            "coef": t.coef.to_json_value(),
                            "A": t.a_pow,
                            "Bn": t.bn_pow,
                            "rate": format_q(&t.rate),
                            "spow": t.spow,
                            "tau_rate": format_q(&t.tau_rate),
                            "kind": format!("{:?}", t.kind(&lambda)).to_lowercase(),
                        })
                    })
                    .collect();
                serde_json::json!({"mode": [mode.a, mode.b], "entries": entries})
            })
            .collect();
        serde_json::json!({ "columns": columns })
    }
}

fn component_power(comp: &Option<ShiftComponent>, e: u32) -> Option<(Q, u32, u32, Q)> {
    match comp {
        None if e > 0 => None,
        None => Some((Q::one(), 0, 0, Q::zero())),
        Some(c) => Some((
            num_traits::pow(c.scale.clone(), e as usize),
            c.a_pow * e,
            c.bn_pow * e,
            &c.tau_rate * qi(e as i64),
        )),
    }
}

/// Recenters a series: collects, for every reachable target mode in
/// `modes` (all modes when `None`), the merged scale entries.
fn collect(series: &AsymSeries, shift: &ShiftSpec, modes: Option<&[ModeIndex]>) -> ModeTable {
    let mut acc: BTreeMap<ModeIndex, BTreeMap<ScaleKey, SymPoly>> = BTreeMap::new();
    for (key, coef) in series.terms() {
        let targets: Vec<ModeIndex> = match modes {
            Some(list) => list
                .iter()
                .copied()
                .filter(|t| t.a <= key.a && t.b <= key.b)
                .collect(),
            None => (0..=key.a)
                .flat_map(|c| (0..=key.b).map(move |d| ModeIndex::new(c, d)))
                .collect(),
        };
        let rate = Q::new((key.k as i64 - 2).into(), 2.into());
        for t in targets {
            let (Some(p1), Some(p2)) = (
                component_power(&shift.components[0], key.a - t.a),
                component_power(&shift.components[1], key.b - t.b),
            ) else {
                continue;
            };
            let factor = qb(binom(key.a, t.a) * binom(key.b, t.b)) * &p1.0 * &p2.0;
            let term = ScaleTerm {
                coef: coef.scale(&factor),
                a_pow: p1.1 + p2.1,
                bn_pow: p1.2 + p2.2,
                rate: rate.clone(),
                spow: key.i,
                tau_rate: -&rate + &p1.3 + &p2.3,
            };
            acc.entry(t)
                .or_default()
                .entry(term.key())
                .or_default()
                .add_assign_ref(&term.coef);
        }
    }
    let mut table = ModeTable::default();
    for (mode, entries) in acc {
        let list: Vec<ScaleTerm> = entries
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a_pow, bn_pow, rate, spow, tau_rate), coef)| ScaleTerm {
                coef,
                a_pow,
                bn_pow,
                rate,
                spow,
                tau_rate,
            })
            .collect();
        if !list.is_empty() {
            table.columns.insert(mode, list);
        }
    }
    if let Some(list) = modes {
        for m in list {
            table.columns.entry(*m).or_default();
        }
    }
    table
}

/// Full recentering on every target mode.
pub fn recenter(series: &AsymSeries, shift: &ShiftSpec) -> ModeTable {
    collect(series, shift, None)
}

/// Recentering restricted to the given target modes.
pub fn mode_table(series: &AsymSeries, shift: &ShiftSpec, modes: &[ModeIndex]) -> ModeTable {
    collect(series, shift, Some(modes))
}

/// The expanding target modes `(0,0)`, `(1,0)`, `(0,1)`.
pub fn expanding_modes() -> Vec<ModeIndex> {
    vec![
        ModeIndex::new(0, 0),
        ModeIndex::new(1, 0),
        ModeIndex::new(0, 1),
    ]
}

/// Entries sharing one `(rate, spow)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    pub rate: Q,
    pub spow: Q,
    pub terms: Vec<BoundTerm>,
}

impl Group {
    /// Distinct powers of `L` present in the group.
    pub fn l_powers(&self) -> Vec<u32> {
        let mut p: Vec<u32> = self.terms.iter().map(|t| t.bn_pow).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    /// Sum of the coefficients with a given power of `L` (without `L`).
    pub fn coefficient_of_power(&self, bn_pow: u32) -> SymPoly {
        let mut out = SymPoly::zero();
        for t in self.terms.iter().filter(|t| t.bn_pow == bn_pow) {
            out.add_assign_ref(&t.coef);
        }
        strip_power(&out, Symbol::L, bn_pow)
    }
}

/// Result of [`dominance_sort`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedColumn {
    /// Groups strictly dominating the floor, most dominant first.
    pub groups: Vec<Group>,
    /// Number of entries discarded into the remainder.
    pub remainder: usize,
}

/// Binds `Bn`, groups entries by `(rate, spow)` and sorts the groups by
/// dominance; entries not strictly dominating the floor are discarded.
pub fn dominance_sort(entries: &[ScaleTerm], shape: &BnShape, floor: &Floor) -> SortedColumn {
    let mut groups: Vec<Group> = Vec::new();
    let mut remainder = 0;
    for e in entries {
        let b = e.bind(shape);
        if b.coef.is_zero() {
            continue;
        }
        if !floor.is_dominated_by(&b.rate, &b.spow) {
            remainder += 1;
            continue;
        }
        match groups
            .iter_mut()
            .find(|g| g.rate == b.rate && g.spow == b.spow)
        {
            Some(g) => g.terms.push(b),
            None => groups.push(Group {
                rate: b.rate.clone(),
                spow: b.spow.clone(),
                terms: vec![b],
            }),
        }
    }
    groups.sort_by(|x, y| dominance_cmp((&x.rate, &x.spow), (&y.rate, &y.spow)));
    SortedColumn { groups, remainder }
}

/// A polynomial equation `poly = 0` read off a dominant group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub poly: SymPoly,
    pub mode: ModeIndex,
    pub rate: Q,
    pub spow: Q,
    pub a_pow: Q,
    pub justification: String,
}

/// Divides every monomial of `p` by `sym^e` (all monomials must contain it).
pub fn strip_power(p: &SymPoly, sym: Symbol, e: u32) -> SymPoly {
    let mut out = SymPoly::zero();
    for (mono, c) in p.terms() {
        let (rest, have) = mono.without(sym);
        debug_assert!(have >= e);
        out.add_term(c.clone(), rest.mul(&Monomial::power(sym, have - e)));
    }
    out
}

/// Constraint polynomial of a dominant group on a mode with eigenvalue
/// `λ > 0`: `Σ coef·(1 + rate/λ)^{i - i_min}` with the lowest power of `L`
/// divided out. The common power of `A` is eliminated (all entries of a
/// group must share it).
pub fn extract_constraint(
    group: &Group,
    mode: ModeIndex,
    floor: &Floor,
    delta0: &Q,
) -> Result<Constraint> {
    if !floor.is_dominated_by(&group.rate, &group.spow) || group.terms.is_empty() {
        return Err(Error::DominatedByFloor);
    }
    let lambda = mode.eigenvalue();
    let a_pow = group.terms[0].a_pow.clone();
    if group.terms.iter().any(|t| t.a_pow != a_pow) {
        return Err(Error::InvalidSeed(
            "codominant entries carry different powers of A".into(),
        ));
    }
    let i_min = group.terms.iter().map(|t| t.i).min().unwrap_or(0);
    let growth = Q::one() + &group.rate / &lambda;
    let mut poly = SymPoly::zero();
    for t in &group.terms {
        let w = num_traits::pow(growth.clone(), (t.i - i_min) as usize);
        poly.add_scaled(&t.coef, &w);
    }
    let low = group.l_powers().first().copied().unwrap_or(0);
    let poly = strip_power(&poly, Symbol::L, low);
    let justification = format!(
        "dominant group of v_{{b,{},{}}} at e^{{-{}·sn}}·sn^{}: a nonzero sum would push the mode past δ0={} within τ ≈ {}·sn",
        mode.a,
        mode.b,
        format_q(&group.rate),
        format_q(&group.spow),
        format_q(delta0),
        format_q(&(&group.rate / &lambda)),
    );
    Ok(Constraint {
        poly,
        mode,
        rate: group.rate.clone(),
        spow: group.spow.clone(),
        a_pow,
        justification,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use crate::series::TermKey;

    fn c(k: u32, j: u32) -> SymPoly {
        SymPoly::c(k, j)
    }

    #[test]
    fn shift_grammar() {
        assert_eq!(
            ShiftSpec::parse("A*Bn*e(tau/2),A*e(tau/2)").unwrap(),
            ShiftSpec::canonical()
        );
        assert_eq!(ShiftSpec::parse("0,0").unwrap(), ShiftSpec::zero());
        let s = ShiftSpec::parse("0, A").unwrap();
        assert!(s.components[0].is_none());
        assert_eq!(s.components[1].as_ref().unwrap().a_pow, 1);
        assert!(matches!(
            ShiftSpec::parse("A*sin(tau)"),
            Err(Error::ShiftGrammar(_))
        ));
        assert!(matches!(ShiftSpec::parse("A"), Err(Error::ShiftGrammar(_))));
        let odd = ShiftSpec::parse("2*A^2*e(3*tau/2),e(-tau)").unwrap();
        let c0 = odd.components[0].as_ref().unwrap();
        assert_eq!(
            (c0.scale.clone(), c0.a_pow, c0.tau_rate.clone()),
            (qi(2), 2, q(3, 2))
        );
        assert_eq!(ShiftSpec::parse(&odd.to_string()).unwrap(), odd);
        let round = ShiftSpec::parse(&ShiftSpec::canonical().to_string()).unwrap();
        assert_eq!(round, ShiftSpec::canonical());
    }

    #[test]
    fn zero_shift_is_identity() {
        let mut s = AsymSeries::zero(6);
        s.add_term(TermKey::new(4, 0, 4, 0), &c(4, 0));
        s.add_term(TermKey::new(6, 1, 6, 0), &c(4, 0).pow(2).scale(&qi(32)));
        let t = recenter(&s, &ShiftSpec::zero());
        assert_eq!(t.columns.len(), 2);
        let e = &t.column(ModeIndex::new(6, 0))[0];
        assert_eq!((e.a_pow, e.bn_pow, e.spow), (0, 0, 1));
        assert_eq!(e.coef, c(4, 0).pow(2).scale(&qi(32)));
        assert_eq!(e.tau_rate, qi(-2));
    }

    #[test]
    fn homogeneous_projection_on_first_moment() {
        let mut s = AsymSeries::zero(4);
        for i in 0..=4 {
            s.add_term(TermKey::new(4, 0, 4 - i, i), &c(4, i));
        }
        let t = mode_table(&s, &ShiftSpec::canonical(), &[ModeIndex::new(1, 0)]);
        for e in t.column(ModeIndex::new(1, 0)) {
            let i = 3 - e.bn_pow;
            assert_eq!(e.coef, c(4, i).scale(&qi(4 - i as i64)));
            assert_eq!(
                (e.a_pow, e.rate.clone(), e.tau_rate.clone()),
                (3, qi(1), q(1, 2))
            );
        }
        assert_eq!(t.column(ModeIndex::new(1, 0)).len(), 4);
        assert!(recenter(&AsymSeries::zero(4), &ShiftSpec::canonical()).is_empty());
    }

    #[test]
    fn dominance_and_grouping() {
        // rates 1 - k/2 - (k-1-j)θ style comparison at θ = 1/4
        let mk = |k: u32, j: u32| ScaleTerm {
            coef: c(k, j),
            a_pow: k - 1,
            bn_pow: k - 1 - j,
            rate: q(k as i64 - 2, 2),
            spow: 0,
            tau_rate: q(1, 2),
        };
        let shape = BnShape::new(q(1, 4), qi(0));
        let floor = Floor {
            rate: qi(10),
            spow: qi(0),
        };
        let sorted = dominance_sort(&[mk(6, 0), mk(7, 6)], &shape, &floor);
        assert_eq!(sorted.groups.len(), 2);
        assert_eq!(sorted.groups[0].rate, q(5, 2));
        assert_eq!(sorted.groups[1].rate, q(13, 4));
        let dup = dominance_sort(&[mk(6, 0), mk(6, 0)], &shape, &floor);
        assert_eq!(dup.groups.len(), 1);
        let cut = dominance_sort(
            &[mk(6, 0), mk(7, 6)],
            &shape,
            &Floor {
                rate: q(5, 2),
                spow: qi(0),
            },
        );
        assert_eq!((cut.groups.len(), cut.remainder), (0, 2));
    }

    #[test]
    fn constraint_is_homogeneous_in_group_scale() {
        let mk = |coef: SymPoly, k: u32, bn: u32| ScaleTerm {
            coef,
            a_pow: k - 1,
            bn_pow: bn,
            rate: q(k as i64 - 2, 2),
            spow: 0,
            tau_rate: q(1, 2),
        };
        let shape = BnShape::new(q(1, 4), qi(0));
        let floor = Floor {
            rate: qi(2),
            spow: qi(0),
        };
        let entries = vec![
            mk(c(4, 0).scale(&qi(4)), 4, 3),
            mk(c(5, 3).scale(&qi(2)), 5, 1),
        ];
        let groups = dominance_sort(&entries, &shape, &floor).groups;
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].rate, q(7, 4));
        let k = extract_constraint(&groups[0], ModeIndex::new(1, 0), &floor, &q(1, 10)).unwrap();
        assert_eq!(k.poly, SymPoly::parse("4*C[4,0]*L^2 + 2*C[5,3]").unwrap());
        assert_eq!(k.a_pow, q(9, 2));
        let mut scaled = groups[0].clone();
        for t in &mut scaled.terms {
            t.coef = t.coef.scale(&qi(3));
        }
        let k3 = extract_constraint(&scaled, ModeIndex::new(1, 0), &floor, &q(1, 10)).unwrap();
        assert_eq!(k3.poly, k.poly.scale(&qi(3)));
        let below = Floor {
            rate: qi(1),
            spow: qi(0),
        };
        assert_eq!(
            extract_constraint(&groups[0], ModeIndex::new(1, 0), &below, &q(1, 10)),
            Err(Error::DominatedByFloor)
        );
    }
}
