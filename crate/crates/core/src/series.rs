//! Formal asymptotic series in similarity variables.
//!
//! A series is a finite sum of terms `coef · s^i · e^{(1-k/2)s} · h_a(y1) h_b(y2)`
//! truncated at grade `M`: the grade `k` counts half-powers of `e^{-s}`, so a
//! seed of profile order `m` sits at `k = m` and products of grades `k1`, `k2`
//! land on `k1 + k2 - 2`.

use crate::coeffs::{SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::hermite;
use crate::rational::{format_q, q, qi, to_f64, Q};
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

/// Hermite mode `h_a(y1) h_b(y2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub a: u32,
    pub b: u32,
}

impl ModeIndex {
    pub fn new(a: u32, b: u32) -> ModeIndex {
        ModeIndex { a, b }
    }

    /// Total degree `a + b`.
    pub fn degree(&self) -> u32 {
        self.a + self.b
    }

    /// Eigenvalue `1 - (a+b)/2` of the linearized operator on this mode.
    pub fn eigenvalue(&self) -> Q {
        eigenvalue(self.a, self.b)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Eigenvalue `1 - (a+b)/2` of `h_a(y1) h_b(y2)`.
pub fn eigenvalue(a: u32, b: u32) -> Q {
    q(2 - (a + b) as i64, 2)
}

/// Exponent `1 - k/2` carried by grade `k`.
pub fn grade_exponent(k: i32) -> Q {
    q(2 - k as i64, 2)
}

/// Exponential grade `k` (factor `e^{(1-k/2)s}`) and power `i` of `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderIndex {
    pub k: i32,
    pub i: u32,
}

/// Key of a single series term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub k: i32,
    pub i: u32,
    pub a: u32,
    pub b: u32,
}

impl TermKey {
    pub fn new(k: i32, i: u32, a: u32, b: u32) -> TermKey {
        TermKey { k, i, a, b }
    }

    pub fn order(&self) -> OrderIndex {
        OrderIndex {
            k: self.k,
            i: self.i,
        }
    }

    pub fn mode(&self) -> ModeIndex {
        ModeIndex {
            a: self.a,
            b: self.b,
        }
    }
}

/// Finite formal series truncated at grade `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymSeries {
    order: i32,
    terms: BTreeMap<TermKey, SymPoly>,
}

impl AsymSeries {
    /// The zero series with truncation order `order`.
    pub fn zero(order: i32) -> AsymSeries {
        AsymSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// A single term (dropped if above the truncation order or zero).
    pub fn single(order: i32, key: TermKey, coef: SymPoly) -> AsymSeries {
        let mut s = AsymSeries::zero(order);
        s.add_term(key, &coef);
        s
    }

    /// Truncation order `M`.
    pub fn order(&self) -> i32 {
        self.order
    }

    /// Stored terms in canonical `(k, i, a, b)` order.
    pub fn terms(&self) -> &BTreeMap<TermKey, SymPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of one term (zero when absent).
    pub fn coefficient(&self, key: TermKey) -> SymPoly {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    /// Adds `coef` to the term `key`, discarding grades above the order.
    pub fn add_term(&mut self, key: TermKey, coef: &SymPoly) {
        if key.k > self.order || coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_default();
        slot.add_assign_ref(coef);
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Same series with a different truncation order (terms above the new
    /// order are discarded).
    pub fn with_order(&self, order: i32) -> AsymSeries {
        AsymSeries {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k.k <= order)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Termwise sum; both series must share the truncation order.
    pub fn add(&self, other: &AsymSeries) -> Result<AsymSeries> {
        self.check_order(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        Ok(out)
    }

    /// Termwise difference.
    pub fn sub(&self, other: &AsymSeries) -> Result<AsymSeries> {
        self.add(&other.negate())
    }

    /// Additive inverse.
    pub fn negate(&self) -> AsymSeries {
        self.scale(&qi(-1))
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale(&self, factor: &Q) -> AsymSeries {
        let mut out = AsymSeries::zero(self.order);
        if factor.is_zero() {
            return out;
        }
        out.terms = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c.scale(factor)))
            .collect();
        out
    }

    fn check_order(&self, other: &AsymSeries) -> Result<()> {
        if self.order != other.order {
            return Err(Error::OrderMismatch(
                self.order.max(0) as u32,
                other.order.max(0) as u32,
            ));
        }
        Ok(())
    }

    /// Product: grades combine as `k1 + k2 - 2`, powers of `s` add, and the
    /// Hermite factors linearize in each dimension; grades above the order
    /// are dropped.
    pub fn multiply(&self, other: &AsymSeries) -> Result<AsymSeries> {
        self.check_order(other)?;
        let order = self.order;
        let left: Vec<(&TermKey, &SymPoly)> = self.terms.iter().collect();
        let partials: Vec<BTreeMap<TermKey, SymPoly>> = left
            .par_iter()
            .map(|(k1, c1)| {
                let mut acc: BTreeMap<TermKey, SymPoly> = BTreeMap::new();
                for (k2, c2) in &other.terms {
                    let k = k1.k + k2.k - 2;
                    if k > order {
                        continue;
                    }
                    multiply_term_into(&mut acc, k1, c1, k2, c2, k);
                }
                acc
            })
            .collect();
        let mut out = AsymSeries::zero(order);
        for part in partials {
            for (k, c) in part {
                out.add_term(k, &c);
            }
        }
        Ok(out)
    }

    /// Square `u²`, enumerating unordered term pairs once.
    pub fn square(&self) -> AsymSeries {
        let order = self.order;
        let list: Vec<(&TermKey, &SymPoly)> = self.terms.iter().collect();
        let partials: Vec<BTreeMap<TermKey, SymPoly>> = (0..list.len())
            .into_par_iter()
            .map(|x| {
                let mut acc: BTreeMap<TermKey, SymPoly> = BTreeMap::new();
                let (k1, c1) = list[x];
                for &(k2, c2) in &list[x..] {
                    let k = k1.k + k2.k - 2;
                    if k > order {
                        continue;
                    }
                    if std::ptr::eq(k1, k2) {
                        multiply_term_into(&mut acc, k1, c1, k2, c2, k);
                    } else {
                        let doubled = c1.scale(&qi(2));
                        multiply_term_into(&mut acc, k1, &doubled, k2, c2, k);
                    }
                }
                acc
            })
            .collect();
        let mut out = AsymSeries::zero(order);
        for part in partials {
            for (k, c) in part {
                out.add_term(k, &c);
            }
        }
        out
    }

    /// Residual `∂_s u - 𝓛u - u²` of the flow, truncated at the order.
    pub fn apply_flow_residual(&self) -> AsymSeries {
        let mut out = self.square().negate();
        for (key, c) in &self.terms {
            let rate = grade_exponent(key.k) - eigenvalue(key.a, key.b);
            out.add_term(*key, &c.scale(&rate));
            if key.i > 0 {
                let lowered = TermKey {
                    i: key.i - 1,
                    ..*key
                };
                out.add_term(lowered, &c.scale(&qi(key.i as i64)));
            }
        }
        out
    }

    /// All `(k, i)` coefficients of one mode.
    pub fn project(&self, mode: ModeIndex) -> BTreeMap<OrderIndex, SymPoly> {
        self.terms
            .iter()
            .filter(|(k, _)| k.mode() == mode)
            .map(|(k, c)| (k.order(), c.clone()))
            .collect()
    }

    /// Terms of a single grade.
    pub fn grade(&self, k: i32) -> impl Iterator<Item = (&TermKey, &SymPoly)> {
        self.terms
            .range(TermKey::new(k, 0, 0, 0)..TermKey::new(k + 1, 0, 0, 0))
    }

    /// Occupied `(k, i)` pairs.
    pub fn occupied_orders(&self) -> Vec<OrderIndex> {
        let mut v: Vec<OrderIndex> = self.terms.keys().map(|k| k.order()).collect();
        v.dedup();
        v
    }

    /// Largest power of `s` per grade.
    pub fn max_s_power(&self) -> BTreeMap<i32, u32> {
        let mut out = BTreeMap::new();
        for key in self.terms.keys() {
            let e = out.entry(key.k).or_insert(0);
            *e = (*e).max(key.i);
        }
        out
    }

    /// Applies an arbitrary transformation to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(&SymPoly) -> SymPoly) -> AsymSeries {
        let mut out = AsymSeries::zero(self.order);
        for (k, c) in &self.terms {
            out.add_term(*k, &f(c));
        }
        out
    }

    /// Substitutes rational values for symbols in every coefficient.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Q>) -> AsymSeries {
        self.map_coefficients(|c| c.substitute(bindings))
    }

    /// Union of the symbols appearing in the coefficients.
    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        self.terms.values().flat_map(|c| c.symbols()).collect()
    }

    /// Per-mode coefficients of the series at time `s` for fully bound
    /// coefficients (floating point).
    pub fn mode_values(
        &self,
        s: f64,
        bindings: &BTreeMap<Symbol, f64>,
    ) -> Result<BTreeMap<ModeIndex, f64>> {
        let mut out: BTreeMap<ModeIndex, f64> = BTreeMap::new();
        for (key, c) in &self.terms {
            let v = c.eval_f64(bindings)?
                * s.powi(key.i as i32)
                * (to_f64(&grade_exponent(key.k)) * s).exp();
            *out.entry(key.mode()).or_insert(0.0) += v;
        }
        Ok(out)
    }

    /// Evaluates the series at `(y1, y2, s)` (floating point).
    pub fn eval_f64(
        &self,
        y1: f64,
        y2: f64,
        s: f64,
        bindings: &BTreeMap<Symbol, f64>,
    ) -> Result<f64> {
        let modes = self.mode_values(s, bindings)?;
        Ok(modes
            .iter()
            .map(|(m, v)| {
                v * hermite::hermite_coefficients(m.a).eval_f64(y1)
                    * hermite::hermite_coefficients(m.b).eval_f64(y2)
            })
            .sum())
    }

    /// JSON form `{"M":…, "terms":[{"k","i","a","b","coef"}]}`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                serde_json::json!({"k": k.k, "i": k.i, "a": k.a, "b": k.b, "coef": c.to_json_value()})
            })
            .collect();
        serde_json::json!({ "M": self.order, "terms": terms })
    }

    /// Inverse of [`AsymSeries::to_json_value`].
    pub fn from_json_value(value: &serde_json::Value) -> Result<AsymSeries> {
        let order = value
            .get("M")
            .and_then(|m| m.as_i64())
            .ok_or_else(|| Error::Parse("series JSON needs an integer \"M\"".into()))?
            as i32;
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("series JSON needs a \"terms\" array".into()))?;
        let mut out = AsymSeries::zero(order);
        for t in terms {
            let field = |name: &str| {
                t.get(name)
                    .and_then(|v| v.as_i64())
                    .ok_or_else(|| Error::Parse(format!("series term without integer {name:?}")))
            };
            let (k, i, a, b) = (field("k")?, field("i")?, field("a")?, field("b")?);
            if i < 0 || a < 0 || b < 0 {
                return Err(Error::Parse("negative index in series term".into()));
            }
            let coef = SymPoly::from_json_value(t.get("coef").unwrap_or(&serde_json::Value::Null))?;
            out.add_term(TermKey::new(k as i32, i as u32, a as u32, b as u32), &coef);
        }
        Ok(out)
    }
}

fn multiply_term_into(
    acc: &mut BTreeMap<TermKey, SymPoly>,
    k1: &TermKey,
    c1: &SymPoly,
    k2: &TermKey,
    c2: &SymPoly,
    k: i32,
) {
    let coef = c1.mul_ref(c2);
    if coef.is_zero() {
        return;
    }
    let pa = hermite::product_terms(k1.a, k2.a);
    let pb = hermite::product_terms(k1.b, k2.b);
    let i = k1.i + k2.i;
    for (na, ga) in pa.iter() {
        for (nb, gb) in pb.iter() {
            let slot = acc.entry(TermKey::new(k, i, *na, *nb)).or_default();
            slot.add_scaled(&coef, &(ga * gb));
        }
    }
}

/// Renders `e^{(1-k/2)s}` as `e^{-2s}`, `e^{-3s/2}`, or nothing for `k = 2`.
fn exp_factor(k: i32) -> Option<String> {
    let e = grade_exponent(k);
    if e.is_zero() {
        return None;
    }
    let text = if e.is_integer() {
        match format_q(&e).as_str() {
            "1" => "s".to_string(),
            "-1" => "-s".to_string(),
            n => format!("{n}s"),
        }
    } else {
        format!("{}s/{}", e.numer(), e.denom())
    };
    Some(format!("e^{{{text}}}"))
}

impl fmt::Display for AsymSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (key, c) in &self.terms {
            let coef = if c.len() > 1 {
                format!("({c})")
            } else {
                c.to_string()
            };
            let mut scale = Vec::new();
            match key.i {
                0 => {}
                1 => scale.push("s".to_string()),
                i => scale.push(format!("s^{i}")),
            }
            if let Some(e) = exp_factor(key.k) {
                scale.push(e);
            }
            let scale = if scale.is_empty() {
                "1".to_string()
            } else {
                scale.join("·")
            };
            writeln!(f, "{coef} · {scale} · h{}(y1)h{}(y2)", key.a, key.b)?;
        }
        Ok(())
    }
}
