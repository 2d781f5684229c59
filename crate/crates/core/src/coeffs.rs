//! Exact multivariate polynomials over the rationals in a closed universe of
//! named constants: the Taylor constants `C[k,j]`, the amplitude `A`, the
//! regime constant `L` and the slowly varying factor `psi`.
//!
//! Polynomials are stored in canonical form (a sorted map from exponent
//! vectors to non-zero rational coefficients), so structural equality is
//! polynomial equality and serialization is order-independent.

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, to_f64, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// A named constant. The ordering (all `C[k,j]` by `(k,j)`, then `A`, `L`,
/// `psi`) fixes the canonical monomial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Taylor constant in front of `e^{(1-k/2)s} h_{k-j}(y1) h_j(y2)`.
    C { k: u32, j: u32 },
    /// Recentering amplitude.
    A,
    /// Limit constant of a blow-up-set regime.
    L,
    /// Slowly varying factor of the structured shift.
    Psi,
}

impl Symbol {
    /// Taylor constant `C[k,j]`. Panics unless `k >= 2` and `j <= k`.
    pub fn c(k: u32, j: u32) -> Symbol {
        assert!(
            k >= 2 && j <= k,
            "C[{k},{j}] is outside 2 <= k, 0 <= j <= k"
        );
        Symbol::C { k, j }
    }

    /// `(k, j)` for a Taylor constant.
    pub fn as_c(&self) -> Option<(u32, u32)> {
        match *self {
            Symbol::C { k, j } => Some((k, j)),
            _ => None,
        }
    }

    /// Parses `"C[k,j]"`, `"A"`, `"L"` or `"psi"`.
    pub fn parse(text: &str) -> Result<Symbol> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "A" => return Ok(Symbol::A),
            "L" => return Ok(Symbol::L),
            "psi" | "PSI" | "ψ" => return Ok(Symbol::Psi),
            _ => {}
        }
        let inner = s
            .strip_prefix("C[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("unknown symbol {text:?}")))?;
        let (k, j) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("malformed constant {text:?}")))?;
        let k: u32 = k
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {text:?}")))?;
        let j: u32 = j
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {text:?}")))?;
        if k < 2 || j > k {
            return Err(Error::Parse(format!(
                "{text:?} violates 2 <= k, 0 <= j <= k"
            )));
        }
        Ok(Symbol::C { k, j })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::C { k, j } => write!(f, "C[{k},{j}]"),
            Symbol::A => write!(f, "A"),
            Symbol::L => write!(f, "L"),
            Symbol::Psi => write!(f, "psi"),
        }
    }
}

/// Exponent vector: symbols in increasing order with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    /// The empty monomial `1`.
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    /// A single symbol raised to `exp` (the unit monomial when `exp == 0`).
    pub fn power(sym: Symbol, exp: u32) -> Monomial {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(sym, exp)])
        }
    }

    /// Builds a monomial from arbitrary factors, merging repeats.
    pub fn from_factors(factors: impl IntoIterator<Item = (Symbol, u32)>) -> Monomial {
        let mut map: BTreeMap<Symbol, u32> = BTreeMap::new();
        for (s, e) in factors {
            *map.entry(s).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// Factors in canonical order.
    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    /// Exponent of `sym` (zero when absent).
    pub fn exponent(&self, sym: Symbol) -> u32 {
        self.0
            .iter()
            .find(|(s, _)| *s == sym)
            .map_or(0, |&(_, e)| e)
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Product of two monomials (exponents add).
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Removes `sym` from the monomial, returning its former exponent.
    pub fn without(&self, sym: Symbol) -> (Monomial, u32) {
        let e = self.exponent(sym);
        (
            Monomial(self.0.iter().copied().filter(|(s, _)| *s != sym).collect()),
            e,
        )
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (s, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical sparse polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SymPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl SymPoly {
    /// The zero polynomial.
    pub fn zero() -> SymPoly {
        SymPoly::default()
    }

    /// The constant polynomial `c`.
    pub fn constant(c: Q) -> SymPoly {
        SymPoly::term(c, Monomial::one())
    }

    /// The polynomial `1`.
    pub fn one() -> SymPoly {
        SymPoly::constant(Q::one())
    }

    /// The polynomial consisting of a single symbol.
    pub fn symbol(sym: Symbol) -> SymPoly {
        SymPoly::term(Q::one(), Monomial::power(sym, 1))
    }

    /// Shorthand for the Taylor constant `C[k,j]` as a polynomial.
    pub fn c(k: u32, j: u32) -> SymPoly {
        SymPoly::symbol(Symbol::c(k, j))
    }

    /// `coef · mono` (zero when `coef == 0`).
    pub fn term(coef: Q, mono: Monomial) -> SymPoly {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(mono, coef);
        }
        SymPoly { terms }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored monomials.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when no monomial is stored (alias of [`SymPoly::is_zero`]).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterates over `(monomial, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// Returns the value when the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    /// All symbols that occur.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(s, _)| s))
            .collect()
    }

    /// Highest exponent of `sym` across monomials.
    pub fn degree_in(&self, sym: Symbol) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(sym))
            .max()
            .unwrap_or(0)
    }

    /// Adds `coef · mono` in place.
    pub fn add_term(&mut self, coef: Q, mono: Monomial) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `factor · other` in place.
    pub fn add_scaled(&mut self, other: &SymPoly, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(c * factor, m.clone());
        }
    }

    /// Adds `other` in place.
    pub fn add_assign_ref(&mut self, other: &SymPoly) {
        for (m, c) in &other.terms {
            self.add_term(c.clone(), m.clone());
        }
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&self, factor: &Q) -> SymPoly {
        if factor.is_zero() {
            return SymPoly::zero();
        }
        SymPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn mul_monomial(&self, mono: &Monomial) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.clone()))
                .collect(),
        }
    }

    /// Ring product.
    pub fn mul_ref(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(c1 * c2, m1.mul(m2));
            }
        }
        out
    }

    /// Non-negative integer power.
    pub fn pow(&self, exp: u32) -> SymPoly {
        (0..exp).fold(SymPoly::one(), |acc, _| acc.mul_ref(self))
    }

    /// Replaces each bound symbol by its value; unbound symbols remain.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, Q>) -> SymPoly {
        if bindings.is_empty() {
            return self.clone();
        }
        let mut out = SymPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in m.factors() {
                match bindings.get(&s) {
                    Some(v) => coef *= num_traits::pow(v.clone(), e as usize),
                    None => rest.push((s, e)),
                }
                if coef.is_zero() {
                    break;
                }
            }
            out.add_term(coef, Monomial(rest));
        }
        out
    }

    /// Drops every monomial containing a symbol from `zeros`.
    pub fn zero_out(&self, zeros: &BTreeSet<Symbol>) -> SymPoly {
        SymPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.factors().iter().all(|(s, _)| !zeros.contains(s)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Collects coefficients by the power of `sym`: `p = Σ_e coef_e · sym^e`.
    pub fn collect_in(&self, sym: Symbol) -> BTreeMap<u32, SymPoly> {
        let mut out: BTreeMap<u32, SymPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(sym);
            out.entry(e).or_default().add_term(c.clone(), rest);
        }
        out
    }

    /// Evaluates numerically; every symbol must be bound.
    pub fn eval_f64(&self, values: &BTreeMap<Symbol, f64>) -> Result<f64> {
        let mut total = 0.0;
        for (m, c) in &self.terms {
            let mut t = to_f64(c);
            for &(s, e) in m.factors() {
                let v = values
                    .get(&s)
                    .ok_or_else(|| Error::Unbound(s.to_string()))?;
                t *= v.powi(e as i32);
            }
            total += t;
        }
        Ok(total)
    }

    /// Serializable form used by every JSON interface.
    pub fn to_json_value(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let pows: serde_json::Map<String, serde_json::Value> = m
                    .factors()
                    .iter()
                    .map(|(s, e)| (s.to_string(), serde_json::Value::from(*e)))
                    .collect();
                serde_json::json!({ "coef": format_q(c), "pows": pows })
            })
            .collect();
        serde_json::json!({ "terms": terms })
    }

    /// Inverse of [`SymPoly::to_json_value`].
    pub fn from_json_value(value: &serde_json::Value) -> Result<SymPoly> {
        let terms = value
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Parse("polynomial JSON needs a \"terms\" array".into()))?;
        let mut out = SymPoly::zero();
        for t in terms {
            let coef = t
                .get("coef")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Parse("term without string \"coef\"".into()))
                .and_then(parse_q)?;
            let mut factors = Vec::new();
            if let Some(pows) = t.get("pows") {
                let pows = pows
                    .as_object()
                    .ok_or_else(|| Error::Parse("\"pows\" must be an object".into()))?;
                for (name, e) in pows {
                    let e = e
                        .as_u64()
                        .filter(|&e| e > 0 && e <= u32::MAX as u64)
                        .ok_or_else(|| Error::Parse(format!("bad exponent for {name}")))?;
                    factors.push((Symbol::parse(name)?, e as u32));
                }
            }
            out.add_term(coef, Monomial::from_factors(factors));
        }
        Ok(out)
    }

    /// Parses a small textual grammar: sums/differences of products of
    /// rationals, symbols and `^` powers, e.g. `"2*C[4,0]^2*L - 1/3*C[5,3]"`;
    /// accepts the output of `Display`.
    pub fn parse(text: &str) -> Result<SymPoly> {
        // `·` (as printed by Display) and `*` both denote multiplication
        let s: String = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '·' { '*' } else { c })
            .collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = SymPoly::zero();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes = s.as_bytes();
        let mut pieces = Vec::new();
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'[' => depth += 1,
                b']' => depth = depth.saturating_sub(1),
                b'+' | b'-'
                    if depth == 0 && i > 0 && !matches!(bytes[i - 1], b'e' | b'E' | b'^') =>
                {
                    pieces.push(&s[start..i]);
                    start = i;
                }
                _ => {}
            }
        }
        pieces.push(&s[start..]);
        for piece in pieces {
            let (sign, body) = match piece.as_bytes().first() {
                Some(b'-') => (-Q::one(), &piece[1..]),
                Some(b'+') => (Q::one(), &piece[1..]),
                _ => (Q::one(), piece),
            };
            if body.is_empty() {
                return Err(Error::Parse(format!("dangling sign in {text:?}")));
            }
            let mut term = SymPoly::constant(sign);
            for factor in split_top_level(body, '*') {
                let (base, exp) = match factor.rsplit_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                        (b, e)
                    }
                    _ => (factor, 1),
                };
                let base_poly = match Symbol::parse(base) {
                    Ok(sym) => SymPoly::symbol(sym),
                    Err(_) => SymPoly::constant(parse_q(base)?),
                };
                term = term.mul_ref(&base_poly.pow(exp));
            }
            out.add_assign_ref(&term);
        }
        Ok(out)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_monomial = m.factors().is_empty();
            if unit_monomial {
                write!(f, "{}", format_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}·{m}", format_q(&abs))?;
            }
        }
        Ok(())
    }
}

impl Serialize for SymPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        SymPoly::from_json_value(&value).map_err(serde::de::Error::custom)
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, rhs: &SymPoly) -> SymPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Q::one());
        out
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: &SymPoly) -> SymPoly {
        self.mul_ref(rhs)
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(&-Q::one())
    }
}

impl Add for SymPoly {
    type Output = SymPoly;
    fn add(mut self, rhs: SymPoly) -> SymPoly {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Mul for SymPoly {
    type Output = SymPoly;
    fn mul(self, rhs: SymPoly) -> SymPoly {
        self.mul_ref(&rhs)
    }
}

impl From<Q> for SymPoly {
    fn from(c: Q) -> SymPoly {
        SymPoly::constant(c)
    }
}

impl From<Symbol> for SymPoly {
    fn from(s: Symbol) -> SymPoly {
        SymPoly::symbol(s)
    }
}
