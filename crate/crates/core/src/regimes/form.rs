//! Sign analysis of the order-`m` binary form `Σ_j C_{m,j} x1^{m-j} x2^j`.
//!
//! Writing `t = x1/x2`, the form equals `x2^m f(t)` with
//! `f(t) = Σ_j C_{m,j} t^{m-j}`. Since `m` is even, the form is nonpositive
//! on the plane iff `C_{m,0} ≤ 0` and `f ≤ 0` on the real line, i.e. `f` has
//! no real root of odd multiplicity and is negative away from its roots.
//! Degenerate directions are `(t, 1)` for every real root `t`, plus `(1, 0)`
//! when `C_{m,0} = 0`.

use super::upoly::{RealRoot, UPoly};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;

/// Coefficients `C_{m,j}`, `j = 0..=m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormSpec {
    pub m: u32,
    pub coeffs: Vec<Q>,
}

impl FormSpec {
    /// Builds a form; missing trailing coefficients are zero.
    pub fn new(m: u32, mut coeffs: Vec<Q>) -> FormSpec {
        coeffs.resize(m as usize + 1, Q::zero());
        FormSpec { m, coeffs }
    }

    fn dehomogenized(&self) -> UPoly {
        // f(t) = Σ_j C_j t^{m-j}: coefficient of t^d is C_{m-d}
        UPoly::new(
            (0..=self.m as usize)
                .map(|d| self.coeffs[self.m as usize - d].clone())
                .collect(),
        )
    }

    /// Evaluates the form at a rational point.
    pub fn eval(&self, x1: &Q, x2: &Q) -> Q {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c * num_traits::pow(x1.clone(), self.m as usize - j)
                    * num_traits::pow(x2.clone(), j)
            })
            .sum()
    }
}

/// A real direction along which the form vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Direction {
    /// Primitive integer vector `(x1, x2)` with `x2 ≥ 0` (and `x1 > 0` when
    /// `x2 = 0`).
    Integer(BigInt, BigInt),
    /// `(t, 1)` for an irrational real root `t`.
    Irrational(RealRoot),
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Integer(a, b) => write!(f, "({a},{b})"),
            Direction::Irrational(r) => write!(f, "({r},1)"),
        }
    }
}

/// Outcome of [`validate_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormReport {
    pub nonpositive: bool,
    pub degenerate_directions: Vec<Direction>,
}

fn primitive(t: &Q) -> Direction {
    Direction::Integer(t.numer().clone(), t.denom().clone())
}

/// Decides nonpositivity exactly and lists the real degenerate directions.
pub fn validate_form(form: &FormSpec) -> Result<FormReport> {
    if form.coeffs.iter().all(Zero::is_zero) {
        return Err(Error::ZeroForm(form.m));
    }
    let f = form.dehomogenized();
    let c0 = &form.coeffs[0];
    let odd_root = f
        .square_free()
        .iter()
        .any(|(g, mult)| mult % 2 == 1 && g.count_real_roots() > 0);
    // without sign changes f has the sign of its leading coefficient
    let nonpositive = !c0.is_positive() && !odd_root && f.lead().is_negative();
    let mut dirs: Vec<Direction> = Vec::new();
    if c0.is_zero() {
        dirs.push(Direction::Integer(BigInt::from(1), BigInt::from(0)));
    }
    for r in f.real_roots() {
        match r {
            RealRoot::Rational(t) => dirs.push(primitive(&t)),
            other => dirs.push(Direction::Irrational(other)),
        }
    }
    Ok(FormReport {
        nonpositive,
        degenerate_directions: dirs,
    })
}

/// Closed-form conditions for a normalized quartic
/// `x1²(C40 x1² + C41 x1 x2 + C42 x2²)` (`C43 = C44 = 0`): nonpositive iff
/// `C40 ≤ 0`, `C42 ≤ 0` and `C41² - 4 C40 C42 ≤ 0`. Returns `None` for other
/// forms.
pub fn quartic_discriminant_check(form: &FormSpec) -> Option<bool> {
    if form.m != 4 || !form.coeffs[3].is_zero() || !form.coeffs[4].is_zero() {
        return None;
    }
    let (c40, c41, c42) = (&form.coeffs[0], &form.coeffs[1], &form.coeffs[2]);
    let disc = c41 * c41 - qi(4) * c40 * c42;
    Some(!c40.is_positive() && !c42.is_positive() && !disc.is_positive())
}

/// The extra degenerate direction `(-2C42, C41)` of a normalized quartic
/// with vanishing discriminant and `C42 ≠ 0`.
pub fn quartic_extra_direction(form: &FormSpec) -> Option<(Q, Q)> {
    quartic_discriminant_check(form)?;
    let (c40, c41, c42) = (&form.coeffs[0], &form.coeffs[1], &form.coeffs[2]);
    let disc = c41 * c41 - qi(4) * c40 * c42;
    (disc.is_zero() && !c42.is_zero()).then(|| (-qi(2) * c42, c41.clone()))
}

/// Renders a report as one line.
pub fn describe(report: &FormReport) -> String {
    let dirs: Vec<String> = report
        .degenerate_directions
        .iter()
        .map(|d| d.to_string())
        .collect();
    format!(
        "nonpositive={} directions=[{}]",
        report.nonpositive,
        dirs.join(", ")
    )
}
