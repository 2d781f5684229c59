//! Exact univariate polynomials over the rationals: division, gcd, Yun
//! square-free decomposition, Sturm sequences and real-root isolation.

use crate::rational::{format_q, q, qb, qi, to_f64, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense polynomial, `c[d]` multiplies `t^d`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    c: Vec<Q>,
}

impl UPoly {
    pub fn new(mut c: Vec<Q>) -> UPoly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.c.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.c.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * qi(d as i64))
                .collect(),
        )
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::default();
        }
        let mut out = vec![Q::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    fn monic(&self) -> UPoly {
        let l = self.lead();
        UPoly::new(self.c.iter().map(|c| c / &l).collect())
    }

    fn neg(&self) -> UPoly {
        UPoly::new(self.c.iter().map(|c| -c).collect())
    }

    /// Euclidean division `self = q·d + r`.
    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let mut r = self.c.clone();
        let mut qv = vec![Q::zero(); self.c.len().saturating_sub(dd)];
        let ld = d.lead();
        while r.len() > dd && !r.is_empty() {
            let shift = r.len() - 1 - dd;
            let f = r.last().unwrap() / &ld;
            for (i, dc) in d.c.iter().enumerate() {
                r[shift + i] -= &f * dc;
            }
            qv[shift] = f;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UPoly::new(qv), UPoly::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Yun's square-free decomposition: `(g_i, i)` with `self = c·Π g_i^i`,
    /// each `g_i` monic, square-free and pairwise coprime.
    pub fn square_free(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a = f.gcd(&fp);
        let mut b = f.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = {
            let bp = b.derivative();
            UPoly::new(sub(&c.c, &bp.c))
        };
        let mut i = 1;
        loop {
            let g = b.gcd(&d);
            if g.degree().unwrap_or(0) > 0 {
                out.push((g.clone(), i));
            }
            b = b.divrem(&g).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&g).0;
            d = UPoly::new(sub(&c.c, &b.derivative().c));
            i += 1;
        }
        out
    }

    /// Sturm sequence of a square-free polynomial.
    fn sturm(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while let Some(last) = seq.last() {
            if last.degree().unwrap_or(0) == 0 {
                break;
            }
            let prev = &seq[seq.len() - 2];
            let r = prev.divrem(last).1.neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq
    }

    /// Cauchy bound: all real roots lie in `(-B, B)`.
    fn root_bound(&self) -> Q {
        let l = self.lead().abs();
        let m = self.c.iter().map(|c| c.abs()).max().unwrap_or_else(Q::zero);
        Q::one() + m / l
    }

    /// Isolating intervals `[lo, hi]` (exact endpoints) for the distinct real
    /// roots of `self`, refined to width at most `width`.
    pub fn isolate_real_roots(&self, width: &Q) -> Vec<(Q, Q)> {
        let mut sf: UPoly = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(_) => {
                let g = self.gcd(&self.derivative());
                self.divrem(&g).0
            }
        };
        let mut out = Vec::new();
        // Bisection; a split point that happens to be a root is recorded
        // exactly and deflated out before restarting.
        'restart: loop {
            if sf.degree().unwrap_or(0) == 0 {
                break;
            }
            let seq = sf.sturm();
            let count = |t: &Q| sign_changes(&seq, t);
            let bound = sf.root_bound();
            let mut stack = vec![(-bound.clone(), bound)];
            let mut found = Vec::new();
            while let Some((lo, hi)) = stack.pop() {
                let n = count(&lo) - count(&hi);
                if n == 0 {
                    continue;
                }
                if n == 1 && &hi - &lo <= *width {
                    found.push((lo, hi));
                    continue;
                }
                let mid = (&lo + &hi) / qi(2);
                if sf.eval(&mid).is_zero() {
                    out.push((mid.clone(), mid.clone()));
                    sf = sf.divrem(&UPoly::new(vec![-mid, Q::one()])).0;
                    continue 'restart;
                }
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
            out.extend(found);
            break;
        }
        out.sort();
        out
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        if self.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let g = self.gcd(&self.derivative());
        let sf = self.divrem(&g).0;
        let seq = sf.sturm();
        let b = sf.root_bound();
        sign_changes(&seq, &-b.clone()) - sign_changes(&seq, &b)
    }

    /// Exact real roots, grouped: rational roots first, then quadratic
    /// surds, then isolated algebraic roots.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        let mut out = Vec::new();
        for (g, _) in self.square_free() {
            out.extend(real_roots_square_free(&g));
        }
        out.sort_by(|a, b| {
            a.value()
                .partial_cmp(&b.value())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    }
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(Q::zero) - b.get(i).cloned().unwrap_or_else(Q::zero)
        })
        .collect()
}

fn sign_changes(seq: &[UPoly], t: &Q) -> usize {
    let signs: Vec<i32> = seq
        .iter()
        .map(|p| p.eval(t))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Integer primitive form of a rational polynomial (same roots).
fn integer_form(p: &UPoly) -> Vec<BigInt> {
    let lcm = p.c.iter().fold(BigInt::one(), |acc, c| {
        num_integer::Integer::lcm(&acc, c.denom())
    });
    p.c.iter()
        .map(|c| (c * qb(lcm.clone())).to_integer())
        .collect()
}

fn real_roots_square_free(g: &UPoly) -> Vec<RealRoot> {
    let deg = g.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![RealRoot::Rational(-&g.c[0] / &g.c[1])];
    }
    let ints = integer_form(g);
    let lead = qb(ints.last().unwrap().abs());
    let width = Q::one() / (qi(4) * &lead);
    let mut rational = Vec::new();
    let mut rest = g.clone();
    for (lo, hi) in g.isolate_real_roots(&width) {
        let mid = (&lo + &hi) / qi(2);
        let scaled = &mid * &lead;
        let candidate = scaled.round() / &lead;
        if g.eval(&candidate).is_zero() {
            rational.push(candidate.clone());
            rest = rest.divrem(&UPoly::new(vec![-candidate, Q::one()])).0;
        }
    }
    let mut out: Vec<RealRoot> = rational.into_iter().map(RealRoot::Rational).collect();
    match rest.degree() {
        Some(2) => {
            let (a, b, c) = (rest.c[2].clone(), rest.c[1].clone(), rest.c[0].clone());
            let disc = &b * &b - qi(4) * &a * &c;
            if disc.is_positive() {
                let u = -&b / (qi(2) * &a);
                let r = disc / (qi(4) * &a * &a);
                out.push(RealRoot::Quadratic {
                    center: u.clone(),
                    radicand: r.clone(),
                    plus: false,
                });
                out.push(RealRoot::Quadratic {
                    center: u,
                    radicand: r,
                    plus: true,
                });
            }
        }
        Some(d) if d > 2 => {
            let tight = q(1, 1 << 40);
            for (lo, hi) in rest.isolate_real_roots(&tight) {
                out.push(RealRoot::Algebraic {
                    poly: rest.clone(),
                    lo,
                    hi,
                });
            }
        }
        _ => {}
    }
    out
}

/// An exact real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Rational(Q),
    /// `center ± √radicand` with `radicand > 0` not a rational square.
    Quadratic {
        center: Q,
        radicand: Q,
        plus: bool,
    },
    /// The unique root of `poly` in `[lo, hi]`.
    Algebraic {
        poly: UPoly,
        lo: Q,
        hi: Q,
    },
}

impl RealRoot {
    pub fn value(&self) -> f64 {
        match self {
            RealRoot::Rational(x) => to_f64(x),
            RealRoot::Quadratic {
                center,
                radicand,
                plus,
            } => {
                let r = to_f64(radicand).sqrt();
                to_f64(center) + if *plus { r } else { -r }
            }
            RealRoot::Algebraic { lo, hi, .. } => (to_f64(lo) + to_f64(hi)) / 2.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            RealRoot::Rational(x) => x.is_positive(),
            _ => self.value() > 0.0,
        }
    }
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealRoot::Rational(x) => write!(f, "{}", format_q(x)),
            RealRoot::Quadratic {
                center,
                radicand,
                plus,
            } => {
                let sign = if *plus { "+" } else { "-" };
                if center.is_zero() {
                    let lead = if *plus { "" } else { "-" };
                    write!(f, "{lead}√({})", format_q(radicand))
                } else {
                    write!(f, "{} {sign} √({})", format_q(center), format_q(radicand))
                }
            }
            RealRoot::Algebraic { poly, .. } => {
                write!(f, "root of {poly} near {:.12}", self.value())
            }
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.c.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match d {
                0 => write!(f, "{}", format_q(&a))?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}·", format_q(&a))?;
                    }
                    if d == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
