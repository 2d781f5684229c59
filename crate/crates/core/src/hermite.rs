//! One-dimensional calculus of the rescaled Hermite polynomials
//! `h_j(ξ) = Σ_{i ≤ j/2} j!/(i!(j-2i)!) (-1)^i ξ^{j-2i}`, orthogonal for the
//! Gaussian weight `ρ(ξ) = e^{-ξ²/4}/√(4π)`.
//!
//! Everything is exact: polynomial coefficients are rationals, weighted
//! integrals use the closed-form moments `∫ξ^{2k}ρ = (2k-1)!!·2^k`, and the
//! product linearization `h_a h_b = Σ_r r!·C(a,r)·C(b,r)·2^r h_{a+b-2r}` is
//! cached up to a configurable degree cap.

use crate::coeffs::SymPoly;
use crate::rational::{binom, factorial, qb, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

/// Default cap for the memo tables.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// Environment variable overriding [`DEFAULT_DEGREE_CAP`].
pub const DEGREE_CAP_ENV: &str = "BLOWUPLAB_DEGREE_CAP";

/// Degree cap of the memo tables, read once from the environment.
pub fn degree_cap() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(DEGREE_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .unwrap_or(DEFAULT_DEGREE_CAP)
    })
}

/// Dense univariate polynomial in ξ; `coeffs[d]` multiplies `ξ^d`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DensePoly {
    coeffs: Vec<Q>,
}

impl DensePoly {
    /// Builds a polynomial and strips trailing zeros.
    pub fn new(coeffs: Vec<Q>) -> DensePoly {
        let mut p = DensePoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    /// Coefficients, lowest degree first.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `ξ^d`.
    pub fn coeff(&self, d: usize) -> Q {
        self.coeffs.get(d).cloned().unwrap_or_else(Q::zero)
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &DensePoly) -> DensePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        DensePoly::new((0..n).map(|d| self.coeff(d) + other.coeff(d)).collect())
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Q) -> DensePoly {
        DensePoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &DensePoly) -> DensePoly {
        if self.is_zero() || other.is_zero() {
            return DensePoly::default();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        DensePoly::new(out)
    }

    /// Derivative in ξ.
    pub fn derivative(&self) -> DensePoly {
        DensePoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * Q::from_integer(BigInt::from(d)))
                .collect(),
        )
    }

    /// Exact weighted integral `∫ p ρ dξ` via the Gaussian moments.
    pub fn weighted_integral(&self) -> Q {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(d, _)| d % 2 == 0)
            .map(|(d, c)| c * gaussian_moment(d as u32))
            .sum()
    }

    /// Floating-point evaluation by Horner's rule.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }
}

/// `∫ ξ^d ρ dξ`: zero for odd `d`, `(d-1)!!·2^{d/2}` for even `d`.
pub fn gaussian_moment(d: u32) -> Q {
    if d % 2 == 1 {
        return Q::zero();
    }
    let k = d / 2;
    let double_factorial: BigInt = (1..=k).map(|i| BigInt::from(2 * i - 1)).product();
    qb(double_factorial * (BigInt::one() << k))
}

fn hermite_direct(j: u32) -> DensePoly {
    let mut coeffs = vec![Q::zero(); j as usize + 1];
    let jf = factorial(j);
    for i in 0..=j / 2 {
        let mag = &jf / (factorial(i) * factorial(j - 2 * i));
        let val = if i % 2 == 0 { mag } else { -mag };
        coeffs[(j - 2 * i) as usize] = qb(val);
    }
    DensePoly::new(coeffs)
}

fn hermite_table() -> &'static Vec<OnceLock<Arc<DensePoly>>> {
    static TABLE: OnceLock<Vec<OnceLock<Arc<DensePoly>>>> = OnceLock::new();
    TABLE.get_or_init(|| (0..=degree_cap()).map(|_| OnceLock::new()).collect())
}

/// Monomial coefficients of `h_j` (memoized for `j` up to the degree cap).
pub fn hermite_coefficients(j: u32) -> Arc<DensePoly> {
    match hermite_table().get(j as usize) {
        Some(cell) => cell.get_or_init(|| Arc::new(hermite_direct(j))).clone(),
        None => Arc::new(hermite_direct(j)),
    }
}

/// Squared weighted norm `∫ h_j² ρ = 2^j j!`.
pub fn norm_sq(j: u32) -> Q {
    qb(factorial(j) << j)
}

/// Translation `h_j(ξ + shift) = Σ_m C(j,m) shift^m h_{j-m}`, returned as the
/// map `j-m ↦ C(j,m)·shift^m` (zero entries omitted).
pub fn translate(j: u32, shift: &SymPoly) -> BTreeMap<u32, SymPoly> {
    let mut out = BTreeMap::new();
    let mut power = SymPoly::one();
    for m in 0..=j {
        let entry = power.scale(&qb(binom(j, m)));
        if !entry.is_zero() {
            out.insert(j - m, entry);
        }
        power = power.mul_ref(shift);
    }
    out
}

/// Closed-form linearization coefficient `r!·C(a,r)·C(b,r)·2^r` of
/// `h_{a+b-2r}` in `h_a h_b`.
pub fn linearization_coefficient(a: u32, b: u32, r: u32) -> BigInt {
    if r > a.min(b) {
        return BigInt::zero();
    }
    (factorial(r) * binom(a, r) * binom(b, r)) << r
}

fn product_direct(a: u32, b: u32) -> Vec<(u32, Q)> {
    (0..=a.min(b))
        .rev()
        .map(|r| (a + b - 2 * r, qb(linearization_coefficient(a, b, r))))
        .collect()
}

type ProductCell = OnceLock<Arc<Vec<(u32, Q)>>>;

fn product_table() -> &'static Vec<ProductCell> {
    static TABLE: OnceLock<Vec<ProductCell>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = degree_cap() as usize + 1;
        (0..n * n).map(|_| OnceLock::new()).collect()
    })
}

/// Linearization of `h_a h_b` as `(n, c_n)` pairs in increasing `n`
/// (memoized for `a, b` up to the degree cap).
pub fn product_terms(a: u32, b: u32) -> Arc<Vec<(u32, Q)>> {
    let (lo, hi) = (a.min(b), a.max(b));
    let cap = degree_cap();
    if hi > cap {
        return Arc::new(product_direct(lo, hi));
    }
    let idx = lo as usize * (cap as usize + 1) + hi as usize;
    product_table()[idx]
        .get_or_init(|| Arc::new(product_direct(lo, hi)))
        .clone()
}

/// Linearization of `h_a h_b` as a map `n ↦ c_n`.
pub fn product(a: u32, b: u32) -> BTreeMap<u32, Q> {
    product_terms(a, b).iter().cloned().collect()
}

/// Structure constant: coefficient of `h_n` in `h_l h_m`, zero whenever an
/// index is negative.
pub fn gamma(l: i64, m: i64, n: i64) -> Q {
    if l < 0 || m < 0 || n < 0 {
        return Q::zero();
    }
    let (l, m, n) = (l as u32, m as u32, n as u32);
    if n > l + m || (l + m - n) % 2 == 1 {
        return Q::zero();
    }
    let r = (l + m - n) / 2;
    qb(linearization_coefficient(l, m, r))
}

/// Expresses a dense polynomial in the `h_j` basis by peeling off leading
/// terms (each `h_j` is monic of degree `j`).
pub fn to_hermite_basis(p: &DensePoly) -> BTreeMap<u32, Q> {
    let mut rest = p.clone();
    let mut out = BTreeMap::new();
    while let Some(d) = rest.degree() {
        let lead = rest.coeff(d);
        out.insert(d as u32, lead.clone());
        rest = rest.add(&hermite_coefficients(d as u32).scale(&-lead));
    }
    out
}

/// Linearization computed by dense multiplication and re-projection; the
/// independent counterpart of [`product`].
pub fn product_by_multiplication(a: u32, b: u32) -> BTreeMap<u32, Q> {
    to_hermite_basis(&hermite_coefficients(a).mul(&hermite_coefficients(b)))
}
