//! Reference computations that share no code with the engine: Hermite
//! polynomials from their three-term recurrence, Gaussian moments, triple
//! products by direct integration, brute-force exponent enumeration and the
//! closed-form scalar Riccati solution.
//!
//! The polynomials are `h_j` with `h_{j+1} = ξ h_j - 2j h_{j-1}`, orthogonal
//! for the Gaussian weight `ρ` normalized by `∫ρ = 1`, `∫ξ²ρ = 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Dense coefficients of `h_j`, lowest degree first.
pub fn hermite(j: usize) -> Vec<Q> {
    let mut prev = vec![Q::one()];
    if j == 0 {
        return prev;
    }
    let mut cur = vec![Q::zero(), Q::one()];
    for n in 1..j {
        let mut next = vec![Q::zero(); n + 2];
        for (d, c) in cur.iter().enumerate() {
            next[d + 1] += c;
        }
        for (d, c) in prev.iter().enumerate() {
            next[d] -= qi(2 * n as i64) * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `∫ξ^d ρ`: `(d-1)!!·2^{d/2}` for even `d`, zero for odd `d`.
pub fn moment(d: usize) -> Q {
    if d % 2 == 1 {
        return Q::zero();
    }
    (0..d / 2).map(|i| qi(2 * (2 * i as i64 + 1))).product()
}

/// `∫p ρ` for a dense polynomial.
pub fn integral(p: &[Q]) -> Q {
    p.iter().enumerate().map(|(d, c)| c * moment(d)).sum()
}

/// `‖h_j‖² = 2^j j!`.
pub fn norm_sq(j: usize) -> Q {
    (1..=j).map(|i| qi(2 * i as i64)).product()
}

/// `γ(l,m,n) = ∫h_l h_m h_n ρ / ‖h_n‖²`, zero for negative indices.
pub fn gamma(l: i64, m: i64, n: i64) -> Q {
    if l < 0 || m < 0 || n < 0 {
        return Q::zero();
    }
    let p = poly_mul(
        &poly_mul(&hermite(l as usize), &hermite(m as usize)),
        &hermite(n as usize),
    );
    integral(&p) / norm_sq(n as usize)
}

pub fn factorial(n: u32) -> Q {
    (1..=n).map(|i| qi(i as i64)).product()
}

pub fn binom(n: u32, k: u32) -> Q {
    (0..k).fold(Q::one(), |b, i| b * qi((n - i) as i64) / qi(i as i64 + 1))
}

pub fn pow2(r: u32) -> Q {
    Q::from_integer(BigInt::from(2).pow(r))
}

/// All `(k'-k) / (2[(k-j)-(k'-j')])` with `m ≤ k,k' ≤ kmax`, `0 ≤ j < k`,
/// `0 ≤ j' < k'`, inside `[lo, hi]`.
pub fn codominance_values(m: i64, kmax: i64, lo: &Q, hi: &Q) -> BTreeSet<Q> {
    let mut out = BTreeSet::new();
    for k in m..=kmax {
        for kp in m..=kmax {
            for j in 0..k {
                for jp in 0..kp {
                    let d = (k - j) - (kp - jp);
                    if d != 0 {
                        let v = q(kp - k, 2 * d);
                        if &v >= lo && &v <= hi {
                            out.insert(v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Solution of `v' = v + v²`, `v(0) = v0`.
pub fn riccati(v0: f64, s: f64) -> f64 {
    v0 * s.exp() / (1.0 + v0 - v0 * s.exp())
}

/// Blow-up time `ln((1+v0)/v0)` of the Riccati solution.
pub fn riccati_blowup(v0: f64) -> f64 {
    ((1.0 + v0) / v0).ln()
}
