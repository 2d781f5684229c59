//! Finite exponent sets for the blow-up-set regimes.
//!
//! Two entries `C[k,j]`, `C[k',j']` of the `v_{b,1,0}` column decay like
//! `e^{-(k/2-1)sₙ}·Bn^{k-1-j}`; with `Bn ≈ e^{-θsₙ}` they are codominant
//! exactly when `θ = (k'-k) / (2[(k-j)-(k'-j')])`. Secular factors `sₙ^i`
//! at resonant grades similarly single out the logarithmic exponents
//! `α = (i'-i) / ((k-j)-(k'-j'))`.

use crate::error::{Error, Result};
use crate::expander::{expand, resonance_profile, Seed};
use crate::rational::{q, Q};
use std::collections::{BTreeMap, BTreeSet};

/// The three exponent sets of an even profile order `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSets {
    pub e1: BTreeSet<Q>,
    pub e2: BTreeSet<Q>,
    pub e3: BTreeSet<Q>,
    /// Largest secular power `i_k` per grade used for `e3`.
    pub i_max: BTreeMap<u32, u32>,
}

/// Threshold `(m-2)/(2(m-1))` separating the two θ cases.
pub fn case_threshold(m: u32) -> Q {
    q(m as i64 - 2, 2 * (m as i64 - 1))
}

/// All values `(k'-k)/(2[(k-j)-(k'-j')])` for `m ≤ k,k' ≤ kmax`,
/// `0 ≤ j ≤ k-1`, `0 ≤ j' ≤ k'-1`, `k-j ≠ k'-j'`.
pub fn codominance_values(m: u32, kmax: u32) -> BTreeSet<Q> {
    let mut out = BTreeSet::new();
    for k in m..=kmax {
        for kp in m..=kmax {
            for j in 0..k {
                for jp in 0..kp {
                    let d = (k - j) as i64 - (kp - jp) as i64;
                    if d != 0 {
                        out.insert(q(kp as i64 - k as i64, 2 * d));
                    }
                }
            }
        }
    }
    out
}

fn clip(values: &BTreeSet<Q>, lo: &Q, hi: &Q) -> BTreeSet<Q> {
    values
        .iter()
        .filter(|v| *v >= lo && *v <= hi)
        .cloned()
        .collect()
}

/// `E1` (clipped to `[0, (m-2)/(2(m-1))]`, grades up to `2m-3`) and `E2`
/// (clipped to `[(m-2)/(2(m-1)), 1/2]`, grades up to `2m-2`), for any even
/// `m ≥ 4`.
pub fn theta_sets(m: u32) -> (BTreeSet<Q>, BTreeSet<Q>) {
    let t = case_threshold(m);
    let e1 = clip(&codominance_values(m, 2 * m - 3), &q(0, 1), &t);
    let e2 = clip(&codominance_values(m, 2 * m - 2), &t, &q(1, 2));
    (e1, e2)
}

/// `E3` from the secular powers `i_k` of grades `m..=order`.
pub fn alpha_set(m: u32, order: u32, i_max: &BTreeMap<u32, u32>) -> BTreeSet<Q> {
    let mut out = BTreeSet::new();
    let rows: Vec<(i64, i64)> = (m..=order)
        .flat_map(|k| {
            let ik = i_max.get(&k).copied().unwrap_or(0);
            (0..k).flat_map(move |j| (0..=ik).map(move |i| ((k - j) as i64, i as i64)))
        })
        .collect();
    for &(w, i) in &rows {
        for &(wp, ip) in &rows {
            if w != wp {
                out.insert(q(ip - i, w - wp));
            }
        }
    }
    out
}

/// Largest secular power per grade of the generic expansion of order `m`.
pub fn secular_powers(m: u32, order: u32) -> Result<BTreeMap<u32, u32>> {
    let zero = BTreeSet::from([(m, m), (m, m - 1)]);
    let series = expand(&Seed::symbolic(m, zero), order)?;
    Ok(resonance_profile(&series, m))
}

/// The sets `E1`, `E2`, `E3` for an even `m ≥ 6`; `E3` uses the order
/// `M = 2m-2`, the largest value of `⌈(2θ+1)(m-1)⌉` over `θ ∈ [0, 1/2]`.
pub fn exponent_sets(m: u32) -> Result<ExponentSets> {
    if m % 2 == 1 || m < 6 {
        return Err(Error::UnsupportedOrder {
            m,
            reason: "exponent sets need an even order m >= 6".into(),
        });
    }
    let (e1, e2) = theta_sets(m);
    let order = 2 * m - 2;
    let i_max = secular_powers(m, order)?;
    let e3 = alpha_set(m, order, &i_max);
    Ok(ExponentSets { e1, e2, e3, i_max })
}
