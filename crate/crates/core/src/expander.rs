//! Grade-by-grade construction of the asymptotic expansion from a seed.
//!
//! At each grade `k` the quadratic forcing is assembled from the products of
//! lower grades `k1 + k2 - 2 = k`, projected on every Hermite mode, and the
//! mode ODE `x' = λx + f(s)e^{μs}` is solved exactly with `λ = 1-(a+b)/2`,
//! `μ = 1-k/2`. Homogeneous modes (`a+b = k`) are resonant and receive a
//! fresh free constant `C[k,j]` on `h_{k-j}(y1) h_j(y2)`.

use crate::coeffs::{SymPoly, Symbol};
use crate::error::{Error, Result};
use crate::hermite;
use crate::rational::{qi, Q};
use crate::series::{eigenvalue, grade_exponent, AsymSeries, TermKey};
use rayon::prelude::*;
use std::collections::{BTreeMap, BTreeSet};

/// Seed of profile order `m`: the leading coefficients `C[m,j]` and the set
/// of free constants forced to vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seed {
    pub m: u32,
    pub leading: BTreeMap<u32, SymPoly>,
    pub zero_set: BTreeSet<(u32, u32)>,
}

impl Seed {
    /// Seed with explicit leading coefficients.
    pub fn new(m: u32, leading: BTreeMap<u32, SymPoly>, zero_set: BTreeSet<(u32, u32)>) -> Seed {
        Seed {
            m,
            leading,
            zero_set,
        }
    }

    /// Seed whose leading coefficients are the symbols `C[m,j]`, except those
    /// listed in `zero_set`.
    pub fn symbolic(m: u32, zero_set: BTreeSet<(u32, u32)>) -> Seed {
        let leading = (0..=m)
            .filter(|j| !zero_set.contains(&(m, *j)))
            .map(|j| (j, SymPoly::c(m, j)))
            .collect();
        Seed {
            m,
            leading,
            zero_set,
        }
    }

    /// Checks the profile-order contract.
    pub fn validate(&self) -> Result<()> {
        if self.m < 4 || self.m % 2 == 1 {
            return Err(Error::InvalidSeed(format!(
                "profile order must be even and at least 4, got {}",
                self.m
            )));
        }
        if let Some(j) = self.leading.keys().find(|j| **j > self.m) {
            return Err(Error::InvalidSeed(format!(
                "leading index j={j} exceeds m={}",
                self.m
            )));
        }
        if self.leading.values().all(SymPoly::is_zero) {
            return Err(Error::InvalidSeed("all leading coefficients vanish".into()));
        }
        Ok(())
    }

    fn free_constant(&self, k: u32, j: u32) -> Option<SymPoly> {
        (!self.zero_set.contains(&(k, j))).then(|| SymPoly::c(k, j))
    }
}

/// Particular solution `x = Σ_p a_p s^p e^{μs}` of `x' = λx + (Σ c_i s^i) e^{μs}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeOdeSolution {
    pub terms: Vec<(u32, SymPoly)>,
    pub resonant: bool,
}

/// Exact particular solution of the mode ODE.
///
/// Non-resonant (`μ ≠ λ`): `a_top = c_top/(μ-λ)`, then downward
/// `a_p = (c_p - (p+1)a_{p+1})/(μ-λ)`. Resonant: `c_i s^i ↦ c_i s^{i+1}/(i+1)`.
pub fn ode_particular(lambda: &Q, forcing: &[(u32, SymPoly)], mu: &Q) -> ModeOdeSolution {
    let mut c: BTreeMap<u32, SymPoly> = BTreeMap::new();
    for (i, p) in forcing {
        c.entry(*i).or_default().add_assign_ref(p);
    }
    c.retain(|_, p| !p.is_zero());
    if mu == lambda {
        let terms = c
            .into_iter()
            .map(|(i, p)| (i + 1, p.scale(&Q::new(1.into(), (i + 1).into()))))
            .collect();
        return ModeOdeSolution {
            terms,
            resonant: true,
        };
    }
    let Some(&top) = c.keys().next_back() else {
        return ModeOdeSolution {
            terms: Vec::new(),
            resonant: false,
        };
    };
    let inv = (mu - lambda).recip();
    let mut a: Vec<SymPoly> = vec![SymPoly::zero(); top as usize + 2];
    for p in (0..=top).rev() {
        let mut rhs = c.get(&p).cloned().unwrap_or_default();
        rhs.add_scaled(&a[p as usize + 1], &-qi(p as i64 + 1));
        a[p as usize] = rhs.scale(&inv);
    }
    let terms = a
        .into_iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| (i as u32, p))
        .collect();
    ModeOdeSolution {
        terms,
        resonant: false,
    }
}

type Grade = BTreeMap<(u32, u32, u32), SymPoly>;

/// Quadratic forcing at grade `k` from the already computed grades.
fn forcing_at(grades: &BTreeMap<u32, Grade>, k: u32) -> Grade {
    let target = k + 2;
    let pairs: Vec<(u32, u32)> = grades
        .keys()
        .copied()
        .filter(|&k1| 2 * k1 <= target && grades.contains_key(&(target - k1)))
        .map(|k1| (k1, target - k1))
        .collect();
    let chunks: Vec<Grade> = pairs
        .par_iter()
        .flat_map_iter(|&(k1, k2)| {
            let g1 = &grades[&k1];
            let g2 = &grades[&k2];
            g1.iter().map(move |((i1, a1, b1), c1)| {
                let mut acc = Grade::new();
                for ((i2, a2, b2), c2) in g2 {
                    if k1 == k2 && (i2, a2, b2) < (i1, a1, b1) {
                        continue;
                    }
                    let mut coef = c1.mul_ref(c2);
                    if k1 != k2 || (i1, a1, b1) != (i2, a2, b2) {
                        coef = coef.scale(&qi(2));
                    }
                    if coef.is_zero() {
                        continue;
                    }
                    for (na, ga) in hermite::product_terms(*a1, *a2).iter() {
                        for (nb, gb) in hermite::product_terms(*b1, *b2).iter() {
                            acc.entry((i1 + i2, *na, *nb))
                                .or_default()
                                .add_scaled(&coef, &(ga * gb));
                        }
                    }
                }
                acc
            })
        })
        .collect();
    let mut out = Grade::new();
    for chunk in chunks {
        for (key, c) in chunk {
            out.entry(key).or_default().add_assign_ref(&c);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Builds the expansion of the seed up to grade `order`.
pub fn expand(seed: &Seed, order: u32) -> Result<AsymSeries> {
    seed.validate()?;
    let m = seed.m;
    if order < m {
        return Err(Error::OrderBelowSeed {
            requested: order,
            m,
        });
    }
    let mut grades: BTreeMap<u32, Grade> = BTreeMap::new();
    let mut first = Grade::new();
    for (j, c) in &seed.leading {
        if !c.is_zero() {
            first.insert((0, m - j, *j), c.clone());
        }
    }
    grades.insert(m, first);
    for k in m + 1..=order {
        let forcing = forcing_at(&grades, k);
        let mut by_mode: BTreeMap<(u32, u32), Vec<(u32, SymPoly)>> = BTreeMap::new();
        for ((i, a, b), c) in forcing {
            by_mode.entry((a, b)).or_default().push((i, c));
        }
        let mu = grade_exponent(k as i32);
        let solved: Vec<((u32, u32), ModeOdeSolution)> = by_mode
            .into_par_iter()
            .map(|((a, b), f)| ((a, b), ode_particular(&eigenvalue(a, b), &f, &mu)))
            .collect();
        let mut grade = Grade::new();
        for ((a, b), sol) in solved {
            for (i, c) in sol.terms {
                grade.insert((i, a, b), c);
            }
        }
        for j in 0..=k {
            if let Some(c) = seed.free_constant(k, j) {
                grade.entry((0, k - j, j)).or_default().add_assign_ref(&c);
            }
        }
        grade.retain(|_, c| !c.is_zero());
        grades.insert(k, grade);
    }
    let mut out = AsymSeries::zero(order as i32);
    for (k, grade) in grades {
        for ((i, a, b), c) in grade {
            out.add_term(TermKey::new(k as i32, i, a, b), &c);
        }
    }
    Ok(out)
}

/// Largest power of `s` per grade of an expansion (`0` for grades without
/// secular terms).
pub fn resonance_profile(series: &AsymSeries, m: u32) -> BTreeMap<u32, u32> {
    let max = series.max_s_power();
    (m..=series.order().max(0) as u32)
        .map(|k| (k, max.get(&(k as i32)).copied().unwrap_or(0)))
        .collect()
}

/// Symbols `C[k,j]` introduced by an expansion, for reference.
pub fn free_constants(series: &AsymSeries) -> BTreeSet<Symbol> {
    series
        .symbols()
        .into_iter()
        .filter(|s| s.as_c().is_some())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn zeros(list: &[(u32, u32)]) -> BTreeSet<(u32, u32)> {
        list.iter().copied().collect()
    }

    #[test]
    fn ode_examples() {
        let c = SymPoly::c(4, 0);
        let sol = ode_particular(&qi(-1), &[(0, c.clone())], &qi(-2));
        assert_eq!(sol.terms, vec![(0, c.scale(&qi(-1)))]);
        assert!(!sol.resonant);
        let sol = ode_particular(&qi(-2), &[(0, c.clone())], &qi(-2));
        assert_eq!(sol.terms, vec![(1, c.clone())]);
        assert!(sol.resonant);
        let sol = ode_particular(&qi(1), &[(0, c.clone())], &qi(-2));
        assert_eq!(sol.terms, vec![(0, c.scale(&q(-1, 3)))]);
    }

    #[test]
    fn ode_with_secular_forcing() {
        // x' = x + s e^{-s}: x = (a1 s + a0) e^{-s} with a1 = -1/2, a0 = -1/4.
        let sol = ode_particular(&qi(1), &[(1, SymPoly::one())], &qi(-1));
        assert_eq!(
            sol.terms,
            vec![
                (0, SymPoly::constant(q(-1, 4))),
                (1, SymPoly::constant(q(-1, 2)))
            ]
        );
    }

    #[test]
    fn seed_returned_unchanged_at_its_own_order() {
        let seed = Seed::new(4, BTreeMap::from([(0, SymPoly::c(4, 0))]), BTreeSet::new());
        let s = expand(&seed, 4).unwrap();
        assert_eq!(
            s,
            AsymSeries::single(4, TermKey::new(4, 0, 4, 0), SymPoly::c(4, 0))
        );
    }

    #[test]
    fn rejects_invalid_seeds() {
        let odd = Seed::new(5, BTreeMap::from([(0, SymPoly::c(5, 0))]), BTreeSet::new());
        assert!(matches!(expand(&odd, 6), Err(Error::InvalidSeed(_))));
        let empty = Seed::new(4, BTreeMap::new(), BTreeSet::new());
        assert!(matches!(expand(&empty, 6), Err(Error::InvalidSeed(_))));
        let seed = Seed::symbolic(4, BTreeSet::new());
        assert_eq!(
            expand(&seed, 3),
            Err(Error::OrderBelowSeed { requested: 3, m: 4 })
        );
    }

    #[test]
    fn residual_vanishes_for_symbolic_seed() {
        let seed = Seed::symbolic(4, zeros(&[(4, 4), (4, 3), (5, 5)]));
        let s = expand(&seed, 9).unwrap();
        assert!(s.apply_flow_residual().is_zero());
    }

    #[test]
    fn secular_terms_only_on_homogeneous_modes() {
        let seed = Seed::symbolic(4, zeros(&[(4, 4), (4, 3)]));
        let s = expand(&seed, 9).unwrap();
        for key in s.terms().keys() {
            if key.i > 0 {
                assert!(key.k >= 6, "{key:?}");
            }
            if key.i > 0 && key.k == 6 {
                // The first secular grade only carries s on homogeneous modes.
                assert_eq!(key.a + key.b, 6, "{key:?}");
            }
        }
        assert_eq!(resonance_profile(&s, 4)[&6], 1);
        assert_eq!(resonance_profile(&s, 4)[&5], 0);
    }
}
