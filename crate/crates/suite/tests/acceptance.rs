//! Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
//!
//! Every expected value is either a printed formula or computed here by an
//! oracle that does not go through the engine (Hermite polynomials by their
//! three-term recurrence and Gaussian moments, brute-force exponent
//! enumeration, closed-form Riccati solutions).

use blowuplab::coeffs::{Monomial, SymPoly, Symbol};
use blowuplab::expander::{expand, Seed};
use blowuplab::galerkin::{self, TruncatedState};
use blowuplab::hermite;
use blowuplab::rational::{q, qi, Q};
use blowuplab::recenter::{mode_table, ScaleTerm, ShiftSpec};
use blowuplab::regimes::search::{betas, Pipeline, RegimeConfig, Verdict};
use blowuplab::regimes::{
    exponent_sets, regime_search_general, regime_search_m4, CachedExpander, Origin,
};
use blowuplab::series::{AsymSeries, ModeIndex, TermKey};
use blowuplab_suite as oracle;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

// ---------------------------------------------------------------------------
// Helpers

fn c(k: u32, j: u32) -> SymPoly {
    SymPoly::c(k, j)
}

fn poly(s: &str) -> SymPoly {
    SymPoly::parse(s).expect("valid polynomial")
}

fn zeros(list: &[(u32, u32)]) -> BTreeSet<(u32, u32)> {
    list.iter().copied().collect()
}

fn c40_seed(zero: BTreeSet<(u32, u32)>) -> Seed {
    Seed::new(4, BTreeMap::from([(0, c(4, 0))]), zero)
}

/// Coefficient of a monomial inside a symbolic coefficient.
fn monomial_coefficient(p: &SymPoly, mono: &Monomial) -> Q {
    p.terms()
        .find(|(m, _)| *m == mono)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Q::zero)
}

type Key = (u32, u32, Q, u32, Q);

fn keyed(entries: &[ScaleTerm]) -> BTreeMap<Key, SymPoly> {
    let mut out: BTreeMap<Key, SymPoly> = BTreeMap::new();
    for e in entries {
        out.entry((
            e.a_pow,
            e.bn_pow,
            e.rate.clone(),
            e.spow,
            e.tau_rate.clone(),
        ))
        .or_default()
        .add_assign_ref(&e.coef);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expected table entry `coef·A^a·Bn^bn·e^{-rate·sn}·(sn+τ)^spow·e^{tau·τ}`.
fn row(
    acc: &mut BTreeMap<Key, SymPoly>,
    coef: SymPoly,
    a: u32,
    bn: u32,
    rate: Q,
    spow: u32,
    tau: Q,
) {
    if coef.is_zero() {
        return;
    }
    acc.entry((a, bn, rate, spow, tau))
        .or_default()
        .add_assign_ref(&coef);
}

struct Outcome {
    pass: bool,
    detail: String,
    /// Time spent in the library alone, when oracle work dominates the total.
    library_time: Option<Duration>,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        library_time: None,
    }
}

// ---------------------------------------------------------------------------
// 1. Golden expansion m = 4, grade 6

fn criterion_1() -> Outcome {
    let grade5: Vec<(u32, u32)> = (0..=5).map(|j| (5, j)).collect();
    let s = expand(&c40_seed(zeros(&grade5)), 6).expect("expansion");
    let c2 = c(4, 0).pow(2);
    let mut expected = AsymSeries::zero(6);
    expected.add_term(TermKey::new(4, 0, 4, 0), &c(4, 0));
    // printed coefficients of the grade-6 body
    let printed = [
        (0u32, 0u32, q(-384, 3)),
        (2, 0, q(-768, 2)),
        (4, 0, qi(-288)),
        (6, 1, qi(32)),
        (8, 0, qi(1)),
    ];
    for (a, i, coef) in &printed {
        expected.add_term(TermKey::new(6, *i, *a, 0), &c2.scale(coef));
    }
    for j in 0..=6 {
        expected.add_term(TermKey::new(6, 0, 6 - j, j), &c(6, j));
    }
    // the printed numbers are γ(4,4,n) times 1/(μ-λ) (or 1 at resonance)
    let mut gamma_ok = true;
    for (n, factor) in [
        (0i64, q(-1, 3)),
        (2, q(-1, 2)),
        (4, qi(-1)),
        (6, qi(1)),
        (8, qi(1)),
    ] {
        let want = printed
            .iter()
            .find(|(a, ..)| *a as i64 == n)
            .expect("row")
            .2
            .clone();
        gamma_ok &= oracle::gamma(4, 4, n) * factor == want;
    }
    outcome(
        s == expected && gamma_ok,
        format!(
            "{} terms, γ(4,4,·) oracle {}",
            s.len(),
            if gamma_ok { "agrees" } else { "disagrees" }
        ),
    )
}

// ---------------------------------------------------------------------------
// 2. Grade-7 cross terms

fn criterion_2() -> Outcome {
    let z = zeros(&[(5, 3), (5, 4), (6, 5), (6, 6)]);
    let s = expand(&c40_seed(z), 7).expect("expansion");
    let mut bad = Vec::new();
    for j in 0..=2u32 {
        let mono = Monomial::from_factors([(Symbol::c(4, 0), 1), (Symbol::c(5, j), 1)]);
        let mut got: BTreeMap<(u32, u32, u32), Q> = BTreeMap::new();
        for (k, coef) in s.grade(7) {
            let v = monomial_coefficient(coef, &mono);
            if !v.is_zero() {
                got.insert((k.i, k.a, k.b), v);
            }
        }
        let (jj, f) = (j as i64, 5 - j as i64);
        let families = [
            (0u32, 1 - jj, q(-2, 3) * oracle::gamma(4, f, 1 - jj)),
            (0, 3 - jj, qi(-1) * oracle::gamma(4, f, 3 - jj)),
            (0, 5 - jj, qi(-2) * oracle::gamma(4, f, 5 - jj)),
            (1, 7 - jj, qi(2) * oracle::gamma(4, f, 7 - jj)),
            (0, 9 - jj, qi(2)),
        ];
        let mut want = BTreeMap::new();
        for (i, a, v) in families {
            if a >= 0 && !v.is_zero() {
                want.insert((i, a as u32, j), v);
            }
        }
        if got != want {
            bad.push(format!("C[5,{j}]: got {got:?} want {want:?}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            "five families exact for j=0,1,2".to_string()
        } else {
            bad.join("; ")
        },
    )
}

// ---------------------------------------------------------------------------
// 3. Residual property on random seeds

fn random_q(rng: &mut ChaCha8Rng) -> Q {
    let n: i64 = rng.gen_range(-9..=9);
    let d: i64 = rng.gen_range(1..=5);
    q(n, d)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = Vec::new();
    let mut orders = Vec::new();
    for trial in 0..50 {
        let m: u32 = if rng.gen_bool(0.5) { 4 } else { 6 };
        // keep the larger m to moderate orders; the bound M ≤ 2m+3 holds throughout
        let order: u32 = if m == 4 {
            rng.gen_range(m..=2 * m + 3)
        } else {
            rng.gen_range(m..=m + 4)
        };
        let mut leading = BTreeMap::new();
        for j in 0..=m {
            if rng.gen_bool(0.6) {
                leading.insert(j, SymPoly::constant(random_q(&mut rng)));
            }
        }
        if leading.values().all(SymPoly::is_zero) {
            leading.insert(0, SymPoly::constant(qi(-1)));
        }
        let mut zero_set = BTreeSet::new();
        for k in m + 1..=order {
            for j in 0..=k {
                if rng.gen_bool(0.3) {
                    zero_set.insert((k, j));
                }
            }
        }
        let series = expand(&Seed::new(m, leading, zero_set), order).expect("expansion");
        let residual = series.apply_flow_residual();
        if !residual.is_zero() {
            failures.push(format!(
                "trial {trial}: m={m} M={order} residual has {} terms",
                residual.len()
            ));
        }
        orders.push(order);
    }
    let max = orders.iter().max().copied().unwrap_or(0);
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            format!("50 seeds, max order {max}, all residuals vanish")
        } else {
            failures.join("; ")
        },
    )
}

// ---------------------------------------------------------------------------
// 4. Table fidelity

/// Rows `C_{k,i}` of a grade-`k` homogeneous block.
fn homogeneous_rows(
    cols: &mut [BTreeMap<Key, SymPoly>; 3],
    k: u32,
    range: impl Iterator<Item = u32>,
) {
    let rate = q(k as i64 - 2, 2);
    for i in range {
        let ci = c(k, i);
        row(&mut cols[0], ci.clone(), k, k - i, rate.clone(), 0, qi(1));
        if i < k {
            row(
                &mut cols[1],
                ci.scale(&qi((k - i) as i64)),
                k - 1,
                k - 1 - i,
                rate.clone(),
                0,
                q(1, 2),
            );
        }
        row(
            &mut cols[2],
            ci.scale(&qi(i as i64)),
            k - 1,
            k - i,
            rate.clone(),
            0,
            q(1, 2),
        );
    }
}

fn table_columns(series: &AsymSeries) -> [BTreeMap<Key, SymPoly>; 3] {
    let modes = [
        ModeIndex::new(0, 0),
        ModeIndex::new(1, 0),
        ModeIndex::new(0, 1),
    ];
    let t = mode_table(series, &ShiftSpec::canonical(), &modes);
    modes.map(|m| keyed(t.column(m)))
}

fn compare_tables(
    name: &str,
    got: &[BTreeMap<Key, SymPoly>; 3],
    want: &[BTreeMap<Key, SymPoly>; 3],
    bad: &mut Vec<String>,
) -> usize {
    let mut n = 0;
    for (col, (g, w)) in ["v00", "v10", "v01"].iter().zip(got.iter().zip(want)) {
        n += w.len();
        if g != w {
            let missing: Vec<String> = w
                .iter()
                .filter(|(k, v)| g.get(*k) != Some(v))
                .map(|(k, v)| format!("{v}@{k:?}"))
                .collect();
            let extra: Vec<String> = g
                .iter()
                .filter(|(k, v)| w.get(*k) != Some(v))
                .map(|(k, v)| format!("{v}@{k:?}"))
                .collect();
            bad.push(format!("{name} {col}: missing {missing:?} extra {extra:?}"));
        }
    }
    n
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;

    // first two tables: linear block of grades 4 and 5 (τ-dependence kept)
    let mut s = AsymSeries::zero(5);
    for i in 0..=4 {
        s.add_term(TermKey::new(4, 0, 4 - i, i), &c(4, i));
    }
    for i in 0..=5 {
        s.add_term(TermKey::new(5, 0, 5 - i, i), &c(5, i));
    }
    let mut want: [BTreeMap<Key, SymPoly>; 3] = Default::default();
    homogeneous_rows(&mut want, 4, 0..=4);
    homogeneous_rows(&mut want, 5, 0..=5);
    checked += compare_tables("linear block", &table_columns(&s), &want, &mut bad);

    // third table: grade-6 expansion with C[4,1..4] = C[5,3] = C[5,4] = 0
    let base = zeros(&[(5, 3), (5, 4), (5, 5)]);
    let s6 = expand(&c40_seed(base), 6).expect("expansion");
    let c2 = c(4, 0).pow(2);
    let g = |n: i64| oracle::gamma(4, 4, n);
    let mut want: [BTreeMap<Key, SymPoly>; 3] = Default::default();
    let two = qi(2);
    row(
        &mut want[0],
        c2.scale(&(q(-1, 3) * g(0))),
        0,
        0,
        two.clone(),
        0,
        qi(-2),
    );
    row(
        &mut want[0],
        c2.scale(&(q(-1, 2) * g(2))),
        2,
        2,
        two.clone(),
        0,
        qi(-1),
    );
    row(
        &mut want[1],
        c2.scale(&(qi(-1) * g(2))),
        1,
        1,
        two.clone(),
        0,
        q(-3, 2),
    );
    row(&mut want[0], c(4, 0), 4, 4, qi(1), 0, qi(1));
    row(&mut want[1], c(4, 0).scale(&qi(4)), 3, 3, qi(1), 0, q(1, 2));
    row(
        &mut want[0],
        c2.scale(&(qi(-1) * g(4))),
        4,
        4,
        two.clone(),
        0,
        qi(0),
    );
    row(
        &mut want[1],
        c2.scale(&(qi(-4) * g(4))),
        3,
        3,
        two.clone(),
        0,
        q(-1, 2),
    );
    homogeneous_rows(&mut want, 5, 0..=2);
    row(&mut want[0], c2.scale(&g(6)), 6, 6, two.clone(), 1, qi(1));
    row(
        &mut want[1],
        c2.scale(&(qi(6) * g(6))),
        5,
        5,
        two.clone(),
        1,
        q(1, 2),
    );
    homogeneous_rows(&mut want, 6, 0..=6);
    row(&mut want[0], c2.clone(), 8, 8, two.clone(), 0, qi(2));
    row(
        &mut want[1],
        c2.scale(&qi(8)),
        7,
        7,
        two.clone(),
        0,
        q(3, 2),
    );
    checked += compare_tables("grade-6 table", &table_columns(&s6), &want, &mut bad);

    // fourth table (growing rows only): grade-7 expansion after C[6,5] = C[6,6] = 0
    let s7 = expand(
        &c40_seed(zeros(&[(5, 3), (5, 4), (5, 5), (6, 5), (6, 6)])),
        7,
    )
    .expect("expansion");
    let mut got = table_columns(&s7);
    for col in got.iter_mut() {
        col.retain(|k, _| k.4.is_positive());
    }
    let mut want: [BTreeMap<Key, SymPoly>; 3] = Default::default();
    row(&mut want[0], c(4, 0), 4, 4, qi(1), 0, qi(1));
    row(&mut want[1], c(4, 0).scale(&qi(4)), 3, 3, qi(1), 0, q(1, 2));
    homogeneous_rows(&mut want, 5, 0..=2);
    row(&mut want[0], c2.scale(&g(6)), 6, 6, two.clone(), 1, qi(1));
    row(
        &mut want[1],
        c2.scale(&(qi(6) * g(6))),
        5,
        5,
        two.clone(),
        1,
        q(1, 2),
    );
    homogeneous_rows(&mut want, 6, 0..=4);
    let r7 = q(5, 2);
    for i in 0..=2u32 {
        let cc = c(4, 0).mul_ref(&c(5, i));
        let gi = oracle::gamma(4, 5 - i as i64, 7 - i as i64);
        let res = cc.scale(&(qi(2) * gi));
        row(&mut want[0], res.clone(), 7, 7 - i, r7.clone(), 1, qi(1));
        row(
            &mut want[1],
            res.scale(&qi((7 - i) as i64)),
            6,
            6 - i,
            r7.clone(),
            1,
            q(1, 2),
        );
        row(
            &mut want[2],
            res.scale(&qi(i as i64)),
            6,
            7 - i,
            r7.clone(),
            1,
            q(1, 2),
        );
        let top = cc.scale(&qi(2));
        row(&mut want[0], top.clone(), 9, 9 - i, r7.clone(), 0, qi(2));
        row(
            &mut want[1],
            top.scale(&qi((9 - i) as i64)),
            8,
            8 - i,
            r7.clone(),
            0,
            q(3, 2),
        );
        row(
            &mut want[2],
            top.scale(&qi(i as i64)),
            8,
            9 - i,
            r7.clone(),
            0,
            q(3, 2),
        );
    }
    homogeneous_rows(&mut want, 7, 0..=7);
    row(&mut want[0], c2.clone(), 8, 8, two.clone(), 0, qi(2));
    row(
        &mut want[1],
        c2.scale(&qi(8)),
        7,
        7,
        two.clone(),
        0,
        q(3, 2),
    );
    checked += compare_tables("grade-7 table", &got, &want, &mut bad);

    // single-point projection of the first homogeneous term beyond the profile
    for m in [4u32, 6] {
        let mut s = AsymSeries::zero(m as i32 + 1);
        s.add_term(TermKey::new(m as i32 + 1, 0, 0, m + 1), &c(m + 1, m + 1));
        let shift = ShiftSpec::parse("0,A").expect("shift");
        let t = mode_table(&s, &shift, &[ModeIndex::new(0, 0)]);
        let mut want = BTreeMap::new();
        let r = q(m as i64 - 1, 2);
        row(&mut want, c(m + 1, m + 1), m + 1, 0, r.clone(), 0, -r);
        checked += 1;
        if keyed(t.column(ModeIndex::new(0, 0))) != want {
            bad.push(format!("axis projection m={m}"));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} entries reproduced")
        } else {
            bad.join("; ")
        },
    )
}

// ---------------------------------------------------------------------------
// 5. Constraint extraction

fn criterion_5() -> Outcome {
    let provider = CachedExpander::new();
    let pipe = Pipeline::new(4, &provider, RegimeConfig::default()).expect("pipeline");
    let stages: Vec<SymPoly> = pipe
        .quadratic()
        .expect("quadratic")
        .into_iter()
        .filter_map(|r| r.constraint)
        .collect();
    let want = vec![
        poly("2*C[4,2]*L + C[5,4]"),
        poly("2*L*C[5,3] + C[6,5]"),
        poly("4*L^3*C[4,0] + 3*L^2*C[5,2] + 2*L*C[6,4] + C[7,6]"),
    ];
    let stage = pipe
        .run_stage(&q(1, 4), &Q::zero(), &BTreeSet::new())
        .expect("stage");
    let law = match stage.verdict {
        Verdict::Survives { primary, .. } => Some(primary.poly),
        _ => None,
    };
    let law_ok = law == Some(poly("4*C[4,0]*L^2 + 2*C[5,3]"));
    let pass = stages == want && law_ok;
    let shown: Vec<String> = stages.iter().map(|p| p.to_string()).collect();
    outcome(
        pass,
        format!(
            "quadratic stages [{}]; θ=1/4: {}",
            shown.join(" | "),
            law.map_or("none".into(), |p| p.to_string())
        ),
    )
}

// ---------------------------------------------------------------------------
// 6. m = 4 regime set

fn criterion_6() -> Outcome {
    let provider = CachedExpander::new();
    let all = regime_search_m4(&provider, RegimeConfig::default()).expect("search");
    let beta_ok =
        betas(&all) == BTreeSet::from([q(3, 2), qi(2)]) && all.iter().all(|r| r.alpha.is_zero());

    let branch = |bind: BTreeMap<Symbol, Q>| {
        let all = regime_search_m4(&provider, RegimeConfig::default().with_bindings(bind))
            .expect("search");
        all.into_iter().find(|r| r.beta == Some(q(3, 2)))
    };
    // claim (a): C[5,3] = -2, C[4,0] = -1 gives L0 = 1
    let a = branch(BTreeMap::from([
        (Symbol::c(5, 3), qi(-2)),
        (Symbol::c(4, 0), qi(-1)),
    ]));
    let a_roots = a
        .as_ref()
        .and_then(|r| r.positive_roots().map(|p| p.to_vec()));
    let a_ok = a_roots
        .as_ref()
        .is_some_and(|p| p.len() == 1 && (p[0].value() - 1.0).abs() < 1e-12);
    // closed form L0² = -C53/(2 C40) evaluated independently
    let l0_sq = -qi(-2) / (qi(2) * qi(-1));
    // claim (b): C[5,3] ≥ 0 (with C[4,0] = -1) gives no positive root
    let mut b_ok = true;
    let mut b_detail = Vec::new();
    for c53 in [qi(0), qi(2), q(1, 2)] {
        let r = branch(BTreeMap::from([
            (Symbol::c(5, 3), c53.clone()),
            (Symbol::c(4, 0), qi(-1)),
        ]));
        let pos = r
            .as_ref()
            .and_then(|r| r.positive_roots().map(|p| p.to_vec()))
            .unwrap_or_default();
        b_ok &= pos.is_empty();
        b_detail.push(format!(
            "C53={c53}: {}",
            pos.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ));
    }
    // the constraint itself forces sign(C53) = -sign(C40): check the mirrored bindings too
    let mirrored = branch(BTreeMap::from([
        (Symbol::c(5, 3), qi(2)),
        (Symbol::c(4, 0), qi(-1)),
    ]))
    .and_then(|r| r.positive_roots().map(|p| p.to_vec()))
    .is_some_and(|p| p.len() == 1 && (p[0].value() - 1.0).abs() < 1e-12);
    let detail = format!(
        "β-set {}; C53=-2,C40=-1 → positive roots {:?} (closed form L0²={l0_sq}) {}; C53≥0 → [{}] {}; mirrored C53=+2 → L0=1: {mirrored}",
        if beta_ok { "ok" } else { "wrong" },
        a_roots.map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
        if a_ok { "ok" } else { "claim not met" },
        b_detail.join("; "),
        if b_ok { "ok" } else { "claim not met" },
    );
    outcome(beta_ok && a_ok && b_ok, detail)
}

// ---------------------------------------------------------------------------
// 7. m = 6 regime set

fn criterion_7() -> Outcome {
    let provider = CachedExpander::new();
    let all = regime_search_general(6, &provider, RegimeConfig::default()).expect("search");
    let power: BTreeSet<Q> = all
        .iter()
        .filter(|r| r.origin == Origin::PowerLaw)
        .filter_map(|r| r.beta.clone())
        .collect();
    let alpha_ok = all.iter().all(|r| r.alpha.is_zero());
    let has_quadratic = all.iter().any(|r| r.origin == Origin::Quadratic);
    let want = BTreeSet::from([q(4, 3), q(3, 2), q(5, 3)]);
    let sets = exponent_sets(6).expect("sets");
    let threshold = q(4, 10);
    let e1 = oracle::codominance_values(6, 9, &qi(0), &threshold);
    let e2 = oracle::codominance_values(6, 10, &threshold, &q(1, 2));
    let sets_ok = sets.e1 == e1 && sets.e2 == e2;
    let contains = [q(1, 6), q(1, 4), q(1, 3)]
        .iter()
        .all(|t| e1.contains(t) || e2.contains(t));
    let shown: Vec<String> = power.iter().map(|b| b.to_string()).collect();
    outcome(
        power == want && alpha_ok && has_quadratic && sets_ok && contains,
        format!("power-law β = {{{}}}, α=0: {alpha_ok}, E1/E2 vs enumeration: {sets_ok}, ⊇ {{1/6,1/4,1/3}}: {contains}", shown.join(", ")),
    )
}

// ---------------------------------------------------------------------------
// 8. Hermite kernel

fn criterion_8() -> Outcome {
    // oracle side: recurrence, Gaussian moments, closed-form products
    let oracle_h: Vec<Vec<Q>> = (0..=12).map(oracle::hermite).collect();
    let mut oracle_ip_ok = true;
    for l in 0..=12 {
        for j in 0..=12 {
            let want = if l == j {
                oracle::norm_sq(j)
            } else {
                Q::zero()
            };
            oracle_ip_ok &= oracle::integral(&oracle::poly_mul(&oracle_h[l], &oracle_h[j])) == want;
        }
    }
    let mut closed_products: BTreeMap<(u32, u32), BTreeMap<u32, Q>> = BTreeMap::new();
    let mut closed_ok = true;
    for a in 0..=10u32 {
        for b in 0..=10u32 {
            let mut closed: BTreeMap<u32, Q> = BTreeMap::new();
            for r in 0..=a.min(b) {
                let mut f = Q::one();
                for i in 1..=r {
                    f *= qi(i as i64);
                }
                closed.insert(
                    a + b - 2 * r,
                    f * oracle::binom(a, r) * oracle::binom(b, r) * oracle::pow2(r),
                );
            }
            // multiplication oracle: γ(a,b,n) via Gaussian integrals
            let by_integral: BTreeMap<u32, Q> = (0..=a + b)
                .map(|n| (n, oracle::gamma(a as i64, b as i64, n as i64)))
                .filter(|(_, v)| !v.is_zero())
                .collect();
            closed_ok &= closed == by_integral;
            closed_products.insert((a, b), closed);
        }
    }

    // library side, timed on its own
    let t = Instant::now();
    let mut bad = Vec::new();
    for j in 0..=12u32 {
        let hj = hermite::hermite_coefficients(j);
        if hj.coeffs() != oracle_h[j as usize].as_slice() {
            bad.push(format!("h_{j} coefficients"));
        }
        for l in 0..=12u32 {
            let want = if l == j {
                oracle::norm_sq(j as usize)
            } else {
                Q::zero()
            };
            if hermite::hermite_coefficients(l)
                .mul(&hj)
                .weighted_integral()
                != want
            {
                bad.push(format!("<h_{l},h_{j}>"));
            }
        }
        if j >= 1 && hj.derivative() != hermite::hermite_coefficients(j - 1).scale(&qi(j as i64)) {
            bad.push(format!("h_{j}'"));
        }
    }
    for ((a, b), closed) in &closed_products {
        if &hermite::product(*a, *b) != closed {
            bad.push(format!("h_{a}·h_{b}"));
        }
    }
    let library_time = t.elapsed();
    if !oracle_ip_ok || !closed_ok {
        bad.push("oracle self-check".into());
    }
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            "13×13 orthogonality, 11×11 products, 12 derivatives exact".into()
        } else {
            bad.join(", ")
        },
        library_time: Some(library_time),
    }
}

// ---------------------------------------------------------------------------
// 9. Galerkin numerics

fn criterion_9() -> Outcome {
    let scalar = |v0: f64| {
        TruncatedState::new(0, 0.0, BTreeMap::from([(ModeIndex::new(0, 0), v0)])).expect("state")
    };
    let traj = galerkin::integrate(&scalar(0.1), 3.0, 1e-4).expect("integration");
    let t_star = traj.blowup_time();
    let blow_err = t_star.map(|t| (t - oracle::riccati_blowup(0.1)).abs());
    let blow_ok = blow_err.is_some_and(|e| e < 1e-4);
    let err = |h: f64| {
        let t = galerkin::integrate(&scalar(0.1), 1.5, h).expect("integration");
        (t.last().get(ModeIndex::new(0, 0)) - oracle::riccati(0.1, 1.5)).abs()
    };
    let ratio = err(0.1) / err(0.05);
    let ratio_ok = (12.0..=20.0).contains(&ratio);

    // D = 8 trajectory against the grade-6 expansion with C[4,0] = -1e-3
    let all5_6: BTreeSet<(u32, u32)> = (5..=6).flat_map(|k| (0..=k).map(move |j| (k, j))).collect();
    let series = expand(&c40_seed(all5_6), 6).expect("expansion");
    let bindings = BTreeMap::from([(Symbol::c(4, 0), -1e-3)]);
    let start = TruncatedState::from_series(8, &series, 0.0, &bindings).expect("state");
    let traj = galerkin::integrate(&start, 5.0, 1e-3).expect("integration");
    let dev = galerkin::compare_with_expansion(&traj, &series, &bindings).expect("comparison");
    let worst = dev
        .iter()
        .map(|(m, d)| (*m, *d))
        .fold(
            (ModeIndex::new(0, 0), 0.0),
            |a, b| if b.1 > a.1 { b } else { a },
        );
    let dev_ok = worst.1 < 1e-3;
    let shown: Vec<String> = dev
        .iter()
        .filter(|(_, d)| **d > 0.0)
        .map(|(m, d)| format!("{m}:{d:.1e}"))
        .collect();
    outcome(
        blow_ok && ratio_ok && dev_ok,
        format!(
            "|s*-ln 11| = {:.1e} ({}); halving ratio {ratio:.2} ({}); D=8 deviation max {:.1e} at {} ({}) [{}]",
            blow_err.unwrap_or(f64::NAN),
            if blow_ok { "ok" } else { "fail" },
            if ratio_ok { "ok" } else { "fail" },
            worst.1,
            worst.0,
            if dev_ok { "ok" } else { "fail" },
            shown.join(" "),
        ),
    )
}

// ---------------------------------------------------------------------------

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        (
            "golden expansion m=4 grade 6",
            criterion_1,
            Duration::from_secs(1),
        ),
        ("grade-7 cross terms", criterion_2, Duration::from_secs(2)),
        (
            "residual on 50 random seeds",
            criterion_3,
            Duration::from_secs(30),
        ),
        (
            "recentering table fidelity",
            criterion_4,
            Duration::from_secs(2),
        ),
        ("constraint extraction", criterion_5, Duration::from_secs(5)),
        ("m=4 regime set", criterion_6, Duration::from_secs(5)),
        ("m=6 regime set", criterion_7, Duration::from_secs(60)),
        ("Hermite kernel", criterion_8, Duration::from_secs(1)),
        ("Galerkin numerics", criterion_9, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = run();
        let elapsed = out.library_time.unwrap_or_else(|| t.elapsed());
        let in_time = elapsed <= *budget;
        let pass = out.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {}. {name} [{:.2}s / {}s] — {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
