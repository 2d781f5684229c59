//! The formal expansion and the Galerkin truncation agree up to the first
//! omitted grade: halving the seed amplitude shrinks the discrepancy after
//! unit time by the factor predicted by that grade.

use blowuplab::coeffs::{SymPoly, Symbol};
use blowuplab::expander::{expand, Seed};
use blowuplab::galerkin::{self, TruncatedState};
use blowuplab::series::AsymSeries;
use std::collections::{BTreeMap, BTreeSet};

fn c40_only(order: u32) -> AsymSeries {
    let zeros: BTreeSet<(u32, u32)> = (5..=order)
        .flat_map(|k| (0..=k).map(move |j| (k, j)))
        .collect();
    expand(
        &Seed::new(4, BTreeMap::from([(0, SymPoly::c(4, 0))]), zeros),
        order,
    )
    .unwrap()
}

fn error_after_unit_time(series: &AsymSeries, amp: f64) -> f64 {
    let degree = series.terms().keys().map(|k| k.a + k.b).max().unwrap();
    let bindings = BTreeMap::from([(Symbol::c(4, 0), -amp)]);
    let start = TruncatedState::from_series(degree, series, 0.0, &bindings).unwrap();
    let traj = galerkin::integrate(&start, 1.0, 1e-3).unwrap();
    assert_eq!(traj.blowup_time(), None);
    let predicted = series.mode_values(1.0, &bindings).unwrap();
    let last = traj.last();
    galerkin::modes(degree)
        .iter()
        .map(|m| (last.get(*m) - predicted.get(m).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn grade_six_discrepancy_is_cubic_in_amplitude() {
    let s = c40_only(6);
    let (e1, e2) = (
        error_after_unit_time(&s, 1e-4),
        error_after_unit_time(&s, 5e-5),
    );
    assert!(e1 < 1e-6, "{e1}");
    let ratio = e1 / e2;
    assert!((6.0..10.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn grade_eight_discrepancy_is_quartic_in_amplitude() {
    let s = c40_only(8);
    let (e1, e2) = (
        error_after_unit_time(&s, 1e-4),
        error_after_unit_time(&s, 5e-5),
    );
    assert!(e1 < 1e-7, "{e1}");
    let ratio = e1 / e2;
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}
