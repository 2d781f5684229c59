//! Galerkin truncation of `∂_s v = 𝓛v + v²` onto the Hermite modes of total
//! degree `≤ D`, integrated with fixed-step classical Runge–Kutta.
//!
//! Writing `v = Σ v_{c,d} h_c(y1) h_d(y2)`, the projected system reads
//! `v'_{c,d} = (1-(c+d)/2)·v_{c,d} + Σ Q[(c,d),(a1,b1),(a2,b2)]·v_{a1,b1}·v_{a2,b2}`
//! with `Q = γ(a1,a2,c)·γ(b1,b2,d)`.

use crate::coeffs::Symbol;
use crate::error::{Error, Result};
use crate::hermite;
use crate::rational::{to_f64, Q};
use crate::series::{AsymSeries, ModeIndex};
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Overflow guard defining the numerical blow-up.
pub const OVERFLOW_GUARD: f64 = 1e6;

/// Absolute floor of the relative deviation in [`compare_with_expansion`].
pub const RELATIVE_FLOOR: f64 = 1e-12;

/// Modes of total degree `≤ D` in graded order: by total degree, then by
/// decreasing power of `y1` (`(0,0), (1,0), (0,1), (2,0), (1,1), …`).
pub fn modes(degree: u32) -> Vec<ModeIndex> {
    (0..=degree)
        .flat_map(|t| (0..=t).rev().map(move |a| ModeIndex::new(a, t - a)))
        .collect()
}

/// Mode coefficients `v_{c,d}(s)` of a degree-`D` truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedState {
    pub degree: u32,
    pub s: f64,
    /// Nonzero coefficients; absent modes are zero.
    pub values: BTreeMap<ModeIndex, f64>,
}

impl TruncatedState {
    /// The zero state (`w ≡ κ`).
    pub fn zero(degree: u32, s: f64) -> TruncatedState {
        TruncatedState {
            degree,
            s,
            values: BTreeMap::new(),
        }
    }

    /// State with the given coefficients; fails on modes above the degree.
    pub fn new(degree: u32, s: f64, values: BTreeMap<ModeIndex, f64>) -> Result<TruncatedState> {
        if let Some(m) = values.keys().find(|m| m.degree() > degree) {
            return Err(Error::InvalidIntegration(format!(
                "mode {m} exceeds the truncation degree {degree}"
            )));
        }
        Ok(TruncatedState { degree, s, values })
    }

    /// The values of a fully bound series at time `s`.
    pub fn from_series(
        degree: u32,
        series: &AsymSeries,
        s: f64,
        bindings: &BTreeMap<Symbol, f64>,
    ) -> Result<TruncatedState> {
        TruncatedState::new(degree, s, series.mode_values(s, bindings)?)
    }

    pub fn get(&self, mode: ModeIndex) -> f64 {
        self.values.get(&mode).copied().unwrap_or(0.0)
    }

    fn to_vec(&self, basis: &[ModeIndex]) -> Vec<f64> {
        basis.iter().map(|m| self.get(*m)).collect()
    }
}

/// Sparse quadratic coupling, symmetric in the two source modes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingTensor {
    pub degree: u32,
    /// `(target, source1, source2) ↦ γ·γ`, both source orders present.
    pub entries: BTreeMap<(ModeIndex, ModeIndex, ModeIndex), Q>,
}

impl CouplingTensor {
    pub fn get(&self, target: ModeIndex, m1: ModeIndex, m2: ModeIndex) -> Q {
        self.entries
            .get(&(target, m1, m2))
            .cloned()
            .unwrap_or_else(Q::zero)
    }
}

/// `(target, source1, source2)`.
type Triple = (ModeIndex, ModeIndex, ModeIndex);

/// Exact coupling tensor of the degree-`D` truncation.
pub fn coupling_tensor(degree: u32) -> CouplingTensor {
    let basis = modes(degree);
    let per_target: Vec<Vec<(Triple, Q)>> = basis
        .par_iter()
        .map(|&t| {
            let mut out = Vec::new();
            for &m1 in &basis {
                for &m2 in &basis {
                    if (m1.a + m2.a + t.a) % 2 == 1 || (m1.b + m2.b + t.b) % 2 == 1 {
                        continue;
                    }
                    let g1 = hermite::gamma(m1.a as i64, m2.a as i64, t.a as i64);
                    if g1.is_zero() {
                        continue;
                    }
                    let g = g1 * hermite::gamma(m1.b as i64, m2.b as i64, t.b as i64);
                    if !g.is_zero() {
                        out.push(((t, m1, m2), g));
                    }
                }
            }
            out
        })
        .collect();
    CouplingTensor {
        degree,
        entries: per_target.into_iter().flatten().collect(),
    }
}

/// Floating-point right-hand side of the truncated system.
#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    basis: Vec<ModeIndex>,
    lambda: Vec<f64>,
    /// `(target, i, j, coefficient)` over `i ≤ j`, off-diagonal doubled.
    quad: Vec<(usize, usize, usize, f64)>,
}

impl GalerkinSystem {
    /// Full quadratic system of degree `D`.
    pub fn new(degree: u32) -> GalerkinSystem {
        let tensor = coupling_tensor(degree);
        let basis = modes(degree);
        let index: BTreeMap<ModeIndex, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let quad = tensor
            .entries
            .iter()
            .filter(|((_, m1, m2), _)| index[m1] <= index[m2])
            .map(|((t, m1, m2), g)| {
                let (i, j) = (index[m1], index[m2]);
                let w = if i == j { 1.0 } else { 2.0 };
                (index[t], i, j, w * to_f64(g))
            })
            .collect();
        GalerkinSystem {
            lambda: basis.iter().map(|m| to_f64(&m.eigenvalue())).collect(),
            basis,
            quad,
        }
    }

    /// The linear flow alone (quadratic coupling switched off).
    pub fn linear(degree: u32) -> GalerkinSystem {
        let basis = modes(degree);
        GalerkinSystem {
            lambda: basis.iter().map(|m| to_f64(&m.eigenvalue())).collect(),
            basis,
            quad: Vec::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.basis.last().map_or(0, ModeIndex::degree)
    }

    pub fn basis(&self) -> &[ModeIndex] {
        &self.basis
    }

    fn rhs(&self, v: &[f64], out: &mut [f64]) {
        for (o, (l, x)) in out.iter_mut().zip(self.lambda.iter().zip(v)) {
            *o = l * x;
        }
        for &(t, i, j, c) in &self.quad {
            out[t] += c * v[i] * v[j];
        }
    }

    /// Integrates from `state0` to `s1` with fixed step `step`.
    pub fn integrate(&self, state0: &TruncatedState, s1: f64, step: f64) -> Result<Trajectory> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidIntegration(format!(
                "step must be positive, got {step}"
            )));
        }
        if s1.partial_cmp(&state0.s) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::InvalidIntegration(format!(
                "end time {s1} is not after the start {}",
                state0.s
            )));
        }
        if state0.degree > self.degree() {
            return Err(Error::InvalidIntegration(format!(
                "state of degree {} does not fit a degree-{} system",
                state0.degree,
                self.degree()
            )));
        }
        let n = self.basis.len();
        let steps = ((s1 - state0.s) / step).round().max(1.0) as usize;
        let mut v = state0.to_vec(&self.basis);
        let mut traj = Trajectory {
            basis: self.basis.clone(),
            times: vec![state0.s],
            values: vec![v.clone()],
            blown_up: false,
        };
        let (mut k1, mut k2, mut k3, mut k4, mut tmp) = (
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
        );
        for step_index in 1..=steps {
            self.rhs(&v, &mut k1);
            stage(&v, &k1, step / 2.0, &mut tmp);
            self.rhs(&tmp, &mut k2);
            stage(&v, &k2, step / 2.0, &mut tmp);
            self.rhs(&tmp, &mut k3);
            stage(&v, &k3, step, &mut tmp);
            self.rhs(&tmp, &mut k4);
            for i in 0..n {
                tmp[i] = v[i] + step / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            if tmp
                .iter()
                .any(|x| !x.is_finite() || x.abs() > OVERFLOW_GUARD)
            {
                traj.blown_up = true;
                break;
            }
            std::mem::swap(&mut v, &mut tmp);
            traj.times.push(state0.s + step_index as f64 * step);
            traj.values.push(v.clone());
        }
        Ok(traj)
    }
}

fn stage(v: &[f64], k: &[f64], h: f64, out: &mut [f64]) {
    for ((o, x), d) in out.iter_mut().zip(v).zip(k) {
        *o = x + h * d;
    }
}

/// Fixed-step trajectory; when `blown_up` the last state is the last one
/// before the overflow guard tripped.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub basis: Vec<ModeIndex>,
    pub times: Vec<f64>,
    /// One row per time, in the order of `basis`.
    pub values: Vec<Vec<f64>>,
    pub blown_up: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Numerical blow-up time (last time before the guard), if any.
    pub fn blowup_time(&self) -> Option<f64> {
        self.blown_up.then(|| {
            *self
                .times
                .last()
                .expect("trajectory holds its initial state")
        })
    }

    pub fn state(&self, index: usize) -> TruncatedState {
        let degree = self.basis.last().map_or(0, ModeIndex::degree);
        let values = self
            .basis
            .iter()
            .zip(&self.values[index])
            .filter(|(_, v)| **v != 0.0)
            .map(|(m, v)| (*m, *v))
            .collect();
        TruncatedState {
            degree,
            s: self.times[index],
            values,
        }
    }

    pub fn last(&self) -> TruncatedState {
        self.state(self.len() - 1)
    }

    /// Value of one mode along the trajectory.
    pub fn mode_series(&self, mode: ModeIndex) -> Option<Vec<f64>> {
        let i = self.basis.iter().position(|m| *m == mode)?;
        Some(self.values.iter().map(|row| row[i]).collect())
    }

    /// CSV with a header `s,v00,v10,v01,…` and one row per `every` steps
    /// (the last state is always included).
    pub fn to_csv(&self, every: usize) -> String {
        let every = every.max(1);
        let mut out = String::from("s");
        for m in &self.basis {
            out.push_str(&format!(",v{}_{}", m.a, m.b));
        }
        out.push('\n');
        for (i, (t, row)) in self.times.iter().zip(&self.values).enumerate() {
            if i % every != 0 && i + 1 != self.len() {
                continue;
            }
            out.push_str(&format!("{t:.12e}"));
            for x in row {
                out.push_str(&format!(",{x:.12e}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Integrates the full degree-`D` system, `D` taken from the state.
pub fn integrate(state0: &TruncatedState, s1: f64, step: f64) -> Result<Trajectory> {
    GalerkinSystem::new(state0.degree).integrate(state0, s1, step)
}

/// Blow-up criterion: the Gaussian mean of `w = 1 + v` exceeds `1`.
pub fn blowup_monitor(state: &TruncatedState) -> bool {
    state.get(ModeIndex::new(0, 0)) > 0.0
}

/// Maximal relative deviation per mode between a trajectory and a fully
/// bound series evaluated at the same times (relative to `max(|series|, 1e-12)`).
pub fn compare_with_expansion(
    traj: &Trajectory,
    series: &AsymSeries,
    bindings: &BTreeMap<Symbol, f64>,
) -> Result<BTreeMap<ModeIndex, f64>> {
    let degree = traj.basis.last().map_or(0, ModeIndex::degree);
    if let Some(k) = series.terms().keys().find(|k| k.a + k.b > degree) {
        return Err(Error::InvalidIntegration(format!(
            "series mode ({},{}) exceeds the truncation degree {degree}",
            k.a, k.b
        )));
    }
    let mut out: BTreeMap<ModeIndex, f64> = traj.basis.iter().map(|m| (*m, 0.0)).collect();
    for (t, row) in traj.times.iter().zip(&traj.values) {
        let predicted = series.mode_values(*t, bindings)?;
        for (m, x) in traj.basis.iter().zip(row) {
            let p = predicted.get(m).copied().unwrap_or(0.0);
            let dev = (x - p).abs() / p.abs().max(RELATIVE_FLOOR);
            let slot = out.get_mut(m).expect("basis mode");
            *slot = slot.max(dev);
        }
    }
    Ok(out)
}

/// Exact solution of the scalar Riccati equation `v' = v + v²`.
pub fn riccati_solution(v0: f64, s: f64) -> f64 {
    v0 * s.exp() / (1.0 + v0 - v0 * s.exp())
}

/// Closed-form blow-up time `ln((1+v0)/v0)` of `v' = v + v²`, `v0 > 0`.
pub fn riccati_blowup_time(v0: f64) -> f64 {
    ((1.0 + v0) / v0).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn scalar(v0: f64) -> TruncatedState {
        TruncatedState::new(0, 0.0, BTreeMap::from([(ModeIndex::new(0, 0), v0)])).unwrap()
    }

    #[test]
    fn tensor_examples() {
        let t0 = coupling_tensor(0);
        assert_eq!(t0.entries.len(), 1);
        let o = ModeIndex::new(0, 0);
        assert_eq!(t0.get(o, o, o), qi(1));
        let t = coupling_tensor(8);
        let m40 = ModeIndex::new(4, 0);
        assert_eq!(t.get(o, m40, m40), qi(384));
        assert_eq!(t.get(ModeIndex::new(1, 0), m40, m40), qi(0));
        for ((c, m1, m2), g) in &t.entries {
            assert_eq!(&t.get(*c, *m2, *m1), g);
        }
    }

    #[test]
    fn graded_order() {
        let m = modes(2);
        let expect = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        assert_eq!(
            m,
            expect
                .iter()
                .map(|&(a, b)| ModeIndex::new(a, b))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn riccati_blowup_and_decay() {
        let traj = integrate(&scalar(0.1), 3.0, 1e-4).unwrap();
        assert!(traj.blown_up);
        assert!((traj.blowup_time().unwrap() - 11f64.ln()).abs() < 1e-4);
        let traj = integrate(&scalar(-0.5), 5.0, 1e-3).unwrap();
        assert!(!traj.blown_up);
        let v = traj.mode_series(ModeIndex::new(0, 0)).unwrap();
        assert!(v.windows(2).all(|w| w[1] < w[0]));
        assert!(v.iter().all(|x| *x > -1.0));
        assert!((v.last().unwrap() - riccati_solution(-0.5, 5.0)).abs() < 1e-10);
    }

    #[test]
    fn zero_state_is_an_equilibrium() {
        let traj = integrate(&TruncatedState::zero(4, 0.0), 1.0, 1e-2).unwrap();
        assert!(traj.values.iter().flatten().all(|x| *x == 0.0));
    }

    #[test]
    fn linear_flow_matches_closed_form() {
        let sys = GalerkinSystem::linear(3);
        let init: BTreeMap<ModeIndex, f64> = modes(3)
            .into_iter()
            .map(|m| (m, 0.1 + m.a as f64 * 0.01))
            .collect();
        let state = TruncatedState::new(3, 0.5, init.clone()).unwrap();
        let traj = sys.integrate(&state, 1.5, 1e-3).unwrap();
        let end = traj.last();
        for (m, v0) in init {
            let exact = v0 * (to_f64(&m.eigenvalue()) * 1.0).exp();
            assert!((end.get(m) - exact).abs() < 1e-10, "{m}");
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |h: f64| {
            let t = integrate(&scalar(0.1), 1.5, h).unwrap();
            (t.last().get(ModeIndex::new(0, 0)) - riccati_solution(0.1, 1.5)).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((12.0..=20.0).contains(&ratio), "{ratio}");
    }

    #[test]
    fn monitor_threshold() {
        assert!(blowup_monitor(&scalar(0.01)));
        assert!(!blowup_monitor(&scalar(0.0)));
        assert!(!blowup_monitor(&scalar(-0.3)));
    }

    #[test]
    fn parity_is_conserved() {
        let init = BTreeMap::from([
            (ModeIndex::new(2, 0), 1e-2),
            (ModeIndex::new(0, 2), -1e-2),
            (ModeIndex::new(1, 1), 1e-3),
        ]);
        let traj = integrate(&TruncatedState::new(4, 0.0, init).unwrap(), 1.0, 1e-2).unwrap();
        for m in traj.basis.iter().filter(|m| m.degree() % 2 == 1) {
            assert!(
                traj.mode_series(*m).unwrap().iter().all(|x| *x == 0.0),
                "{m}"
            );
        }
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(integrate(&scalar(0.1), 1.0, 0.0).is_err());
        assert!(integrate(&scalar(0.1), -1.0, 0.1).is_err());
        let empty = AsymSeries::zero(4);
        let traj = integrate(&scalar(0.0), 1.0, 0.1).unwrap();
        let dev = compare_with_expansion(&traj, &empty, &BTreeMap::new()).unwrap();
        assert!(dev.values().all(|d| *d == 0.0));
    }
}
