//! Sweeps and searches over beam-splitter settings.
//!
//! The one-knob search varies `η_va = η_vb = η_v` with both horizontal beam
//! splitters open, which traces a curve in the (entropy, EOF) plane starting
//! at the input state (`η_v = 1`). The all-four search runs derivative-free
//! coordinate descent over `(η_va, η_ha, η_vb, η_hb)`; it only claims a local
//! optimum.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{entropy_log4, eof, metrics, EntanglementMetrics};
use crate::protocol::{bs_transform, BeamSplitterSettings};
use crate::states::{mixed_family, DensityMatrix, StateFamilyParams};
use crate::tolerances::{DEFAULT_GRID_POINTS, DESCENT_TOL, GOLDEN_TOL, IMPROVEMENT_TOL};

/// Grid points per coordinate in the all-four descent.
const COORDINATE_GRID_POINTS: usize = 64;
const MAX_DESCENT_CYCLES: usize = 200;

/// One evaluated setting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    /// The swept coefficient. In all-four mode this is `η_va`.
    pub eta_v: f64,
    pub settings: BeamSplitterSettings,
    pub entropy: f64,
    pub eof: f64,
    pub probability: f64,
}

/// Result of a one-knob sweep, in grid order.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    /// Grid values whose post-selection was degenerate.
    pub skipped: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// `η_va = η_vb = η_v`, `η_ha = η_hb = 1`.
    OneKnob,
    /// All four coefficients independently.
    AllFour,
}

/// How a filtered state compares to its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    /// EOF up, entropy down.
    Concentration,
    /// EOF up, entropy not down.
    Distillation,
    /// Entropy down, EOF not up.
    Purification,
    /// EOF down or entropy up, and nothing improved.
    Degradation,
    /// No change.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub initial: EntanglementMetrics,
    pub best: SweepPoint,
    pub classification: Classification,
    pub achievable: bool,
}

/// Compares a candidate's `(eof, entropy)` against the input metrics.
/// Changes smaller than [`IMPROVEMENT_TOL`] count as no change.
pub fn classify(initial: &EntanglementMetrics, eof: f64, entropy: f64) -> Classification {
    let d_eof = eof - initial.eof;
    let d_s = entropy - initial.entropy;
    let eof_up = d_eof > IMPROVEMENT_TOL;
    let s_down = d_s < -IMPROVEMENT_TOL;
    match (eof_up, s_down) {
        (true, true) => Classification::Concentration,
        (true, false) => Classification::Distillation,
        (false, true) => Classification::Purification,
        (false, false) if d_eof < -IMPROVEMENT_TOL || d_s > IMPROVEMENT_TOL => {
            Classification::Degradation
        }
        (false, false) => Classification::None,
    }
}

/// Applies `settings` and measures the post-selected state.
pub fn evaluate(
    rho: &DensityMatrix,
    settings: BeamSplitterSettings,
    eta_v: f64,
) -> Result<SweepPoint> {
    let out = bs_transform(rho, &settings)?;
    Ok(SweepPoint {
        eta_v,
        settings,
        entropy: entropy_log4(&out.output),
        eof: eof(&out.output),
        probability: out.success_probability,
    })
}

fn one_knob_point(rho: &DensityMatrix, eta_v: f64) -> Result<SweepPoint> {
    evaluate(rho, BeamSplitterSettings::symmetric(eta_v, 1.0)?, eta_v)
}

/// `k/n` for `k = 1..=n`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| k as f64 / n as f64).collect()
}

/// Sweeps `η_v` over the mixed family built from `family`.
pub fn sweep(family: &StateFamilyParams, n_points: usize) -> Result<Sweep> {
    sweep_state(&mixed_family(family)?, n_points)
}

/// Sweeps `η_v` over a uniform grid in `(0, 1]` for an arbitrary input.
pub fn sweep_state(rho: &DensityMatrix, n_points: usize) -> Result<Sweep> {
    if n_points < 2 {
        return Err(Error::InvalidParams(format!(
            "a sweep needs at least 2 points, got {n_points}"
        )));
    }
    let mut points = Vec::with_capacity(n_points);
    let mut skipped = Vec::new();
    for eta in uniform_grid(n_points) {
        match one_knob_point(rho, eta) {
            Ok(p) => points.push(p),
            Err(Error::DegeneratePostselection { .. }) => skipped.push(eta),
            Err(e) => return Err(e),
        }
    }
    Ok(Sweep { points, skipped })
}

/// Strict preference: higher EOF, then lower entropy, then larger `η_v`.
fn better(a: &SweepPoint, b: &SweepPoint) -> bool {
    let tol = IMPROVEMENT_TOL;
    if (a.eof - b.eof).abs() > tol {
        return a.eof > b.eof;
    }
    if (a.entropy - b.entropy).abs() > tol {
        return a.entropy < b.entropy;
    }
    a.eta_v > b.eta_v
}

fn best_of<'a>(points: impl IntoIterator<Item = &'a SweepPoint>) -> Option<SweepPoint> {
    points
        .into_iter()
        .fold(None, |acc: Option<SweepPoint>, p| match acc {
            Some(b) if !better(p, &b) => Some(b),
            _ => Some(*p),
        })
}

/// The point of maximal EOF on a curve.
pub fn turning_point(curve: &[SweepPoint]) -> Result<SweepPoint> {
    if curve.len() < 3 {
        return Err(Error::DegenerateCurve(format!(
            "need at least 3 points, got {}",
            curve.len()
        )));
    }
    if curve
        .iter()
        .any(|p| !p.eof.is_finite() || !p.entropy.is_finite())
    {
        return Err(Error::DegenerateCurve("non-finite point on curve".into()));
    }
    Ok(best_of(curve).expect("curve is non-empty"))
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Returns the best abscissa seen, which for a unimodal `f` is within `tol`
/// of the maximiser.
pub fn golden_section_max(f: impl Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid scan of `eval` over `(0, 1]` followed by golden-section refinement
/// around the best grid cell. `eval` returns `None` for infeasible points.
fn line_search(eval: &dyn Fn(f64) -> Option<SweepPoint>, grid_points: usize) -> Option<SweepPoint> {
    let grid = uniform_grid(grid_points);
    let evaluated: Vec<(usize, SweepPoint)> = grid
        .iter()
        .enumerate()
        .filter_map(|(k, &x)| eval(x).map(|p| (k, p)))
        .collect();
    let (k, grid_best) = evaluated.iter().fold(
        None,
        |acc: Option<(usize, SweepPoint)>, &(k, p)| match acc {
            Some((_, b)) if !better(&p, &b) => acc,
            _ => Some((k, p)),
        },
    )?;
    let lo = if k == 0 { 0.0 } else { grid[k - 1] };
    let hi = grid.get(k + 1).copied().unwrap_or(1.0);
    let objective = |x: f64| {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        eval(x).map_or(f64::NEG_INFINITY, |p| p.eof)
    };
    let (x, fx) = golden_section_max(objective, lo, hi, GOLDEN_TOL);
    if fx > grid_best.eof + IMPROVEMENT_TOL {
        eval(x).or(Some(grid_best))
    } else {
        Some(grid_best)
    }
}

fn with_coordinate(s: &BeamSplitterSettings, axis: usize, x: f64) -> BeamSplitterSettings {
    let mut a = s.as_array();
    a[axis] = x;
    BeamSplitterSettings {
        eta_va: a[0],
        eta_ha: a[1],
        eta_vb: a[2],
        eta_hb: a[3],
    }
}

/// Maximises EOF subject to `feasible`, starting from `start` (which may be
/// infeasible or absent).
fn search(
    rho: &DensityMatrix,
    mode: SearchMode,
    feasible: &dyn Fn(&SweepPoint) -> bool,
) -> Option<SweepPoint> {
    let point = |s: BeamSplitterSettings| evaluate(rho, s, s.eta_va).ok().filter(|p| feasible(p));
    let one_knob = line_search(
        &|t| {
            point(BeamSplitterSettings {
                eta_va: t,
                eta_vb: t,
                ..BeamSplitterSettings::identity()
            })
        },
        DEFAULT_GRID_POINTS,
    );
    if mode == SearchMode::OneKnob {
        return one_knob;
    }

    let identity = point(BeamSplitterSettings::identity());
    let mut current = match (one_knob, identity) {
        (Some(a), Some(b)) => Some(if better(&b, &a) { b } else { a }),
        (a, b) => a.or(b),
    };
    for _ in 0..MAX_DESCENT_CYCLES {
        let before = current.map_or(f64::NEG_INFINITY, |p| p.eof);
        for axis in 0..4 {
            let base = current.map_or(BeamSplitterSettings::identity(), |p| p.settings);
            let candidate = line_search(
                &|x| point(with_coordinate(&base, axis, x)),
                COORDINATE_GRID_POINTS,
            );
            if let Some(c) = candidate {
                let improves = match current {
                    None => true,
                    Some(cur) => c.eof > cur.eof + IMPROVEMENT_TOL,
                };
                if improves {
                    current = Some(c);
                }
            }
        }
        let after = current.map_or(f64::NEG_INFINITY, |p| p.eof);
        if !(after - before > DESCENT_TOL) {
            break;
        }
    }
    current
}

/// Settings that maximise the output EOF.
///
/// Returns the identity point when no setting beats the input.
pub fn optimize_eof(rho: &DensityMatrix, mode: SearchMode) -> Result<SweepPoint> {
    let identity = evaluate(rho, BeamSplitterSettings::identity(), 1.0)?;
    let found = search(rho, mode, &|_| true);
    Ok(match found {
        Some(p) if p.eof > identity.eof + IMPROVEMENT_TOL => p,
        _ => identity,
    })
}

/// Looks for settings that raise EOF while lowering entropy.
///
/// If none exist, the report falls back to the [`optimize_eof`] optimum and
/// classifies it against the input.
pub fn find_concentration(rho: &DensityMatrix, mode: SearchMode) -> Result<ConcentrationReport> {
    let initial = metrics(rho);
    let s0 = initial.entropy;
    let restricted = search(rho, mode, &|p| p.entropy < s0 - IMPROVEMENT_TOL);
    if let Some(best) = restricted {
        if best.eof > initial.eof + IMPROVEMENT_TOL {
            let classification = classify(&initial, best.eof, best.entropy);
            debug_assert_eq!(classification, Classification::Concentration);
            return Ok(ConcentrationReport {
                initial,
                best,
                classification,
                achievable: true,
            });
        }
    }
    let best = optimize_eof(rho, mode)?;
    let classification = classify(&initial, best.eof, best.entropy);
    Ok(ConcentrationReport {
        initial,
        best,
        achievable: classification == Classification::Concentration,
        classification,
    })
}

#[derive(Serialize)]
struct CsvRow {
    eta_v: f64,
    entropy: f64,
    eof: f64,
    probability: f64,
}

/// Writes `eta_v,entropy,eof,probability` rows with round-trip precision.
pub fn write_csv<W: Write>(points: &[SweepPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in points {
        w.serialize(CsvRow {
            eta_v: p.eta_v,
            entropy: p.entropy,
            eof: p.eof,
            probability: p.probability,
        })?;
    }
    if points.is_empty() {
        w.write_record(["eta_v", "entropy", "eof", "probability"])?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{pure_vv_hh, Bell};

    fn family(e1: f64, e2: f64, gamma: f64) -> StateFamilyParams {
        StateFamilyParams::real(e1, e2, 0.0, gamma).unwrap()
    }

    fn state(e1: f64, e2: f64, gamma: f64) -> DensityMatrix {
        mixed_family(&family(e1, e2, gamma)).unwrap()
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-8);
        assert!((x - 0.3).abs() < 1e-7);
        assert!(fx > -1e-14);
    }

    #[test]
    fn grid_is_half_open() {
        let g = uniform_grid(4);
        assert_eq!(g, vec![0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn sweep_needs_two_points() {
        assert!(sweep(&family(1.0, 0.1, 0.1), 1).is_err());
        assert_eq!(sweep(&family(1.0, 0.1, 0.1), 2).unwrap().points.len(), 2);
    }

    #[test]
    fn gamma_point_one_curve() {
        let curve = sweep(&family(1.0, 0.1, 0.1), DEFAULT_GRID_POINTS).unwrap();
        assert!(curve.skipped.is_empty());
        let start = curve.points.last().unwrap();
        assert_eq!(start.eta_v, 1.0);
        assert!((start.entropy - 0.23).abs() < 0.01);
        assert!((start.eof - 0.84).abs() < 0.01);
        let top = turning_point(&curve.points).unwrap();
        assert!((top.entropy - 0.075).abs() < 0.01);
        assert!((top.eof - 0.94).abs() < 0.01);
        assert!((top.eta_v - 0.32).abs() < 0.02);
        assert!(top.eof >= start.eof);
    }

    #[test]
    fn bell_curve_is_pure_and_peaks_at_one() {
        let curve = sweep(&family(1.0, 1.0, 1.0), 128).unwrap();
        for p in &curve.points {
            assert!(p.entropy < 1e-9);
        }
        // filtering only lowers a Bell state's entanglement
        for w in curve.points.windows(2) {
            assert!(w[1].eof >= w[0].eof - 1e-12);
        }
        let top = turning_point(&curve.points).unwrap();
        assert_eq!(top.eta_v, 1.0);
        assert!((top.eof - 1.0).abs() < 1e-10);
    }

    #[test]
    fn turning_point_tie_break() {
        let s = BeamSplitterSettings::identity();
        let p = |eta_v, entropy, eof| SweepPoint {
            eta_v,
            settings: s,
            entropy,
            eof,
            probability: 1.0,
        };
        let flat = [p(0.2, 0.0, 1.0), p(0.5, 0.0, 1.0), p(1.0, 0.0, 1.0)];
        assert_eq!(turning_point(&flat).unwrap().eta_v, 1.0);
        let by_entropy = [p(0.2, 0.1, 1.0), p(0.5, 0.05, 1.0), p(1.0, 0.2, 1.0)];
        assert_eq!(turning_point(&by_entropy).unwrap().eta_v, 0.5);
        assert!(turning_point(&flat[..2]).is_err());
        assert!(turning_point(&[]).is_err());
    }

    #[test]
    fn turning_point_matches_optimizer() {
        let rho = state(1.0, 0.1, 0.3);
        let curve = sweep_state(&rho, DEFAULT_GRID_POINTS).unwrap();
        let top = turning_point(&curve.points).unwrap();
        let opt = optimize_eof(&rho, SearchMode::OneKnob).unwrap();
        assert!((top.eta_v - opt.eta_v).abs() <= 1.0 / DEFAULT_GRID_POINTS as f64);
        assert!(opt.eof >= top.eof - 1e-12);
        assert!((opt.eta_v - 0.1f64.sqrt()).abs() < 1e-3);
        assert!((opt.eof - 0.78).abs() < 0.01);
    }

    #[test]
    fn optimize_bell_keeps_identity() {
        let rho = DensityMatrix::bell(Bell::PhiPlus);
        for mode in [SearchMode::OneKnob, SearchMode::AllFour] {
            let p = optimize_eof(&rho, mode).unwrap();
            assert_eq!(p.settings, BeamSplitterSettings::identity());
            assert!((p.eof - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn optimize_pure_state_recovers_balance_condition() {
        let rho = pure_vv_hh(&StateFamilyParams::pure(1.0, 0.1, 0.0).unwrap()).unwrap();
        let expect = 0.1f64.sqrt();
        let p = optimize_eof(&rho, SearchMode::OneKnob).unwrap();
        assert!((p.eta_v - expect).abs() < 2e-3);
        assert!((p.eof - 1.0).abs() < 1e-6);

        let q = optimize_eof(&rho, SearchMode::AllFour).unwrap();
        let s = q.settings;
        // only the ratio η_v²/η_h² per arm matters: |ε₁|η_va η_vb = |ε₂|η_ha η_hb
        assert!((s.eta_va * s.eta_vb / (s.eta_ha * s.eta_hb) - 0.1).abs() < 4e-3);
        assert!((q.eof - 1.0).abs() < 1e-6);
    }

    #[test]
    fn concentration_below_critical_mixing() {
        let r = find_concentration(&state(1.0, 0.1, 0.1), SearchMode::OneKnob).unwrap();
        assert!(r.achievable);
        assert_eq!(r.classification, Classification::Concentration);
        assert!(r.best.eof > r.initial.eof && r.best.entropy < r.initial.entropy);
    }

    #[test]
    fn heavy_mixing_only_distills() {
        let r = find_concentration(&state(1.0, 0.1, 0.7), SearchMode::OneKnob).unwrap();
        assert!(!r.achievable);
        assert_eq!(r.classification, Classification::Distillation);
        assert!(r.best.eof > r.initial.eof);
        assert!(r.best.entropy >= r.initial.entropy);
    }

    #[test]
    fn maximally_mixed_has_nothing_to_gain() {
        for mode in [SearchMode::OneKnob, SearchMode::AllFour] {
            let r = find_concentration(&DensityMatrix::maximally_mixed(), mode).unwrap();
            assert!(!r.achievable);
            assert_eq!(r.classification, Classification::None);
            assert_eq!(r.best.settings, BeamSplitterSettings::identity());
        }
    }

    #[test]
    fn all_four_never_worse_than_one_knob() {
        for gamma in [0.3, 0.6, 0.8] {
            let rho = state(1.0, 0.1, gamma);
            let a = optimize_eof(&rho, SearchMode::OneKnob).unwrap();
            let b = optimize_eof(&rho, SearchMode::AllFour).unwrap();
            assert!(
                b.eof >= a.eof - 1e-9,
                "gamma {gamma}: {} < {}",
                b.eof,
                a.eof
            );
        }
    }

    #[test]
    fn classification_rules() {
        let m = EntanglementMetrics {
            concurrence: 0.5,
            eof: 0.4,
            entropy: 0.3,
            purity: 0.7,
        };
        assert_eq!(classify(&m, 0.5, 0.2), Classification::Concentration);
        assert_eq!(classify(&m, 0.5, 0.3), Classification::Distillation);
        assert_eq!(classify(&m, 0.5, 0.4), Classification::Distillation);
        assert_eq!(classify(&m, 0.4, 0.2), Classification::Purification);
        assert_eq!(classify(&m, 0.3, 0.2), Classification::Purification);
        assert_eq!(classify(&m, 0.3, 0.3), Classification::Degradation);
        assert_eq!(classify(&m, 0.4, 0.3), Classification::None);
        assert_eq!(classify(&m, 0.4 + 1e-13, 0.3 - 1e-13), Classification::None);
    }

    #[test]
    fn report_invariant_holds_across_family() {
        for k in 0..=10 {
            let gamma = k as f64 / 10.0;
            let r = find_concentration(&state(1.0, 0.1, gamma), SearchMode::OneKnob).unwrap();
            if r.classification == Classification::Concentration {
                assert!(r.best.eof > r.initial.eof && r.best.entropy < r.initial.entropy);
            }
            assert_eq!(
                r.achievable,
                r.classification == Classification::Concentration
            );
        }
    }

    #[test]
    fn pure_family_sweeps_stay_pure() {
        for e2 in [0.1, 0.5, 2.0] {
            let curve = sweep(&family(1.0, e2, 1.0), 64).unwrap();
            assert!(curve.points.iter().all(|p| p.entropy < 1e-9));
        }
    }

    #[test]
    fn sweep_curves_have_no_jumps() {
        for gamma in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let pts = sweep(&family(1.0, 0.1, gamma), DEFAULT_GRID_POINTS)
                .unwrap()
                .points;
            let step = |a: &SweepPoint, b: &SweepPoint| {
                ((a.eof - b.eof).powi(2) + (a.entropy - b.entropy).powi(2)).sqrt()
            };
            let d: Vec<f64> = pts.windows(2).map(|w| step(&w[0], &w[1])).collect();
            for i in 1..d.len() - 1 {
                let local = d[i - 1].max(d[i + 1]);
                assert!(d[i] <= 10.0 * local + 1e-9, "gamma {gamma} jump at {i}");
            }
        }
    }

    #[test]
    fn csv_layout() {
        let curve = sweep(&family(1.0, 0.1, 0.1), 4).unwrap();
        let mut buf = Vec::new();
        write_csv(&curve.points, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("eta_v,entropy,eof,probability"));
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), 4);
        let last: Vec<f64> = rows[3].split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(last[0], 1.0);
        assert_eq!(last[2], curve.points[3].eof);

        let mut empty = Vec::new();
        write_csv(&[], &mut empty).unwrap();
        assert_eq!(
            String::from_utf8(empty).unwrap().trim(),
            "eta_v,entropy,eof,probability"
        );
    }
}
