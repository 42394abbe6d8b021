//! The post-selected beam-splitter map.
//!
//! Every polarization mode of photons A and B meets its own beam splitter with
//! a vacuum in the second input port:
//!
//! ```text
//! |V⟩|0⟩ → η_v|V⟩|0⟩ + √(1 - η_v²)|0⟩|1⟩        (and likewise for H)
//! ```
//!
//! Keeping only coincidences (one photon left on each side) multiplies the
//! basis state `|xy⟩` by `η_xa·η_yb`, so entry `(i, j)` of the density matrix
//! picks up `dᵢ·dⱼ` with `d = (η_va η_vb, η_va η_hb, η_ha η_vb, η_ha η_hb)`.
//! The trace of that unnormalised matrix is the success probability.
//!
//! [`fock_oracle`] recomputes the same map by brute force in the
//! 16-dimensional two-photon mode space and serves as its reference.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::{pure_vh_hv, DensityMatrix, StateFamilyParams};
use crate::tolerances::DEGENERATE_PROBABILITY;

/// Amplitude transmission coefficients of the four beam splitters.
///
/// These are amplitudes: a mode with `η = 0.5` keeps a quarter of its
/// intensity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BeamSplitterSettings {
    pub eta_va: f64,
    pub eta_ha: f64,
    pub eta_vb: f64,
    pub eta_hb: f64,
}

impl BeamSplitterSettings {
    pub fn new(eta_va: f64, eta_ha: f64, eta_vb: f64, eta_hb: f64) -> Result<Self> {
        let s = Self {
            eta_va,
            eta_ha,
            eta_vb,
            eta_hb,
        };
        for (name, v) in s.named() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParams(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(s)
    }

    /// All four beam splitters fully transmitting.
    pub const fn identity() -> Self {
        Self {
            eta_va: 1.0,
            eta_ha: 1.0,
            eta_vb: 1.0,
            eta_hb: 1.0,
        }
    }

    /// Same `η_v` on both arms and same `η_h` on both arms.
    pub fn symmetric(eta_v: f64, eta_h: f64) -> Result<Self> {
        Self::new(eta_v, eta_h, eta_v, eta_h)
    }

    /// Componentwise product: two beam splitters in series.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            eta_va: self.eta_va * other.eta_va,
            eta_ha: self.eta_ha * other.eta_ha,
            eta_vb: self.eta_vb * other.eta_vb,
            eta_hb: self.eta_hb * other.eta_hb,
        }
    }

    /// `η = η_va η_ha η_vb η_hb`.
    pub fn product(&self) -> f64 {
        self.eta_va * self.eta_ha * self.eta_vb * self.eta_hb
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.eta_va, self.eta_ha, self.eta_vb, self.eta_hb]
    }

    pub fn from_array(a: [f64; 4]) -> Result<Self> {
        Self::new(a[0], a[1], a[2], a[3])
    }

    fn named(&self) -> [(&'static str, f64); 4] {
        [
            ("eta_va", self.eta_va),
            ("eta_ha", self.eta_ha),
            ("eta_vb", self.eta_vb),
            ("eta_hb", self.eta_hb),
        ]
    }

    /// Coincidence amplitude for each basis state `(VV, VH, HV, HH)`.
    fn basis_amplitudes(&self) -> [f64; 4] {
        [
            self.eta_va * self.eta_vb,
            self.eta_va * self.eta_hb,
            self.eta_ha * self.eta_vb,
            self.eta_ha * self.eta_hb,
        ]
    }
}

impl Default for BeamSplitterSettings {
    fn default() -> Self {
        Self::identity()
    }
}

impl fmt::Display for BeamSplitterSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "eta_va={:.6} eta_ha={:.6} eta_vb={:.6} eta_hb={:.6}",
            self.eta_va, self.eta_ha, self.eta_vb, self.eta_hb
        )
    }
}

/// Post-selected state and the probability of the coincidence event.
#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub output: DensityMatrix,
    pub success_probability: f64,
}

/// The coincidence-basis matrix before normalisation.
pub fn unnormalized_output(rho: &DensityMatrix, s: &BeamSplitterSettings) -> ComplexMatrix {
    let d = s.basis_amplitudes();
    rho.matrix().map(|i, j, z| z * (d[i] * d[j]))
}

/// Applies the beam splitters and post-selects on coincidences.
pub fn bs_transform(rho: &DensityMatrix, s: &BeamSplitterSettings) -> Result<ProtocolOutcome> {
    normalize(unnormalized_output(rho, s))
}

fn normalize(raw: ComplexMatrix) -> Result<ProtocolOutcome> {
    let p = raw.trace().re;
    if !(p > DEGENERATE_PROBABILITY) {
        return Err(Error::DegeneratePostselection { probability: p });
    }
    Ok(ProtocolOutcome {
        output: DensityMatrix::from_trusted(raw.scale(1.0 / p)),
        success_probability: p.min(1.0),
    })
}

/// Single-photon mode indices: the two transmitted polarizations followed by
/// the two loss modes (second output port of each beam splitter).
const MODE_V: usize = 0;
const MODE_H: usize = 1;
const MODE_LOST_V: usize = 2;
const MODE_LOST_H: usize = 3;

/// 4×4 unitary on one photon's modes `{V, H, lostV, lostH}`.
fn arm_unitary(eta_v: f64, eta_h: f64) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(4);
    for (t, keep, lost) in [(eta_v, MODE_V, MODE_LOST_V), (eta_h, MODE_H, MODE_LOST_H)] {
        let r = (1.0 - t * t).max(0.0).sqrt();
        u[(keep, keep)] = Complex64::new(t, 0.0);
        u[(lost, keep)] = Complex64::new(r, 0.0);
        u[(keep, lost)] = Complex64::new(-r, 0.0);
        u[(lost, lost)] = Complex64::new(t, 0.0);
    }
    u
}

/// Brute-force version of [`bs_transform`].
///
/// Embeds `ρ` in the 16-dimensional space (photon A modes ⊗ photon B modes),
/// applies both arms' beam-splitter unitaries, and projects onto the
/// subspace where each photon is still in a transmitted mode.
pub fn fock_oracle(rho: &DensityMatrix, s: &BeamSplitterSettings) -> Result<ProtocolOutcome> {
    // (VV, VH, HV, HH) index k -> photon A mode k/2, photon B mode k%2
    let coincidence: [usize; 4] = [
        4 * MODE_V + MODE_V,
        4 * MODE_V + MODE_H,
        4 * MODE_H + MODE_V,
        4 * MODE_H + MODE_H,
    ];
    let mut big = ComplexMatrix::zeros(16);
    for (i, &bi) in coincidence.iter().enumerate() {
        for (j, &bj) in coincidence.iter().enumerate() {
            big[(bi, bj)] = rho.get(i, j);
        }
    }
    let u = arm_unitary(s.eta_va, s.eta_ha).kron(&arm_unitary(s.eta_vb, s.eta_hb));
    let evolved = &(&u * &big) * &u.adjoint();
    normalize(evolved.select(&coincidence))
}

/// Settings that turn `ε₁|VV⟩ + ε₂e^{iφ}|HH⟩` into a Bell state.
///
/// The larger polarization amplitude is attenuated on both arms so that
/// `|ε₁| η_v² = |ε₂| η_h²`; the other beam splitters stay open.
pub fn distill_settings_vv_hh(eps1: Complex64, eps2: Complex64) -> Result<BeamSplitterSettings> {
    let (a, b) = nonzero_moduli(eps1, eps2)?;
    if a >= b {
        BeamSplitterSettings::symmetric((b / a).sqrt(), 1.0)
    } else {
        BeamSplitterSettings::symmetric(1.0, (a / b).sqrt())
    }
}

/// Settings that turn `ε₁|VH⟩ + ε₂e^{iφ}|HV⟩` into a Bell state.
///
/// Solves `|ε₁| η_va η_hb = |ε₂| η_vb η_ha` by attenuating exactly one beam
/// splitter. Of the two single-coefficient solutions the one with the larger
/// success probability is returned; on a tie `η_va` (or `η_vb`) wins.
pub fn distill_settings_vh_hv(eps1: Complex64, eps2: Complex64) -> Result<BeamSplitterSettings> {
    let (a, b) = nonzero_moduli(eps1, eps2)?;
    let one = BeamSplitterSettings::identity();
    let candidates = if a >= b {
        let r = b / a;
        [
            BeamSplitterSettings { eta_va: r, ..one },
            BeamSplitterSettings { eta_hb: r, ..one },
        ]
    } else {
        let r = a / b;
        [
            BeamSplitterSettings { eta_vb: r, ..one },
            BeamSplitterSettings { eta_ha: r, ..one },
        ]
    };
    let state = pure_vh_hv(&StateFamilyParams::new(eps1, eps2, 0.0, 1.0)?)?;
    let prob = |s: &BeamSplitterSettings| unnormalized_output(&state, s).trace().re;
    let best = if prob(&candidates[1]) > prob(&candidates[0]) {
        candidates[1]
    } else {
        candidates[0]
    };
    Ok(best)
}

fn nonzero_moduli(eps1: Complex64, eps2: Complex64) -> Result<(f64, f64)> {
    let (a, b) = (eps1.norm(), eps2.norm());
    if a == 0.0 || b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::NoDistillation(format!(
            "|eps1| = {a}, |eps2| = {b}: a product state carries no entanglement to distill"
        )));
    }
    Ok((a, b))
}
