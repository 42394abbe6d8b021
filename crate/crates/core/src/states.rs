//! Two-qubit polarization states.
//!
//! The basis order is fixed to `(VV, VH, HV, HH)`: index 0 is both photons
//! vertical, index 3 both horizontal. The first letter belongs to photon A.
//! Every serialized state carries this order explicitly and parsers refuse
//! anything else.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tolerances::{HERMITIAN_TOL, PSD_TOL, PURITY_TOL, TRACE_TOL};

/// Basis labels in storage order.
pub const BASIS: [&str; 4] = ["VV", "VH", "HV", "HH"];

/// A validated 4×4 density matrix in the `(VV, VH, HV, HH)` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

/// Outcome of checking a 4×4 matrix against the density-matrix invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive_semidefinite: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive_semidefinite
    }

    fn failures(&self) -> Vec<&'static str> {
        let mut f = Vec::new();
        if !self.hermitian {
            f.push("hermiticity");
        }
        if !self.unit_trace {
            f.push("trace");
        }
        if !self.positive_semidefinite {
            f.push("positivity");
        }
        f
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "hermitian   {}  (max |rho - rho^dag| = {:.3e})",
            mark(self.hermitian),
            self.hermiticity_deviation
        )?;
        writeln!(
            f,
            "unit trace  {}  (|tr rho - 1| = {:.3e})",
            mark(self.unit_trace),
            self.trace_deviation
        )?;
        write!(
            f,
            "psd         {}  (min eigenvalue = {:.3e})",
            mark(self.positive_semidefinite),
            self.min_eigenvalue
        )
    }
}

/// Diagnostic check of a 4×4 matrix. Never fails; see [`ValidationReport`].
pub fn validate(mat: &ComplexMatrix) -> ValidationReport {
    let hermiticity_deviation = mat.hermiticity_deviation();
    let trace = mat.trace();
    let trace_deviation = (trace - Complex64::new(1.0, 0.0)).norm();
    // Positivity is judged on the Hermitian part so the report stays total.
    let min_eigenvalue = mat
        .hermitian_part()
        .hermitian_eig()
        .map(|e| e.values.last().copied().unwrap_or(f64::NAN))
        .unwrap_or(f64::NAN);
    ValidationReport {
        hermiticity_deviation,
        trace_deviation,
        min_eigenvalue,
        hermitian: hermiticity_deviation <= HERMITIAN_TOL,
        unit_trace: trace_deviation <= TRACE_TOL,
        positive_semidefinite: min_eigenvalue >= -PSD_TOL,
    }
}

impl DensityMatrix {
    /// Validates `mat` and wraps it. The stored matrix is the exact input.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::Dimension {
                expected: 4,
                got: mat.dim(),
            });
        }
        if mat
            .entries()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let report = validate(&mat);
        if !report.passed() {
            return Err(Error::InvalidState(format!(
                "failed {} check(s)\n{report}",
                report.failures().join(", ")
            )));
        }
        Ok(Self { mat })
    }

    /// Wraps a matrix already known to be a density matrix up to round-off
    /// (Hermitian part taken, trace renormalised).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        let h = mat.hermitian_part();
        let t = h.trace().re;
        Self {
            mat: h.scale(1.0 / t),
        }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) amplitude vector.
    pub fn from_amplitudes(amps: [Complex64; 4]) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq == 0.0 || !norm_sq.is_finite() {
            return Err(Error::InvalidParams("zero-norm state vector".into()));
        }
        let s = norm_sq.sqrt();
        let v: Vec<Complex64> = amps.iter().map(|a| a / s).collect();
        Ok(Self::from_trusted(ComplexMatrix::outer(&v)))
    }

    pub fn maximally_mixed() -> Self {
        Self {
            mat: ComplexMatrix::identity(4).scale(0.25),
        }
    }

    pub fn bell(which: Bell) -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let amps = match which {
            Bell::PhiPlus => [h, z, z, h],
            Bell::PhiMinus => [h, z, z, -h],
            Bell::PsiPlus => [z, h, h, z],
            Bell::PsiMinus => [z, h, -h, z],
        };
        Self::from_amplitudes(amps).expect("Bell amplitudes are normalised")
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.entries().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - PURITY_TOL
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.mat)
    }

    pub fn to_json(&self) -> StateJson {
        StateJson::from(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("state serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let js: StateJson = serde_json::from_str(s)?;
        js.into_density()
    }
}

/// The four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bell {
    /// `(|VV⟩ + |HH⟩)/√2`
    PhiPlus,
    /// `(|VV⟩ - |HH⟩)/√2`
    PhiMinus,
    /// `(|VH⟩ + |HV⟩)/√2`
    PsiPlus,
    /// `(|VH⟩ - |HV⟩)/√2`
    PsiMinus,
}

impl FromStr for Bell {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "phi+" => Ok(Bell::PhiPlus),
            "phi-" => Ok(Bell::PhiMinus),
            "psi+" => Ok(Bell::PsiPlus),
            "psi-" => Ok(Bell::PsiMinus),
            other => Err(Error::InvalidParams(format!(
                "unknown Bell state `{other}` (expected phi+, phi-, psi+ or psi-)"
            ))),
        }
    }
}

/// Parameters of the pure, mixed and Werner families.
///
/// `eps1` and `eps2` may be complex. The relative phase `phi` is folded onto
/// the second amplitude, so the pure state is `eps1|VV⟩ + eps2·e^{iφ}|HH⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateFamilyParams {
    pub eps1: Complex64,
    pub eps2: Complex64,
    pub phi: f64,
    pub gamma: f64,
    pub werner_fraction: f64,
}

impl StateFamilyParams {
    pub fn new(eps1: Complex64, eps2: Complex64, phi: f64, gamma: f64) -> Result<Self> {
        let p = Self {
            eps1,
            eps2,
            phi,
            gamma,
            werner_fraction: 1.0,
        };
        p.check()?;
        Ok(p)
    }

    /// Real amplitudes, the common case.
    pub fn real(eps1: f64, eps2: f64, phi: f64, gamma: f64) -> Result<Self> {
        Self::new(eps1.into(), eps2.into(), phi, gamma)
    }

    /// Pure-state parameters (`gamma = 1`).
    pub fn pure(eps1: f64, eps2: f64, phi: f64) -> Result<Self> {
        Self::real(eps1, eps2, phi, 1.0)
    }

    pub fn with_werner_fraction(mut self, fraction: f64) -> Result<Self> {
        self.werner_fraction = fraction;
        self.check()?;
        Ok(self)
    }

    pub fn check(&self) -> Result<()> {
        let finite = |z: Complex64| z.re.is_finite() && z.im.is_finite();
        if !finite(self.eps1) || !finite(self.eps2) || !self.phi.is_finite() {
            return Err(Error::InvalidParams("non-finite amplitude or phase".into()));
        }
        if self.eps1.norm_sqr() + self.eps2.norm_sqr() == 0.0 {
            return Err(Error::InvalidParams("eps1 and eps2 are both zero".into()));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::InvalidParams(format!(
                "gamma = {} not in [0, 1]",
                self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.werner_fraction) {
            return Err(Error::InvalidParams(format!(
                "werner fraction = {} not in [0, 1]",
                self.werner_fraction
            )));
        }
        Ok(())
    }

    /// The second amplitude with the relative phase applied.
    pub fn eps2_phased(&self) -> Complex64 {
        self.eps2 * Complex64::from_polar(1.0, self.phi)
    }

    /// `𝒩₁² = 1 / (|ε₁|² + |ε₂|²)`.
    pub fn norm_sq(&self) -> f64 {
        1.0 / (self.eps1.norm_sqr() + self.eps2.norm_sqr())
    }
}

/// `𝒩₁(ε₁|VV⟩ + ε₂e^{iφ}|HH⟩)`.
pub fn pure_vv_hh(params: &StateFamilyParams) -> Result<DensityMatrix> {
    params.check()?;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::from_amplitudes([params.eps1, z, z, params.eps2_phased()])
}

/// `𝒩₁(ε₁|VH⟩ + ε₂e^{iφ}|HV⟩)`.
pub fn pure_vh_hv(params: &StateFamilyParams) -> Result<DensityMatrix> {
    params.check()?;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::from_amplitudes([z, params.eps1, params.eps2_phased(), z])
}

/// `γ·|φ_VVHH⟩⟨φ_VVHH| + (1-γ)·|Ψ⁺⟩⟨Ψ⁺|`: a non-maximally entangled
/// `VV/HH` state mixed with the `VH/HV` Bell state.
pub fn mixed_family(params: &StateFamilyParams) -> Result<DensityMatrix> {
    let pure = pure_vv_hh(params)?;
    let gamma = params.gamma;
    let half = 0.5 * (1.0 - gamma);
    let mat = pure.matrix().map(|i, j, z| {
        let middle = if (1..=2).contains(&i) && (1..=2).contains(&j) {
            half
        } else {
            0.0
        };
        z * gamma + middle
    });
    Ok(DensityMatrix::from_trusted(mat))
}

/// `fraction·pure + (1 - fraction)·I/4`.
///
/// `pure` must be rank one; mixing a mixed state with the identity is not a
/// Werner state.
pub fn werner(fraction: f64, pure: &DensityMatrix) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParams(format!(
            "werner fraction = {fraction} not in [0, 1]"
        )));
    }
    let purity = pure.purity();
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::InvalidState(format!(
            "werner constructor needs a pure state, got purity {purity}"
        )));
    }
    let noise = 0.25 * (1.0 - fraction);
    let mat = pure
        .matrix()
        .map(|i, j, z| z * fraction + if i == j { noise } else { 0.0 });
    Ok(DensityMatrix::from_trusted(mat))
}

/// On-disk JSON form of a state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub basis: Vec<String>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        let rows = |f: fn(Complex64) -> f64| -> Vec<Vec<f64>> {
            (0..4)
                .map(|i| (0..4).map(|j| f(rho.get(i, j))).collect())
                .collect()
        };
        Self {
            basis: BASIS.iter().map(|s| s.to_string()).collect(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }
}

impl StateJson {
    pub fn into_density(self) -> Result<DensityMatrix> {
        if self.basis.len() != 4 || self.basis.iter().zip(BASIS).any(|(a, b)| a != b) {
            return Err(Error::Format(format!(
                "basis must be {:?}, got {:?}",
                BASIS, self.basis
            )));
        }
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == 4 && m.iter().all(|r| r.len() == 4);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(Error::Format("`re` and `im` must both be 4x4".into()));
        }
        let mat = ComplexMatrix::from_fn(4, |i, j| Complex64::new(self.re[i][j], self.im[i][j]));
        DensityMatrix::new(mat)
    }
}
