//! Entanglement and purity measures for two-qubit states.
//!
//! Concurrence follows Wootters: the `λ̃ᵢ` are the square roots of the
//! eigenvalues of `ρρ̃`. The same numbers are the singular values of
//! `M = √ρ·√ρ̃`, since `MM† = √ρ ρ̃ √ρ` is Hermitian and similar to `ρρ̃`.
//! We read them off the Hermitian embedding `[[0, M], [M†, 0]]`, whose
//! eigenvalues are `±λ̃ᵢ`. Working with singular values directly keeps
//! rank-deficient states accurate to round-off instead of to its square root.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;
use crate::tolerances::{BINARY_ENTROPY_DOMAIN_TOL, X_STATE_TOL};

/// `(C, E, S, tr ρ²)` for one state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntanglementMetrics {
    pub concurrence: f64,
    /// Entanglement of formation in ebits.
    pub eof: f64,
    /// Von Neumann entropy with log base 4, so `I/4` has entropy 1.
    pub entropy: f64,
    pub purity: f64,
}

/// `σ_y ⊗ σ_y` in the `(VV, VH, HV, HH)` basis. It is real.
fn sigma_yy() -> ComplexMatrix {
    ComplexMatrix::from_real_rows([
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ])
}

/// `ρ̃ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
pub fn spin_flip(rho: &DensityMatrix) -> ComplexMatrix {
    flip(rho.matrix())
}

fn flip(m: &ComplexMatrix) -> ComplexMatrix {
    let y = sigma_yy();
    &(&y * &m.conj()) * &y
}

/// The four `λ̃ᵢ` in descending order.
pub fn spin_flip_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let sqrt_rho = rho.matrix().psd_sqrt()?;
    // √(ρ̃) = Y (√ρ)* Y because Y is real, symmetric and unitary.
    let sqrt_flip = flip(&sqrt_rho);
    let m = &sqrt_rho * &sqrt_flip;
    let md = m.adjoint();
    let zero = num_complex::Complex64::new(0.0, 0.0);
    let embed = ComplexMatrix::from_fn(8, |i, j| match (i < 4, j < 4) {
        (true, false) => m[(i, j - 4)],
        (false, true) => md[(i - 4, j)],
        _ => zero,
    });
    let eig = embed.hermitian_eig()?;
    let mut lam = [0.0; 4];
    for (l, v) in lam.iter_mut().zip(&eig.values) {
        *l = v.abs();
    }
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok(lam)
}

/// Wootters concurrence `max(λ̃₁ - λ̃₂ - λ̃₃ - λ̃₄, 0)`, clipped to `[0, 1]`.
pub fn concurrence(rho: &DensityMatrix) -> f64 {
    let lam = spin_flip_spectrum(rho).expect("validated density matrix is Hermitian PSD");
    (lam[0] - lam[1] - lam[2] - lam[3]).clamp(0.0, 1.0)
}

/// Closed-form concurrence for X-states:
/// `2·max(0, |ρ₂₃| - √(ρ₁₁ρ₄₄), |ρ₁₄| - √(ρ₂₂ρ₃₃))`.
///
/// Used as an independent check of [`concurrence`].
pub fn x_state_concurrence_oracle(rho: &DensityMatrix) -> Result<f64> {
    let mut max_off: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                max_off = max_off.max(rho.get(i, j).norm());
            }
        }
    }
    if max_off > X_STATE_TOL {
        return Err(Error::NotXState { max_off });
    }
    let d = |i: usize| rho.get(i, i).re.max(0.0);
    let a = rho.get(1, 2).norm() - (d(0) * d(3)).sqrt();
    let b = rho.get(0, 3).norm() - (d(1) * d(2)).sqrt();
    Ok(2.0 * a.max(b).max(0.0))
}

/// Binary entropy in bits; `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    let tol = BINARY_ENTROPY_DOMAIN_TOL;
    if !(x >= -tol && x <= 1.0 + tol) {
        return Err(Error::Domain {
            value: x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(x) + term(1.0 - x))
}

/// Entanglement of formation as a function of concurrence.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    let x = 0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt());
    binary_entropy(x).expect("argument lies in [1/2, 1]")
}

/// Entanglement of formation `h((1 + √(1 - C²))/2)`.
pub fn eof(rho: &DensityMatrix) -> f64 {
    eof_from_concurrence(concurrence(rho))
}

/// `-Σ λᵢ log₄ λᵢ` over the eigenvalues of `ρ`; negative round-off is clamped.
pub fn entropy_log4(rho: &DensityMatrix) -> f64 {
    let eig = rho
        .matrix()
        .hermitian_eig()
        .expect("validated density matrix is Hermitian");
    let nats: f64 = eig
        .values
        .iter()
        .map(|&l| l.max(0.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum();
    (nats / 4f64.ln()).clamp(0.0, 1.0)
}

pub fn metrics(rho: &DensityMatrix) -> EntanglementMetrics {
    let concurrence = concurrence(rho);
    EntanglementMetrics {
        concurrence,
        eof: eof_from_concurrence(concurrence),
        entropy: entropy_log4(rho),
        purity: rho.purity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{mixed_family, pure_vv_hh, werner, Bell, StateFamilyParams};
    use crate::test_util::{random_density, random_unitary, rng};
    use proptest::prelude::*;

    fn bells() -> Vec<DensityMatrix> {
        [Bell::PhiPlus, Bell::PhiMinus, Bell::PsiPlus, Bell::PsiMinus]
            .into_iter()
            .map(DensityMatrix::bell)
            .collect()
    }

    fn worked_input() -> DensityMatrix {
        mixed_family(&StateFamilyParams::real(1.0, 0.1, 0.0, 0.3).unwrap()).unwrap()
    }

    fn printed_output() -> DensityMatrix {
        DensityMatrix::new(ComplexMatrix::from_real_rows([
            [0.039, 0.0, 0.0, 0.039],
            [0.0, 0.461, 0.461, 0.0],
            [0.0, 0.461, 0.461, 0.0],
            [0.039, 0.0, 0.0, 0.039],
        ]))
        .unwrap()
    }

    #[test]
    fn spin_flip_examples() {
        let phi = DensityMatrix::bell(Bell::PhiPlus);
        assert!(spin_flip(&phi).max_abs_diff(phi.matrix()) < 1e-15);

        let vv = pure_vv_hh(&StateFamilyParams::pure(1.0, 0.0, 0.0).unwrap()).unwrap();
        let hh = ComplexMatrix::from_diag(&[0.0, 0.0, 0.0, 1.0]);
        assert!(spin_flip(&vv).max_abs_diff(&hh) < 1e-15);

        let mixed = DensityMatrix::maximally_mixed();
        assert!(spin_flip(&mixed).max_abs_diff(mixed.matrix()) < 1e-15);
    }

    #[test]
    fn spin_flip_keeps_density_properties() {
        let mut r = rng(21);
        for _ in 0..50 {
            let rho = random_density(&mut r);
            assert!(DensityMatrix::new(spin_flip(&rho)).is_ok());
        }
    }

    #[test]
    fn concurrence_extremes() {
        for b in bells() {
            assert!((concurrence(&b) - 1.0).abs() < 1e-12);
            assert!((eof(&b) - 1.0).abs() < 1e-12);
        }
        let prod = DensityMatrix::new(ComplexMatrix::from_diag(&[0.0, 1.0, 0.0, 0.0])).unwrap();
        assert!(concurrence(&prod) < 1e-12);
        assert_eq!(eof(&prod), 0.0);
        assert_eq!(concurrence(&DensityMatrix::maximally_mixed()), 0.0);
    }

    #[test]
    fn worked_example_concurrence() {
        // exact: 2(0.35 - 0.3 * 0.1 / 1.01)
        let exact = 2.0 * (0.35 - 0.03 / 1.01);
        let rho = worked_input();
        assert!((concurrence(&rho) - exact).abs() < 1e-10);
        assert!((x_state_concurrence_oracle(&rho).unwrap() - exact).abs() < 1e-14);
        let c = concurrence(&rho);
        assert!((0.63..=0.66).contains(&c));
    }

    #[test]
    fn x_oracle_examples() {
        let phi = DensityMatrix::bell(Bell::PhiPlus);
        assert!((x_state_concurrence_oracle(&phi).unwrap() - 1.0).abs() < 1e-15);

        let out = printed_output();
        assert!((x_state_concurrence_oracle(&out).unwrap() - 0.844).abs() < 1e-12);
        assert!((concurrence(&out) - 0.844).abs() < 1e-8);

        // arithmetic on the printed (rounded) entries of the worked input
        let printed = 2.0 * (0.350 - (0.297f64 * 0.003).sqrt());
        assert!((printed - 0.640).abs() < 1e-3);
        // the rounded matrix is slightly non-PSD, so the oracle runs on the exact one
        let c = x_state_concurrence_oracle(&worked_input()).unwrap();
        assert!((c - printed).abs() < 2e-3);
    }

    #[test]
    fn x_oracle_rejects_general_states() {
        let mut r = rng(2);
        let rho = random_density(&mut r);
        assert!(matches!(
            x_state_concurrence_oracle(&rho),
            Err(Error::NotXState { .. })
        ));
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.7683).unwrap() - 0.781).abs() < 1e-3);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.01).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
        assert!(binary_entropy(1.0 + 1e-13).is_ok());
    }

    #[test]
    fn eof_reference_values() {
        assert!((eof(&worked_input()) - 0.52).abs() < 0.01);
        assert!((eof(&printed_output()) - 0.78).abs() < 0.01);
    }

    #[test]
    fn entropy_values() {
        for b in bells() {
            assert!(entropy_log4(&b) < 1e-10);
        }
        assert!((entropy_log4(&DensityMatrix::maximally_mixed()) - 1.0).abs() < 1e-12);
        assert!((entropy_log4(&printed_output()) - 0.20).abs() < 0.01);
        // the worked input has spectrum (0.7, 0.3, 0, 0)
        let h = binary_entropy(0.3).unwrap() / 2.0;
        assert!((entropy_log4(&worked_input()) - h).abs() < 1e-12);
    }

    #[test]
    fn metrics_bundle() {
        let m = metrics(&DensityMatrix::bell(Bell::PsiMinus));
        assert!((m.concurrence - 1.0).abs() < 1e-12);
        assert!((m.eof - 1.0).abs() < 1e-12);
        assert!(m.entropy < 1e-10);
        assert!((m.purity - 1.0).abs() < 1e-12);

        let m = metrics(&DensityMatrix::maximally_mixed());
        assert_eq!((m.concurrence, m.eof), (0.0, 0.0));
        assert!((m.entropy - 1.0).abs() < 1e-12);
        assert!((m.purity - 0.25).abs() < 1e-15);

        let m = metrics(&worked_input());
        assert!((0.63..=0.66).contains(&m.concurrence));
        assert!((m.eof - 0.52).abs() < 0.01);
        assert!((m.purity - 0.58).abs() < 1e-12); // 0.7² + 0.3²
    }

    #[test]
    fn werner_concurrence() {
        let w = werner(0.5, &DensityMatrix::bell(Bell::PhiPlus)).unwrap();
        assert!((concurrence(&w) - 0.25).abs() < 1e-10);
        let w = werner(0.0, &DensityMatrix::bell(Bell::PhiPlus)).unwrap();
        assert_eq!(concurrence(&w), 0.0);
    }

    #[test]
    fn pure_concurrence_closed_form() {
        let mut r = rng(99);
        use rand::Rng;
        for _ in 0..200 {
            let (e1, e2, phi): (f64, f64, f64) = (r.gen(), r.gen(), r.gen_range(-3.0..3.0));
            let p = StateFamilyParams::pure(e1, e2, phi).unwrap();
            let rho = pure_vv_hh(&p).unwrap();
            let expect = 2.0 * p.norm_sq() * e1 * e2;
            assert!((concurrence(&rho) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn rank_deficient_entropy_is_finite() {
        let rho = DensityMatrix::new(ComplexMatrix::from_diag(&[0.5, 0.5, 0.0, 0.0])).unwrap();
        assert!((entropy_log4(&rho) - 0.5).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn local_unitary_invariance(seed in any::<u64>()) {
            let mut r = rng(seed);
            let rho = random_density(&mut r);
            let u = random_unitary(&mut r, 2).kron(&random_unitary(&mut r, 2));
            let rotated = DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint()).unwrap();
            prop_assert!((concurrence(&rho) - concurrence(&rotated)).abs() < 1e-8);
            prop_assert!((eof(&rho) - eof(&rotated)).abs() < 1e-8);
        }

        #[test]
        fn global_unitary_entropy_invariance(seed in any::<u64>()) {
            let mut r = rng(seed);
            let rho = random_density(&mut r);
            let u = random_unitary(&mut r, 4);
            let rotated = DensityMatrix::new(&(&u * rho.matrix()) * &u.adjoint()).unwrap();
            prop_assert!((entropy_log4(&rho) - entropy_log4(&rotated)).abs() < 1e-8);
        }

        #[test]
        fn metrics_ranges(seed in any::<u64>()) {
            let m = metrics(&random_density(&mut rng(seed)));
            prop_assert!((0.0..=1.0).contains(&m.concurrence));
            prop_assert!((0.0..=1.0).contains(&m.eof));
            prop_assert!((0.0..=1.0).contains(&m.entropy));
            prop_assert!(m.purity >= 0.25 - 1e-9 && m.purity <= 1.0 + 1e-9);
            if m.concurrence == 0.0 {
                prop_assert_eq!(m.eof, 0.0);
            }
            if m.eof == 0.0 {
                prop_assert!(m.concurrence < 1e-6);
            }
        }
    }
}
