use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::linalg::ComplexMatrix;
use crate::states::DensityMatrix;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gauss(r: &mut StdRng) -> f64 {
    // Box-Muller
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_matrix(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| Complex64::new(gauss(r), gauss(r)))
}

pub fn random_hermitian(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(r, dim);
    &a + &a.adjoint()
}

pub fn random_psd(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    let a = random_matrix(r, dim);
    &a * &a.adjoint()
}

pub fn random_density(r: &mut StdRng) -> DensityMatrix {
    let p = random_psd(r, 4);
    let t = p.trace().re;
    DensityMatrix::new(p.scale(1.0 / t)).unwrap()
}

pub fn random_unitary(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    // Gram-Schmidt on a Gaussian matrix, column by column.
    let a = random_matrix(r, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| a[(i, j)]).collect();
        for u in &cols {
            let proj: Complex64 = u.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= proj * ui;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}
