#![allow(dead_code)]

use bsconc::{Complex64, ComplexMatrix, DensityMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gauss(r: &mut StdRng) -> f64 {
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_matrix(r: &mut StdRng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| Complex64::new(gauss(r), gauss(r)))
}

/// Ginibre-distributed full-rank state.
pub fn random_density(r: &mut StdRng) -> DensityMatrix {
    let a = random_matrix(r, 4);
    let p = &a * &a.adjoint();
    let t = p.trace().re;
    DensityMatrix::new(p.scale(1.0 / t)).unwrap()
}

/// Random X-state: arbitrary diagonal, coherences within the positivity bound.
pub fn random_x_state(r: &mut StdRng) -> DensityMatrix {
    let mut d: [f64; 4] = [r.gen(), r.gen(), r.gen(), r.gen()];
    let s: f64 = d.iter().sum();
    d.iter_mut().for_each(|x| *x /= s);
    let c14 = Complex64::from_polar(
        r.gen::<f64>() * (d[0] * d[3]).sqrt(),
        r.gen_range(-3.2..3.2),
    );
    let c23 = Complex64::from_polar(
        r.gen::<f64>() * (d[1] * d[2]).sqrt(),
        r.gen_range(-3.2..3.2),
    );
    let mut m = ComplexMatrix::from_diag(&d);
    m[(0, 3)] = c14;
    m[(3, 0)] = c14.conj();
    m[(1, 2)] = c23;
    m[(2, 1)] = c23.conj();
    DensityMatrix::new(m).unwrap()
}

pub fn random_unitary(r: &mut StdRng, dim: usize) -> ComplexMatrix {
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
