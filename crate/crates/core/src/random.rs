//! Random matrices and states for experiments and tests.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// GUE-like Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let g = CMatrix::from_fn(dim, |_, _| gaussian_complex(rng));
    g.hermitian_part()
}

/// Haar-distributed unitary (Gram-Schmidt on a Ginibre matrix, columns).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let overlap: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, ci) in v.iter_mut().zip(c) {
                    *x -= overlap * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Haar-random normalized state vector.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Random density matrix `G G† / Tr[G G†]` with `G` a `dim x rank` Ginibre
/// matrix. `rank = dim` gives the Hilbert-Schmidt ensemble.
pub fn random_density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> CMatrix {
    let g: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..rank).map(|_| gaussian_complex(rng)).collect())
        .collect();
    let mut m = CMatrix::from_fn(dim, |i, j| {
        g[i].iter().zip(&g[j]).map(|(a, b)| a * b.conj()).sum()
    });
    let tr = m.trace().re;
    m = m.scale(1.0 / tr);
    // exact Hermiticity
    for i in 0..dim {
        m[(i, i)].im = 0.0;
        for j in 0..i {
            let z = m[(j, i)].conj();
            m[(i, j)] = z;
        }
    }
    m
}

/// Random rank-`rank` orthogonal projector.
pub fn random_projector<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> CMatrix {
    let u = random_unitary(rng, dim);
    let mut p = CMatrix::zeros(dim);
    for k in 0..rank {
        for i in 0..dim {
            for j in 0..dim {
                p[(i, j)] += u[(i, k)] * u[(j, k)].conj();
            }
        }
    }
    p
}
