//! Hermitian eigensolver.
//!
//! Householder reduction to a real symmetric tridiagonal matrix followed by
//! implicit QL with Wilkinson-style shifts. Inputs whose Hermitian part has
//! no imaginary component take a purely real path, which is several times
//! cheaper; the largest matrices this crate touches (1024 x 1024 density
//! operators from real amplitudes and real representations) hit that path.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// QL iterations allowed per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 60;

/// Eigen-decomposition `M = V diag(values) V†`, values ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEig {
    /// Column `j` of `vectors`.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        let n = self.vectors.dim();
        (0..n).map(|i| self.vectors[(i, j)]).collect()
    }

    /// Rebuilds `V f(diag) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        CMatrix::from_fn(n, |i, j| {
            (0..n)
                .filter(|&k| fv[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fv[k])
                .sum()
        })
    }
}

trait Scalar:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    const ZERO: Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs2(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn scale(self, s: f64) -> Self;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn abs2(self) -> f64 {
        self * self
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        x
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    #[inline]
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
    #[inline]
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn to_complex(self) -> Complex64 {
        self
    }
}

#[inline]
fn unit_phase<S: Scalar>(x: S) -> S {
    let r = x.abs2().sqrt();
    if r == 0.0 {
        S::from_re(1.0)
    } else {
        x.scale(1.0 / r)
    }
}

struct Tridiagonal<S> {
    diag: Vec<f64>,
    off: Vec<f64>,
    /// Row-major unitary `Q D` with `A = (QD) T (QD)†`, when requested.
    basis: Option<Vec<S>>,
}

/// Reduces the Hermitian matrix `a` (row-major, destroyed) to real symmetric
/// tridiagonal form.
fn tridiagonalize<S: Scalar>(a: &mut [S], n: usize, want_basis: bool) -> Tridiagonal<S> {
    let mut reflectors: Vec<(usize, Vec<S>)> = Vec::new();
    let mut w = vec![S::ZERO; n];
    let mut q = vec![S::ZERO; n];

    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let tail: f64 = (1..m).map(|i| a[(k + 1 + i) * n + k].abs2()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = a[(k + 1) * n + k];
        let xnorm = (tail + x0.abs2()).sqrt();
        let alpha = -unit_phase(x0).scale(xnorm);

        let mut v: Vec<S> = (0..m).map(|i| a[(k + 1 + i) * n + k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.abs2()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z = z.scale(1.0 / vnorm);
        }

        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        for i in 1..m {
            a[(k + 1 + i) * n + k] = S::ZERO;
            a[k * n + k + 1 + i] = S::ZERO;
        }

        // Trailing block B <- H B H with H = I - 2 v v†.
        let off = k + 1;
        let mut c = 0.0;
        for i in 0..m {
            let row = &a[(off + i) * n + off..(off + i) * n + off + m];
            let mut acc = S::ZERO;
            for (b, vj) in row.iter().zip(&v) {
                acc += *b * *vj;
            }
            w[i] = acc;
            c += (v[i].conj() * acc).re();
        }
        for i in 0..m {
            q[i] = w[i].scale(2.0) - v[i].scale(2.0 * c);
        }
        for i in 0..m {
            let (vi, qi) = (v[i], q[i]);
            let row = &mut a[(off + i) * n + off..(off + i) * n + off + m];
            for j in 0..m {
                row[j] -= vi * q[j].conj() + qi * v[j].conj();
            }
        }
        if want_basis {
            reflectors.push((off, v));
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i].re()).collect();
    let raw_off: Vec<S> = (0..n.saturating_sub(1)).map(|i| a[(i + 1) * n + i]).collect();
    let off: Vec<f64> = raw_off.iter().map(|z| z.abs2().sqrt()).collect();

    let basis = want_basis.then(|| {
        let mut qm = vec![S::ZERO; n * n];
        for i in 0..n {
            qm[i * n + i] = S::from_re(1.0);
        }
        // Q <- Q H_k, applied in order so Q = H_0 H_1 ...
        for (start, v) in &reflectors {
            let m = v.len();
            for r in 0..n {
                let row = &mut qm[r * n + start..r * n + start + m];
                let mut t = S::ZERO;
                for (x, vj) in row.iter().zip(v) {
                    t += *x * *vj;
                }
                let t2 = t.scale(2.0);
                for (x, vj) in row.iter_mut().zip(v) {
                    *x -= t2 * vj.conj();
                }
            }
        }
        // Phase fix making the sub-diagonal real and non-negative.
        let mut phases = vec![S::from_re(1.0); n];
        for i in 0..n.saturating_sub(1) {
            phases[i + 1] = phases[i] * unit_phase(raw_off[i]);
        }
        for r in 0..n {
            for (j, ph) in phases.iter().enumerate() {
                qm[r * n + j] = qm[r * n + j] * *ph;
            }
        }
        qm
    });

    Tridiagonal { diag, off, basis }
}

/// Implicit QL on a real symmetric tridiagonal matrix. `zt`, when given, holds
/// eigenvectors as rows (row `i` is the vector for `d[i]`).
fn tridiagonal_ql(d: &mut [f64], sub: &[f64], mut zt: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(sub);
    // Deflate against the matrix scale as well, so exactly-zero diagonal
    // neighbours (common for low-rank inputs) do not stall the sweep.
    let scale = d
        .iter()
        .zip(&e)
        .map(|(a, b)| a.abs() + b.abs())
        .fold(0.0, f64::max);
    let floor = f64::EPSILON * scale;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() + dd == dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    iterations: MAX_QL_ITERATIONS,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = zt.as_deref_mut() {
                    let (lo, hi) = z.split_at_mut((i + 1) * n);
                    let zi = &mut lo[i * n..];
                    let zi1 = &mut hi[..n];
                    for k in 0..n {
                        let f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

fn check_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > tol * scale {
        return Err(Error::NonHermitianInput { defect, tol });
    }
    Ok(())
}

fn solve<S: Scalar>(mut a: Vec<S>, n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    let tri = tridiagonalize(&mut a, n, want_vectors);
    drop(a);
    let mut d = tri.diag;
    let mut zt = want_vectors.then(|| {
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        z
    });
    tridiagonal_ql(&mut d, &tri.off, zt.as_deref_mut())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();

    let vectors = match (tri.basis, zt) {
        (Some(qd), Some(zt)) => {
            let mut v = CMatrix::zeros(n);
            for r in 0..n {
                let qrow = &qd[r * n..(r + 1) * n];
                for (col, &src) in order.iter().enumerate() {
                    let zrow = &zt[src * n..(src + 1) * n];
                    let mut acc = S::ZERO;
                    for (qv, zv) in qrow.iter().zip(zrow) {
                        acc += qv.scale(*zv);
                    }
                    v[(r, col)] = acc.to_complex();
                }
            }
            Some(v)
        }
        _ => None,
    };
    Ok((values, vectors))
}

fn dispatch(m: &CMatrix, herm_tol: f64, want_vectors: bool) -> Result<(Vec<f64>, Option<CMatrix>)> {
    check_hermitian(m, herm_tol)?;
    let n = m.dim();
    let h = m.hermitian_part();
    if h.is_real() {
        let a: Vec<f64> = h.as_slice().iter().map(|z| z.re).collect();
        solve(a, n, want_vectors)
    } else {
        solve(h.as_slice().to_vec(), n, want_vectors)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Fails with `NonHermitianInput` when `|M_ij - conj(M_ji)|` exceeds
/// `herm_tol * max(1, max|M|)` anywhere; the Hermitian part is decomposed.
pub fn hermitian_eig(m: &CMatrix, herm_tol: f64) -> Result<HermitianEig> {
    let (values, vectors) = dispatch(m, herm_tol, true)?;
    Ok(HermitianEig {
        values,
        vectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix, herm_tol: f64) -> Result<Vec<f64>> {
    Ok(dispatch(m, herm_tol, false)?.0)
}
