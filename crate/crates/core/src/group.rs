//! Finite groups, unitary representations and exact twirling channels.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distance::trace_distance;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE, ZERO};
use crate::state::Tolerances;

/// Groups up to this order have associativity checked on every triple.
const EXHAUSTIVE_ORDER: usize = 64;

/// A finite group given by its multiplication table (`table[g][h] = g·h`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::ClosureViolation("empty multiplication table".into()));
        }
        for (g, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::ClosureViolation(format!(
                    "row {g} has {} entries, expected {order}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= order) {
                return Err(Error::ClosureViolation(format!(
                    "row {g} contains out-of-range element {bad}"
                )));
            }
        }
        let flat: Vec<usize> = table.concat();
        let mul = |g: usize, h: usize| flat[g * order + h];

        let identity = (0..order)
            .find(|&e| (0..order).all(|g| mul(e, g) == g && mul(g, e) == g))
            .ok_or_else(|| Error::ClosureViolation("no two-sided identity element".into()))?;

        let mut inverse = Vec::with_capacity(order);
        for g in 0..order {
            let inv = (0..order)
                .find(|&h| mul(g, h) == identity && mul(h, g) == identity)
                .ok_or_else(|| Error::ClosureViolation(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }

        let assoc = |g: usize, h: usize, k: usize| mul(mul(g, h), k) == mul(g, mul(h, k));
        if order <= EXHAUSTIVE_ORDER {
            for g in 0..order {
                for h in 0..order {
                    for k in 0..order {
                        if !assoc(g, h, k) {
                            return Err(Error::ClosureViolation(format!(
                                "associativity fails on ({g}, {h}, {k})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
            for _ in 0..10 * order * order {
                let (g, h, k) = (
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                    rng.random_range(0..order),
                );
                if !assoc(g, h, k) {
                    return Err(Error::ClosureViolation(format!(
                        "associativity fails on ({g}, {h}, {k})"
                    )));
                }
            }
        }

        Ok(Self {
            order,
            table: flat,
            identity,
            inverse,
        })
    }

    /// `Z_d` with `g·h = (g + h) mod d`.
    pub fn cyclic(d: usize) -> Self {
        Self {
            order: d,
            table: (0..d * d).map(|i| (i / d + i % d) % d).collect(),
            identity: 0,
            inverse: (0..d).map(|g| (d - g) % d).collect(),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order + h]
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }
}

/// A finite group with a verified unitary representation `g ↦ U_g`.
#[derive(Debug, Clone)]
pub struct GroupRep {
    group: FiniteGroup,
    dim: usize,
    unitaries: Vec<CMatrix>,
    /// Diagonals of `U_g` when every `U_g` is diagonal.
    diagonals: Option<Vec<Vec<Complex64>>>,
}

/// `exp(2πi k / d)`, exact at quarter turns.
fn root_of_unity(k: i64, d: usize) -> Complex64 {
    let d = d as i64;
    let k = k.rem_euclid(d);
    if (4 * k) % d == 0 {
        return match 4 * k / d {
            0 => ONE,
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / d as f64)
}

impl GroupRep {
    /// `Z_d` acting as `U_g = diag(exp(2πi q_j g / d))` on `C^{charges.len()}`.
    pub fn cyclic(d: usize, charges: &[i64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!("cyclic order {d} < 2")));
        }
        if charges.is_empty() {
            return Err(Error::InvalidParameter("empty charge list".into()));
        }
        let diagonals: Vec<Vec<Complex64>> = (0..d)
            .map(|g| charges.iter().map(|&q| root_of_unity(q * g as i64, d)).collect())
            .collect();
        let unitaries = diagonals.iter().map(|diag| CMatrix::from_diag(diag)).collect();
        Ok(Self {
            group: FiniteGroup::cyclic(d),
            dim: charges.len(),
            unitaries,
            diagonals: Some(diagonals),
        })
    }

    /// Validates a user-supplied table and matrices. Rejects projective
    /// representations (`U_g U_h = c U_{gh}` with a phase `c ≠ 1`).
    pub fn explicit(table: Vec<Vec<usize>>, unitaries: Vec<CMatrix>, tol: &Tolerances) -> Result<Self> {
        if table.len() != unitaries.len() {
            return Err(Error::ClosureViolation(format!(
                "table has {} elements but {} matrices were given",
                table.len(),
                unitaries.len()
            )));
        }
        let group = FiniteGroup::new(table)?;
        let dim = unitaries[0].dim();
        for u in &unitaries {
            if u.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: u.dim(),
                });
            }
        }
        let id = CMatrix::identity(dim);
        for (g, u) in unitaries.iter().enumerate() {
            let defect = u.adjoint().matmul(u).max_abs_diff(&id);
            if defect > tol.eig * dim as f64 {
                return Err(Error::NonUnitaryElement { element: g, defect });
            }
        }
        let e = group.identity();
        let id_defect = unitaries[e].max_abs_diff(&id);
        let mut worst = (e, e, id_defect);
        for g in 0..group.order() {
            for h in 0..group.order() {
                let dev = unitaries[g]
                    .matmul(&unitaries[h])
                    .max_abs_diff(&unitaries[group.mul(g, h)]);
                if dev > worst.2 {
                    worst = (g, h, dev);
                }
            }
        }
        if worst.2 > tol.eig * dim as f64 {
            return Err(Error::HomomorphismViolation {
                g: worst.0,
                h: worst.1,
                deviation: worst.2,
            });
        }
        let diagonals = unitaries
            .iter()
            .all(CMatrix::is_diagonal)
            .then(|| unitaries.iter().map(CMatrix::diag).collect());
        Ok(Self {
            group,
            dim,
            unitaries,
            diagonals,
        })
    }

    #[inline]
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.group.order()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn unitary(&self, g: usize) -> &CMatrix {
        &self.unitaries[g]
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonals.is_some()
    }

    pub(crate) fn diagonals(&self) -> Option<&[Vec<Complex64>]> {
        self.diagonals.as_deref()
    }

    /// `U_{g⃗} = U_{g1} ⊗ ... ⊗ U_{gn}` as a dense matrix.
    pub fn tuple_unitary(&self, tuple: &[usize]) -> CMatrix {
        let factors: Vec<&CMatrix> = tuple.iter().map(|&g| &self.unitaries[g]).collect();
        crate::linalg::kron_all(&factors)
    }

    /// `U_{g⃗} τ U_{g⃗}†` without forming the tensor product.
    pub fn conjugate_tuple(&self, tau: &CMatrix, tuple: &[usize]) -> CMatrix {
        let n = tuple.len();
        let d = self.dim;
        debug_assert_eq!(tau.dim(), d.pow(n as u32));
        if let Some(diags) = &self.diagonals {
            let phases = tensor_phases(diags, tuple, d);
            let dim = tau.dim();
            let mut out = tau.clone();
            let data = out.as_mut_slice();
            for i in 0..dim {
                let pi = phases[i];
                for j in 0..dim {
                    data[i * dim + j] *= pi * phases[j].conj();
                }
            }
            return out;
        }
        let mut out = tau.clone();
        for (site, &g) in tuple.iter().enumerate() {
            let u = &self.unitaries[g];
            out = out
                .apply_left_on_site(u, d, site, n)
                .apply_right_adjoint_on_site(u, d, site, n);
        }
        out
    }
}

/// Diagonal of `U_{g1} ⊗ ... ⊗ U_{gn}` for a diagonal representation.
pub(crate) fn tensor_phases(diags: &[Vec<Complex64>], tuple: &[usize], d: usize) -> Vec<Complex64> {
    let mut phases = vec![ONE];
    for &g in tuple {
        let diag = &diags[g];
        let mut next = Vec::with_capacity(phases.len() * d);
        for p in &phases {
            for q in diag {
                next.push(p * q);
            }
        }
        phases = next;
    }
    phases
}

/// `Z_d` with `U_g = diag(exp(2πi·charges_j·g/d))`.
pub fn make_cyclic_rep(d: usize, charges: &[i64]) -> Result<GroupRep> {
    GroupRep::cyclic(d, charges)
}

pub fn make_explicit_rep(
    mult_table: Vec<Vec<usize>>,
    unitaries: Vec<CMatrix>,
    tol: &Tolerances,
) -> Result<GroupRep> {
    GroupRep::explicit(mult_table, unitaries, tol)
}

/// The product-group twirl `T_G^{⊗n}`, applied factor by factor.
#[derive(Debug, Clone)]
pub struct TwirlChannel {
    rep: GroupRep,
    copies: usize,
    /// For each output pair `(c, e)` of a single site, the non-zero
    /// coefficients `(a, b, s)` with `T(E_ab) = Σ s E_ce`.
    terms: Vec<Vec<(usize, usize, Complex64)>>,
}

impl TwirlChannel {
    pub fn new(rep: &GroupRep, copies: usize) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidParameter("twirl needs at least one copy".into()));
        }
        let d = rep.dim();
        let w = 1.0 / rep.order() as f64;
        let mut terms = vec![Vec::new(); d * d];
        for c in 0..d {
            for e in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        let s: Complex64 = rep
                            .unitaries()
                            .iter()
                            .map(|u| u[(c, a)] * u[(e, b)].conj())
                            .sum::<Complex64>()
                            * w;
                        if s.norm() > 1e-15 {
                            terms[c * d + e].push((a, b, s));
                        }
                    }
                }
            }
        }
        Ok(Self {
            rep: rep.clone(),
            copies,
            terms,
        })
    }

    pub fn rep(&self) -> &GroupRep {
        &self.rep
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    /// Dimension `d^n` the channel acts on.
    pub fn dim(&self) -> usize {
        self.rep.dim().pow(self.copies as u32)
    }

    pub fn apply(&self, tau: &CMatrix) -> Result<CMatrix> {
        if tau.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: tau.dim(),
            });
        }
        let mut out = tau.clone();
        for site in 0..self.copies {
            out = self.apply_site(&out, site);
        }
        Ok(out)
    }

    fn apply_site(&self, tau: &CMatrix, site: usize) -> CMatrix {
        let d = self.rep.dim();
        let dim = tau.dim();
        let stride = d.pow((self.copies - site - 1) as u32);
        let src = tau.as_slice();
        let mut out = CMatrix::zeros(dim);
        let dst = out.as_mut_slice();
        for i in 0..dim {
            let ci = (i / stride) % d;
            let bi = i - ci * stride;
            for j in 0..dim {
                let ej = (j / stride) % d;
                let bj = j - ej * stride;
                let mut acc = ZERO;
                for &(a, b, s) in &self.terms[ci * d + ej] {
                    acc += s * src[(bi + a * stride) * dim + bj + b * stride];
                }
                dst[i * dim + j] = acc;
            }
        }
        out
    }
}

/// Single-copy twirl `T_G(τ) = (1/|G|) Σ_g U_g τ U_g†`.
pub fn twirl(rep: &GroupRep, tau: &CMatrix) -> Result<CMatrix> {
    TwirlChannel::new(rep, 1)?.apply(tau)
}

/// Collective twirl `(1/|G|) Σ_g U_g^{⊗n} τ U_g^{†⊗n}`.
pub fn collective_twirl(rep: &GroupRep, copies: usize, tau: &CMatrix) -> Result<CMatrix> {
    let expected = rep.dim().pow(copies as u32);
    if tau.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: tau.dim(),
        });
    }
    let mut acc = CMatrix::zeros(expected);
    for g in 0..rep.order() {
        acc.add_scaled(&rep.conjugate_tuple(tau, &vec![g; copies]), 1.0);
    }
    Ok(acc.scale(1.0 / rep.order() as f64))
}

/// Result of a symmetry test.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryWitness {
    pub symmetric: bool,
    /// `‖T(ρ) − ρ‖₁`, the deciding quantity.
    pub twirl_distance: f64,
    /// Group element (as a tuple over copies) with the largest
    /// `‖U ρ U† − ρ‖₁` among single-site elements.
    pub worst_element: Vec<usize>,
    pub worst_deviation: f64,
}

/// Tests `U_{g⃗} ρ U_{g⃗}† = ρ`. The decision uses `‖T(ρ) − ρ‖₁ ≤ tol`; the
/// witness ranges over elements acting on one copy at a time, which generate
/// the product group.
pub fn is_symmetric(channel: &TwirlChannel, rho: &CMatrix, tol: f64, tols: &Tolerances) -> Result<SymmetryWitness> {
    let twirled = channel.apply(rho)?;
    let twirl_distance = trace_distance(&twirled, rho, tols)?;
    let rep = channel.rep();
    let n = channel.copies();
    let e = rep.group().identity();
    let mut worst_element = vec![e; n];
    let mut worst_deviation = 0.0;
    for site in 0..n {
        for g in (0..rep.order()).filter(|&g| g != e) {
            let mut tuple = vec![e; n];
            tuple[site] = g;
            let dev = trace_distance(&rep.conjugate_tuple(rho, &tuple), rho, tols)?;
            if dev > worst_deviation {
                worst_deviation = dev;
                worst_element = tuple;
            }
        }
    }
    Ok(SymmetryWitness {
        symmetric: twirl_distance <= tol,
        twirl_distance,
        worst_element,
        worst_deviation,
    })
}

/// Orthonormal (Hilbert-Schmidt) Hermitian basis of the twirl's fixed-point
/// operator space.
#[derive(Debug, Clone)]
pub struct SymmetricBasis {
    elements: Vec<CMatrix>,
}

impl SymmetricBasis {
    pub fn new(channel: &TwirlChannel, tol: &Tolerances) -> Result<Self> {
        let dim = channel.dim();
        let cutoff = tol.eig * dim as f64;
        let mut elements: Vec<CMatrix> = Vec::new();
        let mut push = |candidate: CMatrix| -> Result<()> {
            let mut v = channel.apply(&candidate)?.hermitian_part();
            for _ in 0..2 {
                for b in &elements {
                    let overlap = b.hs_inner(&v).re;
                    v.add_scaled(b, -overlap);
                }
            }
            let norm = v.hs_norm();
            if norm >= cutoff {
                elements.push(v.scale(1.0 / norm));
            }
            Ok(())
        };
        for i in 0..dim {
            let mut e = CMatrix::zeros(dim);
            e[(i, i)] = ONE;
            push(e)?;
        }
        for i in 0..dim {
            for j in i + 1..dim {
                let mut sym = CMatrix::zeros(dim);
                sym[(i, j)] = ONE;
                sym[(j, i)] = ONE;
                push(sym)?;
                let mut anti = CMatrix::zeros(dim);
                anti[(i, j)] = Complex64::new(0.0, 1.0);
                anti[(j, i)] = Complex64::new(0.0, -1.0);
                push(anti)?;
            }
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Real coordinates `Tr[B_k A]` of a Hermitian operator.
    pub fn coordinates(&self, a: &CMatrix) -> Vec<f64> {
        self.elements.iter().map(|b| b.hs_inner(a).re).collect()
    }

    /// `Σ c_k B_k`
    pub fn combine(&self, coords: &[f64]) -> CMatrix {
        let dim = self.elements.first().map_or(0, CMatrix::dim);
        let mut out = CMatrix::zeros(dim);
        for (b, &c) in self.elements.iter().zip(coords) {
            out.add_scaled(b, c);
        }
        out
    }
}

pub fn symmetric_basis(rep: &GroupRep, tol: &Tolerances) -> Result<SymmetricBasis> {
    SymmetricBasis::new(&TwirlChannel::new(rep, 1)?, tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreservationWitness {
    pub preserving: bool,
    /// Index into the symmetric basis of the worst element.
    pub worst_basis_index: usize,
    /// `max_B ‖T(V B V†) − V B V†‖₁`.
    pub worst_deviation: f64,
}

/// Whether `V` maps the symmetric set into itself, checked on a spanning set
/// of the symmetric operators.
pub fn is_symmetry_preserving(
    channel: &TwirlChannel,
    basis: &SymmetricBasis,
    v: &CMatrix,
    tol: f64,
    tols: &Tolerances,
) -> Result<PreservationWitness> {
    if v.dim() != channel.dim() {
        return Err(Error::DimensionMismatch {
            expected: channel.dim(),
            found: v.dim(),
        });
    }
    let defect = v.adjoint().matmul(v).max_abs_diff(&CMatrix::identity(v.dim()));
    if defect > tols.eig * v.dim() as f64 {
        return Err(Error::NonUnitaryInput { defect });
    }
    let mut worst = (0, 0.0);
    for (k, b) in basis.elements().iter().enumerate() {
        let image = b.conjugate_by(v).hermitian_part();
        let dev = trace_distance(&channel.apply(&image)?, &image, tols)?;
        if dev > worst.1 {
            worst = (k, dev);
        }
    }
    Ok(PreservationWitness {
        preserving: worst.1 <= tol,
        worst_basis_index: worst.0,
        worst_deviation: worst.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_density_matrix, random_unitary};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> CMatrix {
        CMatrix::from_fn(2, |_, _| c(0.5, 0.0))
    }

    #[test]
    fn cyclic_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        assert_eq!(z2.unitary(0), &CMatrix::identity(2));
        assert_eq!(z2.unitary(1), &CMatrix::from_real_diag(&[1.0, -1.0]));
        assert!(z2.unitary(1).is_real());

        let z3 = make_cyclic_rep(3, &[0, 1, 2]).unwrap();
        let u = z3.unitary(1);
        let cube = u.matmul(u).matmul(u);
        assert!(cube.max_abs_diff(&CMatrix::identity(3)) < 1e-14);

        let trivial = make_cyclic_rep(2, &[0, 0]).unwrap();
        assert!(trivial.unitaries().iter().all(|u| *u == CMatrix::identity(2)));
        assert!(make_cyclic_rep(1, &[0]).is_err());
    }

    #[test]
    fn explicit_rejects_malformed_tables() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let swapped = vec![vec![1, 0], vec![0, 1]];
        let err = make_explicit_rep(swapped, z2.unitaries().to_vec(), &tol()).unwrap_err();
        assert!(
            matches!(err, Error::ClosureViolation(_) | Error::HomomorphismViolation { .. }),
            "{err:?}"
        );
        let out_of_range = vec![vec![0, 2], vec![1, 0]];
        assert!(matches!(
            make_explicit_rep(out_of_range, z2.unitaries().to_vec(), &tol()),
            Err(Error::ClosureViolation(_))
        ));
        let not_unitary = vec![CMatrix::identity(2), CMatrix::from_real_diag(&[1.0, 2.0])];
        assert!(matches!(
            make_explicit_rep(vec![vec![0, 1], vec![1, 0]], not_unitary, &tol()),
            Err(Error::NonUnitaryElement { element: 1, .. })
        ));
    }

    #[test]
    fn projective_pauli_rejected() {
        let i = CMatrix::identity(2);
        let x = CMatrix::from_fn(2, |r, s| if r != s { c(1.0, 0.0) } else { ZERO });
        let y = CMatrix::from_fn(2, |r, s| match (r, s) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => ZERO,
        });
        let z = CMatrix::from_real_diag(&[1.0, -1.0]);
        // Klein four-group: every element squares to identity, X·Y = Z, ...
        let table = vec![
            vec![0, 1, 2, 3],
            vec![1, 0, 3, 2],
            vec![2, 3, 0, 1],
            vec![3, 2, 1, 0],
        ];
        let err = make_explicit_rep(table, vec![i, x, y, z], &tol()).unwrap_err();
        match err {
            Error::HomomorphismViolation { deviation, .. } => assert!(deviation > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dihedral_d3_on_qutrit() {
        // D3 ≅ S3 acting by permutation matrices; the table is derived from
        // the matrices by brute force.
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
        let mats: Vec<CMatrix> = perms
            .iter()
            .map(|p| CMatrix::from_fn(3, |r, s| if p[s] == r { ONE } else { ZERO }))
            .collect();
        let table: Vec<Vec<usize>> = (0..6)
            .map(|g| {
                (0..6)
                    .map(|h| {
                        let prod = mats[g].matmul(&mats[h]);
                        (0..6).find(|&k| mats[k] == prod).unwrap()
                    })
                    .collect()
            })
            .collect();
        let rep = make_explicit_rep(table, mats, &tol()).unwrap();
        assert_eq!(rep.order(), 6);
        assert!(!rep.is_diagonal());
        // Fixed points of the permutation twirl: span{I, J} (J = all-ones).
        let basis = symmetric_basis(&rep, &tol()).unwrap();
        assert_eq!(basis.len(), 2);
    }

    #[test]
    fn twirl_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let out = twirl(&z2, &plus()).unwrap();
        assert!(out.max_abs_diff(&CMatrix::identity(2).scale(0.5)) < 1e-15);
        let sym = CMatrix::from_real_diag(&[0.3, 0.7]);
        assert!(twirl(&z2, &sym).unwrap().max_abs_diff(&sym) < 1e-15);
        assert!(matches!(
            twirl(&z2, &CMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_twirl_matches_tuple_average() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let d3 = make_cyclic_rep(3, &[0, 1, 1]).unwrap();
        let tau = CMatrix::from_fn(9, |_, _| crate::random::gaussian_complex(&mut rng));
        let ch = TwirlChannel::new(&d3, 2).unwrap();
        let fast = ch.apply(&tau).unwrap();
        let mut brute = CMatrix::zeros(9);
        for g in 0..3 {
            for h in 0..3 {
                let u = d3.unitary(g).kron(d3.unitary(h));
                brute.add_scaled(&tau.conjugate_by(&u), 1.0 / 9.0);
            }
        }
        assert!(fast.max_abs_diff(&brute) < 1e-12);
    }

    #[test]
    fn is_symmetric_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let ch = TwirlChannel::new(&z2, 1).unwrap();
        let mixed = CMatrix::identity(2).scale(0.5);
        assert!(is_symmetric(&ch, &mixed, 1e-9, &tol()).unwrap().symmetric);

        let w = is_symmetric(&ch, &plus(), 1e-9, &tol()).unwrap();
        assert!(!w.symmetric);
        assert_eq!(w.worst_element, vec![1]);
        // ρ − ZρZ has eigenvalues ±1.
        assert!((w.worst_deviation - 2.0).abs() < 1e-12);
        assert!((w.twirl_distance - 1.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let rho = random_density_matrix(&mut rng, 2, 2);
        let t = twirl(&z2, &rho).unwrap();
        assert!(is_symmetric(&ch, &t, 1e-9, &tol()).unwrap().symmetric);
    }

    #[test]
    fn symmetric_basis_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let b = symmetric_basis(&z2, &tol()).unwrap();
        assert_eq!(b.len(), 2);
        for e in b.elements() {
            assert!(e.is_diagonal() || e.max_abs_diff(&CMatrix::from_diag(&e.diag())) < 1e-15);
        }
        let trivial = make_cyclic_rep(2, &[0, 0]).unwrap();
        assert_eq!(symmetric_basis(&trivial, &tol()).unwrap().len(), 4);
        let z3 = make_cyclic_rep(3, &[0, 1, 2]).unwrap();
        let b3 = symmetric_basis(&z3, &tol()).unwrap();
        assert_eq!(b3.len(), 3);
        assert!(b3.elements().iter().all(|e| e.max_abs_diff(&CMatrix::from_diag(&e.diag())) < 1e-15));
    }

    #[test]
    fn symmetry_preserving_examples() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let ch = TwirlChannel::new(&z2, 1).unwrap();
        let basis = symmetric_basis(&z2, &tol()).unwrap();
        for g in 0..2 {
            let w = is_symmetry_preserving(&ch, &basis, z2.unitary(g), 1e-9, &tol()).unwrap();
            assert!(w.preserving);
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let hadamard = CMatrix::from_fn(2, |i, j| c(if i == 1 && j == 1 { -s } else { s }, 0.0));
        let w = is_symmetry_preserving(&ch, &basis, &hadamard, 1e-9, &tol()).unwrap();
        assert!(!w.preserving);
        assert!((w.worst_deviation - 1.0).abs() < 1e-12);
        for phi in [0.1, 1.0, 2.5, -0.7] {
            let v = CMatrix::from_diag(&[ONE, Complex64::from_polar(1.0, phi)]);
            assert!(is_symmetry_preserving(&ch, &basis, &v, 1e-9, &tol()).unwrap().preserving);
        }
        assert!(matches!(
            is_symmetry_preserving(&ch, &basis, &CMatrix::identity(2).scale(2.0), 1e-9, &tol()),
            Err(Error::NonUnitaryInput { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let generic = random_unitary(&mut rng, 2);
        assert!(!is_symmetry_preserving(&ch, &basis, &generic, 1e-9, &tol()).unwrap().preserving);
    }

    #[test]
    fn collective_twirl_is_coarser() {
        let z2 = make_cyclic_rep(2, &[0, 1]).unwrap();
        let rho = plus().kron(&plus());
        let coll = collective_twirl(&z2, 2, &rho).unwrap();
        // Parity-sector pinching keeps coherence between |00> and |11>.
        assert!((coll[(0, 3)].re - 0.25).abs() < 1e-15);
        assert!(coll[(0, 1)].norm() < 1e-15);
        let prod = TwirlChannel::new(&z2, 2).unwrap().apply(&rho).unwrap();
        assert!(prod[(0, 3)].norm() < 1e-15);
    }
}
