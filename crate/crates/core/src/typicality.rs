//! Weakly (entropy-) typical sequences and subspaces.
//!
//! A sequence `x⃗ ∈ X^n` is δ-typical when
//! `2^{−n(H+δ)} ≤ p(x⃗) ≤ 2^{−n(H−δ)}`. Since `p(x⃗)` only depends on how
//! often each probability level occurs, the typical mass and cardinality are
//! sums over type classes of levels and never require enumerating `|X|^n`
//! sequences.

use crate::distance::BoundCheck;
use crate::eig::{hermitian_eig, HermitianEig};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ONE};
use crate::state::{DensityOperator, ProbabilityVector, Tolerances};

/// Sequences are listed explicitly only up to this many candidates.
pub const ENUMERATION_CAP: usize = 1 << 16;
/// Refuse type-class sums with more classes than this.
pub const TYPE_CLASS_CAP: usize = 50_000_000;
/// Relative slack on the typicality window for floating-point ties.
const WINDOW_SLACK: f64 = 1e-12;

/// A group of symbols sharing one probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub prob: f64,
    pub symbols: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TypicalIndexSet {
    pub n: usize,
    pub delta: f64,
    pub base_probs: ProbabilityVector,
    /// Shannon entropy (bits) of the merged distribution.
    pub entropy: f64,
    /// Non-zero probability levels after merging near-equal values.
    pub levels: Vec<Level>,
    symbol_level: Vec<Option<usize>>,
    pub total_mass: f64,
    /// Largest sequence probability inside the typical set (0 when empty).
    pub max_typical_prob: f64,
    /// Exact count when it fits in a `u128`.
    pub cardinality: Option<u128>,
    pub log2_cardinality: f64,
    /// Typical sequences in lexicographic order, when `|X|^n ≤ ENUMERATION_CAP`.
    pub sequences: Option<Vec<Vec<usize>>>,
}

impl TypicalIndexSet {
    /// `log2` of the cardinality bound `2^{n(H+δ)}`.
    pub fn log2_cardinality_bound(&self) -> f64 {
        self.n as f64 * (self.entropy + self.delta)
    }

    pub fn cardinality_bound_holds(&self) -> bool {
        self.log2_cardinality <= self.log2_cardinality_bound() + 1e-9
    }

    fn window(&self) -> (f64, f64) {
        let n = self.n as f64;
        let slack = WINDOW_SLACK * n.max(1.0) * (1.0 + self.entropy);
        (
            n * (self.entropy - self.delta) - slack,
            n * (self.entropy + self.delta) + slack,
        )
    }

    /// Membership of a sequence of symbol indices.
    pub fn contains(&self, seq: &[usize]) -> bool {
        if seq.len() != self.n {
            return false;
        }
        let mut surprisal = 0.0;
        for &x in seq {
            match self.symbol_level.get(x).copied().flatten() {
                Some(l) => surprisal -= self.levels[l].prob.log2(),
                None => return false,
            }
        }
        let (lo, hi) = self.window();
        surprisal >= lo && surprisal <= hi
    }
}

/// Groups probabilities within `merge_tol` of each other; entries at or below
/// `merge_tol` are treated as zero.
fn merge_levels(probs: &[f64], merge_tol: f64) -> (Vec<Level>, Vec<Option<usize>>) {
    let mut order: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > merge_tol).collect();
    order.sort_by(|&a, &b| probs[a].total_cmp(&probs[b]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some(g) if probs[i] - probs[*g.last().unwrap()] <= merge_tol => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut symbol_level = vec![None; probs.len()];
    let levels = groups
        .into_iter()
        .enumerate()
        .map(|(l, symbols)| {
            for &s in &symbols {
                symbol_level[s] = Some(l);
            }
            let prob = symbols.iter().map(|&s| probs[s]).sum::<f64>() / symbols.len() as f64;
            Level { prob, symbols }
        })
        .collect();
    (levels, symbol_level)
}

fn count_type_classes(n: usize, levels: usize) -> Option<usize> {
    // C(n + L − 1, L − 1)
    let (top, k) = (n + levels.saturating_sub(1), levels.saturating_sub(1));
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.checked_mul((top - i) as u128)? / (i as u128 + 1);
    }
    usize::try_from(c).ok()
}

/// Visits every composition of `n` into `parts` non-negative integers.
fn for_each_composition(n: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rem: usize, idx: usize, buf: &mut Vec<usize>, parts: usize, f: &mut impl FnMut(&[usize])) {
        if idx + 1 == parts {
            buf.push(rem);
            f(buf);
            buf.pop();
            return;
        }
        for k in 0..=rem {
            buf.push(k);
            rec(rem - k, idx + 1, buf, parts, f);
            buf.pop();
        }
    }
    if parts == 0 {
        return;
    }
    let mut buf = Vec::with_capacity(parts);
    rec(n, 0, &mut buf, parts, f);
}

fn exact_multinomial(n: usize, counts: &[usize], multiplicities: &[usize]) -> Option<u128> {
    let mut total: u128 = 1;
    let mut left = n;
    for (&k, &m) in counts.iter().zip(multiplicities) {
        let mut c: u128 = 1;
        for i in 0..k {
            c = c.checked_mul((left - i) as u128)? / (i as u128 + 1);
        }
        left -= k;
        total = total.checked_mul(c)?;
        total = total.checked_mul((m as u128).checked_pow(k as u32)?)?;
    }
    Some(total)
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()
}

/// The δ-typical set of `p` for `n` draws.
pub fn typical_set(p: &ProbabilityVector, n: usize, delta: f64, merge_tol: f64) -> Result<TypicalIndexSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidParameter(format!("delta = {delta} must be positive")));
    }
    let (levels, symbol_level) = merge_levels(p.as_slice(), merge_tol);
    let entropy: f64 = levels
        .iter()
        .map(|l| -(l.symbols.len() as f64) * l.prob * l.prob.log2())
        .sum::<f64>()
        .max(0.0);

    let classes = count_type_classes(n, levels.len()).unwrap_or(usize::MAX);
    if classes > TYPE_CLASS_CAP {
        return Err(Error::InvalidParameter(format!(
            "{classes} type classes exceed the cap {TYPE_CLASS_CAP}"
        )));
    }

    let mut set = TypicalIndexSet {
        n,
        delta,
        base_probs: p.clone(),
        entropy,
        levels,
        symbol_level,
        total_mass: 0.0,
        max_typical_prob: 0.0,
        cardinality: Some(0),
        log2_cardinality: f64::NEG_INFINITY,
        sequences: None,
    };

    let ln_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, k| {
            *acc += (k as f64).ln();
            Some(*acc)
        }))
        .collect();
    let mults: Vec<usize> = set.levels.iter().map(|l| l.symbols.len()).collect();
    let ln_probs: Vec<f64> = set.levels.iter().map(|l| l.prob.ln()).collect();
    let (lo, hi) = set.window();
    let mut mass = 0.0;
    let mut max_ln_p = f64::NEG_INFINITY;
    let mut exact: Option<u128> = Some(0);
    let mut ln_counts = Vec::new();
    for_each_composition(n, set.levels.len(), &mut |counts| {
        let ln_p: f64 = counts.iter().zip(&ln_probs).map(|(&k, lp)| k as f64 * lp).sum();
        let surprisal = -ln_p / std::f64::consts::LN_2;
        if surprisal < lo || surprisal > hi {
            return;
        }
        let ln_count = ln_fact[n]
            + counts
                .iter()
                .zip(&mults)
                .map(|(&k, &m)| (m as f64).ln() * k as f64 - ln_fact[k])
                .sum::<f64>();
        mass += (ln_count + ln_p).exp();
        max_ln_p = max_ln_p.max(ln_p);
        ln_counts.push(ln_count);
        exact = exact.and_then(|acc| acc.checked_add(exact_multinomial(n, counts, &mults)?));
    });
    set.total_mass = mass.min(1.0);
    set.max_typical_prob = max_ln_p.exp();
    set.cardinality = exact;
    set.log2_cardinality = match exact {
        Some(c) => (c as f64).log2(),
        None => log_sum_exp(&ln_counts) / std::f64::consts::LN_2,
    };

    let alphabet = p.len();
    if (alphabet as f64).powi(n as i32) <= ENUMERATION_CAP as f64 {
        let total = alphabet.pow(n as u32);
        let mut seqs = Vec::new();
        let mut seq = vec![0usize; n];
        for idx in 0..total {
            let mut r = idx;
            for pos in (0..n).rev() {
                seq[pos] = r % alphabet;
                r /= alphabet;
            }
            if set.contains(&seq) {
                seqs.push(seq.clone());
            }
        }
        set.sequences = Some(seqs);
    }
    Ok(set)
}

/// Smallest `n0 ≤ n_max` such that the typical mass is at least `1 − eps`
/// for every `n` in `n0..=n_max`.
pub fn min_copies_for_mass(
    p: &ProbabilityVector,
    delta: f64,
    eps: f64,
    n_max: usize,
    merge_tol: f64,
) -> Result<Option<usize>> {
    let mut n0 = None;
    for n in (1..=n_max).rev() {
        if typical_set(p, n, delta, merge_tol)?.total_mass >= 1.0 - eps {
            n0 = Some(n);
        } else {
            break;
        }
    }
    Ok(n0)
}

/// Projector onto the span of eigenvector products `|x1>...|xn>` with typical
/// index sequence.
#[derive(Debug, Clone)]
pub struct TypicalProjector {
    pub n: usize,
    pub delta: f64,
    pub eigen: HermitianEig,
    pub index_set: TypicalIndexSet,
    pub matrix: Option<CMatrix>,
}

impl TypicalProjector {
    /// Predicate form; call [`TypicalProjector::materialize`] for the matrix.
    pub fn new(rho: &DensityOperator, n: usize, delta: f64, tol: &Tolerances) -> Result<Self> {
        let eigen = hermitian_eig(rho.matrix(), tol.herm)?;
        let probs: Vec<f64> = eigen.values.iter().map(|&x| x.max(0.0)).collect();
        let total: f64 = probs.iter().sum();
        let p = ProbabilityVector::new(probs.iter().map(|x| x / total).collect(), tol.trace)?;
        let index_set = typical_set(&p, n, delta, tol.eig)?;
        Ok(Self {
            n,
            delta,
            eigen,
            index_set,
            matrix: None,
        })
    }

    /// Rank of the projector (the typical-set cardinality).
    pub fn rank(&self) -> Option<u128> {
        self.index_set.cardinality
    }

    /// Builds `Π = V^{⊗n} diag(mask) V^{†⊗n}`.
    pub fn materialize(&mut self, cap: usize) -> Result<&CMatrix> {
        if self.matrix.is_none() {
            let d = self.eigen.values.len();
            let dim = d
                .checked_pow(self.n as u32)
                .filter(|&x| x <= cap)
                .ok_or(Error::DimensionCapExceeded {
                    dim: d.saturating_pow(self.n as u32),
                    cap,
                })?;
            let mut pi = CMatrix::zeros(dim);
            let mut seq = vec![0usize; self.n];
            for idx in 0..dim {
                let mut r = idx;
                for pos in (0..self.n).rev() {
                    seq[pos] = r % d;
                    r /= d;
                }
                if self.index_set.contains(&seq) {
                    pi[(idx, idx)] = ONE;
                }
            }
            for site in 0..self.n {
                pi = pi
                    .apply_left_on_site(&self.eigen.vectors, d, site, self.n)
                    .apply_right_adjoint_on_site(&self.eigen.vectors, d, site, self.n);
            }
            self.matrix = Some(pi.hermitian_part());
        }
        Ok(self.matrix.as_ref().expect("materialized"))
    }
}

impl TypicalProjector {
    /// `2^{n(S−δ)} Π ρ^{⊗n} Π ≤ Π`, evaluated exactly in the product
    /// eigenbasis where both sides are diagonal: the largest eigenvalue of the
    /// left side is `2^{n(S−δ)}` times the largest typical sequence
    /// probability.
    pub fn operator_bound(&self, tol: f64) -> BoundCheck {
        let set = &self.index_set;
        let lhs = (set.n as f64 * (set.entropy - set.delta)).exp2() * set.max_typical_prob;
        BoundCheck {
            lhs,
            bound: 1.0,
            holds: lhs <= 1.0 + tol,
        }
    }
}

/// Typical projector with its matrix materialized.
pub fn typical_projector(
    rho: &DensityOperator,
    n: usize,
    delta: f64,
    cap: usize,
    tol: &Tolerances,
) -> Result<TypicalProjector> {
    let mut p = TypicalProjector::new(rho, n, delta, tol)?;
    p.materialize(cap)?;
    Ok(p)
}
