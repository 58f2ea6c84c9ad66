//! Reference values computed by brute force, independently of the library's
//! own shortcuts.

use symcost_core::group::{make_cyclic_rep, TwirlChannel};
use symcost_core::linalg::op_leq;
use symcost_core::protocol::{chernoff_bound_trial, ChernoffOptions, UnitaryEnsemble};
use symcost_core::typicality::{min_copies_for_mass, typical_projector, typical_set};
use symcost_core::{CMatrix, DensityOperator, ProbabilityVector, Tolerances};

/// Sum over all `2^n` binary strings.
fn binomial_oracle(p: f64, n: usize, delta: f64) -> (f64, u64) {
    let q = 1.0 - p;
    let h = -(p * p.log2() + q * q.log2());
    let lo = (-(n as f64) * (h + delta)).exp2();
    let hi = (-(n as f64) * (h - delta)).exp2();
    let (mut mass, mut count) = (0.0, 0);
    for bits in 0u64..(1 << n) {
        let ones = bits.count_ones() as i32;
        let prob = q.powi(ones) * p.powi(n as i32 - ones);
        if prob >= lo && prob <= hi {
            mass += prob;
            count += 1;
        }
    }
    (mass, count)
}

#[test]
fn typical_set_matches_exhaustive_enumeration() {
    for (p, n, delta) in [(0.9, 12, 0.2), (0.7, 10, 0.1), (0.6, 14, 0.05), (0.9, 8, 0.4)] {
        let set = typical_set(&ProbabilityVector::new(vec![p, 1.0 - p], 1e-12).unwrap(), n, delta, 1e-12).unwrap();
        let (mass, count) = binomial_oracle(p, n, delta);
        assert!((set.total_mass - mass).abs() < 1e-12, "p={p} n={n}: {} vs {mass}", set.total_mass);
        assert_eq!(set.cardinality, Some(count as u128));
        assert_eq!(set.sequences.as_ref().map(Vec::len), Some(count as usize));
    }
}

#[test]
fn typical_mass_eventually_exceeds_one_minus_eps() {
    let p = ProbabilityVector::new(vec![0.9, 0.1], 1e-12).unwrap();
    let n0 = min_copies_for_mass(&p, 0.1, 0.05, 10_000, 1e-12).unwrap().expect("converges");
    assert!(n0 > 1 && n0 < 10_000);
    for n in [n0, n0 + 1, 2 * n0, 10_000] {
        assert!(typical_set(&p, n, 0.1, 1e-12).unwrap().total_mass >= 0.95);
    }
}

#[test]
fn typical_projector_captures_the_typical_mass() {
    let tol = Tolerances::default();
    // A mixed qubit state off the computational basis.
    let m = CMatrix::from_fn(2, |i, j| match (i, j) {
        (0, 0) => 0.8.into(),
        (1, 1) => 0.2.into(),
        (0, 1) => num_complex::Complex64::new(0.1, 0.15),
        _ => num_complex::Complex64::new(0.1, -0.15),
    });
    let rho = DensityOperator::new(m, &tol).unwrap();
    let (n, delta) = (6, 0.2);
    let proj = typical_projector(&rho, n, delta, 4096, &tol).unwrap();
    let pi = proj.matrix.as_ref().unwrap();
    assert!(pi.matmul(pi).max_abs_diff(pi) < 1e-12);
    let rank = pi.trace().re;
    assert!((rank - proj.rank().unwrap() as f64).abs() < 1e-10);
    let sandwiched = rho.matrix().kron_power(n).conjugate_by(pi);
    assert!((sandwiched.trace().re - proj.index_set.total_mass).abs() < 1e-12);
    let s = symcost_core::entropy::von_neumann_entropy(&rho);
    let lower = (n as f64 * (s - delta)).exp2();
    assert!(op_leq(&sandwiched.scale(lower), pi, 1e-10).unwrap());
    let fast = proj.operator_bound(1e-10);
    assert!(fast.holds);
    // The dense inequality is tight exactly when the eigenbasis form is.
    let top = symcost_core::eig::hermitian_eigenvalues(&sandwiched.scale(lower), 1e-10).unwrap();
    assert!((top.last().unwrap() - fast.lhs).abs() < 1e-10);
}

#[test]
fn exhaustive_ensemble_reproduces_product_twirl() {
    let rep = make_cyclic_rep(3, &[0, 1, 2]).unwrap();
    let tau = symcost_core::random::random_density_matrix(&mut symcost_core::protocol::stream_rng(5, 0), 9, 9);
    let e = UnitaryEnsemble::full_group(&rep, 2, 4096).unwrap();
    let out = symcost_core::protocol::apply_ensemble(&e, &tau).unwrap();
    let exact = TwirlChannel::new(&rep, 2).unwrap().apply(&tau).unwrap();
    assert!(out.max_abs_diff(&exact) < 1e-14);
}

#[test]
fn large_ensembles_stay_in_the_chernoff_interval() {
    let tol = Tolerances::default();
    let rep = make_cyclic_rep(2, &[0, 1]).unwrap();
    let rho = DensityOperator::from_real_amplitudes(&[0.9f64.sqrt(), 0.1f64.sqrt()], &tol).unwrap();
    let opts = ChernoffOptions {
        n: 6,
        delta: 0.25,
        eps: 0.1,
        k: 1 << 15,
        num_batches: 20,
        seed: 3,
        cap: 4096,
    };
    let report = chernoff_bound_trial(&rep, &rho, &opts, &tol).unwrap();
    assert_eq!(report.failures, 0);
    assert!(report.lambda_holds());
}
