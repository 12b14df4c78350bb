mod common;

use common::{oracle_eigenvalues, oracle_trace_norm, random_density, random_separable, random_unitary, rng};
use fermiorder::entanglement::{
    build_separable, concurrence_and_eof, effective_dimensions, fermionic_negativity, negativity,
    partial_transpose, ppt_separable, two_qubit_measures,
};
use fermiorder::ordering::{qubit_image, QubitRepr};
use fermiorder::reduction::fermionic_partial_trace;
use fermiorder::{states, BipartitionSpec, ComplexMatrix, ModeOrdering, ModeSystem, QubitState};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

fn mixed(system: &ModeSystem, m: ComplexMatrix) -> QubitState {
    QubitState::new(system.clone(), ModeOrdering::identity(system), QubitRepr::Mixed(m)).unwrap()
}

/// Random density of rank `rank` on the patterns listed in `support`.
fn density_on(dim: usize, support: &[usize], rank: usize, r: &mut impl Rng) -> ComplexMatrix {
    let g = DMatrix::from_fn(support.len(), rank, |_, _| {
        Complex64::new(r.sample(StandardNormal), r.sample(StandardNormal))
    });
    let small = &g * g.adjoint();
    let small = &small / small.trace();
    let mut out = ComplexMatrix::zeros(dim);
    for (i, &p) in support.iter().enumerate() {
        for (j, &q) in support.iter().enumerate() {
            out[(p, q)] = small[(i, j)];
        }
    }
    out
}

#[test]
fn product_state_negativity_depends_on_ordering() {
    let v = states::four_mode_product().unwrap();
    let sys = v.system().clone();
    let bp = BipartitionSpec::from_system(&sys).unwrap();
    let rho = v.density();
    let id = fermionic_negativity(&rho, &bp, &ModeOrdering::identity(&sys)).unwrap();
    assert!(id.value.abs() < 1e-12);
    let braided = ModeOrdering::new(&sys, &["a", "d", "b", "c"]).unwrap();
    let neg = fermionic_negativity(&rho, &bp, &braided).unwrap();
    assert!((neg.value - 0.5).abs() < 1e-10, "{}", neg.value);
    assert_eq!(neg.ordering.unwrap().labels(), braided.labels());

    // dense oracle on the same partial transpose
    let q = qubit_image(&rho, &braided).unwrap();
    let pt = partial_transpose(&q.density_matrix(), &sys, &bp).unwrap();
    assert!(((oracle_trace_norm(&pt) - 1.0) / 2.0 - 0.5).abs() < 1e-10);
}

#[test]
fn singlet_is_maximally_entangled_and_not_ppt() {
    let v = states::dirac_singlet().unwrap();
    let sys = v.system().clone();
    let bp = BipartitionSpec::from_system(&sys).unwrap();
    let q = qubit_image(&v.density(), &ModeOrdering::identity(&sys)).unwrap();
    assert!((negativity(&q, &bp).unwrap().value - 0.5).abs() < 1e-10);
    assert_eq!(effective_dimensions(&q.density_matrix(), &bp), (2, 2));
    assert!(!ppt_separable(&q, &bp).unwrap());
    let (c, e) = two_qubit_measures(&q, &bp).unwrap();
    assert!((c.value - 1.0).abs() < 1e-10);
    assert!((e.value - 1.0).abs() < 1e-10);
}

#[test]
fn singlet_marginals_are_maximally_mixed() {
    let rho = states::dirac_singlet().unwrap().density();
    let sys = rho.system().clone();
    for kept in [["uA", "dA"], ["uR", "dR"]] {
        let bp = BipartitionSpec::keeping(&sys, &kept).unwrap();
        let red = fermionic_partial_trace(&rho, &bp).unwrap();
        // one particle over two modes: |10> and |01> each with weight 1/2
        let expect = ComplexMatrix::from_diagonal(&[0.0, 0.5, 0.5, 0.0]);
        assert!(red.matrix().max_abs_diff(&expect).unwrap() < 1e-12);
        assert!(red.ssr_compliant());
    }
}

#[test]
fn bell_state_measures() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    let bell = ComplexMatrix::outer(&[Complex64::new(h, 0.0), z, z, Complex64::new(h, 0.0)]);
    let (c, e) = concurrence_and_eof(&bell).unwrap();
    assert!((c.value - 1.0).abs() < 1e-10);
    assert!((e.value - 1.0).abs() < 1e-10);

    let sys = ModeSystem::standard(1, 1).unwrap();
    let bp = BipartitionSpec::from_system(&sys).unwrap();
    let q = mixed(&sys, bell);
    assert!((negativity(&q, &bp).unwrap().value - 0.5).abs() < 1e-10);
    assert!(!ppt_separable(&q, &bp).unwrap());
}

#[test]
fn werner_concurrence() {
    // p |Psi-><Psi-| + (1 - p) I/4 at p = 1/2
    let p = 0.5;
    let mut m = ComplexMatrix::from_diagonal(&[(1.0 - p) / 4.0; 4]);
    m[(1, 1)] += p / 2.0;
    m[(2, 2)] += p / 2.0;
    m[(1, 2)] -= p / 2.0;
    m[(2, 1)] -= p / 2.0;
    let (c, _) = concurrence_and_eof(&m).unwrap();
    assert!((c.value - 0.25).abs() < 1e-10, "{}", c.value);
}

#[test]
fn half_and_half_separable_spectrum() {
    // (|00><00| + |11><11|) / 2
    let m = ComplexMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]);
    let sys = ModeSystem::standard(1, 1).unwrap();
    let bp = BipartitionSpec::from_system(&sys).unwrap();
    let pt = partial_transpose(&m, &sys, &bp).unwrap();
    let eig = oracle_eigenvalues(&pt);
    for (a, b) in eig.iter().zip([0.5, 0.5, 0.0, 0.0]) {
        assert!((a - b).abs() < 1e-14);
    }
    let q = mixed(&sys, m);
    assert_eq!(negativity(&q, &bp).unwrap().value, 0.0);
    assert!(ppt_separable(&q, &bp).unwrap());
}

#[test]
fn entanglement_grows_along_the_family() {
    let mut last = (-1.0, -1.0);
    for i in 1..=20 {
        let theta = i as f64 * std::f64::consts::PI / 80.0;
        let v = states::dirac_pair(theta).unwrap();
        let sys = v.system().clone();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let q = qubit_image(&v.density(), &ModeOrdering::identity(&sys)).unwrap();
        let n = negativity(&q, &bp).unwrap().value;
        let (_, e) = two_qubit_measures(&q, &bp).unwrap();
        assert!((n - theta.sin() * theta.cos()).abs() < 1e-10);
        assert!(n > last.0 && e.value > last.1, "step {i}");
        last = (n, e.value);
    }
}

#[test]
fn random_separable_states_have_no_negativity() {
    let mut r = rng(5);
    for case in 0..120 {
        let (sys, cap) = if case % 2 == 0 {
            (ModeSystem::standard(1, 1).unwrap(), 2)
        } else {
            (ModeSystem::standard(1, 2).unwrap(), 3)
        };
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let dec = random_separable(&sys, cap, &mut r);
        let rho = build_separable(&dec, &sys).unwrap();
        let q = qubit_image(&rho, &ModeOrdering::identity(&sys)).unwrap();
        assert!(negativity(&q, &bp).unwrap().value < 1e-12, "case {case}");
        assert!(ppt_separable(&q, &bp).unwrap(), "case {case}");
    }
}

#[test]
fn ppt_is_rejected_outside_small_dimensions() {
    let sys = ModeSystem::standard(2, 2).unwrap();
    let bp = BipartitionSpec::from_system(&sys).unwrap();
    let q = mixed(&sys, random_density(16, &mut rng(9)));
    assert!(ppt_separable(&q, &bp).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>()) {
        let sys = ModeSystem::standard(2, 2).unwrap();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let m = random_density(16, &mut rng(seed));
        let twice = partial_transpose(&partial_transpose(&m, &sys, &bp).unwrap(), &sys, &bp).unwrap();
        prop_assert_eq!(twice, m);
    }

    #[test]
    fn negativity_is_local_unitary_invariant(seed in any::<u64>()) {
        let sys = ModeSystem::standard(1, 1).unwrap();
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let mut r = rng(seed);
        let m = density_on(4, &[0, 1, 2, 3], 1 + seed as usize % 3, &mut r);
        let ua = random_unitary(2, &mut r);
        let ub = random_unitary(2, &mut r);
        // bit 0 is the kept qubit, bit 1 the traced one
        let mut u = ComplexMatrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                u[(i, j)] = ua[(i & 1, j & 1)] * ub[(i >> 1, j >> 1)];
            }
        }
        let rotated = u.matmul(&m).unwrap().matmul(&u.adjoint()).unwrap();
        let rotated = rotated.add(&rotated.adjoint()).unwrap().scale(Complex64::new(0.5, 0.0));
        let a = negativity(&mixed(&sys, m), &bp).unwrap().value;
        let b = negativity(&mixed(&sys, rotated), &bp).unwrap().value;
        prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn ppt_matches_zero_negativity(seed in any::<u64>(), three in any::<bool>(), rank in 1usize..4) {
        let mut r = rng(seed);
        let (sys, support): (_, Vec<usize>) = if three {
            // traced patterns limited to {00, 10, 01} over (c1, c2)
            let sys = ModeSystem::standard(1, 2).unwrap();
            (sys, [0, 2, 4].iter().flat_map(|&t| [t, t | 1]).collect())
        } else {
            (ModeSystem::standard(1, 1).unwrap(), vec![0, 1, 2, 3])
        };
        let bp = BipartitionSpec::from_system(&sys).unwrap();
        let q = mixed(&sys, density_on(sys.dim(), &support, rank, &mut r));
        let n = negativity(&q, &bp).unwrap().value;
        prop_assert_eq!(ppt_separable(&q, &bp).unwrap(), n < 1e-12, "negativity {}", n);
    }
}
