use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::{AlgebraElement, FloatTheta, Presentation, ThetaMatrix};
use crate::characters::Character;
use crate::error::Error;
use crate::phase::{rat, Phase, PhaseScalar};
use crate::random::{random_coefficient, random_homogeneous};
use crate::scalar::Scalar;

fn quarter() -> ThetaMatrix {
    ThetaMatrix::pair(2, 0, 1, Rational64::new(1, 4)).unwrap()
}

fn dense_norm(m: &DMatrix<Complex64>) -> f64 {
    m.norm()
}

#[test]
fn surd_square_free_split() {
    assert_eq!(split_square(12), (2, 3));
    assert_eq!(split_square(49), (7, 1));
    assert_eq!(split_square(1), (1, 1));
    assert_eq!(SurdScalar::sqrt(2) * SurdScalar::sqrt(2), SurdScalar::from_int(2));
    assert_eq!(SurdScalar::sqrt(8), SurdScalar::sqrt(2) * SurdScalar::from_int(2));
    assert_ne!(SurdScalar::sqrt(2), SurdScalar::sqrt(3));
}

#[test]
fn single_mode_matrices() {
    let rep = weyl_rep(&[3], &ThetaMatrix::zero(1)).unwrap();
    let a = rep.generator(0);
    assert_eq!(a.nnz(), 3);
    for k in 1..=3u64 {
        assert_eq!(a.get((k - 1) as usize, k as usize), SurdScalar::sqrt(k));
    }
    let n = rep.number(0);
    assert_eq!(n, SparseMatrix::diagonal((0..=3).map(SurdScalar::from_int)));
    assert!(check_relations(&rep, 0.0).unwrap().passed());
}

#[test]
fn twisted_phase_on_mixed_column() {
    let rep = weyl_rep(&[2, 2], &quarter()).unwrap();
    let a2 = rep.generator(1);
    let col = rep.index_of(&[1, 1]).unwrap();
    let row = rep.index_of(&[1, 0]).unwrap();
    assert_eq!(a2.get(row, col), SurdScalar::from_phase(Phase::from_angle(Rational64::new(1, 4))));
    // Nothing to lower at n₂ = 0.
    assert!(a2.column(rep.index_of(&[1, 0]).unwrap()).is_empty());
    let a1 = rep.generator(0);
    assert_eq!(a1.get(rep.index_of(&[0, 1]).unwrap(), col), SurdScalar::sqrt(1));
}

#[test]
fn commutator_holds_inside_fails_on_top_layer() {
    let rep = weyl_rep(&[5], &ThetaMatrix::zero(1)).unwrap();
    let report = check_relations(&rep, 0.0).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.interior_dimension, 5);
    // On δ_M the dropped image leaves (a a* − a* a − 1) δ_M = −(M + 1) δ_M.
    let (a, s) = (rep.generator(0), rep.generator_star(0));
    let comm = a.mul(s).unwrap().sub(&s.mul(a).unwrap()).unwrap().sub(&SparseMatrix::identity(6)).unwrap();
    assert_eq!(comm.get(5, 5), SurdScalar::from_int(-6));
}

#[test]
fn corrupted_entry_is_caught_with_witness() {
    let mut rep = weyl_rep(&[4], &ThetaMatrix::zero(1)).unwrap();
    rep.set_generator_entry(0, 1, 2, SurdScalar::sqrt(3));
    let report = check_relations(&rep, 0.0).unwrap();
    assert!(!report.passed());
    let bad = report.identities.iter().find(|r| !r.pass).unwrap();
    assert!(bad.residual > 0.0);
    assert!(bad.witness.is_some());
}

#[test]
fn twisted_relations_exact_and_float() {
    let rep = weyl_rep(&[4, 4], &quarter()).unwrap();
    assert!(check_relations(&rep, 0.0).unwrap().passed());
    let theta = FloatTheta::new(vec![vec![0.0, std::f64::consts::FRAC_1_PI], vec![-std::f64::consts::FRAC_1_PI, 0.0]], 1e-12).unwrap();
    let float = weyl_rep_float(&[4, 4], &theta).unwrap();
    let report = check_relations(&float, RELATION_TOLERANCE).unwrap();
    assert!(!report.exact);
    assert!(report.passed(), "{report:?}");
    assert!(report.identities.iter().all(|r| r.residual <= RELATION_TOLERANCE));
}

#[test]
fn float_matches_exact() {
    let exact = weyl_rep(&[3, 3], &quarter()).unwrap();
    let float = weyl_rep_float(&[3, 3], &quarter().to_f64()).unwrap();
    for j in 0..2 {
        let diff = &exact.generator(j).to_dense() - &float.generator(j).to_dense();
        assert!(dense_norm(&diff) < 1e-14);
    }
}

#[test]
fn matrix_of_matches_products() {
    let p = Presentation::twisted(quarter()).unwrap();
    let rep = weyl_rep(&[3, 3], &quarter()).unwrap();
    let x = p.normal_order(&crate::algebra::parse_word("a1 a2").unwrap()).unwrap();
    let direct = rep.generator(0).mul(rep.generator(1)).unwrap();
    assert_eq!(rep.matrix_of(&x).unwrap(), direct);
    // Normal ordering reorders a₂ a₁ into λ-multiples of a₁ a₂.
    let y = p.normal_order(&crate::algebra::parse_word("a2 a1").unwrap()).unwrap();
    assert_eq!(rep.matrix_of(&y).unwrap(), rep.generator(1).mul(rep.generator(0)).unwrap());
}

#[test]
fn adjoint_consistency_random() {
    let p = Presentation::twisted(quarter()).unwrap();
    let rep = weyl_rep(&[5, 5], &quarter()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let k = vec![rng.random_range(-1..=1), rng.random_range(-1..=1)];
        let x = random_homogeneous(&mut rng, &p, &k, 3, 3);
        let r = rep.adjoint_consistency(&x, 0.0).unwrap();
        assert!(r.pass, "{r:?}");
    }
}

#[test]
fn dimension_errors() {
    assert!(matches!(weyl_rep(&[], &ThetaMatrix::zero(0)), Err(Error::EmptyWindow)));
    assert!(matches!(weyl_rep(&[2], &quarter()), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn sparse_round_trip() {
    let rep = weyl_rep_float(&[3, 2], &quarter().to_f64()).unwrap();
    let g = rep.generator(1);
    let back = SparseMatrix::from_triples(g.rows(), g.cols(), &g.triples()).unwrap();
    assert_eq!(&back, g);
    let v: Vec<Complex64> = (0..g.cols()).map(|i| Complex64::new(i as f64, 1.0)).collect();
    let dense = g.to_dense() * nalgebra::DVector::from_vec(v.clone());
    let sparse = g.apply(&v);
    for (a, b) in dense.iter().zip(&sparse) {
        assert!((a - b).norm() < 1e-14);
    }
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

#[test]
fn cayley_of_diagonal() {
    let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-3.0, 0.0),
    ]));
    let r = cayley(&t).unwrap();
    for (k, x) in [0.0, 1.0, -3.0].into_iter().enumerate() {
        let expected = Complex64::new(x, -1.0) / Complex64::new(x, 1.0);
        assert!((r.transform[(k, k)] - expected).norm() < 1e-15);
    }
    assert!(r.regular_self_adjoint);
    assert_eq!(r.hermitian_defect, 0.0);
}

#[test]
fn cayley_of_random_hermitian_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let t = random_hermitian(&mut rng, 50);
    let r = cayley(&t).unwrap();
    assert!(r.isometry_defect < REGULARITY_TOLERANCE && r.coisometry_defect < REGULARITY_TOLERANCE);
    assert!(r.regular_self_adjoint);
}

#[test]
fn cayley_negative_control() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let mut t = random_hermitian(&mut rng, 12);
        t[(2, 5)] += Complex64::new(0.5, 0.25);
        let r = cayley(&t).unwrap();
        assert!(!r.regular_self_adjoint);
        assert!(r.hermitian_defect > 0.0);
        assert!(r.isometry_defect >= defect_lower_bound(&t));
    }
    let singular = DMatrix::from_diagonal_element(2, 2, -Complex64::i());
    assert!(matches!(cayley(&singular), Err(Error::Singular(_))));
}

#[test]
fn deficiency_model_is_a_proper_isometry() {
    for n in [3, 10, 60] {
        let r = deficiency_model(n).unwrap();
        assert!(r.non_unitary_isometry, "{r:?}");
        assert!((r.coisometry_defect - 1.0).abs() < 1e-9);
    }
}

#[test]
fn toeplitz_identities() {
    for n in [3, 17, 200] {
        let r = toeplitz_suite(n).unwrap();
        assert!(r.passed(), "{r:?}");
    }
    assert!(matches!(toeplitz_generator(2), Err(Error::Precondition(_))));
}

#[test]
fn toeplitz_generator_entries() {
    // (1 + S)(1 − S)⁻¹ = 1 + 2 Σ_{k≥1} S^k, so Q is i on the diagonal and 2i below.
    let q = toeplitz_generator(6).unwrap();
    for r in 0..6 {
        for c in 0..6 {
            let expected = match r.cmp(&c) {
                std::cmp::Ordering::Equal => Complex64::i(),
                std::cmp::Ordering::Greater => Complex64::i() * 2.0,
                std::cmp::Ordering::Less => Complex64::new(0.0, 0.0),
            };
            assert!((q[(r, c)] - expected).norm() < 1e-14);
        }
    }
}

#[test]
fn graph_norm_of_zero_is_plain_norm() {
    let p = Presentation::weyl(1).unwrap();
    let rep = weyl_rep(&[6], &ThetaMatrix::zero(1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xi = random_vector(&mut rng, rep.dim());
    let plain = xi.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    let g = graph_norm(&xi, &AlgebraElement::zero(&p), &rep).unwrap();
    assert!((g - plain).abs() < 1e-15);
    let one = graph_norm(&xi, &AlgebraElement::one(&p), &rep).unwrap();
    assert!((one - plain * 2f64.sqrt()).abs() < 1e-14);
}

fn number_list(p: &Arc<Presentation>) -> Vec<AlgebraElement> {
    let n = AlgebraElement::number(p, 0).unwrap();
    let n2 = n.multiply(&n).unwrap();
    let n1 = &n + &AlgebraElement::one(p);
    vec![n, n2, n1]
}

#[test]
fn directed_graph_norm_bound() {
    let p = Presentation::weyl(1).unwrap();
    let rep = weyl_rep_float(&[20], &ThetaMatrix::zero(1).to_f64()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let r = graph_norm_directed_check(&rep, &number_list(&p), 200, &mut rng).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.checks, 600);
    assert!(r.max_ratio <= DIRECTED_BOUND && r.max_ratio > 0.0);
}

fn lattice(n: i64) -> Vec<Character> {
    (0..=n).map(|k| Character::lattice(&[k])).collect()
}

#[test]
fn inducibility_lattice_passes() {
    let p = Presentation::weyl(1).unwrap();
    let rep = DiagonalRep::new(&p, lattice(6)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let k = vec![rng.random_range(-2..=2)];
        let size = rng.random_range(1..=3);
        let family: Vec<_> = (0..size)
            .map(|_| (random_homogeneous(&mut rng, &p, &k, 2, 4), (0..rep.dim()).map(|_| random_coefficient(&mut rng)).collect()))
            .collect();
        let v = inducibility_matrix_check(&rep, &family).unwrap();
        assert!(v.positive, "{v:?}");
        assert!(v.total >= -1e-9);
    }
}

#[test]
fn inducibility_refuted_at_half() {
    let p = Presentation::weyl(1).unwrap();
    let rep = DiagonalRep::new(&p, vec![Character::new(vec![rat(1, 2)])]).unwrap();
    let a2 = p.normal_order(&crate::algebra::parse_word("a a").unwrap()).unwrap();
    let v = inducibility_matrix_check(&rep, &[(a2, vec![PhaseScalar::one()])]).unwrap();
    assert!(!v.positive);
    assert_eq!(v.exact_value.as_deref(), Some("-1/4"));
}

#[test]
fn inducibility_edge_cases() {
    let p = Presentation::weyl(1).unwrap();
    let rep = DiagonalRep::lattice(&p, &[3]).unwrap();
    assert_eq!(rep.dim(), 4);
    let v = inducibility_matrix_check(&rep, &[]).unwrap();
    assert!(v.positive && v.size == 0);
    let ones = vec![PhaseScalar::one(); 4];
    let a = AlgebraElement::generator(&p, 0).unwrap();
    let aa = a.multiply(&a).unwrap();
    assert!(matches!(
        inducibility_matrix_check(&rep, &[(a.clone(), ones.clone()), (aa, ones.clone())]),
        Err(Error::MixedDegrees(_))
    ));
    assert!(matches!(inducibility_matrix_check(&rep, &[(a, vec![PhaseScalar::one()])]), Err(Error::DimensionMismatch { .. })));
}

proptest! {
    #[test]
    fn surd_arithmetic_matches_floats(a in 1u64..50, b in 1u64..50, c in -5i64..5) {
        let x = SurdScalar::sqrt(a) * SurdScalar::sqrt(b) + SurdScalar::from_int(c);
        let expected = ((a * b) as f64).sqrt() + c as f64;
        prop_assert!((x.to_complex() - Complex64::new(expected, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn cayley_unitary_for_hermitian(seed in 0u64..1000, n in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = cayley(&random_hermitian(&mut rng, n)).unwrap();
        prop_assert!(r.regular_self_adjoint);
    }
}
