use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::Presentation;
use crate::phase::{Phase, PhaseScalar};
use crate::random::{random_coefficient, random_phase};
use crate::window::{degree_box, lattice_box};

fn random_cochain(g: &FiniteGroupoid, rng: &mut ChaCha8Rng) -> OneCochain {
    OneCochain::from_fn(g, |_| random_phase(rng, 12))
}

fn random_element(g: &FiniteGroupoid, rng: &mut ChaCha8Rng, n: usize) -> ConvolutionElement<PhaseScalar> {
    let coeffs: Vec<(usize, PhaseScalar)> =
        (0..n).map(|_| (rng.random_range(0..g.len()), random_coefficient(rng))).collect();
    ConvolutionElement::from_coeffs(g, coeffs).unwrap()
}

/// Brute-force isomorphism oracle: some bijection of objects carries the
/// set of (target, source) pairs of `g` onto all ordered pairs.
fn isomorphic_to_pair_by_search(g: &FiniteGroupoid) -> bool {
    let n = g.objects().len();
    let pairs: BTreeSet<(usize, usize)> = g.arrows().iter().map(|a| (a.target, a.source)).collect();
    if pairs.len() != g.len() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let full: BTreeSet<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    loop {
        let image: BTreeSet<(usize, usize)> = pairs.iter().map(|&(x, y)| (perm[x], perm[y])).collect();
        if image == full {
            return true;
        }
        // next permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else { return false };
        let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

#[test]
fn weyl_window_is_pair_groupoid() {
    let p = Presentation::weyl(1).unwrap();
    let g = transformation_groupoid(&p, &lattice_box(&[3]), &degree_box(1, 3)).unwrap();
    assert_eq!(g.len(), 16);
    assert!(g.is_pair_groupoid());
    assert!(isomorphic_to_pair_by_search(&g));
    assert!(g.verify_axioms().passed());
    // Arrows whose target leaves [0, 3] are reported and dropped.
    assert!(g.restriction().unwrap().dropped.iter().all(|d| d.target[0] < 0 || d.target[0] > 3));
    // (g, x) has target x − g.
    let a = g.find(&[2], 3).unwrap();
    assert_eq!(g.objects()[g.arrow(a).target], vec![1]);
}

#[test]
fn unit_and_square_windows() {
    let p = Presentation::weyl(1).unwrap();
    let g = transformation_groupoid(&p, &lattice_box(&[3]), &[vec![0]]).unwrap();
    assert_eq!(g.len(), 4);
    assert!((0..4).all(|a| g.is_unit(a)));
    let p2 = Presentation::weyl(2).unwrap();
    let g2 = transformation_groupoid(&p2, &lattice_box(&[1, 1]), &degree_box(2, 1)).unwrap();
    // Oracle: every ordered pair of the four points.
    assert_eq!(g2.len(), 4 * 4);
    assert!(isomorphic_to_pair_by_search(&g2));
    assert!(g2.verify_axioms().passed());
}

#[test]
fn arrows_leaving_the_window_are_reported() {
    let p = Presentation::weyl(1).unwrap();
    let window = vec![vec![0], vec![1], vec![3]];
    let g = transformation_groupoid(&p, &window, &degree_box(1, 1)).unwrap();
    let r = g.restriction().unwrap();
    assert!(r.is_restriction());
    let dropped: BTreeSet<(Vec<i64>, Vec<i64>)> = r.dropped.iter().map(|d| (d.g.clone(), d.x.clone())).collect();
    assert!(dropped.contains(&(vec![1], vec![3])));
    assert!(dropped.contains(&(vec![-1], vec![3])));
    assert!(dropped.contains(&(vec![-1], vec![1])));
    assert!(g.verify_axioms().passed());
    assert!(matches!(transformation_groupoid(&p, &[], &[vec![0]]), Err(crate::Error::EmptyWindow)));
    assert!(transformation_groupoid(&p, &[vec![-1]], &[vec![0]]).is_err());
}

#[test]
fn bound_closure_adds_composites() {
    let p = Presentation::weyl(1).unwrap();
    let g = transformation_groupoid(&p, &lattice_box(&[3]), &[vec![1]]).unwrap();
    let r = g.restriction().unwrap();
    assert!(r.added_inverses > 0 && r.added_composites > 0 && r.added_units == 4);
    assert!(g.is_pair_groupoid());
}

#[test]
fn pair_groupoid_sizes() {
    assert_eq!(pair_groupoid(1).unwrap().len(), 1);
    assert_eq!(pair_groupoid(2).unwrap().len(), 4);
    assert_eq!(pair_groupoid(3).unwrap().len(), 9);
    assert!(pair_groupoid(0).is_err());
    let g = pair_groupoid(3).unwrap();
    // (0,1)·(1,2) = (0,2)
    let a = g.between(0, 1)[0];
    let b = g.between(1, 2)[0];
    assert_eq!(g.compose(a, b), Some(g.between(0, 2)[0]));
    assert_eq!(g.compose(b, a), None);
    assert!(g.verify_axioms().passed());
    // Same arrow set as the m = 1 transformation groupoid on [0, 2].
    let p = Presentation::weyl(1).unwrap();
    let t = transformation_groupoid(&p, &lattice_box(&[2]), &degree_box(1, 2)).unwrap();
    let labels = |g: &FiniteGroupoid| -> BTreeSet<(Vec<i64>, usize, usize)> {
        g.arrows().iter().map(|a| (a.g.clone(), a.source, a.target)).collect()
    };
    assert_eq!(labels(&t), labels(&g));
}

#[test]
fn cocycle_checks() {
    let g = pair_groupoid(4).unwrap();
    let v = check_cocycle(&g, &TwoCocycle::trivial(&g)).unwrap();
    assert!(v.passed);
    assert_eq!(v.triples_checked, 4 * 4 * 4 * 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let psi = random_cochain(&g, &mut rng);
    let mut phi = coboundary(&g, &psi);
    assert!(check_cocycle(&g, &phi).unwrap().passed);
    let (a, b) = (g.between(0, 1)[0], g.between(1, 2)[0]);
    phi.set(a, b, phi.get(a, b).unwrap() * Phase::from_ratio(1, 5));
    let v = check_cocycle(&g, &phi).unwrap();
    assert!(!v.passed);
    let [x, y, z] = v.first_failure.unwrap();
    // The reported triple really violates the identity.
    let (xy, yz) = (g.compose(x, y).unwrap(), g.compose(y, z).unwrap());
    assert_ne!(
        phi.get(xy, z).unwrap() * phi.get(x, y).unwrap(),
        phi.get(x, yz).unwrap() * phi.get(y, z).unwrap()
    );
    let mut partial = TwoCocycle::trivial(&g).values().clone();
    partial.remove(&(a, b));
    assert!(matches!(check_cocycle(&g, &TwoCocycle::from_map(&g, partial)), Err(crate::Error::UndefinedPair(..))));
}

#[test]
fn unit_perturbation_is_caught() {
    let g = pair_groupoid(3).unwrap();
    let mut phi = TwoCocycle::trivial(&g);
    let u = g.unit(1);
    let b = g.between(1, 2)[0];
    phi.set(u, b, Phase::from_ratio(1, 3));
    let v = check_cocycle(&g, &phi).unwrap();
    assert!(!v.passed);
    assert!(v.unnormalized_pair.is_some());
}

#[test]
fn coboundary_is_multiplicative() {
    let g = pair_groupoid(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (p1, p2) = (random_cochain(&g, &mut rng), random_cochain(&g, &mut rng));
    let lhs = coboundary(&g, &p1.mul(&p2).unwrap());
    let rhs = coboundary(&g, &p1).mul(&coboundary(&g, &p2)).unwrap();
    assert_eq!(lhs, rhs);
    assert!(coboundary(&g, &OneCochain::trivial(&g)).is_trivial());
    assert!(OneCochain::new(&g, vec![Phase::from_ratio(1, 2); g.len()]).is_err());
}

#[test]
fn pair_trivialization_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=6 {
        let g = pair_groupoid(n).unwrap();
        assert!(trivialize_pair(&g, &TwoCocycle::trivial(&g)).unwrap() == OneCochain::trivial(&g));
        let psi0 = random_cochain(&g, &mut rng);
        let phi = coboundary(&g, &psi0);
        let psi = trivialize_pair(&g, &phi).unwrap();
        assert_eq!(coboundary(&g, &psi), phi);
        // ψ and ψ₀ differ by a 1-cocycle.
        assert!(coboundary(&g, &psi.mul(&psi0.inverse()).unwrap()).is_trivial());
    }
}

#[test]
fn pair_trivialization_errors() {
    let p = Presentation::weyl(1).unwrap();
    let g = transformation_groupoid(&p, &lattice_box(&[3]), &[vec![0], vec![1], vec![-1]]).unwrap();
    // The closure already yields the full pair groupoid here, so use a unit groupoid instead.
    assert!(g.is_pair_groupoid());
    let units = transformation_groupoid(&p, &lattice_box(&[2]), &[vec![0]]).unwrap();
    assert!(matches!(trivialize_pair(&units, &TwoCocycle::trivial(&units)), Err(crate::Error::NotPairGroupoid(_))));
    let h = pair_groupoid(3).unwrap();
    let mut phi = TwoCocycle::trivial(&h);
    let (a, b) = (h.between(0, 1)[0], h.between(1, 2)[0]);
    phi.set(a, b, Phase::from_ratio(1, 4));
    assert!(matches!(trivialize_pair(&h, &phi), Err(crate::Error::CocycleViolated(_))));
}

fn product_pair(bounds: &[u32]) -> FiniteGroupoid {
    FiniteGroupoid::pair_on(lattice_box(bounds)).unwrap()
}

#[test]
fn exhaustion_trivialization() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // Depth-1 filtration coincides with the pair trivialization.
    let g = pair_groupoid(5).unwrap();
    let phi = coboundary(&g, &random_cochain(&g, &mut rng));
    let one = Filtration::new(&g, vec![vec![0; 5]]).unwrap();
    assert_eq!(trivialize_exhaustion(&g, &phi, &one).unwrap(), trivialize_pair(&g, &phi).unwrap());

    let g = product_pair(&[2, 1, 1]);
    let filt = tail_filtration(&g).unwrap();
    assert_eq!(filt.depth(), 3);
    let phi = coboundary(&g, &random_cochain(&g, &mut rng));
    let levels = trivialize_exhaustion_levels(&g, &phi, &filt).unwrap();
    for d in 1..levels.len() {
        for (a, p) in &levels[d - 1] {
            assert_eq!(levels[d][a], *p);
        }
    }
    let psi = trivialize_exhaustion(&g, &phi, &filt).unwrap();
    assert_eq!(coboundary(&g, &psi), phi);
    let triv = trivialize_exhaustion(&g, &TwoCocycle::trivial(&g), &filt).unwrap();
    assert_eq!(triv, OneCochain::trivial(&g));
}

#[test]
fn filtration_validation() {
    let g = product_pair(&[1, 1]);
    // Level 0 joins (0,0)~(1,1) but level 1 separates them.
    let bad = Filtration::new(&g, vec![vec![0, 1, 1, 0], vec![0, 0, 1, 1]]);
    assert!(matches!(bad, Err(crate::Error::FiltrationNotNested(0))));
    assert!(Filtration::new(&g, vec![vec![0, 0, 1, 1]]).is_err());
    let p = Presentation::weyl(1).unwrap();
    let units = transformation_groupoid(&p, &lattice_box(&[1]), &[vec![0]]).unwrap();
    assert!(Filtration::new(&units, vec![vec![0, 0]]).is_err());
}

#[test]
fn matrix_units() {
    let g = pair_groupoid(2).unwrap();
    let t = TwoCocycle::trivial(&g);
    let d = |a| ConvolutionElement::<PhaseScalar>::delta(&g, a);
    let (e01, e10, e00) = (g.between(0, 1)[0], g.between(1, 0)[0], g.between(0, 0)[0]);
    assert_eq!(convolution(&g, &d(e01), &d(e10), &t).unwrap(), d(e00));
    assert!(convolution(&g, &d(e01), &d(e01), &t).unwrap().is_zero());
    for n in 1..=5 {
        assert!(matrix_unit_check(&pair_groupoid(n).unwrap()).unwrap().passed());
    }
    let other = pair_groupoid(3).unwrap();
    assert!(matches!(convolution(&other, &d(e01), &d(e10), &t), Err(crate::Error::GroupoidMismatch)));
}

#[test]
fn uhf_depth_two() {
    let g = product_pair(&[2, 3]);
    let report = tensor_structure_check(&g, &[2, 3]).unwrap();
    assert!(report.passed());
    assert_eq!(report.products_checked, 144 * 144);
    assert_eq!(tail_filtration(&g).unwrap().depth(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coboundaries_pass_and_trivialize(n in 1usize..=8, seed in any::<u64>()) {
        let g = pair_groupoid(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = coboundary(&g, &random_cochain(&g, &mut rng));
        prop_assert!(check_cocycle(&g, &phi).unwrap().passed);
        prop_assert_eq!(coboundary(&g, &trivialize_pair(&g, &phi).unwrap()), phi);
    }

    #[test]
    fn twisted_convolution_laws(n in 2usize..=4, seed in any::<u64>()) {
        let g = pair_groupoid(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let psi = random_cochain(&g, &mut rng);
        let phi = coboundary(&g, &psi);
        let (x, y, z) = (random_element(&g, &mut rng, 3), random_element(&g, &mut rng, 3), random_element(&g, &mut rng, 3));
        let conv = |a: &ConvolutionElement<PhaseScalar>, b: &ConvolutionElement<PhaseScalar>| convolution(&g, a, b, &phi).unwrap();
        let star = |a: &ConvolutionElement<PhaseScalar>| involution(&g, a, &phi).unwrap();
        prop_assert_eq!(conv(&conv(&x, &y), &z), conv(&x, &conv(&y, &z)));
        prop_assert_eq!(star(&conv(&x, &y)), conv(&star(&y), &star(&x)));
        prop_assert_eq!(star(&star(&x)), x.clone());
        // Multiplying by ψ intertwines ∂ψ-twisted and untwisted convolution.
        let trivial = TwoCocycle::trivial(&g);
        let tx = twist_by_cochain(&g, &x, &psi).unwrap();
        let ty = twist_by_cochain(&g, &y, &psi).unwrap();
        prop_assert_eq!(twist_by_cochain(&g, &conv(&x, &y), &psi).unwrap(), convolution(&g, &tx, &ty, &trivial).unwrap());
    }

    #[test]
    fn float_convolution_is_associative(seed in any::<u64>()) {
        let g = pair_groupoid(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = coboundary(&g, &random_cochain(&g, &mut rng));
        let rand_el = |rng: &mut ChaCha8Rng| {
            let coeffs: Vec<(usize, Complex64)> = (0..5)
                .map(|_| (rng.random_range(0..g.len()), Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
                .collect();
            ConvolutionElement::from_coeffs(&g, coeffs).unwrap()
        };
        let (x, y, z) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
        let conv = |a: &ConvolutionElement<Complex64>, b: &ConvolutionElement<Complex64>| convolution(&g, a, b, &phi).unwrap();
        prop_assert!(conv(&conv(&x, &y), &z).distance(&conv(&x, &conv(&y, &z))) <= 1e-12);
    }
}
