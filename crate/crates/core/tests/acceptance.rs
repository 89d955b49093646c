//! Acceptance suite: one line per criterion, nonzero exit status if any fails.
//!
//! Run with `cargo test -p fellforge-core --test acceptance` (add
//! `--release` for timings representative of an optimized build).

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_rational::Rational64;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use fellforge::algebra::{lambda_cocycle, monomials_of_degree, rieffel_involute, rieffel_product, AlgebraElement, Presentation, ThetaMatrix};
use fellforge::characters::{certify_grid, evaluate_rational, rational_grid, ActionKernel, Character};
use fellforge::fell::{build_fibres, extract_twist, gram_defect};
use fellforge::groupoid::{
    check_cocycle, coboundary, matrix_unit_check, pair_groupoid, tail_filtration, tensor_structure_check, transformation_groupoid,
    trivialize_pair, FiniteGroupoid, OneCochain,
};
use fellforge::operator::{
    check_relations, graph_norm_directed_check, inducibility_matrix_check, toeplitz_suite, weyl_rep, weyl_rep_float, DiagonalRep,
    RELATION_TOLERANCE, TOEPLITZ_TOLERANCE,
};
use fellforge::phase::{rat, PhaseScalar};
use fellforge::random::{random_coefficient, random_degree, random_homogeneous, random_phase, random_theta};
use fellforge::window::{add, degree_box, lattice_box};
use fellforge::Phase;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn quarter() -> ThetaMatrix {
    ThetaMatrix::pair(2, 0, 1, Rational64::new(1, 4)).unwrap()
}

fn positive_characters() -> Outcome {
    let pres = Presentation::weyl(1).map_err(err)?;
    let grid = rational_grid(&[rat(0, 1)], &[rat(10, 1)], &[rat(1, 4)]).map_err(err)?;
    ensure(grid.len() == 41, || format!("grid has {} points", grid.len()))?;
    let certs = certify_grid(&pres, &grid, 16).map_err(err)?;
    let mut accepted = Vec::new();
    for (chi, cert) in &certs {
        if cert.is_refuted() {
            let value = cert.value.as_ref().ok_or("refutation without a value")?;
            let w = cert.witness.as_ref().ok_or("refutation without a witness")?;
            // Recompute χ(w* w) from the witness alone.
            let word = AlgebraElement::monomial(&pres, w.clone(), PhaseScalar::one());
            let recomputed = evaluate_rational(chi, &word.involute().multiply(&word).map_err(err)?).map_err(err)?;
            ensure(value.is_negative() && recomputed == *value, || format!("witness at {chi} does not refute: {value}"))?;
        } else {
            accepted.push(chi.clone());
        }
    }
    let expected: Vec<Character> = (0..=10).map(|n| Character::lattice(&[n])).collect();
    ensure(accepted == expected, || format!("accepted {accepted:?}"))?;
    Ok(format!("{} grid points, accepted exactly 0..=10 up to depth 16, {} witnesses verified", grid.len(), grid.len() - 11))
}

fn partial_action_translation() -> Outcome {
    let mut checked = 0usize;
    let mut compositions = 0usize;
    let mut window_points = 0usize;
    for m in 1..=2usize {
        let pres = Presentation::weyl(m).map_err(err)?;
        let window = lattice_box(&vec![20; m]);
        let degrees = degree_box(m, 3);
        checked += degrees
            .par_iter()
            .map(|k| -> Result<usize, String> {
                let canonical = pres.canonical_representative(k).map_err(err)?;
                // A second representative of the same degree: b · (1 + N_1).
                let shifted = canonical
                    .multiply(&(&AlgebraElement::number(&pres, 0).map_err(err)? + &AlgebraElement::one(&pres)))
                    .map_err(err)?;
                let kernels =
                    [ActionKernel::with_representative(canonical).map_err(err)?, ActionKernel::with_representative(shifted).map_err(err)?];
                for n in &window {
                    let chi = Character::lattice(n);
                    let target: Vec<i64> = n.iter().zip(k).map(|(x, g)| x - g).collect();
                    let expected = target.iter().all(|&t| t >= 0).then(|| Character::lattice(&target));
                    for kernel in &kernels {
                        let got = kernel.apply(&chi).map_err(err)?;
                        ensure(got == expected, || format!("θ_{k:?}({n:?}) = {got:?}, expected {expected:?}"))?;
                    }
                }
                Ok(2 * window.len())
            })
            .sum::<Result<usize, String>>()?;
        // Compositions on a smaller block: every (g, h) pair is still exhausted.
        let block = lattice_box(&vec![8; m]);
        let kernels: HashMap<Vec<i64>, ActionKernel> = degree_box(m, 6)
            .into_par_iter()
            .map(|k| ActionKernel::canonical(&pres, &k).map(|kernel| (k, kernel)))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        compositions += degrees
            .par_iter()
            .map(|g| -> Result<usize, String> {
                let mut count = 0;
                for h in &degrees {
                    let gh = add(g, h);
                    for n in &block {
                        let chi = Character::lattice(n);
                        let Some(inner) = kernels[h].apply(&chi).map_err(err)? else { continue };
                        let Some(outer) = kernels[g].apply(&inner).map_err(err)? else { continue };
                        let direct = kernels[&gh].apply(&chi).map_err(err)?;
                        ensure(direct.as_ref() == Some(&outer), || format!("θ_g∘θ_h ⊄ θ_gh at g = {g:?}, h = {h:?}, n = {n:?}"))?;
                        count += 1;
                    }
                }
                Ok(count)
            })
            .sum::<Result<usize, String>>()?;
        window_points += window.len();
    }
    Ok(format!("{checked} translations on {window_points} window points with two representatives each, {compositions} compositions"))
}

fn pair_groupoid_model() -> Outcome {
    let pres = Presentation::weyl(1).map_err(err)?;
    let m = 10i64;
    let window = lattice_box(&[m as u32]);
    let bound = degree_box(1, m);
    let g = transformation_groupoid(&pres, &window, &bound).map_err(err)?;
    let pair = pair_groupoid((m + 1) as usize).map_err(err)?;
    ensure(g.len() == pair.len(), || format!("{} arrows against {}", g.len(), pair.len()))?;
    ensure(g.verify_axioms().passed(), || "groupoid axioms fail".into())?;
    let iso = g.pair_isomorphism().ok_or("not isomorphic to the pair groupoid")?;
    for (a, b) in g.composable_pairs() {
        let ab = g.compose(a, b).unwrap();
        ensure(iso[ab] == (iso[a].0, iso[b].1), || format!("composition of {a}, {b} not preserved"))?;
    }
    let report = matrix_unit_check(&g).map_err(err)?;
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!("{} arrows ≅ pair groupoid on {} points, {} matrix-unit products exact", g.len(), m + 1, report.products_checked))
}

fn rank_one_fibres() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut pairs = 0usize;
    let mut evaluations = 0usize;
    for (m, pres) in [(1, Presentation::weyl(1).map_err(err)?), (2, Presentation::twisted(quarter()).map_err(err)?)] {
        let window = lattice_box(&vec![6; m]);
        for _ in 0..300 {
            let g = random_degree(&mut rng, m, 3);
            let a = random_homogeneous(&mut rng, &pres, &g, 3, 5);
            let b = random_homogeneous(&mut rng, &pres, &g, 3, 5);
            for n in &window {
                let d = gram_defect(&Character::lattice(n), &a, &b).map_err(err)?;
                ensure(d.value_is_zero(), || format!("Gram defect {d} at {n:?} for a = {a}, b = {b}"))?;
                evaluations += 1;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} random pairs, {evaluations} exact Gram determinants vanish"))
}

fn no_twist() -> Outcome {
    let mut detail = Vec::new();
    for (m, bounds) in [(1, vec![6]), (2, vec![2, 2]), (3, vec![1, 1, 1])] {
        let pres = Presentation::weyl(m).map_err(err)?;
        let radius = *bounds.iter().max().unwrap() as i64;
        let bundle = build_fibres(&pres, &lattice_box(&bounds), &degree_box(m, radius)).map_err(err)?;
        let phi = extract_twist(&bundle).map_err(err)?;
        ensure(phi.is_trivial(), || format!("nontrivial twist for m = {m}"))?;
        detail.push(format!("m={m}: {} pairs", phi.values().len()));
    }
    Ok(format!("extracted twist ≡ 1 ({})", detail.join(", ")))
}

fn random_cochain(g: &FiniteGroupoid, rng: &mut ChaCha8Rng) -> OneCochain {
    OneCochain::from_fn(g, |a| if g.is_unit(a) { Phase::one() } else { random_phase(rng, 12) })
}

fn cohomology_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    for round in 0..56 {
        let n = 1 + round % 8;
        let g = pair_groupoid(n).map_err(err)?;
        let phi = coboundary(&g, &random_cochain(&g, &mut rng));
        let verdict = check_cocycle(&g, &phi).map_err(err)?;
        ensure(verdict.passed, || format!("coboundary fails the cocycle check: {verdict:?}"))?;
        let psi = trivialize_pair(&g, &phi).map_err(err)?;
        ensure(coboundary(&g, &psi) == phi, || format!("∂ψ ≠ φ on {n} points"))?;
        count += 1;
    }
    let pres = Presentation::twisted(quarter()).map_err(err)?;
    let bundle = build_fibres(&pres, &lattice_box(&[2, 2]), &degree_box(2, 2)).map_err(err)?;
    let g = bundle.groupoid();
    let phi = extract_twist(&bundle).map_err(err)?;
    ensure(!phi.is_trivial(), || "twisted-Weyl twist unexpectedly trivial".into())?;
    ensure(check_cocycle(g, &phi).map_err(err)?.passed, || "twisted-Weyl twist fails the cocycle check".into())?;
    let psi = trivialize_pair(g, &phi).map_err(err)?;
    ensure(coboundary(g, &psi) == phi, || "twisted-Weyl twist does not trivialize".into())?;
    Ok(format!("{count} coboundaries on 1..=8 points round-trip exactly; twisted-Weyl twist on 9 points trivializes"))
}

fn rieffel_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut triples = 0;
    for _ in 0..150 {
        let m = rng.random_range(2..=3);
        let theta = random_theta(&mut rng, m, 12);
        let (g, h, k) = (random_degree(&mut rng, m, 4), random_degree(&mut rng, m, 4), random_degree(&mut rng, m, 4));
        let lhs = lambda_cocycle(&theta, &g, &h) * lambda_cocycle(&theta, &add(&g, &h), &k);
        let rhs = lambda_cocycle(&theta, &h, &k) * lambda_cocycle(&theta, &g, &add(&h, &k));
        ensure(lhs == rhs, || format!("Λ fails the cocycle identity at {g:?}, {h:?}, {k:?}"))?;
        triples += 1;
    }
    let pres = Presentation::twisted(quarter()).map_err(err)?;
    let deformation = ThetaMatrix::pair(2, 0, 1, Rational64::new(1, 3)).map_err(err)?;
    let mut assoc = 0;
    let mut involutions = 0;
    for _ in 0..120 {
        let mono = |rng: &mut ChaCha8Rng| loop {
            let g = random_degree(rng, 2, 2);
            let pool = monomials_of_degree(&g, 4);
            if !pool.is_empty() {
                return AlgebraElement::monomial(&pres, pool[rng.random_range(0..pool.len())].clone(), random_coefficient(rng));
            }
        };
        let (x, y, z) = (mono(&mut rng), mono(&mut rng), mono(&mut rng));
        let left = rieffel_product(&rieffel_product(&x, &y, &deformation).map_err(err)?, &z, &deformation).map_err(err)?;
        let right = rieffel_product(&x, &rieffel_product(&y, &z, &deformation).map_err(err)?, &deformation).map_err(err)?;
        ensure(left == right, || format!("deformed product not associative on {x}, {y}, {z}"))?;
        assoc += 1;
        let g = random_degree(&mut rng, 2, 2);
        let a = random_homogeneous(&mut rng, &pres, &g, 3, 4);
        let b = random_homogeneous(&mut rng, &pres, &g, 3, 4);
        let deformed = rieffel_product(&rieffel_involute(&a, &deformation).map_err(err)?, &b, &deformation).map_err(err)?;
        ensure(deformed == a.involute().multiply(&b).map_err(err)?, || format!("a†*b ≠ a*b for a = {a}, b = {b}"))?;
        involutions += 1;
    }
    Ok(format!("{triples} Λ triples, {assoc} associativity triples, {involutions} equal-degree involution pairs, all exact"))
}

fn truncated_representations() -> Outcome {
    let single = check_relations(&weyl_rep(&[50], &ThetaMatrix::zero(1)).map_err(err)?, 0.0).map_err(err)?;
    let twisted = check_relations(&weyl_rep(&[10, 10], &quarter()).map_err(err)?, 0.0).map_err(err)?;
    let float = check_relations(&weyl_rep_float(&[10, 10], &quarter().to_f64()).map_err(err)?, RELATION_TOLERANCE).map_err(err)?;
    for (name, report) in [("m=1 M=50", &single), ("m=2 M=(10,10)", &twisted), ("m=2 float", &float)] {
        if let Some(bad) = report.identities.iter().find(|r| !r.pass) {
            return Err(format!("{name}: {} residual {} at {:?}", bad.identity, bad.residual, bad.witness));
        }
    }
    let worst = float.identities.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(format!(
        "exact residuals 0 ({} + {} identities), float max residual {worst:.1e} ≤ {RELATION_TOLERANCE:.0e}",
        single.identities.len(),
        twisted.identities.len()
    ))
}

fn graph_norm_bound() -> Outcome {
    let pres = Presentation::weyl(1).map_err(err)?;
    let rep = weyl_rep_float(&[20], &ThetaMatrix::zero(1).to_f64()).map_err(err)?;
    let n = AlgebraElement::number(&pres, 0).map_err(err)?;
    let list = vec![n.clone(), n.multiply(&n).map_err(err)?, &n + &AlgebraElement::one(&pres)];
    let report = graph_norm_directed_check(&rep, &list, 1000, &mut ChaCha8Rng::seed_from_u64(9)).map_err(err)?;
    ensure(report.passed(), || format!("{} violations, max ratio {}", report.violations, report.max_ratio))?;
    Ok(format!("{} vectors, {} checks, 0 violations, max ratio {:.4} ≤ 5/4", report.samples, report.checks, report.max_ratio))
}

fn toeplitz_identities() -> Outcome {
    let start = Instant::now();
    let report = toeplitz_suite(200).map_err(err)?;
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(bad) = report.identities.iter().find(|r| !r.pass) {
        return Err(format!("{} residual {:.2e} at column {:?}", bad.identity, bad.residual, bad.witness));
    }
    ensure(elapsed < 5.0, || format!("took {elapsed:.2} s"))?;
    let worst = report.identities.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(format!("N=200, max interior residual {worst:.1e} < {TOEPLITZ_TOLERANCE:.0e}, {elapsed:.2} s"))
}

fn uhf_truncation() -> Outcome {
    let pres = Presentation::weyl(2).map_err(err)?;
    let g = transformation_groupoid(&pres, &lattice_box(&[2, 3]), &degree_box(2, 3)).map_err(err)?;
    let filtration = tail_filtration(&g).map_err(err)?;
    ensure(filtration.depth() == 2, || format!("filtration depth {}", filtration.depth()))?;
    let report = tensor_structure_check(&g, &[2, 3]).map_err(err)?;
    ensure(report.passed(), || format!("{report:?}"))?;
    Ok(format!("M_3 ⊗ M_4: {} structure constants exact", report.products_checked))
}

fn inducibility_positivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut families = 0;
    let mut worst = f64::INFINITY;
    let mut singular = 0;
    for (m, bounds, pres) in [
        (1, vec![8], Presentation::weyl(1).map_err(err)?),
        (2, vec![3, 3], Presentation::twisted(quarter()).map_err(err)?),
    ] {
        let rep = DiagonalRep::lattice(&pres, &bounds).map_err(err)?;
        for _ in 0..60 {
            let g = random_degree(&mut rng, m, 2);
            let size = rng.random_range(1..=4);
            let mut family: Vec<_> = (0..size)
                .map(|_| (random_homogeneous(&mut rng, &pres, &g, 3, 4), (0..rep.dim()).map(|_| random_coefficient(&mut rng)).collect::<Vec<_>>()))
                .collect();
            if families % 3 == 0 {
                // A repeated member makes the Gram matrix singular.
                let (a, xi) = family[0].clone();
                family.push((a.scale(&PhaseScalar::from_int(2)), xi));
            }
            let v = inducibility_matrix_check(&rep, &family).map_err(err)?;
            ensure(v.positive, || format!("family of degree {g:?} fails: {v:?}"))?;
            worst = worst.min(v.min_eigenvalue);
            singular += usize::from(v.min_eigenvalue.abs() < 1e-6);
            families += 1;
        }
    }
    let pres = Presentation::weyl(1).map_err(err)?;
    let half = DiagonalRep::new(&pres, vec![Character::new(vec![rat(1, 2)])]).map_err(err)?;
    let a = AlgebraElement::generator(&pres, 0).map_err(err)?;
    let v = inducibility_matrix_check(&half, &[(a.multiply(&a).map_err(err)?, vec![PhaseScalar::one()])]).map_err(err)?;
    ensure(!v.positive && v.exact_value.as_deref() == Some("-1/4"), || format!("t = 1/2 not refuted: {v:?}"))?;
    Ok(format!("{families} lattice families positive ({singular} singular, min eigenvalue {worst:.1e}); t=1/2 refuted with exact value -1/4"))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("positive characters", positive_characters),
        ("partial action", partial_action_translation),
        ("pair groupoid", pair_groupoid_model),
        ("rank-one fibres", rank_one_fibres),
        ("no-twist criterion", no_twist),
        ("cohomology round-trip", cohomology_round_trip),
        ("Rieffel laws", rieffel_laws),
        ("truncated representations", truncated_representations),
        ("graph-norm bound", graph_norm_bound),
        ("Toeplitz identities", toeplitz_identities),
        ("UHF truncation", uhf_truncation),
        ("inducibility positivity", inducibility_positivity),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2} s]: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2} s]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
