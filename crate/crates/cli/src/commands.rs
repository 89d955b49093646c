use anyhow::Result;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use fellforge::algebra::{
    lambda_cocycle, monomials_of_degree, rieffel_involute, rieffel_product, AlgebraElement, ThetaMatrix,
};
use fellforge::characters::{certify_grid, evaluate_rational, Character};
use fellforge::fell::{
    build_fibres, check_fell_axioms, deform_bundle, extract_twist, inner_trivialization, GradingUnitary,
};
use fellforge::groupoid::{
    check_cocycle, coboundary, matrix_unit_check, transformation_groupoid, trivialize_pair, TwoCocycle,
};
use fellforge::operator::{
    cayley, check_relations, defect_lower_bound, deficiency_model, graph_norm_directed_check, inducibility_matrix_check,
    toeplitz_suite, weyl_rep, weyl_rep_float, DiagonalRep, SurdScalar,
};
use fellforge::phase::{rat, Phase, PhaseScalar};
use fellforge::random::{random_coefficient, random_degree, random_homogeneous};
use fellforge::scalar::Scalar;
use fellforge::window::add;
use fellforge::algebra::Presentation;

use crate::config::{RepMode, RunConfig, Validated};

/// One named check; a failure carries a reproducer.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<Value>,
}

impl Verdict {
    fn new(name: &str, passed: bool, reproducer: impl FnOnce() -> Value) -> Verdict {
        Verdict { name: name.into(), passed, reproducer: (!passed).then(reproducer) }
    }
}

pub struct Outcome {
    pub results: Value,
    pub verdicts: Vec<Verdict>,
}

/// Command-line overrides shared by all commands.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub depth: Option<usize>,
    pub inject_corruption: bool,
}

pub fn characters(cfg: &RunConfig, v: &Validated, o: &Overrides) -> Result<Outcome> {
    let depth = o.depth.unwrap_or(cfg.characters.depth);
    let certs = if v.grid.is_empty() { Vec::new() } else { certify_grid(&v.pres, &v.grid, depth)? };
    let mut positive = Vec::new();
    let mut refuted = Vec::new();
    let mut witnesses_ok = true;
    let mut bad_witness = None;
    for (chi, cert) in &certs {
        let record = cert.to_record();
        if cert.is_refuted() {
            // Recompute the witness value from scratch.
            let ok = match (&cert.witness, &cert.value) {
                (Some(w), Some(value)) => {
                    let x = AlgebraElement::monomial(&v.pres, w.clone(), PhaseScalar::one());
                    let again = evaluate_rational(chi, &x.involute().multiply(&x)?)?;
                    again == *value && again < rat(0, 1)
                }
                _ => false,
            };
            if !ok && bad_witness.is_none() {
                bad_witness = Some(json!({ "point": chi, "certificate": record }));
            }
            witnesses_ok &= ok;
            refuted.push(json!({ "point": chi, "certificate": record }));
        } else {
            positive.push(chi.clone());
        }
    }
    Ok(Outcome {
        results: json!({
            "depth": depth,
            "scope": format!("positive up to depth {depth}"),
            "grid_points": v.grid.len(),
            "positive": positive,
            "refuted": refuted,
        }),
        verdicts: vec![Verdict::new("refutation witnesses recompute to negative values", witnesses_ok, || {
            bad_witness.unwrap_or(Value::Null)
        })],
    })
}

pub fn groupoid(_cfg: &RunConfig, v: &Validated, _o: &Overrides) -> Result<Outcome> {
    let g = transformation_groupoid(&v.pres, &v.window, &v.group_bound)?;
    let axioms = g.verify_axioms();
    let mut verdicts = vec![Verdict::new("groupoid axioms", axioms.passed(), || json!(axioms.failure))];
    let iso = g.pair_isomorphism().is_some();
    let matrix_units = if iso {
        let report = matrix_unit_check(&g)?;
        verdicts.push(Verdict::new("untwisted convolution reproduces the matrix-unit table", report.passed(), || {
            json!(report.first_mismatch)
        }));
        Some(report)
    } else {
        None
    };
    let restriction = g.restriction().cloned().unwrap_or_default();
    let warnings: Vec<String> = restriction
        .dropped
        .iter()
        .map(|d| format!("arrow g = {:?} at {:?} leaves the window (target {:?}) and was dropped", d.g, d.x, d.target))
        .collect();
    Ok(Outcome {
        results: json!({
            "objects": g.objects().len(),
            "arrows": g.len(),
            "group_bound": v.group_bound.len(),
            "isomorphic_to_pair_groupoid": iso,
            "unit_groupoid": g.len() == g.objects().len(),
            "axioms": axioms,
            "matrix_units": matrix_units,
            "restriction": restriction,
            "warnings": warnings,
        }),
        verdicts,
    })
}

/// Replace the value on the first composable pair of non-unit arrows by its
/// product with `e(1/7)`.
fn corrupt(g: &fellforge::groupoid::FiniteGroupoid, phi: &TwoCocycle) -> TwoCocycle {
    let mut values = phi.values().clone();
    if let Some(key) = g.composable_pairs().into_iter().find(|&(a, b)| !g.is_unit(a) && !g.is_unit(b) && !g.is_unit(g.compose(a, b).unwrap())) {
        let p = values[&key] * Phase::from_angle(Rational64::new(1, 7));
        values.insert(key, p);
    }
    TwoCocycle::from_map(g, values)
}

fn arrow_json(g: &fellforge::groupoid::FiniteGroupoid, a: usize) -> Value {
    let arrow = g.arrow(a);
    json!({ "g": arrow.g, "source": g.objects()[arrow.source], "target": g.objects()[arrow.target] })
}

pub fn twist(_cfg: &RunConfig, v: &Validated, o: &Overrides) -> Result<Outcome> {
    let bundle = build_fibres(&v.pres, &v.window, &v.group_bound)?;
    let g = bundle.groupoid();
    let mut phi = extract_twist(&bundle)?;
    if o.inject_corruption {
        phi = corrupt(g, &phi);
    }
    let verdict = check_cocycle(g, &phi)?;
    let mut verdicts = vec![Verdict::new("twist satisfies the 2-cocycle identity", verdict.passed, || {
        json!({
            "triple": verdict.first_failure.map(|t| t.iter().map(|&a| arrow_json(g, a)).collect::<Vec<_>>()),
            "unnormalized_pair": verdict.unnormalized_pair.map(|(a, b)| [arrow_json(g, a), arrow_json(g, b)]),
        })
    })];
    let trivialization = if verdict.passed && g.is_pair_groupoid() {
        let psi = trivialize_pair(g, &phi)?;
        let exact = coboundary(g, &psi) == phi;
        verdicts.push(Verdict::new("trivialization ∂ψ = φ", exact, || Value::Null));
        json!({
            "status": "found",
            "cochain": (0..g.len()).map(|a| json!({ "arrow": arrow_json(g, a), "angle": psi.get(a).angle().to_string() })).collect::<Vec<_>>(),
        })
    } else if !verdict.passed {
        json!({ "status": "skipped: not a cocycle" })
    } else {
        json!({ "status": "skipped: not a pair groupoid" })
    };
    let axioms = check_fell_axioms(&bundle)?;
    verdicts.push(Verdict::new("Fell-bundle axioms", axioms.passed(), || json!(axioms.counterexamples)));
    Ok(Outcome {
        results: json!({
            "objects": g.objects().len(),
            "arrows": g.len(),
            "twist_trivial": phi.is_trivial(),
            "cocycle": verdict,
            "twist": phi.to_record(g),
            "trivialization": trivialization,
            "fell_axioms": axioms,
        }),
        verdicts,
    })
}

fn random_monomial(rng: &mut ChaCha8Rng, pres: &std::sync::Arc<Presentation>, m: usize) -> AlgebraElement {
    loop {
        let g = random_degree(rng, m, 2);
        let pool = monomials_of_degree(&g, 4);
        if !pool.is_empty() {
            return AlgebraElement::monomial(pres, pool[rng.random_range(0..pool.len())].clone(), random_coefficient(rng));
        }
    }
}

pub fn deform(cfg: &RunConfig, v: &Validated, o: &Overrides) -> Result<Outcome> {
    let theta = &v.deformation;
    let m = v.pres.m();
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let samples = cfg.deform.samples;
    let mut verdicts = Vec::new();

    let mut bad = None;
    for _ in 0..samples {
        let (g, h, k) = (random_degree(&mut rng, m, 4), random_degree(&mut rng, m, 4), random_degree(&mut rng, m, 4));
        let lhs = lambda_cocycle(theta, &g, &h) * lambda_cocycle(theta, &add(&g, &h), &k);
        let rhs = lambda_cocycle(theta, &h, &k) * lambda_cocycle(theta, &g, &add(&h, &k));
        if lhs != rhs && bad.is_none() {
            bad = Some(json!({ "g": g, "h": h, "k": k }));
        }
    }
    verdicts.push(Verdict::new("Λ is a 2-cocycle", bad.is_none(), || bad.clone().unwrap()));

    let mut bad = None;
    for _ in 0..samples {
        let (x, y, z) = (random_monomial(&mut rng, &v.pres, m), random_monomial(&mut rng, &v.pres, m), random_monomial(&mut rng, &v.pres, m));
        let left = rieffel_product(&rieffel_product(&x, &y, theta)?, &z, theta)?;
        let right = rieffel_product(&x, &rieffel_product(&y, &z, theta)?, theta)?;
        if left != right && bad.is_none() {
            bad = Some(json!({ "x": x.to_serial(), "y": y.to_serial(), "z": z.to_serial() }));
        }
    }
    verdicts.push(Verdict::new("deformed product is associative", bad.is_none(), || bad.clone().unwrap()));

    let mut bad = None;
    for _ in 0..samples {
        let g = random_degree(&mut rng, m, 2);
        let a = random_homogeneous(&mut rng, &v.pres, &g, 3, 4);
        let b = random_homogeneous(&mut rng, &v.pres, &g, 3, 4);
        let deformed = rieffel_product(&rieffel_involute(&a, theta)?, &b, theta)?;
        if deformed != a.involute().multiply(&b)? && bad.is_none() {
            bad = Some(json!({ "a": a.to_serial(), "b": b.to_serial() }));
        }
    }
    verdicts.push(Verdict::new("a†*b = a*b on equal degrees", bad.is_none(), || bad.clone().unwrap()));

    let base = build_fibres(&v.pres, &v.window, &v.group_bound)?;
    let deformed = deform_bundle(&base, theta)?;
    let axioms = check_fell_axioms(&deformed)?;
    verdicts.push(Verdict::new("deformed Fell-bundle axioms", axioms.passed(), || json!(axioms.counterexamples)));
    let inner = inner_trivialization(base.groupoid(), &GradingUnitary::new(m), |g, h| lambda_cocycle(theta, g, h))?;
    let bookkeeping = inner.verify_bookkeeping(base.groupoid())?;
    let g = base.groupoid();
    verdicts.push(Verdict::new("inner phases satisfy c(α)c(β) = c(αβ)Λ(k,l)", bookkeeping.passed(), || {
        json!(bookkeeping.first_failure.map(|(a, b)| [arrow_json(g, a), arrow_json(g, b)]))
    }));
    let multiplicativity = inner.verify_multiplicativity(&base, &deformed)?;
    verdicts.push(Verdict::new("ψ is multiplicative from the deformed to the base bundle", multiplicativity.passed(), || {
        json!(multiplicativity.first_failure.map(|(a, b)| [arrow_json(g, a), arrow_json(g, b)]))
    }));
    let back = deform_bundle(&deformed, &theta.neg())?;
    let round_trip = extract_twist(&back)? == extract_twist(&base)? && back.deformation() == base.deformation();
    verdicts.push(Verdict::new("deforming by Θ and then −Θ is the identity", round_trip, || Value::Null));

    Ok(Outcome {
        results: json!({
            "deformation": theta.to_strings(),
            "samples": samples,
            "fell_axioms": axioms,
            "bookkeeping": bookkeeping,
            "multiplicativity": multiplicativity,
            "inner_trivialization_identity": inner.is_identity(),
        }),
        verdicts,
    })
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn rep_verify(cfg: &RunConfig, v: &Validated, o: &Overrides) -> Result<Outcome> {
    let tolerance = o.tolerance.unwrap_or(cfg.rep.tolerance);
    let mut rng = ChaCha8Rng::seed_from_u64(o.seed);
    let m = v.pres.m();
    let mut verdicts = Vec::new();

    let relations = match cfg.rep.mode {
        RepMode::Exact => {
            let mut rep = weyl_rep(&v.rep_bounds, v.pres.theta())?;
            if o.inject_corruption {
                rep.set_generator_entry(0, 0, 1, SurdScalar::from_int(2));
            }
            check_relations(&rep, tolerance)?
        }
        RepMode::Float => {
            let mut rep = weyl_rep_float(&v.rep_bounds, &v.float_theta)?;
            if o.inject_corruption {
                rep.set_generator_entry(0, 0, 1, Complex64::new(2.0, 0.0));
            }
            check_relations(&rep, tolerance)?
        }
    };
    for r in &relations.identities {
        verdicts.push(Verdict::new(&r.identity, r.pass, || json!({ "basis_vector": r.witness, "residual": r.residual })));
    }

    let single = Presentation::weyl(1)?;
    let graph_rep = weyl_rep_float(&[cfg.rep.graph_bound], &ThetaMatrix::zero(1).to_f64())?;
    let n = AlgebraElement::number(&single, 0)?;
    let list = vec![n.clone(), n.multiply(&n)?, &n + &AlgebraElement::one(&single)];
    let graph = graph_norm_directed_check(&graph_rep, &list, cfg.rep.graph_samples, &mut rng)?;
    verdicts.push(Verdict::new("graph norms bounded by 5/4 of the b-norm", graph.passed(), || json!(graph.counterexample)));

    let t = random_hermitian(&mut rng, cfg.rep.cayley_size);
    let c = cayley(&t)?;
    verdicts.push(Verdict::new("Cayley transform of a Hermitian matrix is unitary", c.regular_self_adjoint, || {
        json!({ "isometry_defect": c.isometry_defect, "coisometry_defect": c.coisometry_defect })
    }));
    let mut skew = t.clone();
    skew[(0, cfg.rep.cayley_size - 1)] += Complex64::new(0.5, 0.5);
    let control = cayley(&skew)?;
    let bound = defect_lower_bound(&skew);
    verdicts.push(Verdict::new(
        "non-Hermitian control meets the defect lower bound",
        !control.regular_self_adjoint && control.isometry_defect >= bound,
        || json!({ "isometry_defect": control.isometry_defect, "lower_bound": bound }),
    ));
    let deficiency = deficiency_model(20)?;
    verdicts.push(Verdict::new("truncated Toeplitz generator is a non-unitary isometry on the interior", deficiency.non_unitary_isometry, || {
        json!(deficiency)
    }));

    let diagonal = DiagonalRep::lattice(&v.pres, &v.bounds)?;
    let mut families = Vec::new();
    let mut failing = None;
    for _ in 0..cfg.rep.inducibility_families {
        let g = random_degree(&mut rng, m, 2);
        let size = rng.random_range(1..=3);
        let family: Vec<(AlgebraElement, Vec<PhaseScalar>)> = (0..size)
            .map(|_| {
                (random_homogeneous(&mut rng, &v.pres, &g, 3, 4), (0..diagonal.dim()).map(|_| random_coefficient(&mut rng)).collect())
            })
            .collect();
        let verdict = inducibility_matrix_check(&diagonal, &family)?;
        if !verdict.positive && failing.is_none() {
            failing = Some(json!({ "degree": g, "elements": family.iter().map(|(a, _)| a.to_serial()).collect::<Vec<_>>() }));
        }
        families.push(verdict.min_eigenvalue);
    }
    verdicts.push(Verdict::new("lattice Gram matrices are positive semidefinite", failing.is_none(), || failing.clone().unwrap()));
    let mut half = vec![rat(0, 1); m];
    half[0] = rat(1, 2);
    let formal = DiagonalRep::new(&v.pres, vec![Character::new(half)])?;
    let a = AlgebraElement::generator(&v.pres, 0)?;
    let refutation = inducibility_matrix_check(&formal, &[(a.multiply(&a)?, vec![PhaseScalar::one()])])?;
    verdicts.push(Verdict::new("formal character t = 1/2 is refuted", !refutation.positive, || json!(refutation)));

    Ok(Outcome {
        results: json!({
            "mode": cfg.rep.mode,
            "tolerance": tolerance,
            "relations": relations,
            "graph_norms": graph,
            "cayley": { "size": cfg.rep.cayley_size, "isometry_defect": c.isometry_defect, "coisometry_defect": c.coisometry_defect, "hermitian_defect": c.hermitian_defect },
            "cayley_control": { "isometry_defect": control.isometry_defect, "lower_bound": bound },
            "deficiency": deficiency,
            "inducibility": {
                "families": families.len(),
                "min_eigenvalue": families.iter().copied().fold(f64::INFINITY, f64::min),
                "formal_refutation": refutation,
            },
        }),
        verdicts,
    })
}

pub fn toeplitz(cfg: &RunConfig, _v: &Validated, o: &Overrides) -> Result<Outcome> {
    let mut report = toeplitz_suite(cfg.toeplitz.size)?;
    if let Some(t) = o.tolerance {
        for r in &mut report.identities {
            r.tolerance = t;
            r.pass = r.residual < t;
            if r.pass {
                r.witness = None;
            }
        }
    }
    let verdicts = report
        .identities
        .iter()
        .map(|r| Verdict::new(&r.identity, r.pass, || json!({ "column": r.witness, "residual": r.residual })))
        .collect();
    Ok(Outcome { results: json!(report), verdicts })
}

/// Echo of the fields a command actually used, for the report.
pub fn echo(cfg: &RunConfig) -> Value {
    let mut v = serde_json::to_value(cfg).unwrap_or(Value::Null);
    if let Value::Object(map) = &mut v {
        map.remove("output");
    }
    v
}
