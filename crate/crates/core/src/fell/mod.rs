//! One-dimensional fibres `B_g` over the lattice characters of a window,
//! their twist, the Fell-bundle axioms, and Rieffel deformation of the
//! bundle.
//!
//! The fibre of degree `g` at `χ_x` is spanned by a representative
//! `s ∈ A_g` with `χ_x(s* s) > 0`. Over the arrow `(g, x)` the unit vector is
//! `s / χ_x(s* s)^{1/2}`, and for composable `(g₁, θ_{g₂}x)·(g₂, x)` the
//! product of unit vectors is `φ(g₁, g₂, x)` times the unit vector of
//! degree `g₁ + g₂`.

mod inner;

pub use inner::{inner_trivialization, GradingUnitary, InnerTrivialization, MultiplicativityReport};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{lambda_cocycle, AlgebraElement, Degree, Presentation, SerialMonomial, ThetaMatrix};
use crate::characters::{evaluate, Character};
use crate::error::{Error, Result};
use crate::groupoid::{transformation_groupoid, FiniteGroupoid, TwoCocycle};
use crate::phase::{Phase, PhaseScalar};
use crate::window::{add, neg, Point};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreEntry {
    pub point: Point,
    representative: usize,
    pub norm: BigRational,
}

/// Per-point representatives of one degree. Points outside the support have
/// no entry; a fibre with no entries is kept.
#[derive(Clone, Debug)]
pub struct FellFibre {
    degree: Degree,
    representatives: Vec<AlgebraElement>,
    entries: BTreeMap<usize, FibreEntry>,
}

impl FellFibre {
    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    /// Entries keyed by object index of the bundle's groupoid.
    pub fn entries(&self) -> &BTreeMap<usize, FibreEntry> {
        &self.entries
    }

    pub fn entry(&self, x: usize) -> Option<&FibreEntry> {
        self.entries.get(&x)
    }

    pub fn representative(&self, x: usize) -> Option<&AlgebraElement> {
        self.entries.get(&x).map(|e| &self.representatives[e.representative])
    }

    pub fn support(&self) -> Vec<&Point> {
        self.entries.values().map(|e| &e.point).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn intern(&mut self, b: AlgebraElement) -> usize {
        match self.representatives.iter().position(|r| *r == b) {
            Some(i) => i,
            None => {
                self.representatives.push(b);
                self.representatives.len() - 1
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct FellBundle {
    pres: Arc<Presentation>,
    groupoid: FiniteGroupoid,
    fibres: BTreeMap<Degree, FellFibre>,
    deformation: ThetaMatrix,
}

fn lattice_value(x: &[i64], e: &AlgebraElement) -> Result<PhaseScalar> {
    evaluate(&Character::lattice(x), e)
}

fn norm_of(x: &[i64], b: &AlgebraElement) -> Result<BigRational> {
    let v = lattice_value(x, &b.involute().multiply(b)?)?;
    v.real_rational().ok_or_else(|| Error::NotRational(v.to_string()))
}

/// Fibres with canonical representatives for every degree in `degrees` and
/// every arrow label of the transformation groupoid of `window`.
pub fn build_fibres(pres: &Arc<Presentation>, window: &[Point], degrees: &[Degree]) -> Result<FellBundle> {
    build_fibres_with(pres, window, degrees, |g, _| pres.canonical_representative(g))
}

/// As [`build_fibres`], with `choice(g, x)` supplying the representative at
/// each support point. The support is that of the canonical representative;
/// degree 0 always uses the representative `1`.
pub fn build_fibres_with<F>(pres: &Arc<Presentation>, window: &[Point], degrees: &[Degree], choice: F) -> Result<FellBundle>
where
    F: Fn(&[i64], &Point) -> Result<AlgebraElement> + Sync,
{
    let groupoid = transformation_groupoid(pres, window, degrees)?;
    let mut labels: BTreeSet<Degree> = degrees.iter().cloned().collect();
    labels.extend(groupoid.arrows().iter().map(|a| a.g.clone()));
    labels.insert(vec![0; pres.m()]);
    let objects = groupoid.objects().to_vec();
    let fibres = labels
        .into_par_iter()
        .map(|g| {
            let canonical = pres.canonical_representative(&g)?;
            let mut fibre = FellFibre { degree: g.clone(), representatives: Vec::new(), entries: BTreeMap::new() };
            for (xi, x) in objects.iter().enumerate() {
                if !norm_of(x, &canonical)?.is_positive() {
                    continue;
                }
                let b = if g.iter().all(|&v| v == 0) { canonical.clone() } else { choice(&g, x)? };
                if b.homogeneous_degree().as_deref() != Some(g.as_slice()) {
                    return Err(Error::MixedDegrees(format!("representative {b} chosen for degree {g:?} at {x:?}")));
                }
                let norm = norm_of(x, &b)?;
                if !norm.is_positive() {
                    return Err(Error::ZeroNorm(format!("representative {b} of degree {g:?} vanishes at {x:?}")));
                }
                let representative = fibre.intern(b);
                fibre.entries.insert(xi, FibreEntry { point: x.clone(), representative, norm });
            }
            Ok((g, fibre))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(FellBundle { pres: pres.clone(), groupoid, fibres, deformation: ThetaMatrix::zero(pres.m()) })
}

/// Products needed for one composable pair, keyed by representative slots.
struct PairProducts {
    product: AlgebraElement,
    product_norm: AlgebraElement,
    mixed: AlgebraElement,
}

type Slot = (Degree, usize);

impl FellBundle {
    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn fibres(&self) -> &BTreeMap<Degree, FellFibre> {
        &self.fibres
    }

    pub fn fibre(&self, g: &[i64]) -> Option<&FellFibre> {
        self.fibres.get(g)
    }

    /// The accumulated Rieffel deformation parameter.
    pub fn deformation(&self) -> &ThetaMatrix {
        &self.deformation
    }

    /// Phase of the deformed product `B_g × B_h → B_{g+h}`.
    pub fn product_phase(&self, g: &[i64], h: &[i64]) -> Phase {
        lambda_cocycle(&self.deformation, g, h)
    }

    /// Phase of the deformed involution on `B_g`: `a† = phase · a*`.
    pub fn involution_phase(&self, g: &[i64]) -> Phase {
        lambda_cocycle(&self.deformation, &neg(g), g).conj()
    }

    /// Overwrite one fibre entry without validation, for negative controls.
    pub fn replace_entry(&mut self, g: &[i64], x: usize, representative: AlgebraElement, norm: BigRational) -> Result<()> {
        let point = self
            .groupoid
            .objects()
            .get(x)
            .cloned()
            .ok_or_else(|| Error::Precondition(format!("object index {x} out of range")))?;
        let fibre = self
            .fibres
            .get_mut(g)
            .ok_or_else(|| Error::Precondition(format!("no fibre of degree {g:?}")))?;
        let representative = fibre.intern(representative);
        fibre.entries.insert(x, FibreEntry { point, representative, norm });
        Ok(())
    }

    fn slot(&self, g: &[i64], x: usize) -> Result<Slot> {
        let e = self
            .fibres
            .get(g)
            .and_then(|f| f.entries.get(&x))
            .ok_or_else(|| Error::Precondition(format!("no fibre entry of degree {g:?} at {:?}", self.groupoid.objects()[x])))?;
        Ok((g.to_vec(), e.representative))
    }

    fn element(&self, slot: &Slot) -> &AlgebraElement {
        &self.fibres[&slot.0].representatives[slot.1]
    }

    /// The slots `(s₁ at θ_{g₂}x, s₂ at x, s₁₂ at x)` of a composable pair.
    fn pair_slots(&self, a: usize, b: usize) -> Result<[Slot; 3]> {
        let (alpha, beta) = (self.groupoid.arrow(a), self.groupoid.arrow(b));
        Ok([
            self.slot(&alpha.g, alpha.source)?,
            self.slot(&beta.g, beta.source)?,
            self.slot(&add(&alpha.g, &beta.g), beta.source)?,
        ])
    }

    fn pair_products(&self, pairs: &[(usize, usize)]) -> Result<HashMap<[Slot; 3], PairProducts>> {
        let mut keys = BTreeSet::new();
        for &(a, b) in pairs {
            keys.insert(self.pair_slots(a, b)?);
        }
        keys.into_par_iter()
            .map(|k| {
                let (s1, s2, s12) = (self.element(&k[0]), self.element(&k[1]), self.element(&k[2]));
                let product = s1.multiply(s2)?;
                let product_norm = product.involute().multiply(&product)?;
                let mixed = s12.involute().multiply(&product)?;
                Ok((k, PairProducts { product, product_norm, mixed }))
            })
            .collect()
    }

    fn off_degree(&self, slot: &Slot) -> Option<String> {
        let b = self.element(slot);
        (b.homogeneous_degree().as_deref() != Some(slot.0.as_slice()))
            .then(|| format!("representative {b} is not of degree {:?}", slot.0))
    }

    fn value_at(&self, x: usize, e: &AlgebraElement) -> Result<PhaseScalar> {
        lattice_value(&self.groupoid.objects()[x], e)
    }

    fn norm_at(&self, slot: &Slot, x: usize) -> BigRational {
        self.fibres[&slot.0].entries[&x].norm.clone()
    }

    fn serial(&self, slots: &[&Slot]) -> Vec<Vec<SerialMonomial>> {
        slots.iter().map(|s| self.element(s).to_serial()).collect()
    }

    pub fn to_record(&self) -> BundleRecord {
        let fibres = self
            .fibres
            .values()
            .map(|f| FibreRecord {
                degree: f.degree.clone(),
                involution_phase: self.involution_phase(&f.degree),
                entries: f
                    .entries
                    .values()
                    .map(|e| FibreEntryRecord {
                        point: e.point.clone(),
                        representative: f.representatives[e.representative].to_serial(),
                        norm: e.norm.to_string(),
                    })
                    .collect(),
            })
            .collect();
        BundleRecord { presentation: self.pres.to_config(), deformation: self.deformation.to_strings(), fibres }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreEntryRecord {
    pub point: Point,
    pub representative: Vec<SerialMonomial>,
    pub norm: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FibreRecord {
    pub degree: Degree,
    pub involution_phase: Phase,
    pub entries: Vec<FibreEntryRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleRecord {
    pub presentation: crate::algebra::PresentationConfig,
    pub deformation: Vec<Vec<String>>,
    pub fibres: Vec<FibreRecord>,
}

/// `φ(α, β)` on every composable pair of the bundle's groupoid: the phase of
/// `χ_x(s₁₂* s₁ s₂)` times the deformation phase `Λ(g₁, g₂)`.
pub fn extract_twist(bundle: &FellBundle) -> Result<TwoCocycle> {
    let g = &bundle.groupoid;
    let pairs = g.composable_pairs();
    let products = bundle.pair_products(&pairs)?;
    let values = pairs
        .par_iter()
        .map(|&(a, b)| {
            let slots = bundle.pair_slots(a, b)?;
            let x = g.arrow(b).source;
            let c = bundle.value_at(x, &products[&slots].mixed)?;
            let phase = c
                .polar_phase()
                .ok_or_else(|| Error::NotPurePhase(format!("χ(s₁₂* s₁ s₂) = {c} at {:?}", g.objects()[x])))?;
            Ok(((a, b), phase * bundle.product_phase(&g.arrow(a).g, &g.arrow(b).g)))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(TwoCocycle::from_map(g, values))
}

/// Return a copy deformed by `theta`: products pick up `Λ_θ(g, h)`, the
/// involution `conj(Λ_θ(−g, g))`; representatives and norms are unchanged.
pub fn deform_bundle(bundle: &FellBundle, theta: &ThetaMatrix) -> Result<FellBundle> {
    let mut out = bundle.clone();
    out.deformation = bundle.deformation.add(theta)?;
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    Product,
    Involution,
    Positivity,
}

/// A failing instance: the evaluation point, the degrees involved and the
/// representatives, enough to redo the check by hand.
#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub point: Point,
    pub degrees: Vec<Degree>,
    pub elements: Vec<Vec<SerialMonomial>>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BundleReport {
    pub product_checks: usize,
    pub product_failures: usize,
    pub involution_checks: usize,
    pub involution_failures: usize,
    pub positivity_checks: usize,
    pub positivity_failures: usize,
    /// The first failure of each axiom, in check order.
    pub counterexamples: Vec<Counterexample>,
}

impl BundleReport {
    pub fn counterexample(&self, axiom: Axiom) -> Option<&Counterexample> {
        self.counterexamples.iter().find(|c| c.axiom == axiom)
    }

    fn record(&mut self, c: Counterexample) {
        if self.counterexample(c.axiom).is_none() {
            self.counterexamples.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.product_failures + self.involution_failures + self.positivity_failures == 0
    }
}

fn gram_holds(mixed: &PhaseScalar, n1: &PhaseScalar, n2: &PhaseScalar) -> bool {
    &(mixed * &mixed.conj()) == &(n1 * n2)
}

/// Pointwise check over the window that products of representatives land
/// on the line of the composite degree with the expected norm, that the
/// involution carries the fibre `g` at `x` onto the fibre `−g` at `θ_g(x)`,
/// and that every stored norm is the positive value `χ_x(s* s)`.
pub fn check_fell_axioms(bundle: &FellBundle) -> Result<BundleReport> {
    let g = &bundle.groupoid;
    let mut report = BundleReport::default();

    // Positivity.
    let objects = g.objects();
    for (deg, fibre) in &bundle.fibres {
        let canonical = bundle.pres.canonical_representative(deg)?;
        for (xi, x) in objects.iter().enumerate() {
            report.positivity_checks += 1;
            let in_support = norm_of(x, &canonical)?.is_positive();
            let failure = match fibre.entries.get(&xi) {
                None if in_support => Some((None, "support point has no fibre entry".to_string())),
                None => None,
                Some(_) if !in_support => Some((Some((deg.clone(), fibre.entries[&xi].representative)), "entry outside support".into())),
                Some(e) => {
                    let slot = (deg.clone(), e.representative);
                    let b = bundle.element(&slot);
                    if b.homogeneous_degree().as_deref() != Some(deg.as_slice()) {
                        Some((Some(slot), format!("representative {b} is not of degree {deg:?}")))
                    } else {
                        let actual = norm_of(x, b)?;
                        if actual != e.norm || !actual.is_positive() {
                            Some((Some(slot), format!("stored norm {} but χ(s* s) = {actual}", e.norm)))
                        } else {
                            None
                        }
                    }
                }
            };
            if let Some((slot, detail)) = failure {
                report.positivity_failures += 1;
                let elements = slot.as_ref().map(|s| bundle.serial(&[s])).unwrap_or_default();
                report.record(Counterexample {
                    axiom: Axiom::Positivity,
                    point: x.clone(),
                    degrees: vec![deg.clone()],
                    elements,
                    detail,
                });
            }
        }
    }

    // Products.
    let pairs = g.composable_pairs();
    let products = bundle.pair_products(&pairs)?;
    let outcomes = pairs
        .par_iter()
        .map(|&(a, b)| {
            let slots = bundle.pair_slots(a, b)?;
            let (alpha, beta) = (g.arrow(a), g.arrow(b));
            let x = beta.source;
            let p = &products[&slots];
            let target_degree = add(&alpha.g, &beta.g);
            let detail = if let Some(d) = slots.iter().find_map(|s| bundle.off_degree(s)) {
                Some(d)
            } else if p.product.homogeneous_degree().as_deref() != Some(target_degree.as_slice()) {
                Some(format!("s₁ s₂ is not of degree {target_degree:?}"))
            } else {
                let n1 = bundle.norm_at(&slots[0], alpha.source);
                let n2 = bundle.norm_at(&slots[1], x);
                let n12 = PhaseScalar::from_rational(bundle.norm_at(&slots[2], x));
                let np = bundle.value_at(x, &p.product_norm)?;
                let mixed = bundle.value_at(x, &p.mixed)?;
                if np != PhaseScalar::from_rational(n1.clone() * n2.clone()) {
                    Some(format!("χ((s₁s₂)* s₁s₂) = {np} but the norms give {}", n1 * n2))
                } else if !gram_holds(&mixed, &n12, &np) {
                    Some(format!("s₁ s₂ is not on the line of s₁₂: χ(s₁₂* s₁ s₂) = {mixed}"))
                } else {
                    None
                }
            };
            Ok(detail.map(|d| Counterexample {
                axiom: Axiom::Product,
                point: g.objects()[x].clone(),
                degrees: vec![alpha.g.clone(), beta.g.clone(), target_degree],
                elements: bundle.serial(&[&slots[0], &slots[1], &slots[2]]),
                detail: d,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    report.product_checks = outcomes.len();
    for c in outcomes.into_iter().flatten() {
        report.product_failures += 1;
        report.record(c);
    }

    // Involution.
    let outcomes = (0..g.len())
        .into_par_iter()
        .map(|a| {
            let alpha = g.arrow(a);
            let (x, y) = (alpha.source, alpha.target);
            let s = bundle.slot(&alpha.g, x)?;
            let minus = neg(&alpha.g);
            let r = bundle.slot(&minus, y)?;
            let dagger = bundle.element(&s).involute().scale(&PhaseScalar::from_phase(bundle.involution_phase(&alpha.g)));
            let detail = if let Some(d) = bundle.off_degree(&s).or_else(|| bundle.off_degree(&r)) {
                Some(d)
            } else if dagger.homogeneous_degree().as_deref() != Some(minus.as_slice()) {
                Some(format!("s† is not of degree {minus:?}"))
            } else {
                let back = bundle.value_at(y, &bundle.element(&s).multiply(&bundle.element(&s).involute())?)?;
                let n_x = PhaseScalar::from_rational(bundle.norm_at(&s, x));
                let n_r = PhaseScalar::from_rational(bundle.norm_at(&r, y));
                let mixed = bundle.value_at(y, &bundle.element(&r).involute().multiply(&dagger)?)?;
                if back != n_x {
                    Some(format!("χ_y(s s*) = {back} but χ_x(s* s) = {n_x}"))
                } else if !gram_holds(&mixed, &n_r, &back) {
                    Some(format!("s† is not on the line of the degree {minus:?} fibre: χ(r* s†) = {mixed}"))
                } else {
                    None
                }
            };
            Ok(detail.map(|d| Counterexample {
                axiom: Axiom::Involution,
                point: g.objects()[x].clone(),
                degrees: vec![alpha.g.clone(), minus.clone()],
                elements: bundle.serial(&[&s, &r]),
                detail: d,
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    report.involution_checks = outcomes.len();
    for c in outcomes.into_iter().flatten() {
        report.involution_failures += 1;
        report.record(c);
    }
    Ok(report)
}

/// An element `a ⊗ b` of `A_g ⊗_{A_e} B_e`, with `b` of degree 0.
#[derive(Clone, Debug)]
pub struct FibreVector {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
}

impl FibreVector {
    pub fn new(a: AlgebraElement) -> FibreVector {
        let b = AlgebraElement::one(a.presentation());
        FibreVector { a, b }
    }
}

fn degree_of(x: &AlgebraElement) -> Result<Option<Degree>> {
    if x.is_zero() {
        return Ok(None);
    }
    x.homogeneous_degree()
        .map(Some)
        .ok_or_else(|| Error::MixedDegrees(format!("{x} is not homogeneous")))
}

/// `⟨a₁⊗b₁, a₂⊗b₂⟩ = conj(χ(b₁)) χ(a₁* a₂) χ(b₂)`; zero across degrees.
pub fn fibre_inner_product(v1: &FibreVector, v2: &FibreVector, chi: &Character) -> Result<PhaseScalar> {
    for b in [&v1.b, &v2.b] {
        if let Some(d) = degree_of(b)? {
            if d.iter().any(|&v| v != 0) {
                return Err(Error::NonzeroDegree(d));
            }
        }
    }
    let (d1, d2) = (degree_of(&v1.a)?, degree_of(&v2.a)?);
    if d1.is_none() || d2.is_none() || d1 != d2 {
        return Ok(PhaseScalar::zero());
    }
    let middle = evaluate(chi, &v1.a.involute().multiply(&v2.a)?)?;
    Ok(&(&evaluate(chi, &v1.b)?.conj() * &middle) * &evaluate(chi, &v2.b)?)
}

/// `χ(a* a) χ(b* b) − χ(a* b) χ(b* a)`; zero exactly when the two vectors
/// are parallel at `χ`.
pub fn gram_defect(chi: &Character, a: &AlgebraElement, b: &AlgebraElement) -> Result<PhaseScalar> {
    let (a_s, b_s) = (a.involute(), b.involute());
    let aa = evaluate(chi, &a_s.multiply(a)?)?;
    let bb = evaluate(chi, &b_s.multiply(b)?)?;
    let ab = evaluate(chi, &a_s.multiply(b)?)?;
    let ba = evaluate(chi, &b_s.multiply(a)?)?;
    Ok(&(&aa * &bb) - &(&ab * &ba))
}

/// The phase `u` with `a ≡ u·|a|/|b|·b` in the fibre at `χ`: the phase of
/// `χ(b* a)`, after checking `|χ(b* a)|² = χ(a* a) χ(b* b)`.
pub fn transition_phase(g: &[i64], chi: &Character, a: &AlgebraElement, b: &AlgebraElement) -> Result<Phase> {
    for x in [a, b] {
        match degree_of(x)? {
            None => return Err(Error::ZeroNorm("zero element".into())),
            Some(d) if d != g => return Err(Error::MixedDegrees(format!("{x} is not of degree {g:?}"))),
            Some(_) => {}
        }
    }
    let na = evaluate(chi, &a.involute().multiply(a)?)?;
    let nb = evaluate(chi, &b.involute().multiply(b)?)?;
    for (x, n) in [(a, &na), (b, &nb)] {
        if n.value_is_zero() {
            return Err(Error::ZeroNorm(format!("χ({x}* {x}) = 0 at {chi}")));
        }
    }
    let c = evaluate(chi, &b.involute().multiply(a)?)?;
    if &c * &c.conj() != &na * &nb {
        return Err(Error::NotPurePhase(format!("|χ(b* a)|² ≠ χ(a* a) χ(b* b) at {chi}")));
    }
    c.polar_phase().ok_or_else(|| Error::NotPurePhase(format!("χ(b* a) = {c}")))
}

/// A section of the fibre of one degree: coefficients relative to the
/// stored representatives.
#[derive(Clone, Debug)]
pub struct Section {
    degree: Degree,
    coeffs: BTreeMap<usize, PhaseScalar>,
}

impl Section {
    pub fn new(bundle: &FellBundle, degree: &[i64], coeffs: BTreeMap<usize, PhaseScalar>) -> Result<Section> {
        let fibre = bundle
            .fibre(degree)
            .ok_or_else(|| Error::Precondition(format!("no fibre of degree {degree:?}")))?;
        if let Some(x) = coeffs.keys().find(|x| !fibre.entries.contains_key(x)) {
            return Err(Error::Precondition(format!("section of degree {degree:?} is nonzero off the support at object {x}")));
        }
        Ok(Section { degree: degree.to_vec(), coeffs })
    }

    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, PhaseScalar> {
        &self.coeffs
    }

    /// Pointwise `⟨self, other⟩(x) = conj(c₁(x)) c₂(x) χ_x(s* s)`.
    pub fn inner_product(&self, other: &Section, bundle: &FellBundle) -> Result<BTreeMap<usize, PhaseScalar>> {
        if self.degree != other.degree {
            return Ok(BTreeMap::new());
        }
        let fibre = bundle
            .fibre(&self.degree)
            .ok_or_else(|| Error::Precondition(format!("no fibre of degree {:?}", self.degree)))?;
        let mut out = BTreeMap::new();
        for (x, c1) in &self.coeffs {
            if let Some(c2) = other.coeffs.get(x) {
                let n = PhaseScalar::from_rational(fibre.entries[x].norm.clone());
                out.insert(*x, &(&c1.conj() * c2) * &n);
            }
        }
        Ok(out)
    }
}
