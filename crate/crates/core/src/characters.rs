//! Characters of the commutative unit fibre `ℂ[N₁, …, N_m]`, positivity,
//! and the partial action of `ℤ^m` on positive characters.
//!
//! A character is a point `t ∈ ℚ^m`; it sends `N_j` to `t_j`. On a degree-0
//! normal monomial `(a*)^p a^p` it takes the value
//! `e(Σ_{j<k} Θ_jk p_j p_k) · ∏_j t_j(t_j − 1)⋯(t_j − p_j + 1)`; the phase
//! records the reordering from `(a^p)* a^p` to the canonical star block.

use std::fmt;
use std::sync::Arc;

use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{monomials_of_length, AlgebraElement, MonomialKey, Presentation};
use crate::error::{Error, Result};
use crate::phase::{int, parse_rational, Phase, PhaseScalar};

pub const DEFAULT_DEPTH: usize = 16;

/// A character of the unit fibre, given by its values `t_j = χ(N_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    point: Vec<BigRational>,
}

impl Character {
    pub fn new(point: Vec<BigRational>) -> Character {
        Character { point }
    }

    pub fn lattice(point: &[i64]) -> Character {
        Character { point: point.iter().map(|&v| int(v)).collect() }
    }

    pub fn parse(values: &[String]) -> Result<Character> {
        Ok(Character { point: values.iter().map(|s| parse_rational(s)).collect::<Result<_>>()? })
    }

    pub fn point(&self) -> &[BigRational] {
        &self.point
    }

    pub fn dim(&self) -> usize {
        self.point.len()
    }

    /// The point as an integer vector, if it has integer coordinates.
    pub fn as_lattice(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.point
            .iter()
            .map(|t| if t.is_integer() { t.to_integer().to_i64() } else { None })
            .collect()
    }

    /// Whether the point lies in `ℕ^m`.
    pub fn is_natural(&self) -> bool {
        self.as_lattice().is_some_and(|v| v.iter().all(|&x| x >= 0))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.point.iter().map(|t| t.to_string()).collect()
    }
}

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for Character {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Character {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Character::parse(&v).map_err(serde::de::Error::custom)
    }
}

fn falling_factorial(t: &BigRational, n: u32) -> BigRational {
    let mut acc = int(1);
    for i in 0..n {
        acc *= t - int(i as i64);
    }
    acc
}

/// `∏_j n_j (n_j − 1) ⋯ (n_j − p_j + 1)` in machine integers, `None` on overflow.
fn integer_moment(n: &[i64], p: &[u32]) -> Option<i128> {
    let mut acc: i128 = 1;
    for (&t, &k) in n.iter().zip(p) {
        for i in 0..k as i64 {
            acc = acc.checked_mul((t - i) as i128)?;
        }
    }
    Some(acc)
}

fn check_dim(pres: &Presentation, chi: &Character) -> Result<()> {
    if chi.dim() != pres.m() {
        return Err(Error::DimensionMismatch { expected: pres.m(), got: chi.dim() });
    }
    Ok(())
}

/// `χ(x)` for `x` supported in degree 0.
pub fn evaluate(chi: &Character, x: &AlgebraElement) -> Result<PhaseScalar> {
    let pres = x.presentation();
    check_dim(pres, chi)?;
    let theta = pres.theta();
    let lattice = chi.as_lattice();
    let mut out = PhaseScalar::zero();
    for (key, c) in x.terms() {
        if key.p != key.q {
            return Err(Error::NonzeroDegree(key.degree()));
        }
        let value = match lattice.as_deref().and_then(|l| integer_moment(l, &key.p)) {
            Some(v) => BigRational::from_integer(v.into()),
            None => {
                let mut value = int(1);
                for (t, &n) in chi.point.iter().zip(&key.p) {
                    value *= falling_factorial(t, n);
                    if value.is_zero() {
                        break;
                    }
                }
                value
            }
        };
        if value.is_zero() {
            continue;
        }
        let mut angle = Rational64::zero();
        for j in 0..key.m() {
            for k in (j + 1)..key.m() {
                let n = key.p[j] as i64 * key.p[k] as i64;
                if n != 0 {
                    angle += theta.get(j, k) * Rational64::from_integer(n);
                }
            }
        }
        out += &c.rotate(Phase::from_angle(angle)).scale(&value);
    }
    Ok(out)
}

/// `χ(x)` as a rational number; errors if the value is not rational.
pub fn evaluate_rational(chi: &Character, x: &AlgebraElement) -> Result<BigRational> {
    let v = evaluate(chi, x)?;
    v.real_rational().ok_or_else(|| Error::NotRational(v.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    PositiveUpToDepth,
    Refuted,
}

/// Outcome of a finite positivity sweep. A refutation carries a monomial `w`
/// with `χ(w* w) < 0`; acceptance only covers monomials up to `depth` letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub verdict: Verdict,
    pub depth: usize,
    pub witness: Option<MonomialKey>,
    pub value: Option<BigRational>,
}

impl PositivityCertificate {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    pub fn to_record(&self) -> CertificateRecord {
        CertificateRecord {
            verdict: self.verdict,
            depth: self.depth,
            witness_monomial: self.witness.as_ref().map(|w| w.to_string()),
            witness_exponents: self.witness.clone(),
            value: self.value.as_ref().map(|v| v.to_string()),
        }
    }
}

/// Serialized certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub verdict: Verdict,
    pub depth: usize,
    pub witness_monomial: Option<String>,
    pub witness_exponents: Option<MonomialKey>,
    pub value: Option<String>,
}

/// The squares `w* w` of every normal monomial with `1..=depth` letters,
/// ordered by letter count and then by exponent vectors.
pub struct PositivityProbe {
    pres: Arc<Presentation>,
    depth: usize,
    squares: Vec<(MonomialKey, AlgebraElement)>,
}

impl PositivityProbe {
    pub fn new(pres: &Arc<Presentation>, depth: usize) -> Result<PositivityProbe> {
        if depth == 0 {
            return Err(Error::Precondition("positivity depth must be at least 1".into()));
        }
        let keys: Vec<MonomialKey> = (1..=depth).flat_map(|len| monomials_of_length(pres.m(), len)).collect();
        let squares = keys
            .into_par_iter()
            .map(|key| {
                let w = AlgebraElement::monomial(pres, key.clone(), PhaseScalar::one());
                let sq = w.involute().multiply(&w).expect("same presentation");
                (key, sq)
            })
            .collect();
        Ok(PositivityProbe { pres: pres.clone(), depth, squares })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn certify(&self, chi: &Character) -> Result<PositivityCertificate> {
        check_dim(&self.pres, chi)?;
        for (key, sq) in &self.squares {
            let v = evaluate_rational(chi, sq)?;
            if v.is_negative() {
                return Ok(PositivityCertificate {
                    verdict: Verdict::Refuted,
                    depth: self.depth,
                    witness: Some(key.clone()),
                    value: Some(v),
                });
            }
        }
        Ok(PositivityCertificate { verdict: Verdict::PositiveUpToDepth, depth: self.depth, witness: None, value: None })
    }
}

/// Test `χ(w* w) ≥ 0` for all normal monomials `w` with at most `depth` letters.
pub fn is_positive(pres: &Arc<Presentation>, chi: &Character, depth: usize) -> Result<PositivityCertificate> {
    PositivityProbe::new(pres, depth)?.certify(chi)
}

/// Certificates for every grid point, in grid order.
pub fn certify_grid(
    pres: &Arc<Presentation>,
    grid: &[Character],
    depth: usize,
) -> Result<Vec<(Character, PositivityCertificate)>> {
    let probe = PositivityProbe::new(pres, depth)?;
    grid.par_iter()
        .map(|chi| probe.certify(chi).map(|c| (chi.clone(), c)))
        .collect()
}

/// The grid points that pass the positivity sweep at `depth`.
pub fn positive_window(pres: &Arc<Presentation>, grid: &[Character], depth: usize) -> Result<Vec<Character>> {
    if grid.is_empty() {
        return Ok(Vec::new());
    }
    Ok(certify_grid(pres, grid, depth)?
        .into_iter()
        .filter(|(_, c)| !c.is_refuted())
        .map(|(chi, _)| chi)
        .collect())
}

/// Product grid `∏_j {lower_j, lower_j + step_j, …} ∩ [lower_j, upper_j]`.
pub fn rational_grid(lower: &[BigRational], upper: &[BigRational], step: &[BigRational]) -> Result<Vec<Character>> {
    if lower.len() != upper.len() || lower.len() != step.len() {
        return Err(Error::InconsistentWindow("grid bounds have different lengths".into()));
    }
    let mut axes = Vec::new();
    for ((lo, hi), st) in lower.iter().zip(upper).zip(step) {
        if !st.is_positive() {
            return Err(Error::InconsistentWindow(format!("grid step {st} is not positive")));
        }
        let mut axis = Vec::new();
        let mut t = lo.clone();
        while &t <= hi {
            axis.push(t.clone());
            t += st;
        }
        axes.push(axis);
    }
    let mut points = vec![Vec::new()];
    for axis in axes {
        points = points
            .into_iter()
            .flat_map(|p: Vec<BigRational>| {
                axis.iter().map(move |t| {
                    let mut q = p.clone();
                    q.push(t.clone());
                    q
                })
            })
            .collect();
    }
    Ok(points.into_iter().map(Character::new).collect())
}

/// Precomputed `b* b` and `b* N_j b` for a fixed `b ∈ A_k`, so that
/// `θ_k(χ)_j = χ(b* N_j b) / χ(b* b)` costs one evaluation per coordinate.
#[derive(Clone, Debug)]
pub struct ActionKernel {
    degree: Vec<i64>,
    representative: AlgebraElement,
    norm: AlgebraElement,
    moments: Vec<AlgebraElement>,
}

impl ActionKernel {
    /// Kernel for the canonical monomial of degree `k`.
    pub fn canonical(pres: &Arc<Presentation>, k: &[i64]) -> Result<ActionKernel> {
        let b = pres.canonical_representative(k)?;
        ActionKernel::with_representative(b)
    }

    /// Kernel for an arbitrary homogeneous `b`.
    pub fn with_representative(b: AlgebraElement) -> Result<ActionKernel> {
        let pres = b.presentation().clone();
        let degree = b
            .homogeneous_degree()
            .ok_or_else(|| Error::MixedDegrees(format!("representative {b} is not homogeneous")))?;
        let bs = b.involute();
        let norm = bs.multiply(&b)?;
        let moments = (0..pres.m())
            .map(|j| bs.multiply(&AlgebraElement::number(&pres, j)?)?.multiply(&b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ActionKernel { degree, representative: b, norm, moments })
    }

    pub fn degree(&self) -> &[i64] {
        &self.degree
    }

    pub fn representative(&self) -> &AlgebraElement {
        &self.representative
    }

    /// `χ(b* b)`.
    pub fn norm_at(&self, chi: &Character) -> Result<BigRational> {
        evaluate_rational(chi, &self.norm)
    }

    /// `θ_k(χ)`, or `None` when `χ(b* b) = 0`.
    pub fn apply(&self, chi: &Character) -> Result<Option<Character>> {
        let n = self.norm_at(chi)?;
        if n.is_zero() {
            return Ok(None);
        }
        let point = self
            .moments
            .iter()
            .map(|mj| Ok(evaluate_rational(chi, mj)? / &n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Character::new(point)))
    }
}

/// `θ_k(χ) = χ(b* · b)/χ(b* b)` with `b` the canonical monomial of degree `k`.
///
/// Points of `ℕ^m` are accepted directly; any other point must pass the
/// positivity sweep at [`DEFAULT_DEPTH`].
pub fn partial_action(pres: &Arc<Presentation>, k: &[i64], chi: &Character) -> Result<Option<Character>> {
    check_dim(pres, chi)?;
    if !chi.is_natural() && is_positive(pres, chi, DEFAULT_DEPTH)?.is_refuted() {
        return Err(Error::NonPositiveCharacter(chi.to_string()));
    }
    ActionKernel::canonical(pres, k)?.apply(chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_word, ThetaMatrix};
    use crate::phase::rat;
    use crate::random::{random_homogeneous, random_theta};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn weyl1() -> Arc<Presentation> {
        Presentation::weyl(1).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let p = weyl1();
        let x = p.normal_order(&parse_word("a* a* a a").unwrap()).unwrap();
        // Oracle: (a*)²a² = N² − N, evaluated at 3.
        let n = AlgebraElement::number(&p, 0).unwrap();
        let poly = &(&n * &n) - &n;
        assert_eq!(poly, x);
        assert_eq!(evaluate_rational(&Character::lattice(&[3]), &x).unwrap(), int(6));
        let y = p.normal_order(&parse_word("a a*").unwrap()).unwrap();
        assert_eq!(evaluate_rational(&Character::lattice(&[0]), &y).unwrap(), int(1));
        assert_eq!(evaluate_rational(&Character::lattice(&[7]), &AlgebraElement::one(&p)).unwrap(), int(1));
        let a = AlgebraElement::generator(&p, 0).unwrap();
        assert!(matches!(evaluate(&Character::lattice(&[1]), &a), Err(Error::NonzeroDegree(_))));
        assert!(matches!(evaluate(&Character::lattice(&[1, 2]), &y), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn positivity_examples() {
        let p = weyl1();
        let c = is_positive(&p, &Character::lattice(&[5]), 20).unwrap();
        assert_eq!(c.verdict, Verdict::PositiveUpToDepth);
        let c = is_positive(&p, &Character::new(vec![rat(1, 2)]), 2).unwrap();
        assert_eq!(c.verdict, Verdict::Refuted);
        assert_eq!(c.witness, Some(MonomialKey::new(vec![0], vec![2])));
        assert_eq!(c.value, Some(rat(-1, 4)));
        let c = is_positive(&p, &Character::lattice(&[-1]), 1).unwrap();
        assert_eq!(c.witness, Some(MonomialKey::new(vec![0], vec![1])));
        assert_eq!(c.value, Some(int(-1)));
        assert!(is_positive(&p, &Character::lattice(&[1]), 0).is_err());
    }

    #[test]
    fn window_examples() {
        let p = weyl1();
        let grid = rational_grid(&[int(0)], &[int(2)], &[rat(1, 2)]).unwrap();
        assert_eq!(grid.len(), 5);
        let pos = positive_window(&p, &grid, 4).unwrap();
        assert_eq!(pos, vec![Character::lattice(&[0]), Character::lattice(&[1]), Character::lattice(&[2])]);
        let p2 = Presentation::weyl(2).unwrap();
        let grid = rational_grid(&[int(0), int(0)], &[int(2), int(2)], &[int(1), int(1)]).unwrap();
        assert_eq!(positive_window(&p2, &grid, 6).unwrap().len(), 9);
        assert!(positive_window(&p, &[], 4).unwrap().is_empty());
    }

    #[test]
    fn partial_action_examples() {
        let p = weyl1();
        assert_eq!(partial_action(&p, &[1], &Character::lattice(&[5])).unwrap(), Some(Character::lattice(&[4])));
        assert_eq!(partial_action(&p, &[1], &Character::lattice(&[0])).unwrap(), None);
        let p2 = Presentation::weyl(2).unwrap();
        let out = partial_action(&p2, &[1, -1], &Character::lattice(&[3, 0])).unwrap();
        assert_eq!(out, Some(Character::lattice(&[2, 1])));
        assert!(matches!(
            partial_action(&p, &[1], &Character::new(vec![rat(1, 2)])),
            Err(Error::NonPositiveCharacter(_))
        ));
    }

    #[test]
    fn twisted_evaluation_is_real_on_squares() {
        let t = ThetaMatrix::pair(2, 0, 1, Rational64::new(1, 3)).unwrap();
        let p = Presentation::twisted(t).unwrap();
        let w = p.normal_order(&parse_word("a2 a1 a1*").unwrap()).unwrap();
        let sq = &w.involute() * &w;
        let v = evaluate_rational(&Character::lattice(&[2, 3]), &sq).unwrap();
        // ‖a₂ a₁ a₁* δ_(2,3)‖² = 3 · 3 · 3.
        assert_eq!(v, int(27));
    }

    #[test]
    fn kernel_rejects_mixed_representative() {
        let p = weyl1();
        let x = &AlgebraElement::generator(&p, 0).unwrap() + &AlgebraElement::one(&p);
        assert!(matches!(ActionKernel::with_representative(x), Err(Error::MixedDegrees(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn evaluation_is_multiplicative(seed in any::<u64>(), t1 in 0i64..6, t2 in 0i64..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Presentation::twisted(random_theta(&mut rng, 2, 6)).unwrap();
            let x = random_homogeneous(&mut rng, &p, &[0, 0], 3, 6);
            let y = random_homogeneous(&mut rng, &p, &[0, 0], 3, 6);
            let chi = Character::lattice(&[t1, t2]);
            let lhs = evaluate(&chi, &(&x * &y)).unwrap();
            let rhs = &evaluate(&chi, &x).unwrap() * &evaluate(&chi, &y).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gram_determinant_vanishes(seed in any::<u64>(), t1 in 0i64..5, t2 in 0i64..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Presentation::twisted(random_theta(&mut rng, 2, 6)).unwrap();
            let g = crate::random::random_degree(&mut rng, 2, 3);
            let a = random_homogeneous(&mut rng, &p, &g, 3, 8);
            let b = random_homogeneous(&mut rng, &p, &g, 3, 8);
            let chi = Character::lattice(&[t1, t2]);
            let aa = evaluate(&chi, &(&a.involute() * &a)).unwrap();
            let bb = evaluate(&chi, &(&b.involute() * &b)).unwrap();
            let ab = evaluate(&chi, &(&a.involute() * &b)).unwrap();
            let ba = evaluate(&chi, &(&b.involute() * &a)).unwrap();
            prop_assert_eq!(&aa * &bb, &ab * &ba);
            // Random phase coefficients make χ(a*a) real but often irrational.
            prop_assert!(aa.is_real());
            prop_assert!(aa.to_complex().re >= -1e-9);
        }

        #[test]
        fn action_is_translation(k1 in -3i64..=3, k2 in -3i64..=3, t1 in 0i64..6, t2 in 0i64..6) {
            let p = Presentation::weyl(2).unwrap();
            let out = partial_action(&p, &[k1, k2], &Character::lattice(&[t1, t2])).unwrap();
            let target = [t1 - k1, t2 - k2];
            if target.iter().all(|&v| v >= 0) {
                prop_assert_eq!(out, Some(Character::lattice(&target)));
            } else {
                prop_assert_eq!(out, None);
            }
        }
    }
}
