use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::{parse_rational64, Phase};

pub const DEFAULT_MAX_WORD_LEN: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Weyl,
    TwistedWeyl,
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s.trim() {
            "weyl" => Ok(Family::Weyl),
            "twisted-weyl" => Ok(Family::TwistedWeyl),
            other => Err(Error::InvalidPresentation(format!(
                "unknown family {other:?}; only \"weyl\" and \"twisted-weyl\" are supported"
            ))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Weyl => "weyl",
            Family::TwistedWeyl => "twisted-weyl",
        })
    }
}

/// Antisymmetric rational matrix of commutation angles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaMatrix {
    m: usize,
    entries: Vec<Rational64>,
}

impl ThetaMatrix {
    pub fn zero(m: usize) -> ThetaMatrix {
        ThetaMatrix { m, entries: vec![Rational64::zero(); m * m] }
    }

    pub fn new(rows: Vec<Vec<Rational64>>) -> Result<ThetaMatrix> {
        let m = rows.len();
        let mut entries = Vec::with_capacity(m * m);
        for (j, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidPresentation(format!(
                    "theta row {} has {} entries, expected {m}",
                    j + 1,
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        let t = ThetaMatrix { m, entries };
        for j in 0..m {
            if !t.get(j, j).is_zero() {
                return Err(Error::InvalidPresentation(format!("theta diagonal entry {} is nonzero", j + 1)));
            }
            for k in 0..j {
                if t.get(j, k) != -t.get(k, j) {
                    return Err(Error::InvalidPresentation(format!(
                        "theta is not antisymmetric at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(t)
    }

    /// Antisymmetric matrix with `Θ_jk = r`, `Θ_kj = −r` and zeros elsewhere.
    pub fn pair(m: usize, j: usize, k: usize, r: Rational64) -> Result<ThetaMatrix> {
        if j >= m || k >= m {
            return Err(Error::IndexOutOfRange { index: j.max(k) + 1, m });
        }
        if j == k {
            return Err(Error::InvalidPresentation("theta pair needs distinct indices".into()));
        }
        let mut t = ThetaMatrix::zero(m);
        t.entries[j * m + k] = r;
        t.entries[k * m + j] = -r;
        Ok(t)
    }

    /// Parse rows of `"p/q"` strings. Decimal entries are rejected as inexact.
    pub fn parse(rows: &[Vec<String>]) -> Result<ThetaMatrix> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        parse_rational64(s).map_err(|e| {
                            if s.contains('.') {
                                Error::InexactTheta(s.clone())
                            } else {
                                e
                            }
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        ThetaMatrix::new(parsed)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `Θ_jk`, zero-based indices.
    pub fn get(&self, j: usize, k: usize) -> Rational64 {
        self.entries[j * self.m + k]
    }

    /// `λ_jk = e^{2πiΘ_jk}`.
    pub fn lambda(&self, j: usize, k: usize) -> Phase {
        Phase::from_angle(self.get(j, k))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.is_zero())
    }

    pub fn neg(&self) -> ThetaMatrix {
        ThetaMatrix { m: self.m, entries: self.entries.iter().map(|r| -r).collect() }
    }

    pub fn add(&self, other: &ThetaMatrix) -> Result<ThetaMatrix> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: other.m });
        }
        Ok(ThetaMatrix {
            m: self.m,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.m)
            .map(|j| (0..self.m).map(|k| self.get(j, k).to_string()).collect())
            .collect()
    }

    pub fn to_f64(&self) -> FloatTheta {
        use num_traits::ToPrimitive;
        FloatTheta {
            m: self.m,
            entries: self.entries.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect(),
        }
    }
}

/// Floating-point commutation angles, for irrational `Θ` in the numerical layer.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatTheta {
    m: usize,
    entries: Vec<f64>,
}

impl FloatTheta {
    pub fn new(rows: Vec<Vec<f64>>, tolerance: f64) -> Result<FloatTheta> {
        let m = rows.len();
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidPresentation("theta must be square".into()));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        let t = FloatTheta { m, entries };
        for j in 0..m {
            for k in 0..m {
                if !t.get(j, k).is_finite() || (t.get(j, k) + t.get(k, j)).abs() > tolerance {
                    return Err(Error::InvalidPresentation(format!(
                        "theta is not antisymmetric at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        Ok(t)
    }

    /// Accepts `"p/q"`, integers and decimal notation.
    pub fn parse(rows: &[Vec<String>], tolerance: f64) -> Result<FloatTheta> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| match parse_rational64(s) {
                        Ok(r) => Ok(*r.numer() as f64 / *r.denom() as f64),
                        Err(_) => s.trim().parse::<f64>().map_err(|_| Error::MalformedRational(s.clone())),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        FloatTheta::new(parsed, tolerance)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.m + k]
    }
}

/// A member of the Weyl or twisted-Weyl family.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    family: Family,
    theta: ThetaMatrix,
    max_word_len: usize,
}

impl Presentation {
    pub fn new(family: Family, theta: ThetaMatrix, max_word_len: usize) -> Result<Arc<Presentation>> {
        if theta.m() == 0 {
            return Err(Error::InvalidPresentation("m must be at least 1".into()));
        }
        if family == Family::Weyl && !theta.is_zero() {
            return Err(Error::InvalidPresentation("family weyl requires theta = 0".into()));
        }
        Ok(Arc::new(Presentation { family, theta, max_word_len }))
    }

    pub fn weyl(m: usize) -> Result<Arc<Presentation>> {
        Presentation::new(Family::Weyl, ThetaMatrix::zero(m), DEFAULT_MAX_WORD_LEN)
    }

    pub fn twisted(theta: ThetaMatrix) -> Result<Arc<Presentation>> {
        Presentation::new(Family::TwistedWeyl, theta, DEFAULT_MAX_WORD_LEN)
    }

    pub fn with_max_word_len(&self, max_word_len: usize) -> Arc<Presentation> {
        Arc::new(Presentation { max_word_len, ..self.clone() })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn m(&self) -> usize {
        self.theta.m()
    }

    pub fn theta(&self) -> &ThetaMatrix {
        &self.theta
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    pub fn to_config(&self) -> PresentationConfig {
        PresentationConfig {
            family: self.family,
            m: self.m(),
            theta: Some(self.theta.to_strings()),
        }
    }
}

/// Serialized form: `family`, `m`, and `theta` as rows of `"p/q"` strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationConfig {
    pub family: Family,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<String>>>,
}

impl PresentationConfig {
    pub fn build(&self) -> Result<Arc<Presentation>> {
        let theta = match &self.theta {
            None => ThetaMatrix::zero(self.m),
            Some(rows) => {
                let t = ThetaMatrix::parse(rows)?;
                if t.m() != self.m {
                    return Err(Error::DimensionMismatch { expected: self.m, got: t.m() });
                }
                t
            }
        };
        Presentation::new(self.family, theta, DEFAULT_MAX_WORD_LEN)
    }
}

/// A generator letter `a_j` or `a_j*` with zero-based index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: usize,
    pub star: bool,
}

impl Letter {
    pub fn a(index: usize) -> Letter {
        Letter { index, star: false }
    }

    pub fn a_star(index: usize) -> Letter {
        Letter { index, star: true }
    }

    pub fn adjoint(self) -> Letter {
        Letter { star: !self.star, ..self }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}{}", self.index + 1, if self.star { "*" } else { "" })
    }
}

/// Parse a whitespace separated word such as `"a1 a2* a"`; `a` means `a1`.
/// Indices are one-based in the text.
pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    text.split_whitespace()
        .map(|tok| {
            let bad = || Error::InvalidPresentation(format!("cannot parse letter {tok:?}"));
            let body = tok.strip_prefix('a').ok_or_else(bad)?;
            let (digits, star) = match body.strip_suffix('*') {
                Some(d) => (d, true),
                None => (body, false),
            };
            let index = if digits.is_empty() { 1 } else { digits.parse::<usize>().map_err(|_| bad())? };
            if index == 0 {
                return Err(bad());
            }
            Ok(Letter { index: index - 1, star })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_validation() {
        let r = |n, d| Rational64::new(n, d);
        assert!(ThetaMatrix::new(vec![vec![r(0, 1), r(1, 4)], vec![r(-1, 4), r(0, 1)]]).is_ok());
        assert!(ThetaMatrix::new(vec![vec![r(0, 1), r(1, 4)], vec![r(1, 4), r(0, 1)]]).is_err());
        assert!(ThetaMatrix::new(vec![vec![r(1, 2)]]).is_err());
        let rows = vec![vec!["0".to_string(), "0.25".to_string()], vec!["-0.25".into(), "0".into()]];
        assert!(matches!(ThetaMatrix::parse(&rows), Err(Error::InexactTheta(_))));
        assert!(FloatTheta::parse(&rows, 1e-12).is_ok());
    }

    #[test]
    fn weyl_requires_zero_theta() {
        let t = ThetaMatrix::pair(2, 0, 1, Rational64::new(1, 4)).unwrap();
        assert!(Presentation::new(Family::Weyl, t.clone(), 64).is_err());
        assert!(Presentation::twisted(t).is_ok());
        assert!(Presentation::weyl(0).is_err());
    }

    #[test]
    fn words_parse() {
        let w = parse_word("a a* a2 a3*").unwrap();
        assert_eq!(w, vec![Letter::a(0), Letter::a_star(0), Letter::a(1), Letter::a_star(2)]);
        assert!(parse_word("b1").is_err());
        assert!(parse_word("a0").is_err());
    }

    #[test]
    fn config_roundtrip() {
        let cfg = PresentationConfig {
            family: Family::TwistedWeyl,
            m: 2,
            theta: Some(vec![vec!["0".into(), "1/4".into()], vec!["-1/4".into(), "0".into()]]),
        };
        let p = cfg.build().unwrap();
        assert_eq!(p.theta().lambda(0, 1), Phase::from_ratio(1, 4));
        assert_eq!(p.to_config().build().unwrap(), p);
    }
}
