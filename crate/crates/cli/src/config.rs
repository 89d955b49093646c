//! TOML run configuration. Rationals are always strings (`"p/q"` or an
//! integer) so that nothing on the exact path passes through a float.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use fellforge::algebra::{FloatTheta, Presentation, PresentationConfig, ThetaMatrix};
use fellforge::characters::{rational_grid, Character};
use fellforge::phase::parse_rational;
use fellforge::window::{degree_box, lattice_box, validate_window, Point};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub presentation: PresentationConfig,
    #[serde(default)]
    pub window: WindowConfig,
    #[serde(default)]
    pub characters: CharactersConfig,
    #[serde(default)]
    pub groupoid: GroupoidConfig,
    #[serde(default)]
    pub deform: DeformConfig,
    #[serde(default)]
    pub rep: RepConfig,
    #[serde(default)]
    pub toeplitz: ToeplitzConfig,
    /// Report path; `--out` takes precedence, stdout if neither is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

/// Lattice window: the box `∏_j [0, M_j]`, or an explicit point list.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    /// Default `M_j = 3` for every `j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Point>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharactersConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    /// Extra points, each a vector of rational strings.
    #[serde(default)]
    pub points: Vec<Vec<String>>,
    #[serde(default = "default_depth")]
    pub depth: usize,
}

impl Default for CharactersConfig {
    fn default() -> Self {
        CharactersConfig { grid: None, points: Vec::new(), depth: default_depth() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
    pub step: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidConfig {
    /// Degrees `[-r, r]^m`; defaults to the largest window bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<i64>,
    /// Explicit degree list, overriding `radius`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformConfig {
    /// Deformation angles; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<Vec<String>>>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

impl Default for DeformConfig {
    fn default() -> Self {
        DeformConfig { theta: None, samples: default_samples() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepMode {
    Exact,
    Float,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepConfig {
    /// Truncation `M_j`; defaults to the window bounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<u32>>,
    #[serde(default = "default_mode")]
    pub mode: RepMode,
    /// Float-mode angles; decimals allowed. Defaults to the presentation's.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub float_theta: Option<Vec<Vec<String>>>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_graph_samples")]
    pub graph_samples: usize,
    /// Truncation of the single-mode model used for the graph-norm sweep.
    #[serde(default = "default_graph_bound")]
    pub graph_bound: u32,
    #[serde(default = "default_cayley_size")]
    pub cayley_size: usize,
    #[serde(default = "default_families")]
    pub inducibility_families: usize,
}

impl Default for RepConfig {
    fn default() -> Self {
        RepConfig {
            bounds: None,
            mode: default_mode(),
            float_theta: None,
            tolerance: default_tolerance(),
            graph_samples: default_graph_samples(),
            graph_bound: default_graph_bound(),
            cayley_size: default_cayley_size(),
            inducibility_families: default_families(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToeplitzConfig {
    #[serde(default = "default_toeplitz")]
    pub size: usize,
}

impl Default for ToeplitzConfig {
    fn default() -> Self {
        ToeplitzConfig { size: default_toeplitz() }
    }
}

fn default_depth() -> usize {
    16
}
fn default_samples() -> usize {
    100
}
fn default_mode() -> RepMode {
    RepMode::Exact
}
fn default_tolerance() -> f64 {
    fellforge::operator::RELATION_TOLERANCE
}
fn default_graph_samples() -> usize {
    1000
}
fn default_graph_bound() -> u32 {
    20
}
fn default_cayley_size() -> usize {
    50
}
fn default_families() -> usize {
    100
}
fn default_toeplitz() -> usize {
    200
}

/// Everything a command needs, parsed and checked up front.
pub struct Validated {
    pub pres: Arc<Presentation>,
    pub window: Vec<Point>,
    pub bounds: Vec<u32>,
    pub grid: Vec<Character>,
    pub group_bound: Vec<Vec<i64>>,
    pub deformation: ThetaMatrix,
    pub rep_bounds: Vec<u32>,
    pub float_theta: FloatTheta,
}

fn rationals(values: &[String]) -> Result<Vec<BigRational>> {
    values.iter().map(|s| parse_rational(s).map_err(anyhow::Error::from)).collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> Result<Validated> {
        let pres = self.presentation.build().context("presentation")?;
        let m = pres.m();
        let bounds = self.window.bounds.clone().unwrap_or_else(|| vec![3; m]);
        if bounds.len() != m {
            bail!("window.bounds has {} entries, expected m = {m}", bounds.len());
        }
        let window = match &self.window.points {
            Some(points) => {
                validate_window(points, m).context("window.points")?;
                points.clone()
            }
            None => lattice_box(&bounds),
        };
        let mut grid = match &self.characters.grid {
            Some(g) => {
                let (lower, upper, step) = (rationals(&g.lower)?, rationals(&g.upper)?, rationals(&g.step)?);
                if lower.len() != m {
                    bail!("characters.grid has dimension {}, expected m = {m}", lower.len());
                }
                rational_grid(&lower, &upper, &step).context("characters.grid")?
            }
            None => Vec::new(),
        };
        for p in &self.characters.points {
            let chi = Character::parse(p).context("characters.points")?;
            if chi.dim() != m {
                bail!("character {chi} has dimension {}, expected m = {m}", chi.dim());
            }
            grid.push(chi);
        }
        if self.characters.depth == 0 {
            bail!("characters.depth must be at least 1");
        }
        let radius = match self.groupoid.radius {
            Some(r) if r < 0 => bail!("groupoid.radius must be nonnegative"),
            Some(r) => r,
            None => window.iter().flatten().copied().max().unwrap_or(0),
        };
        let group_bound = match &self.groupoid.bound {
            Some(b) => {
                if let Some(g) = b.iter().find(|g| g.len() != m) {
                    bail!("groupoid.bound entry {g:?} has the wrong dimension");
                }
                b.clone()
            }
            None => degree_box(m, radius),
        };
        let deformation = match &self.deform.theta {
            Some(rows) => ThetaMatrix::parse(rows).context("deform.theta")?,
            None => ThetaMatrix::zero(m),
        };
        if deformation.m() != m {
            bail!("deform.theta is {0}×{0}, expected m = {m}", deformation.m());
        }
        let rep_bounds = self.rep.bounds.clone().unwrap_or_else(|| bounds.clone());
        if rep_bounds.len() != m {
            bail!("rep.bounds has {} entries, expected m = {m}", rep_bounds.len());
        }
        let float_theta = match &self.rep.float_theta {
            Some(rows) => FloatTheta::parse(rows, 1e-12).context("rep.float_theta")?,
            None => pres.theta().to_f64(),
        };
        if float_theta.m() != m {
            bail!("rep.float_theta has the wrong dimension");
        }
        if !(self.rep.tolerance >= 0.0) {
            bail!("rep.tolerance must be a nonnegative number");
        }
        if self.rep.cayley_size == 0 {
            bail!("rep.cayley_size must be positive");
        }
        if self.toeplitz.size < 3 {
            bail!("toeplitz.size must be at least 3, got {}", self.toeplitz.size);
        }
        Ok(Validated { pres, window, bounds, grid, group_bound, deformation, rep_bounds, float_theta })
    }
}
