//! JSON experiment configs and their conversion into library types.
//!
//! One experiment is one JSON document: a body, a map, a start point, the
//! metric scale, iteration/tolerance knobs, and emit flags. Matrices are
//! row-major arrays of arrays; points are arrays of decimals. The seed
//! fully determines every random choice a run makes.

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use hilbert_dyn::conjecture::ReportConfig;
use hilbert_dyn::geometry::{ConvexBody, Point};
use hilbert_dyn::maps::{SemicontractionSpec, TopicalOp, TopicalRow};
use hilbert_dyn::MetricConvention;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Run identifier; defaults to the map's own id.
    #[serde(default)]
    pub name: Option<String>,
    pub body: BodySpec,
    pub map: MapSpec,
    pub start: Vec<f64>,
    #[serde(default)]
    pub scale: ScaleSpec,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
    #[serde(default = "default_probes")]
    pub probes: usize,
    #[serde(default = "default_true")]
    pub beardon: bool,
    #[serde(default)]
    pub emit: EmitFlags,
}

fn default_max_iter() -> usize {
    200
}
fn default_seed() -> u64 {
    7
}
fn default_tail_fraction() -> f64 {
    0.25
}
fn default_probes() -> usize {
    2000
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ScaleSpec {
    #[default]
    One,
    Half,
}

impl ScaleSpec {
    pub fn convention(self) -> MetricConvention {
        match self {
            ScaleSpec::One => MetricConvention::one(),
            ScaleSpec::Half => MetricConvention::half(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ScaleSpec::One => "one",
            ScaleSpec::Half => "half",
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub boundary: f64,
    pub cluster: f64,
    pub chain: f64,
    pub face: f64,
    pub boundary_samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            boundary: 1e-9,
            cluster: 1e-4,
            chain: 1e-6,
            face: 1e-7,
            boundary_samples: 33,
        }
    }
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EmitFlags {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags { csv: true, json: true, svg: false }
    }
}

/// Convex body descriptions accepted in configs.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BodySpec {
    Simplex { n: usize },
    Ball { dim: usize },
    Ellipsoid { center: Vec<f64>, shape: Vec<Vec<f64>> },
    Cube {
        dim: usize,
        #[serde(default = "default_half_width")]
        half_width: f64,
    },
    RegularPolygon {
        sides: usize,
        #[serde(default = "default_circumradius")]
        circumradius: f64,
    },
    Polygon { vertices: Vec<[f64; 2]> },
    Hpolytope { normals: Vec<Vec<f64>>, offsets: Vec<f64>, witness: Vec<f64> },
    Intersection {
        parts: Vec<BodySpec>,
        #[serde(default)]
        witness: Option<Vec<f64>>,
    },
}

fn default_half_width() -> f64 {
    1.0
}
fn default_circumradius() -> f64 {
    1.0
}

impl BodySpec {
    pub fn build(&self) -> Result<ConvexBody> {
        let body = match self {
            BodySpec::Simplex { n } => ConvexBody::standard_simplex(*n),
            BodySpec::Ball { dim } => ConvexBody::unit_ball(*dim),
            BodySpec::Ellipsoid { center, shape } => {
                let c = Point::new(center.clone()).map_err(|e| anyhow!("{e}"))?;
                ConvexBody::ellipsoid(c, shape.clone())
            }
            BodySpec::Cube { dim, half_width } => ConvexBody::cube(*dim, *half_width),
            BodySpec::RegularPolygon { sides, circumradius } => {
                ConvexBody::regular_polygon(*sides, *circumradius)
            }
            BodySpec::Polygon { vertices } => ConvexBody::polygon(vertices),
            BodySpec::Hpolytope { normals, offsets, witness } => {
                let w = Point::new(witness.clone()).map_err(|e| anyhow!("{e}"))?;
                ConvexBody::hpolytope(normals.clone(), offsets.clone(), w)
            }
            BodySpec::Intersection { parts, witness } => {
                let built: Result<Vec<ConvexBody>> = parts.iter().map(|p| p.build()).collect();
                match witness {
                    Some(w) => {
                        let w = Point::new(w.clone()).map_err(|e| anyhow!("{e}"))?;
                        ConvexBody::intersection_with_witness(built?, w)
                    }
                    None => ConvexBody::intersection(built?),
                }
            }
        };
        body.map_err(|e| anyhow!("invalid body: {e}"))
    }

    pub fn label(&self) -> String {
        match self {
            BodySpec::Simplex { n } => format!("simplex{n}"),
            BodySpec::Ball { dim } => format!("ball{dim}"),
            BodySpec::Ellipsoid { center, .. } => format!("ellipsoid{}", center.len()),
            BodySpec::Cube { dim, half_width } => format!("cube{dim}(hw={half_width})"),
            BodySpec::RegularPolygon { sides, .. } => format!("polygon{sides}"),
            BodySpec::Polygon { vertices } => format!("polygon{}", vertices.len()),
            BodySpec::Hpolytope { normals, .. } => format!("hpolytope({} rows)", normals.len()),
            BodySpec::Intersection { parts, .. } => format!("intersection({} parts)", parts.len()),
        }
    }
}

/// Map descriptions accepted in configs.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapSpec {
    Identity,
    ProjectiveLinear { matrix: Vec<Vec<f64>> },
    Topical { rows: Vec<TopicalRowSpec> },
    CoordinatePower { exponent: f64 },
    KleinProjective { matrix: Vec<Vec<f64>> },
    Composition { parts: Vec<MapSpec> },
    BlendToward { inner: Box<MapSpec>, point: Vec<f64>, weight: f64 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopicalRowSpec {
    pub op: TopicalOpSpec,
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopicalOpSpec {
    Max,
    Min,
}

impl MapSpec {
    /// Builds the map; projective matrices are certified against `body`
    /// with the config seed.
    pub fn build(&self, body: &ConvexBody, seed: u64) -> Result<SemicontractionSpec> {
        let spec = match self {
            MapSpec::Identity => Ok(SemicontractionSpec::Identity),
            MapSpec::ProjectiveLinear { matrix } => {
                SemicontractionSpec::projective_linear(matrix.clone())
            }
            MapSpec::Topical { rows } => SemicontractionSpec::topical(
                rows.iter()
                    .map(|r| TopicalRow {
                        op: match r.op {
                            TopicalOpSpec::Max => TopicalOp::Max,
                            TopicalOpSpec::Min => TopicalOp::Min,
                        },
                        coeffs: r.coeffs.clone(),
                    })
                    .collect(),
            ),
            MapSpec::CoordinatePower { exponent } => {
                SemicontractionSpec::coordinate_power(*exponent)
            }
            MapSpec::KleinProjective { matrix } => {
                SemicontractionSpec::klein_projective(matrix.clone(), body, seed, 1000)
            }
            MapSpec::Composition { parts } => {
                let built: Result<Vec<SemicontractionSpec>> =
                    parts.iter().map(|p| p.build(body, seed)).collect();
                SemicontractionSpec::composition(built?)
            }
            MapSpec::BlendToward { inner, point, weight } => {
                let inner = inner.build(body, seed)?;
                let point = Point::new(point.clone()).map_err(|e| anyhow!("{e}"))?;
                if !(0.0..=1.0).contains(weight) {
                    bail!("blend weight must lie in [0, 1]");
                }
                Ok(SemicontractionSpec::BlendToward {
                    inner: Box::new(inner),
                    point,
                    weight: *weight,
                })
            }
        };
        spec.map_err(|e| anyhow!("invalid map: {e}"))
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            serde_json::from_str(text).context("config does not parse")?;
        if !(config.tail_fraction > 0.0 && config.tail_fraction <= 1.0) {
            bail!("tail_fraction must lie in (0, 1]");
        }
        if config.max_iter == 0 {
            bail!("max_iter must be at least 1");
        }
        Ok(config)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text)
    }

    pub fn start_point(&self) -> Result<Point> {
        Point::new(self.start.clone()).map_err(|e| anyhow!("invalid start point: {e}"))
    }

    pub fn report_config(&self) -> ReportConfig {
        ReportConfig {
            max_iter: self.max_iter,
            conv: self.scale.convention(),
            seed: self.seed,
            tail_fraction: self.tail_fraction,
            cluster_tol: self.tolerances.cluster,
            face_tol: self.tolerances.face,
            boundary_samples: self.tolerances.boundary_samples,
            probes: self.probes,
            perturbation: 1e-2,
            beardon: self.beardon,
        }
    }

    pub fn run_name(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.map_label())
    }

    fn map_label(&self) -> String {
        match &self.map {
            MapSpec::Identity => "identity".into(),
            MapSpec::ProjectiveLinear { .. } => "projective_linear".into(),
            MapSpec::Topical { .. } => "topical".into(),
            MapSpec::CoordinatePower { exponent } => format!("coordinate_power({exponent})"),
            MapSpec::KleinProjective { .. } => "klein_projective".into(),
            MapSpec::Composition { .. } => "composition".into(),
            MapSpec::BlendToward { .. } => "blend_toward".into(),
        }
    }
}
