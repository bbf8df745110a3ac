//! Document formats shared by the command line and external tooling: the
//! point-spec JSON schema, the model-config document (also emitted as the
//! sidecar next to every generated file, so any output can be rebuilt from
//! its own metadata), grid/knot extraction from point specs, and the CSV
//! writers.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bump::{build_bumps, BumpParams, Shape};
use crate::error::{Error, Result};
use crate::geometry;
use crate::geometry::{
    GridKnots2D, Heightfield, Knots1D, Metadata, Mode, PointSet, Region, StationarySpec,
    SurfaceModel,
};
use crate::quartic1d::{build_quartic, build_quartic_c2, choose_c0, CurvatureStrategy};
use crate::quartic2d::{build_tensor_c0, random_free_blocks, FreeBlocks};
use crate::superpose::{build_superposition, default_angles, Fill, TensorFamily};
use crate::trig1d::{build_trig, c2_values};
use crate::trig2d::{build_trig_tensor, c2_grid};

/// Region bounds as they appear in documents: `[a, b]` for an interval,
/// `[[a, b], [c, d]]` for a rectangle.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum BoundsDoc {
    Interval([f64; 2]),
    Rect([[f64; 2]; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RegionDoc {
    bounds: BoundsDoc,
}

/// The point-spec document: `{"dimension": 1|2, "mode": "A"|"B"|"C",
/// "points": [[x], ...] | [[x, y], ...], "values": [...]?, "region":
/// {"bounds": ...}?}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpecDoc {
    dimension: u8,
    mode: Mode,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    region: Option<RegionDoc>,
}

fn region_from_doc(doc: &RegionDoc, dimension: u8) -> Result<Region> {
    match (&doc.bounds, dimension) {
        (BoundsDoc::Interval([lo, hi]), 1) => Ok(Region::Interval { lo: *lo, hi: *hi }),
        (BoundsDoc::Rect([x, y]), 2) => Ok(Region::Rect { x: *x, y: *y }),
        _ => Err(Error::spec("region bounds do not match the stated dimension")),
    }
}

fn region_to_doc(region: &Region) -> RegionDoc {
    RegionDoc {
        bounds: match region {
            Region::Interval { lo, hi } => BoundsDoc::Interval([*lo, *hi]),
            Region::Rect { x, y } => BoundsDoc::Rect([*x, *y]),
        },
    }
}

pub fn parse_spec_json(text: &str) -> Result<StationarySpec> {
    let doc: SpecDoc =
        serde_json::from_str(text).map_err(|e| Error::spec(format!("spec document: {e}")))?;
    spec_from_doc(&doc)
}

fn spec_from_doc(doc: &SpecDoc) -> Result<StationarySpec> {
    if doc.dimension != 1 && doc.dimension != 2 {
        return Err(Error::spec(format!("dimension must be 1 or 2, got {}", doc.dimension)));
    }
    let dim = doc.dimension as usize;
    if let Some(row) = doc.points.iter().find(|row| row.len() != dim) {
        return Err(Error::spec(format!(
            "point {row:?} has {} coordinates in a {dim}-dimensional spec",
            row.len()
        )));
    }
    let points = match doc.dimension {
        1 => PointSet::D1(doc.points.iter().map(|row| row[0]).collect()),
        _ => PointSet::D2(doc.points.iter().map(|row| [row[0], row[1]]).collect()),
    };
    let region = match &doc.region {
        Some(r) => Some(region_from_doc(r, doc.dimension)?),
        None => None,
    };
    StationarySpec::new(doc.mode, points, doc.values.clone(), region)
}

pub fn spec_to_json(spec: &StationarySpec) -> serde_json::Value {
    let doc = SpecDoc {
        dimension: spec.points.dim() as u8,
        mode: spec.mode,
        points: spec.points.rows(),
        values: spec.values.clone(),
        region: spec.region.as_ref().map(region_to_doc),
    };
    serde_json::to_value(doc).expect("spec serialization cannot fail")
}

/// First-knot curvature for the C² quartic family: a named global shape or
/// an explicit number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CurvatureChoice {
    Strategy(CurvatureStrategy),
    Explicit(f64),
}

impl Default for CurvatureChoice {
    fn default() -> Self {
        CurvatureChoice::Strategy(CurvatureStrategy::MeanCurvatureZero)
    }
}

/// Free-block intent for the 2D quartic tensor: resolved to per-cell data at
/// build time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FreeBlockChoice {
    #[default]
    Zero,
    Random {
        seed: u64,
    },
}

/// Anchor curvatures for the plain quartic spline: one number for every
/// cell, an explicit per-cell list, or a seeded uniform draw from [-12, 12].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellCurvatures {
    Uniform(f64),
    List(Vec<f64>),
    Random { seed: u64 },
}

impl Default for CellCurvatures {
    fn default() -> Self {
        CellCurvatures::Uniform(0.0)
    }
}

impl CellCurvatures {
    fn resolve(&self, cells: usize) -> Result<Vec<f64>> {
        match self {
            CellCurvatures::Uniform(c) => Ok(vec![*c; cells]),
            CellCurvatures::List(list) => {
                if list.len() != cells {
                    return Err(Error::spec(format!(
                        "{} curvatures for {cells} cells",
                        list.len()
                    )));
                }
                Ok(list.clone())
            }
            CellCurvatures::Random { seed } => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
                Ok((0..cells).map(|_| rng.random_range(-12.0..12.0)).collect())
            }
        }
    }
}

fn default_bump_base() -> f64 {
    std::f64::consts::E
}

fn one() -> f64 {
    1.0
}

fn one_rotation() -> usize {
    1
}

/// Everything needed to rebuild a surface from a point spec, including any
/// random seeds, so a stored config replays byte-identically.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum ModelConfig {
    /// Sum of compactly supported radial terms, one per prescribed point.
    Bump {
        #[serde(default = "default_bump_base")]
        base: f64,
        #[serde(default = "one")]
        radius_scale: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        radii: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coefficients: Option<Vec<f64>>,
        #[serde(default = "default_shape")]
        shape: Shape,
    },
    /// Degree-4 knot spline with freely chosen cell anchor curvatures.
    Quartic {
        #[serde(default)]
        c: CellCurvatures,
    },
    /// Degree-4 knot spline with the curvature chain that restores C².
    QuarticC2 {
        #[serde(default)]
        c0: CurvatureChoice,
    },
    /// Tensor-product degree-4 surface on a grid (C⁰ across patch edges).
    Quartic2d {
        #[serde(default)]
        c0x: f64,
        #[serde(default)]
        c0y: f64,
        #[serde(default)]
        free_block: FreeBlockChoice,
    },
    /// Cosine knot spline.
    Trig,
    /// Cosine knot spline over generated C² values.
    TrigC2 {
        z0: f64,
        mu: f64,
    },
    /// Product-of-cosines tensor surface on a grid (C¹).
    Trig2d,
    /// Product-of-cosines tensor surface over a generated C² value grid.
    Trig2dC2 {
        z00: f64,
        nu0: f64,
        mu0: f64,
        lambda: f64,
    },
    /// Sum of tensor surfaces built in rotated coordinate frames.
    Superpose {
        #[serde(default = "one_rotation")]
        rotations: usize,
        #[serde(default)]
        base: TensorFamily,
        #[serde(default)]
        fill: Fill,
    },
}

fn default_shape() -> Shape {
    Shape::ConstantOne
}

impl ModelConfig {
    pub fn method_name(&self) -> &'static str {
        match self {
            ModelConfig::Bump { .. } => "bump",
            ModelConfig::Quartic { .. } => "quartic",
            ModelConfig::QuarticC2 { .. } => "quartic-c2",
            ModelConfig::Quartic2d { .. } => "quartic2d",
            ModelConfig::Trig => "trig",
            ModelConfig::TrigC2 { .. } => "trig-c2",
            ModelConfig::Trig2d => "trig2d",
            ModelConfig::Trig2dC2 { .. } => "trig2d-c2",
            ModelConfig::Superpose { .. } => "superpose",
        }
    }

    /// The seed stored inside the config, if its method draws random data.
    pub fn seed(&self) -> Option<u64> {
        match self {
            ModelConfig::Quartic { c: CellCurvatures::Random { seed } } => Some(*seed),
            ModelConfig::Quartic2d { free_block: FreeBlockChoice::Random { seed }, .. } => {
                Some(*seed)
            }
            ModelConfig::Superpose { fill: Fill::Random { seed, .. }, .. } => Some(*seed),
            _ => None,
        }
    }
}

pub fn parse_model_config(text: &str) -> Result<ModelConfig> {
    serde_json::from_str(text).map_err(|e| Error::spec(format!("model config: {e}")))
}

/// Sorted 1D knots from a point spec. Values come from the spec when present
/// and otherwise alternate ±1 in knot order, which keeps consecutive values
/// distinct (the no-spurious precondition of the knot splines).
pub fn knots_from_spec(spec: &StationarySpec) -> Result<Knots1D> {
    let xs = match &spec.points {
        PointSet::D1(xs) => xs,
        PointSet::D2(_) => return Err(Error::spec("expected a 1-dimensional point spec")),
    };
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|a, b| xs[*a].total_cmp(&xs[*b]));
    let x: Vec<f64> = order.iter().map(|&i| xs[i]).collect();
    let z: Vec<f64> = match &spec.values {
        Some(values) => order.iter().map(|&i| values[i]).collect(),
        None => (0..x.len()).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
    };
    Knots1D::new(x, z)
}

/// Reassemble a full grid from a 2D point spec: the points must be exactly
/// the product of their distinct x- and y-coordinates, each vertex listed
/// once. Missing values fall back to a ±1 checkerboard.
pub fn grid_from_spec(spec: &StationarySpec) -> Result<GridKnots2D> {
    let pts = match &spec.points {
        PointSet::D2(p) => p,
        PointSet::D1(_) => return Err(Error::spec("expected a 2-dimensional point spec")),
    };
    let mut xs: Vec<f64> = pts.iter().map(|p| p[0]).collect();
    let mut ys: Vec<f64> = pts.iter().map(|p| p[1]).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    if xs.len() * ys.len() != pts.len() {
        return Err(Error::spec(format!(
            "{} points cannot tile the {}x{} grid of their coordinates",
            pts.len(),
            xs.len(),
            ys.len()
        )));
    }
    let mut z = vec![vec![f64::NAN; ys.len()]; xs.len()];
    for (i, p) in pts.iter().enumerate() {
        let k = xs.partition_point(|v| *v < p[0]);
        let l = ys.partition_point(|v| *v < p[1]);
        if !z[k][l].is_nan() {
            return Err(Error::spec(format!("grid vertex {p:?} is listed twice")));
        }
        z[k][l] = match &spec.values {
            Some(values) => values[i],
            None => {
                if (k + l) % 2 == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
        };
    }
    if z.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::spec("points do not cover every grid vertex"));
    }
    GridKnots2D::new(xs, ys, z)
}

fn reject_spec_values(spec: &StationarySpec, method: &str) -> Result<()> {
    if spec.values.is_some() {
        return Err(Error::spec(format!(
            "{method} generates its own values; remove them from the point spec"
        )));
    }
    Ok(())
}

/// Build the surface a config describes over a point spec. The returned
/// model owns its data and evaluates anywhere in its region.
pub fn build_model(spec: &StationarySpec, config: &ModelConfig) -> Result<Box<dyn SurfaceModel>> {
    match config {
        ModelConfig::Bump { base, radius_scale, radii, coefficients, shape } => {
            let params = BumpParams {
                base: *base,
                radius_scale: *radius_scale,
                radii: radii.clone(),
                coefficients: coefficients.clone(),
                shape: shape.clone(),
            };
            Ok(Box::new(build_bumps(spec, &params)?))
        }
        ModelConfig::Quartic { c } => {
            let knots = knots_from_spec(spec)?;
            let cells = c.resolve(knots.x.len() - 1)?;
            Ok(Box::new(build_quartic(&knots, &cells)?))
        }
        ModelConfig::QuarticC2 { c0 } => {
            let knots = knots_from_spec(spec)?;
            let c0 = match c0 {
                CurvatureChoice::Explicit(v) => *v,
                CurvatureChoice::Strategy(s) => choose_c0(&knots, *s),
            };
            Ok(Box::new(build_quartic_c2(&knots, c0)?))
        }
        ModelConfig::Quartic2d { c0x, c0y, free_block } => {
            let grid = grid_from_spec(spec)?;
            let cells = (grid.x.len() - 1) * (grid.y.len() - 1);
            let blocks = match free_block {
                FreeBlockChoice::Zero => FreeBlocks::Zero,
                FreeBlockChoice::Random { seed } => random_free_blocks(cells, *seed),
            };
            Ok(Box::new(build_tensor_c0(&grid, *c0x, *c0y, &blocks)?))
        }
        ModelConfig::Trig => {
            let knots = knots_from_spec(spec)?;
            Ok(Box::new(build_trig(&knots)?))
        }
        ModelConfig::TrigC2 { z0, mu } => {
            reject_spec_values(spec, "trig-c2")?;
            let knots = knots_from_spec(spec)?;
            let z = c2_values(&knots.x, *z0, *mu)?;
            Ok(Box::new(build_trig(&Knots1D::new(knots.x, z)?)?))
        }
        ModelConfig::Trig2d => {
            let grid = grid_from_spec(spec)?;
            Ok(Box::new(build_trig_tensor(&grid)?))
        }
        ModelConfig::Trig2dC2 { z00, nu0, mu0, lambda } => {
            reject_spec_values(spec, "trig2d-c2")?;
            let grid = grid_from_spec(spec)?;
            let valued = c2_grid(&grid.x, &grid.y, *z00, *nu0, *mu0, *lambda)?;
            Ok(Box::new(build_trig_tensor(&valued)?))
        }
        ModelConfig::Superpose { rotations, base, fill } => {
            if *rotations == 0 {
                return Err(Error::spec("at least one rotation frame is required"));
            }
            Ok(Box::new(build_superposition(spec, *base, &default_angles(*rotations), fill)?))
        }
    }
}

/// Model metadata for generated artifacts.
pub fn config_metadata(config: &ModelConfig) -> Metadata {
    let mut params = BTreeMap::new();
    if let serde_json::Value::Object(map) =
        serde_json::to_value(config).expect("config serialization cannot fail")
    {
        for (k, v) in map {
            if k != "method" {
                params.insert(k, v.to_string());
            }
        }
    }
    Metadata { method: config.method_name().to_string(), seed: config.seed(), params }
}

/// The sidecar written next to generated files. Its top level is a valid
/// model config (extra keys are ignored on parse), so the file can be fed
/// straight back as a stored config.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(flatten)]
    pub model: ModelConfig,
    pub spec: serde_json::Value,
    /// Samples per axis of the emitted CSV.
    pub samples: Vec<usize>,
}

impl Sidecar {
    pub fn new(spec: &StationarySpec, model: &ModelConfig, samples: &[usize]) -> Self {
        Sidecar { model: model.clone(), spec: spec_to_json(spec), samples: samples.to_vec() }
    }
}

/// CSV with header `x,z`, one sample per line, 13 significant digits.
pub fn write_curve_csv(out: &mut dyn Write, samples: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "x,z")?;
    for (x, z) in samples {
        writeln!(out, "{x:.12e},{z:.12e}")?;
    }
    Ok(())
}

/// CSV with header `x,y,z`, row-major over the sample lattice (x varies on
/// the outer loop), 13 significant digits.
pub fn write_heightfield_csv(out: &mut dyn Write, field: &Heightfield) -> std::io::Result<()> {
    writeln!(out, "x,y,z")?;
    let [xlo, xhi] = field.region.axis_bounds(0);
    let [ylo, yhi] = field.region.axis_bounds(1);
    let xs: Vec<f64> = geometry::lattice(xlo, xhi, field.nx).collect();
    let ys: Vec<f64> = geometry::lattice(ylo, yhi, field.ny).collect();
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let z = field.values[i * field.ny + j];
            writeln!(out, "{x:.12e},{y:.12e},{z:.12e}")?;
        }
    }
    Ok(())
}
