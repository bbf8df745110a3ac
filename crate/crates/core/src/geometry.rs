//! Shared geometric types: evaluation domains, stationary-point problem
//! statements, knot containers, and the surface-model contract every
//! construction in this crate implements.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed axis-aligned evaluation domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Region {
    Interval { lo: f64, hi: f64 },
    Rect { x: [f64; 2], y: [f64; 2] },
}

impl Region {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo >= hi {
            return Err(Error::region(format!("bad interval [{lo}, {hi}]")));
        }
        Ok(Region::Interval { lo, hi })
    }

    pub fn rect(x: [f64; 2], y: [f64; 2]) -> Result<Self> {
        for [lo, hi] in [x, y] {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::region(format!("bad rectangle side [{lo}, {hi}]")));
            }
        }
        Ok(Region::Rect { x, y })
    }

    pub fn dim(&self) -> usize {
        match self {
            Region::Interval { .. } => 1,
            Region::Rect { .. } => 2,
        }
    }

    /// Bounds along `axis` as `[lo, hi]`.
    pub fn axis_bounds(&self, axis: usize) -> [f64; 2] {
        match (self, axis) {
            (Region::Interval { lo, hi }, 0) => [*lo, *hi],
            (Region::Rect { x, .. }, 0) => *x,
            (Region::Rect { y, .. }, 1) => *y,
            _ => panic!("axis {axis} out of range for {}-d region", self.dim()),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        (0..self.dim()).all(|axis| {
            let [lo, hi] = self.axis_bounds(axis);
            p[axis] >= lo && p[axis] <= hi
        })
    }

    pub fn clamp(&self, p: &mut [f64]) {
        for (axis, c) in p.iter_mut().enumerate().take(self.dim()) {
            let [lo, hi] = self.axis_bounds(axis);
            *c = c.clamp(lo, hi);
        }
    }

    /// Euclidean length of the domain diagonal.
    pub fn diameter(&self) -> f64 {
        match self {
            Region::Interval { lo, hi } => hi - lo,
            Region::Rect { x, y } => ((x[1] - x[0]).powi(2) + (y[1] - y[0]).powi(2)).sqrt(),
        }
    }

    /// True when `self` lies inside `outer` (both closed).
    pub fn subset_of(&self, outer: &Region) -> bool {
        self.dim() == outer.dim()
            && (0..self.dim()).all(|axis| {
                let [lo, hi] = self.axis_bounds(axis);
                let [olo, ohi] = outer.axis_bounds(axis);
                lo >= olo && hi <= ohi
            })
    }

    /// Corner points, 2 for an interval and 4 for a rectangle.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        match self {
            Region::Interval { lo, hi } => vec![vec![*lo], vec![*hi]],
            Region::Rect { x, y } => vec![
                vec![x[0], y[0]],
                vec![x[1], y[0]],
                vec![x[0], y[1]],
                vec![x[1], y[1]],
            ],
        }
    }
}

pub(crate) fn ensure_inside(region: &Region, p: &[f64]) -> Result<()> {
    if p.len() != region.dim() {
        return Err(Error::spec(format!(
            "point has {} coordinates, domain is {}-dimensional",
            p.len(),
            region.dim()
        )));
    }
    if !region.contains(p) {
        return Err(Error::region(format!("point {p:?} outside {region:?}")));
    }
    Ok(())
}

/// What a construction must guarantee at the prescribed points.
///
/// `A`: the gradient vanishes at every prescribed point.
/// `B`: as `A`, and the surface attains prescribed values there.
/// `C`: as `A`, and no other stationary point exists in the region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    A,
    B,
    C,
}

/// Prescribed stationary locations in one or two dimensions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum PointSet {
    D1(Vec<f64>),
    D2(Vec<[f64; 2]>),
}

impl PointSet {
    pub fn dim(&self) -> usize {
        match self {
            PointSet::D1(_) => 1,
            PointSet::D2(_) => 2,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PointSet::D1(v) => v.len(),
            PointSet::D2(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coords(&self, i: usize) -> Vec<f64> {
        match self {
            PointSet::D1(v) => vec![v[i]],
            PointSet::D2(v) => v[i].to_vec(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.coords(i)).collect()
    }

    fn bbox(&self) -> (Vec<f64>, Vec<f64>) {
        let dim = self.dim();
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for i in 0..self.len() {
            let p = self.coords(i);
            for a in 0..dim {
                lo[a] = lo[a].min(p[a]);
                hi[a] = hi[a].max(p[a]);
            }
        }
        (lo, hi)
    }
}

/// A stationary-point problem instance: where the surface must be flat, which
/// guarantee is requested, optional target values, and an optional domain.
#[derive(Clone, Debug, PartialEq)]
pub struct StationarySpec {
    pub mode: Mode,
    pub points: PointSet,
    pub values: Option<Vec<f64>>,
    pub region: Option<Region>,
}

impl StationarySpec {
    pub fn new(
        mode: Mode,
        points: PointSet,
        values: Option<Vec<f64>>,
        region: Option<Region>,
    ) -> Result<Self> {
        let spec = StationarySpec { mode, points, values, region };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 {
            return Err(Error::spec("at least one prescribed point is required"));
        }
        for i in 0..n {
            let p = self.points.coords(i);
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::spec(format!("point {i} has a non-finite coordinate")));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.points.coords(i) == self.points.coords(j) {
                    return Err(Error::spec(format!("points {i} and {j} coincide")));
                }
            }
        }
        if let Some(values) = &self.values {
            if values.len() != n {
                return Err(Error::spec(format!(
                    "{} values for {} points",
                    values.len(),
                    n
                )));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::spec("non-finite target value"));
            }
        } else if self.mode == Mode::B {
            return Err(Error::spec("target values are required for problem B"));
        }
        if let Some(region) = &self.region {
            if region.dim() != self.points.dim() {
                return Err(Error::spec("region dimension does not match the points"));
            }
            for i in 0..n {
                if !region.contains(&self.points.coords(i)) {
                    return Err(Error::spec(format!("point {i} lies outside the region")));
                }
            }
        }
        Ok(())
    }

    /// The stated region, or the default: the point bounding box padded by 10%
    /// of its extent per side (a unit pad on any axis with zero extent).
    pub fn resolve_region(&self) -> Region {
        if let Some(r) = &self.region {
            return r.clone();
        }
        let (lo, hi) = self.points.bbox();
        let pad = |l: f64, h: f64| -> [f64; 2] {
            let extent = h - l;
            let p = if extent > 0.0 { 0.1 * extent } else { 1.0 };
            [l - p, h + p]
        };
        match self.points.dim() {
            1 => {
                let [l, h] = pad(lo[0], hi[0]);
                Region::Interval { lo: l, hi: h }
            }
            _ => Region::Rect { x: pad(lo[0], hi[0]), y: pad(lo[1], hi[1]) },
        }
    }
}

fn check_axis(name: &str, x: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::spec(format!("{name} needs at least two knots")));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::spec(format!("{name} has a non-finite knot")));
    }
    if x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::spec(format!("{name} knots must be strictly increasing")));
    }
    Ok(())
}

/// Strictly increasing knots with one value per knot.
#[derive(Clone, Debug, PartialEq)]
pub struct Knots1D {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
}

impl Knots1D {
    pub fn new(x: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        check_axis("x", &x)?;
        if z.len() != x.len() {
            return Err(Error::spec(format!("{} values for {} knots", z.len(), x.len())));
        }
        if z.iter().any(|v| !v.is_finite()) {
            return Err(Error::spec("non-finite knot value"));
        }
        Ok(Knots1D { x, z })
    }

    pub fn n_cells(&self) -> usize {
        self.x.len() - 1
    }

    pub fn max_abs_z(&self) -> f64 {
        self.z.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Rectangular grid with one value per vertex; `z[k][l]` pairs with
/// `(x[k], y[l])`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridKnots2D {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<Vec<f64>>,
}

impl GridKnots2D {
    pub fn new(x: Vec<f64>, y: Vec<f64>, z: Vec<Vec<f64>>) -> Result<Self> {
        check_axis("x", &x)?;
        check_axis("y", &y)?;
        if z.len() != x.len() {
            return Err(Error::spec(format!("{} value rows for {} x-knots", z.len(), x.len())));
        }
        for (k, row) in z.iter().enumerate() {
            if row.len() != y.len() {
                return Err(Error::spec(format!(
                    "value row {k} has {} entries for {} y-knots",
                    row.len(),
                    y.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::spec(format!("non-finite value in row {k}")));
            }
        }
        Ok(GridKnots2D { x, y, z })
    }

    pub fn z(&self, k: usize, l: usize) -> f64 {
        self.z[k][l]
    }

    pub fn max_abs_z(&self) -> f64 {
        self.z
            .iter()
            .flat_map(|row| row.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Index of the cell owning `x`: interior knots belong to the cell on their
/// right, the last knot to the last cell. Returns `1..=n_cells`.
pub(crate) fn cell_index(knots: &[f64], x: f64) -> usize {
    let n = knots.len() - 1;
    knots.partition_point(|k| *k <= x).clamp(1, n)
}

/// Non-fatal observations recorded while building a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Diagnostic {
    /// Equal values at consecutive knots make the cell between them constant,
    /// so its whole interior is stationary.
    FlatCell { cell: usize },
    /// The cell's coefficients admit a stationary point strictly inside it.
    FalseStationaryRisk { cell: [usize; 2] },
    /// A bump radius smaller than the local spacing leaves an identically
    /// zero gap where the surface is trivially stationary.
    RadiusBelowSpacing { index: usize },
    /// A bump support strictly contains another prescribed point, which
    /// destroys the zero gradient there.
    SupportContainsNeighbor { index: usize, neighbor: usize },
}

/// A piecewise-smooth scalar field over a fixed closed domain with analytic
/// first and second derivatives.
///
/// Implementations are pure: repeated queries return identical results.
/// Queries outside [`SurfaceModel::region`] fail with [`Error::Region`].
/// At a joint between pieces the owning piece's one-sided derivatives are
/// reported.
pub trait SurfaceModel {
    fn dim(&self) -> usize;

    fn region(&self) -> &Region;

    /// Field value at `p`, with `p.len() == self.dim()`.
    fn value(&self, p: &[f64]) -> Result<f64>;

    /// Analytic gradient written into `out` (`out.len() == dim`).
    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()>;

    /// Analytic second derivatives written row-major into `out`
    /// (`out.len() == dim * dim`).
    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()>;

    /// Coordinates of interior joints orthogonal to `axis`, for models built
    /// from axis-aligned pieces. Models without axis-aligned seams return an
    /// empty list.
    fn interior_joints(&self, axis: usize) -> Vec<f64> {
        let _ = axis;
        Vec::new()
    }

    fn diagnostics(&self) -> &[Diagnostic] {
        &[]
    }
}

/// Provenance attached to exported samples.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub method: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, String>,
}

/// Dense row-major samples of a two-dimensional model:
/// `values[i * ny + j] = f(x_i, y_j)` on an inclusive uniform lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct Heightfield {
    pub region: Region,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
    pub meta: Metadata,
}

/// Inclusive uniform lattice with pinned endpoints: the naive last-node
/// formula can round one ulp past `hi`, which is outside the domain when the
/// sample region is the whole model.
pub(crate) fn lattice(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    debug_assert!(n >= 2);
    (0..n).map(move |i| match i {
        0 => lo,
        i if i == n - 1 => hi,
        i => (lo + (hi - lo) * (i as f64) / ((n - 1) as f64)).clamp(lo, hi),
    })
}

fn resolve_sample_region(model: &dyn SurfaceModel, region: Option<&Region>) -> Result<Region> {
    match region {
        None => Ok(model.region().clone()),
        Some(r) => {
            if !r.subset_of(model.region()) {
                return Err(Error::region(format!(
                    "sample region {r:?} exceeds the model domain {:?}",
                    model.region()
                )));
            }
            Ok(r.clone())
        }
    }
}

/// Sample a 2-d model on an `nx` by `ny` inclusive lattice over `region`
/// (defaults to the model's own domain, which must contain it).
pub fn sample_heightfield(
    model: &dyn SurfaceModel,
    region: Option<&Region>,
    nx: usize,
    ny: usize,
    meta: Metadata,
) -> Result<Heightfield> {
    if model.dim() != 2 {
        return Err(Error::spec("heightfield sampling needs a 2-d model"));
    }
    if nx < 2 || ny < 2 {
        return Err(Error::spec("sampling needs at least 2 points per axis"));
    }
    let region = resolve_sample_region(model, region)?;
    let [xlo, xhi] = region.axis_bounds(0);
    let [ylo, yhi] = region.axis_bounds(1);
    let mut values = Vec::with_capacity(nx * ny);
    for x in lattice(xlo, xhi, nx) {
        for y in lattice(ylo, yhi, ny) {
            values.push(model.value(&[x, y])?);
        }
    }
    Ok(Heightfield { region, nx, ny, values, meta })
}

/// Sample a 1-d model at `n >= 2` points, endpoints included.
pub fn sample_curve(
    model: &dyn SurfaceModel,
    region: Option<&Region>,
    n: usize,
) -> Result<Vec<(f64, f64)>> {
    if model.dim() != 1 {
        return Err(Error::spec("curve sampling needs a 1-d model"));
    }
    if n < 2 {
        return Err(Error::spec("sampling needs at least 2 points"));
    }
    let region = resolve_sample_region(model, region)?;
    let [lo, hi] = region.axis_bounds(0);
    lattice(lo, hi, n)
        .map(|x| model.value(&[x]).map(|v| (x, v)))
        .collect()
}
