//! Scattered planar stationary points via rotated tensor frames.
//!
//! Tensor-product surfaces only place stationary points on grid vertices, so
//! a single frame cannot serve an arbitrary scatter without introducing many
//! unwanted vertices. Summing several copies built in rotated coordinate
//! frames keeps every prescribed point stationary (each frame sees it as a
//! grid vertex) while the frames' surplus vertices stop lining up with each
//! other, which empirically thins out the surplus stationary points of the
//! sum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{GridKnots2D, Mode, Region, StationarySpec, SurfaceModel, ensure_inside};
use crate::quartic2d::{FreeBlocks, QuarticSurface2D, build_tensor_c0};
use crate::trig2d::{TrigSurface2D, build_trig_tensor};

/// Rotate `p` by `angle` radians about the origin, counterclockwise.
pub fn rotate_point(p: [f64; 2], angle: f64) -> [f64; 2] {
    let (s, c) = angle.sin_cos();
    [p[0] * c - p[1] * s, p[0] * s + p[1] * c]
}

/// Evenly spread frame angles `k * pi / (2m)`, covering a quarter turn.
pub fn default_angles(m: usize) -> Vec<f64> {
    (0..m)
        .map(|k| (k as f64) * std::f64::consts::FRAC_PI_2 / (m as f64))
        .collect()
}

/// How frame-grid vertices that carry no prescribed point get their values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Fill {
    Zero,
    /// Copy the value of the nearest prescribed point (ties pick the lowest
    /// index). Keeps the surface near the data's scale.
    #[default]
    NearestValue,
    Random { seed: u64, lo: f64, hi: f64 },
}

/// Which tensor construction each frame uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorFamily {
    #[default]
    Trig,
    Quartic,
}

enum FrameSurface {
    Trig(TrigSurface2D),
    Quartic(QuarticSurface2D),
}

impl FrameSurface {
    fn as_model(&self) -> &dyn SurfaceModel {
        match self {
            FrameSurface::Trig(m) => m,
            FrameSurface::Quartic(m) => m,
        }
    }
}

struct Frame {
    cos: f64,
    sin: f64,
    angle: f64,
    surface: FrameSurface,
}

pub struct Superposition {
    frames: Vec<Frame>,
    region: Region,
}

const CLUSTER_TOL: f64 = 1e-9;

/// Sorted distinct axis coordinates for one frame: clusters of the rotated
/// point coordinates plus two outer lines covering the rotated region.
/// Returns the knot list and each point's knot index.
fn cluster_axis(coords: &[f64], extent: [f64; 2]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|a, b| coords[*a].total_cmp(&coords[*b]));
    let mut reps: Vec<f64> = Vec::new();
    let mut cluster_of = vec![0usize; coords.len()];
    for &i in &order {
        match reps.last() {
            Some(rep) if coords[i] - rep <= CLUSTER_TOL => {}
            _ => reps.push(coords[i]),
        }
        cluster_of[i] = reps.len() - 1;
    }
    let mut knots = Vec::with_capacity(reps.len() + 2);
    knots.push(extent[0]);
    knots.extend_from_slice(&reps);
    knots.push(extent[1]);
    // Outer lines land at index 0 and len-1; clusters shift by one.
    for c in &mut cluster_of {
        *c += 1;
    }
    (knots, cluster_of)
}

/// Padded bounds of the region's corners after rotation, per axis.
fn rotated_extent(region: &Region, angle: f64) -> ([f64; 2], [f64; 2]) {
    let mut xlo = f64::INFINITY;
    let mut xhi = f64::NEG_INFINITY;
    let mut ylo = f64::INFINITY;
    let mut yhi = f64::NEG_INFINITY;
    for corner in region.corners() {
        let q = rotate_point([corner[0], corner[1]], angle);
        xlo = xlo.min(q[0]);
        xhi = xhi.max(q[0]);
        ylo = ylo.min(q[1]);
        yhi = yhi.max(q[1]);
    }
    let pad = |lo: f64, hi: f64| -> [f64; 2] {
        let p = 0.1 * (hi - lo).max(1.0);
        [lo - p, hi + p]
    };
    (pad(xlo, xhi), pad(ylo, yhi))
}

fn build_frame(
    rotated: &[[f64; 2]],
    values: &[f64],
    region: &Region,
    angle: f64,
    family: TensorFamily,
    fill: &Fill,
    rng: &mut ChaCha8Rng,
) -> Result<FrameSurface> {
    let (x_extent, y_extent) = rotated_extent(region, angle);
    let xs: Vec<f64> = rotated.iter().map(|q| q[0]).collect();
    let ys: Vec<f64> = rotated.iter().map(|q| q[1]).collect();
    let (kx, cx) = cluster_axis(&xs, x_extent);
    let (ky, cy) = cluster_axis(&ys, y_extent);

    let mut vertex_point: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..rotated.len() {
        if let Some(other) = vertex_point.insert((cx[i], cy[i]), i) {
            return Err(Error::spec(format!(
                "points {other} and {i} land on the same grid vertex in the \
                 frame rotated by {angle}; choose different angles"
            )));
        }
    }

    let mut z = vec![vec![0.0; ky.len()]; kx.len()];
    for (a, xk) in kx.iter().enumerate() {
        for (b, yk) in ky.iter().enumerate() {
            if let Some(&i) = vertex_point.get(&(a, b)) {
                z[a][b] = values[i];
                continue;
            }
            z[a][b] = match fill {
                Fill::Zero => 0.0,
                Fill::Random { lo, hi, .. } => rng.random_range(*lo..*hi),
                Fill::NearestValue => {
                    let mut best = (f64::INFINITY, 0usize);
                    for (i, q) in rotated.iter().enumerate() {
                        let d2 = (q[0] - xk) * (q[0] - xk) + (q[1] - yk) * (q[1] - yk);
                        if d2 < best.0 {
                            best = (d2, i);
                        }
                    }
                    values[best.1]
                }
            };
        }
    }

    let grid = GridKnots2D::new(kx, ky, z)?;
    Ok(match family {
        TensorFamily::Trig => FrameSurface::Trig(build_trig_tensor(&grid)?),
        TensorFamily::Quartic => {
            FrameSurface::Quartic(build_tensor_c0(&grid, 0.0, 0.0, &FreeBlocks::Zero)?)
        }
    })
}

/// Build the sum of rotated tensor frames for a planar scatter.
///
/// Prescribed values are split evenly across frames, so the sum restores
/// them exactly; a spec without values gets alternating unit targets. The
/// frame grids carry every rotated prescribed point as a vertex, which pins
/// a zero gradient there in every frame.
pub fn build_superposition(
    spec: &StationarySpec,
    family: TensorFamily,
    angles: &[f64],
    fill: &Fill,
) -> Result<Superposition> {
    if spec.points.dim() != 2 {
        return Err(Error::unsupported("rotated frames need planar points"));
    }
    if spec.mode == Mode::C {
        return Err(Error::unsupported(
            "rotated frames do not control surplus stationary points exactly",
        ));
    }
    if angles.is_empty() {
        return Err(Error::spec("at least one frame angle is required"));
    }
    for a in 0..angles.len() {
        if !angles[a].is_finite() {
            return Err(Error::spec("frame angles must be finite"));
        }
        for b in a + 1..angles.len() {
            if (angles[a] - angles[b]).abs() < 1e-12 {
                return Err(Error::spec(format!(
                    "frame angles {a} and {b} coincide"
                )));
            }
        }
    }

    let m = angles.len() as f64;
    let base: Vec<f64> = match &spec.values {
        Some(v) => v.clone(),
        None => (0..spec.points.len())
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect(),
    };
    let shares: Vec<f64> = base.iter().map(|v| v / m).collect();

    let region = spec.resolve_region();
    let points = spec.points.rows();
    let mut rng = match fill {
        Fill::Random { seed, .. } => ChaCha8Rng::seed_from_u64(*seed),
        _ => ChaCha8Rng::seed_from_u64(0),
    };
    let mut frames = Vec::with_capacity(angles.len());
    for &angle in angles {
        let rotated: Vec<[f64; 2]> = points
            .iter()
            .map(|p| rotate_point([p[0], p[1]], angle))
            .collect();
        let surface = build_frame(&rotated, &shares, &region, angle, family, fill, &mut rng)?;
        let (sin, cos) = angle.sin_cos();
        frames.push(Frame { cos, sin, angle, surface });
    }
    Ok(Superposition { frames, region })
}

impl Superposition {
    pub fn angles(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.angle).collect()
    }
}

impl SurfaceModel for Superposition {
    fn dim(&self) -> usize {
        2
    }

    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, p: &[f64]) -> Result<f64> {
        ensure_inside(&self.region, p)?;
        let mut sum = 0.0;
        for f in &self.frames {
            let q = [p[0] * f.cos - p[1] * f.sin, p[0] * f.sin + p[1] * f.cos];
            sum += f.surface.as_model().value(&q)?;
        }
        Ok(sum)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out.fill(0.0);
        let mut g = [0.0; 2];
        for f in &self.frames {
            let q = [p[0] * f.cos - p[1] * f.sin, p[0] * f.sin + p[1] * f.cos];
            f.surface.as_model().gradient(&q, &mut g)?;
            // Chain rule through the rotation: transpose action on the
            // frame gradient.
            out[0] += f.cos * g[0] + f.sin * g[1];
            out[1] += -f.sin * g[0] + f.cos * g[1];
        }
        Ok(())
    }

    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out.fill(0.0);
        let mut h = [0.0; 4];
        for f in &self.frames {
            let q = [p[0] * f.cos - p[1] * f.sin, p[0] * f.sin + p[1] * f.cos];
            f.surface.as_model().second_derivatives(&q, &mut h)?;
            let (c, s) = (f.cos, f.sin);
            // R^T H R with R = [[c, -s], [s, c]].
            let a0 = h[0] * c + h[1] * s;
            let a1 = -h[0] * s + h[1] * c;
            let b0 = h[2] * c + h[3] * s;
            let b1 = -h[2] * s + h[3] * c;
            out[0] += c * a0 + s * b0;
            out[1] += c * a1 + s * b1;
            out[2] += -s * a0 + c * b0;
            out[3] += -s * a1 + c * b1;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PointSet;

    fn scatter() -> StationarySpec {
        StationarySpec::new(
            Mode::B,
            PointSet::D2(vec![
                [0.1, 0.2],
                [0.8, 0.3],
                [0.4, 0.9],
                [0.65, 0.55],
                [0.25, 0.75],
            ]),
            Some(vec![1.0, -0.5, 0.25, 0.8, -1.2]),
            Some(Region::Rect { x: [0.0, 1.0], y: [0.0, 1.0] }),
        )
        .unwrap()
    }

    #[test]
    fn default_angles_cover_a_quarter_turn() {
        let a = default_angles(3);
        assert_eq!(a.len(), 3);
        assert_eq!(a[0], 0.0);
        assert!((a[1] - std::f64::consts::PI / 6.0).abs() < 1e-15);
        assert!((a[2] - std::f64::consts::PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rotation_oracle() {
        let q = rotate_point([1.0, 0.0], std::f64::consts::FRAC_PI_2);
        assert!(q[0].abs() < 1e-15);
        assert!((q[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn duplicate_angles_are_rejected() {
        let spec = scatter();
        let err = build_superposition(&spec, TensorFamily::Trig, &[0.3, 0.3], &Fill::Zero);
        assert!(err.is_err());
    }

    #[test]
    fn prescribed_points_stay_stationary_and_interpolated() {
        let spec = scatter();
        for m in 1..=3 {
            let model = build_superposition(
                &spec,
                TensorFamily::Trig,
                &default_angles(m),
                &Fill::NearestValue,
            )
            .unwrap();
            let mut g = [0.0; 2];
            for (i, p) in spec.points.rows().iter().enumerate() {
                model.gradient(p, &mut g).unwrap();
                let norm = (g[0] * g[0] + g[1] * g[1]).sqrt();
                assert!(norm <= 1e-11, "m={m} point {i}: |g|={norm}");
                let v = model.value(p).unwrap();
                let want = spec.values.as_ref().unwrap()[i];
                assert!((v - want).abs() <= 1e-12, "m={m} point {i}: {v} vs {want}");
            }
        }
    }

    #[test]
    fn quartic_frames_are_stationary_too() {
        let spec = scatter();
        let model = build_superposition(
            &spec,
            TensorFamily::Quartic,
            &default_angles(2),
            &Fill::Zero,
        )
        .unwrap();
        let mut g = [0.0; 2];
        for p in spec.points.rows() {
            model.gradient(&p, &mut g).unwrap();
            assert!((g[0] * g[0] + g[1] * g[1]).sqrt() <= 1e-10);
        }
    }

    #[test]
    fn rotated_derivatives_agree_with_differences() {
        let spec = scatter();
        let model = build_superposition(
            &spec,
            TensorFamily::Trig,
            &default_angles(3),
            &Fill::NearestValue,
        )
        .unwrap();
        let p = [0.37, 0.52];
        let h = 1e-6;
        let mut g = [0.0; 2];
        model.gradient(&p, &mut g).unwrap();
        for axis in 0..2 {
            let mut fwd = p;
            let mut bwd = p;
            fwd[axis] += h;
            bwd[axis] -= h;
            let fd = (model.value(&fwd).unwrap() - model.value(&bwd).unwrap()) / (2.0 * h);
            assert!((fd - g[axis]).abs() < 1e-7 * (1.0 + g[axis].abs()), "axis {axis}");
        }
        let mut hess = [0.0; 4];
        model.second_derivatives(&p, &mut hess).unwrap();
        let mut ga = [0.0; 2];
        let mut gb = [0.0; 2];
        for axis in 0..2 {
            let mut fwd = p;
            let mut bwd = p;
            fwd[axis] += h;
            bwd[axis] -= h;
            model.gradient(&fwd, &mut ga).unwrap();
            model.gradient(&bwd, &mut gb).unwrap();
            for row in 0..2 {
                let fd = (ga[row] - gb[row]) / (2.0 * h);
                let have = hess[row * 2 + axis];
                assert!((fd - have).abs() < 1e-5 * (1.0 + have.abs()), "entry {row}{axis}");
            }
        }
        assert!((hess[1] - hess[2]).abs() < 1e-12);
    }

    #[test]
    fn random_fill_replays_from_its_seed() {
        let spec = scatter();
        let fill = Fill::Random { seed: 7, lo: -1.0, hi: 1.0 };
        let a = build_superposition(&spec, TensorFamily::Trig, &default_angles(2), &fill).unwrap();
        let b = build_superposition(&spec, TensorFamily::Trig, &default_angles(2), &fill).unwrap();
        let other = Fill::Random { seed: 8, lo: -1.0, hi: 1.0 };
        let c =
            build_superposition(&spec, TensorFamily::Trig, &default_angles(2), &other).unwrap();
        let probes = [[0.33, 0.41], [0.72, 0.18], [0.5, 0.86]];
        let mut differs = false;
        for p in probes {
            let va = a.value(&p).unwrap();
            assert_eq!(va, b.value(&p).unwrap());
            if va != c.value(&p).unwrap() {
                differs = true;
            }
        }
        assert!(differs);
    }

    #[test]
    fn near_coincident_points_collide_on_the_frame_grid() {
        let spec = StationarySpec::new(
            Mode::A,
            PointSet::D2(vec![[0.0, 0.0], [5e-10, 5e-10]]),
            None,
            Some(Region::Rect { x: [-1.0, 1.0], y: [-1.0, 1.0] }),
        )
        .unwrap();
        let err = build_superposition(&spec, TensorFamily::Trig, &[0.0], &Fill::Zero);
        assert!(err.is_err());
    }

    #[test]
    fn value_free_specs_get_alternating_targets() {
        let spec = StationarySpec::new(
            Mode::A,
            PointSet::D2(vec![[0.2, 0.2], [0.8, 0.8]]),
            None,
            Some(Region::Rect { x: [0.0, 1.0], y: [0.0, 1.0] }),
        )
        .unwrap();
        let model =
            build_superposition(&spec, TensorFamily::Trig, &default_angles(1), &Fill::Zero)
                .unwrap();
        let v0 = model.value(&[0.2, 0.2]).unwrap();
        let v1 = model.value(&[0.8, 0.8]).unwrap();
        assert!((v0 - 1.0).abs() < 1e-12);
        assert!((v1 + 1.0).abs() < 1e-12);
    }
}
