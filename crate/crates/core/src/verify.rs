//! Independent checking: finite-difference gradients, a stationary-point
//! scanner, joint continuity reports, and the per-problem verdicts built on
//! top of them.
//!
//! The scanner works from the analytic gradient only: it rasterizes the
//! gradient norm on a uniform lattice, masks out flat cells (all corners
//! below tolerance), refines norm local minima, sign-change cell centers,
//! and the prescribed points themselves with a damped Newton iteration on
//! the gradient (finite-difference Jacobian), deduplicates, and finally
//! matches the surviving points against the prescribed set by nearest
//! distance within a match radius.
//!
//! Known blind spot: a zero on the region boundary whose normal curvature
//! vanishes and whose mixed second derivative is tiny (the tensor-product
//! families pin such points to the first grid line when the boundary
//! curvature chain starts at zero) gives Newton no usable local model, and
//! a handful of those can stall just above tolerance and go unreported.
//! Interior zeros, including the marginal near-edge ones, are covered by
//! the sign-change pass.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Mode, PointSet, Region, StationarySpec, SurfaceModel};

#[derive(Clone, Debug)]
pub struct ScanConfig {
    /// Lattice nodes per axis, endpoints included.
    pub resolution: usize,
    /// A point counts as stationary when the gradient norm is at or below
    /// this.
    pub grad_tol: f64,
    /// Allowed deviation from prescribed values (problem B).
    pub value_tol: f64,
    /// Match radius as a fraction of the scan region diameter.
    pub match_radius_rel: f64,
    pub newton_max_iter: usize,
    /// Step shrink factor when a Newton step fails to reduce the gradient.
    pub damping: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            resolution: 256,
            grad_tol: 1e-8,
            value_tol: 1e-9,
            match_radius_rel: 1e-6,
            newton_max_iter: 50,
            damping: 0.5,
        }
    }
}

/// Central-difference gradient. An explicit `step` that would leave the
/// domain is an error (shrink it and retry); the default step,
/// `cbrt(machine epsilon) * max(1, |coordinate|)` per axis, switches to a
/// second-order one-sided stencil against a boundary instead.
pub fn fd_gradient(model: &dyn SurfaceModel, p: &[f64], step: Option<f64>) -> Result<Vec<f64>> {
    let dim = model.dim();
    let region = model.region().clone();
    let mut out = Vec::with_capacity(dim);
    for axis in 0..dim {
        let [lo, hi] = region.axis_bounds(axis);
        let h = match step {
            Some(h) => {
                if p[axis] - h < lo || p[axis] + h > hi {
                    return Err(Error::region(format!(
                        "step {h:e} exits the domain at coordinate {axis}; shrink it"
                    )));
                }
                h
            }
            None => f64::EPSILON.cbrt() * p[axis].abs().max(1.0),
        };
        let mut fwd = p.to_vec();
        let mut bwd = p.to_vec();
        let quotient = if p[axis] - h >= lo && p[axis] + h <= hi {
            fwd[axis] = p[axis] + h;
            bwd[axis] = p[axis] - h;
            (model.value(&fwd)? - model.value(&bwd)?) / (2.0 * h)
        } else {
            // Auto-sized step against a wall: second-order one-sided stencil.
            let sign = if p[axis] - h < lo { 1.0 } else { -1.0 };
            fwd[axis] = p[axis] + sign * h;
            bwd[axis] = p[axis] + sign * 2.0 * h;
            let f0 = model.value(p)?;
            let f1 = model.value(&fwd)?;
            let f2 = model.value(&bwd)?;
            sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h)
        };
        out.push(quotient);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundPoint {
    pub location: Vec<f64>,
    pub gradient_norm: f64,
    pub kind: PointKind,
}

/// A maximal connected block of lattice cells whose corners all sit below
/// the gradient tolerance; reported by bounding box.
#[derive(Clone, Debug, Serialize)]
pub struct FlatRegion {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub cell_count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub region: Region,
    pub resolution: usize,
    pub grad_tol: f64,
    pub match_radius: f64,
    pub found: Vec<FoundPoint>,
    /// Pairs `(prescribed index, found index)`.
    pub matches: Vec<[usize; 2]>,
    /// Prescribed indices with no found point in range.
    pub missed: Vec<usize>,
    /// Found indices matching no prescribed point.
    pub spurious: Vec<usize>,
    pub flat_regions: Vec<FlatRegion>,
}

fn classify(eigs: &[f64], scale: f64) -> PointKind {
    let tol = 1e-7 * scale.max(1.0);
    if eigs.iter().all(|l| *l > tol) {
        PointKind::Minimum
    } else if eigs.iter().all(|l| *l < -tol) {
        PointKind::Maximum
    } else if eigs.iter().any(|l| l.abs() <= tol) {
        PointKind::Degenerate
    } else {
        PointKind::Saddle
    }
}

fn classify_hessian(h: &[f64], dim: usize) -> PointKind {
    if dim == 1 {
        classify(&[h[0]], h[0].abs())
    } else {
        let off = 0.5 * (h[1] + h[2]);
        let tr = h[0] + h[3];
        let disc = (0.25 * (h[0] - h[3]) * (h[0] - h[3]) + off * off).sqrt();
        let eigs = [0.5 * tr - disc, 0.5 * tr + disc];
        let scale = (h[0] * h[0] + h[3] * h[3] + 2.0 * off * off).sqrt();
        classify(&eigs, scale)
    }
}

/// Hessian-eigenvalue classification. Points on a piecewise seam get one
/// probe per side (per straddling axis); when the sides disagree about the
/// kind, the point is tagged Degenerate rather than trusting either side.
fn classify_at(model: &dyn SurfaceModel, p: &[f64]) -> Result<PointKind> {
    let dim = model.dim();
    let delta = 1e-7 * model.region().diameter();
    let mut offsets: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for (axis, &coord) in p.iter().enumerate().take(dim) {
        let joints = model.interior_joints(axis);
        let near = joints.iter().copied().find(|j| (j - coord).abs() <= delta);
        offsets.push(match near {
            Some(j) => vec![j - delta, j + delta],
            None => vec![coord],
        });
    }
    let mut h = vec![0.0; dim * dim];
    let mut kind: Option<PointKind> = None;
    let mut probe = p.to_vec();
    let combos = offsets.iter().map(Vec::len).product::<usize>();
    for c in 0..combos {
        let mut rest = c;
        for axis in 0..dim {
            probe[axis] = offsets[axis][rest % offsets[axis].len()];
            rest /= offsets[axis].len();
        }
        model.second_derivatives(&probe, &mut h)?;
        let k = classify_hessian(&h, dim);
        match kind {
            None => kind = Some(k),
            Some(prev) if prev != k => return Ok(PointKind::Degenerate),
            Some(_) => {}
        }
    }
    Ok(kind.expect("at least one probe"))
}

fn grad_norm(model: &dyn SurfaceModel, p: &[f64], buf: &mut [f64]) -> Result<f64> {
    model.gradient(p, buf)?;
    Ok(buf.iter().map(|g| g * g).sum::<f64>().sqrt())
}

/// Finite-difference Jacobian of the analytic gradient (raw, unsymmetrized).
fn fd_hessian(
    model: &dyn SurfaceModel,
    p: &[f64],
    h: f64,
    out: &mut [f64],
) -> Result<()> {
    let dim = model.dim();
    let region = model.region().clone();
    let mut ga = vec![0.0; dim];
    let mut gb = vec![0.0; dim];
    for axis in 0..dim {
        let [lo, hi] = region.axis_bounds(axis);
        let mut fwd = p.to_vec();
        let mut bwd = p.to_vec();
        fwd[axis] = (p[axis] + h).min(hi);
        bwd[axis] = (p[axis] - h).max(lo);
        model.gradient(&fwd, &mut ga)?;
        model.gradient(&bwd, &mut gb)?;
        let denom = fwd[axis] - bwd[axis];
        for row in 0..dim {
            out[row * dim + axis] = (ga[row] - gb[row]) / denom;
        }
    }
    Ok(())
}

/// Solve `H step = -g` for a symmetric 1x1 or 2x2 system. Returns None when
/// the system is too close to singular to trust.
fn newton_step(hess: &[f64], g: &[f64], dim: usize) -> Option<Vec<f64>> {
    let mut step = vec![0.0; dim];
    if dim == 1 {
        if hess[0] == 0.0 || !hess[0].is_finite() {
            return None;
        }
        step[0] = -g[0] / hess[0];
    } else {
        let det = hess[0] * hess[3] - hess[1] * hess[2];
        let scale = hess.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if !det.is_finite() || det.abs() <= 1e-14 * scale * scale {
            return None;
        }
        step[0] = -(hess[3] * g[0] - hess[1] * g[1]) / det;
        step[1] = -(hess[0] * g[1] - hess[2] * g[0]) / det;
    }
    Some(step)
}

/// Damped Newton iteration on the gradient. Returns the refined point when
/// the gradient norm reaches the tolerance.
fn newton_refine(
    model: &dyn SurfaceModel,
    start: &[f64],
    max_step: f64,
    fd_h: f64,
    cfg: &ScanConfig,
) -> Result<Option<(Vec<f64>, f64)>> {
    let dim = model.dim();
    let region = model.region().clone();
    let mut p = start.to_vec();
    let mut gbuf = vec![0.0; dim];
    let mut norm = grad_norm(model, &p, &mut gbuf)?;
    let mut hess = vec![0.0; dim * dim];
    for _ in 0..cfg.newton_max_iter {
        if norm <= cfg.grad_tol {
            return Ok(Some((p, norm)));
        }
        fd_hessian(model, &p, fd_h, &mut hess)?;
        // Candidate mixed-entry treatments. The difference stencil can
        // straddle a joint where a mixed second derivative jumps, in which
        // case one of the two raw off-diagonal estimates belongs to the
        // piece that owns the point while their average belongs to neither.
        let mut variants: Vec<Vec<f64>> = Vec::with_capacity(3);
        if dim == 1 {
            variants.push(hess.clone());
        } else {
            let mut sym = hess.clone();
            let avg = 0.5 * (hess[1] + hess[2]);
            sym[1] = avg;
            sym[2] = avg;
            variants.push(sym);
            if hess[1] != hess[2] {
                for mixed in [hess[1], hess[2]] {
                    let mut v = hess.clone();
                    v[1] = mixed;
                    v[2] = mixed;
                    variants.push(v);
                }
            }
        }
        let g_here = gbuf.clone();
        let mut accepted = false;
        let mut solvable = false;
        'variant: for v in &variants {
            let Some(mut step) = newton_step(v, &g_here, dim) else {
                continue;
            };
            solvable = true;
            let step_len = step.iter().map(|s| s * s).sum::<f64>().sqrt();
            if step_len > max_step {
                for s in &mut step {
                    *s *= max_step / step_len;
                }
            }
            // Backtrack until the gradient norm drops.
            let mut t = 1.0;
            for _ in 0..20 {
                let mut q = p.clone();
                for a in 0..dim {
                    q[a] += t * step[a];
                }
                region.clamp(&mut q);
                let qnorm = grad_norm(model, &q, &mut gbuf)?;
                if qnorm < norm {
                    p = q;
                    norm = qnorm;
                    accepted = true;
                    break 'variant;
                }
                t *= cfg.damping;
            }
        }
        if !solvable {
            return Ok(None);
        }
        if !accepted {
            break;
        }
    }
    if norm > cfg.grad_tol && norm <= 1e6 * cfg.grad_tol {
        // Newton can stall a few float steps short of a zero that sits on a
        // joint, where every difference stencil straddles a second-derivative
        // jump. A derivative-free coordinate polish closes the gap.
        axis_polish(model, &region, &mut p, &mut norm, 2.0 * fd_h, cfg.grad_tol)?;
    }
    if norm <= cfg.grad_tol {
        Ok(Some((p, norm)))
    } else {
        Ok(None)
    }
}

/// Golden-section descent of the gradient norm along each axis in turn,
/// within a +-window around the current point.
fn axis_polish(
    model: &dyn SurfaceModel,
    region: &Region,
    p: &mut [f64],
    norm: &mut f64,
    window: f64,
    tol: f64,
) -> Result<()> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let dim = model.dim();
    let mut gbuf = vec![0.0; dim];
    for _round in 0..3 {
        for axis in 0..dim {
            let [lo, hi] = region.axis_bounds(axis);
            let mut a = (p[axis] - window).max(lo);
            let mut b = (p[axis] + window).min(hi);
            let probe = |coord: f64, gbuf: &mut Vec<f64>| -> Result<f64> {
                let mut q = p.to_vec();
                q[axis] = coord;
                grad_norm(model, &q, gbuf)
            };
            let mut c = b - (b - a) * INV_PHI;
            let mut d = a + (b - a) * INV_PHI;
            let mut fc = probe(c, &mut gbuf)?;
            let mut fd = probe(d, &mut gbuf)?;
            for _ in 0..40 {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - (b - a) * INV_PHI;
                    fc = probe(c, &mut gbuf)?;
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + (b - a) * INV_PHI;
                    fd = probe(d, &mut gbuf)?;
                }
            }
            let (best_coord, best) = if fc < fd { (c, fc) } else { (d, fd) };
            if best < *norm {
                p[axis] = best_coord;
                *norm = best;
            }
            if *norm <= tol {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Flat-cell membership on the scan lattice, kept for filtering refined
/// points that slid into or against a flat block.
struct FlatCells {
    lo: [f64; 2],
    spacing: [f64; 2],
    cells: usize,
    dim: usize,
    flags: Vec<bool>,
}

impl FlatCells {
    fn cell_of(&self, coord: f64, axis: usize) -> i64 {
        ((coord - self.lo[axis]) / self.spacing[axis]).floor() as i64
    }

    /// True when the lattice cell containing `p`, or any adjacent cell, is
    /// flat. The one-cell ring also catches points on a block's rim, where
    /// the gradient sits at the tolerance by construction.
    fn near(&self, p: &[f64]) -> bool {
        if !self.flags.iter().any(|f| *f) {
            return false;
        }
        let ci = self.cell_of(p[0], 0);
        let cj = if self.dim == 2 { self.cell_of(p[1], 1) } else { 0 };
        let n = self.cells as i64;
        for di in -1..=1 {
            let a = ci + di;
            if a < 0 || a >= n {
                continue;
            }
            if self.dim == 1 {
                if self.flags[a as usize] {
                    return true;
                }
                continue;
            }
            for dj in -1..=1 {
                let b = cj + dj;
                if b < 0 || b >= n {
                    continue;
                }
                if self.flags[(a * n + b) as usize] {
                    return true;
                }
            }
        }
        false
    }
}

struct Candidates {
    starts: Vec<Vec<f64>>,
    flat_regions: Vec<FlatRegion>,
    flat_cells: FlatCells,
}

fn lattice_coords(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    // Pinning the endpoints matters: `lo + (hi - lo)` can round one ulp past
    // `hi`, which is out of domain when the scan covers the whole model.
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => (lo + (hi - lo) * (i as f64) / ((n - 1) as f64)).clamp(lo, hi),
        })
        .collect()
}

fn collect_candidates_1d(
    model: &dyn SurfaceModel,
    region: &Region,
    cfg: &ScanConfig,
) -> Result<Candidates> {
    let n = cfg.resolution;
    let [lo, hi] = region.axis_bounds(0);
    let xs = lattice_coords(lo, hi, n);
    let mut gbuf = [0.0];
    let mut slopes = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    for x in &xs {
        norms.push(grad_norm(model, &[*x], &mut gbuf)?);
        slopes.push(gbuf[0]);
    }
    // Flat cells and their maximal runs.
    let flat_cell: Vec<bool> = (0..n - 1)
        .map(|i| norms[i] <= cfg.grad_tol && norms[i + 1] <= cfg.grad_tol)
        .collect();
    let mut flat_regions = Vec::new();
    let mut i = 0;
    while i < n - 1 {
        if flat_cell[i] {
            let start = i;
            while i < n - 1 && flat_cell[i] {
                i += 1;
            }
            flat_regions.push(FlatRegion {
                min: vec![xs[start]],
                max: vec![xs[i]],
                cell_count: i - start,
            });
        } else {
            i += 1;
        }
    }
    let node_flat = |i: usize| -> bool {
        (i > 0 && flat_cell[i - 1]) || (i < n - 1 && flat_cell[i])
    };
    let mut starts = Vec::new();
    for i in 0..n {
        if node_flat(i) {
            continue;
        }
        let left_ok = i == 0 || norms[i] <= norms[i - 1];
        let right_ok = i == n - 1 || norms[i] <= norms[i + 1];
        if left_ok && right_ok {
            starts.push(vec![xs[i]]);
        }
    }
    // A slope sign change brackets a zero even when neither endpoint is a
    // norm minimum; seed the midpoint too.
    for i in 0..n - 1 {
        if !flat_cell[i] && slopes[i] * slopes[i + 1] < 0.0 {
            starts.push(vec![0.5 * (xs[i] + xs[i + 1])]);
        }
    }
    let flat_cells = FlatCells {
        lo: [lo, 0.0],
        spacing: [(hi - lo) / ((n - 1) as f64), 1.0],
        cells: n - 1,
        dim: 1,
        flags: flat_cell,
    };
    Ok(Candidates { starts, flat_regions, flat_cells })
}

fn collect_candidates_2d(
    model: &dyn SurfaceModel,
    region: &Region,
    cfg: &ScanConfig,
) -> Result<Candidates> {
    let n = cfg.resolution;
    let [xlo, xhi] = region.axis_bounds(0);
    let [ylo, yhi] = region.axis_bounds(1);
    let xs = lattice_coords(xlo, xhi, n);
    let ys = lattice_coords(ylo, yhi, n);
    let mut gbuf = [0.0; 2];
    let mut norms = vec![0.0; n * n];
    let mut gx = vec![0.0; n * n];
    let mut gy = vec![0.0; n * n];
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            norms[i * n + j] = grad_norm(model, &[*x, *y], &mut gbuf)?;
            gx[i * n + j] = gbuf[0];
            gy[i * n + j] = gbuf[1];
        }
    }
    let cells = n - 1;
    let is_flat_cell = |ci: usize, cj: usize| -> bool {
        norms[ci * n + cj] <= cfg.grad_tol
            && norms[(ci + 1) * n + cj] <= cfg.grad_tol
            && norms[ci * n + cj + 1] <= cfg.grad_tol
            && norms[(ci + 1) * n + cj + 1] <= cfg.grad_tol
    };
    let mut flat = vec![false; cells * cells];
    for ci in 0..cells {
        for cj in 0..cells {
            flat[ci * cells + cj] = is_flat_cell(ci, cj);
        }
    }
    // Connected components of flat cells, 4-neighborhood.
    let mut seen = vec![false; cells * cells];
    let mut flat_regions = Vec::new();
    for ci in 0..cells {
        for cj in 0..cells {
            let id = ci * cells + cj;
            if !flat[id] || seen[id] {
                continue;
            }
            let mut queue = vec![(ci, cj)];
            seen[id] = true;
            let (mut imin, mut imax, mut jmin, mut jmax) = (ci, ci, cj, cj);
            let mut count = 0;
            while let Some((a, b)) = queue.pop() {
                count += 1;
                imin = imin.min(a);
                imax = imax.max(a);
                jmin = jmin.min(b);
                jmax = jmax.max(b);
                let mut push = |na: usize, nb: usize| {
                    let nid = na * cells + nb;
                    if flat[nid] && !seen[nid] {
                        seen[nid] = true;
                        queue.push((na, nb));
                    }
                };
                if a > 0 {
                    push(a - 1, b);
                }
                if a + 1 < cells {
                    push(a + 1, b);
                }
                if b > 0 {
                    push(a, b - 1);
                }
                if b + 1 < cells {
                    push(a, b + 1);
                }
            }
            flat_regions.push(FlatRegion {
                min: vec![xs[imin], ys[jmin]],
                max: vec![xs[imax + 1], ys[jmax + 1]],
                cell_count: count,
            });
        }
    }
    let node_flat = |i: usize, j: usize| -> bool {
        let mut incident = 0;
        let mut flat_incident = 0;
        for (di, dj) in [(0i64, 0i64), (-1, 0), (0, -1), (-1, -1)] {
            let ci = i as i64 + di;
            let cj = j as i64 + dj;
            if ci >= 0 && cj >= 0 && (ci as usize) < cells && (cj as usize) < cells {
                incident += 1;
                if flat[ci as usize * cells + cj as usize] {
                    flat_incident += 1;
                }
            }
        }
        incident > 0 && incident == flat_incident
    };
    let mut starts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if node_flat(i, j) {
                continue;
            }
            let v = norms[i * n + j];
            let mut minimal = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let a = i as i64 + di;
                    let b = j as i64 + dj;
                    let inside = a >= 0 && b >= 0 && (a as usize) < n && (b as usize) < n;
                    if inside && norms[a as usize * n + b as usize] < v {
                        minimal = false;
                        break 'nb;
                    }
                }
            }
            if minimal {
                starts.push(vec![xs[i], ys[j]]);
            }
        }
    }
    // Cells where both gradient components change sign bracket a zero that
    // may hide between norm minima (near cell edges, or along a boundary
    // where one curvature vanishes); seed their centers as well.
    for ci in 0..cells {
        for cj in 0..cells {
            if flat[ci * cells + cj] {
                continue;
            }
            let ids = [
                ci * n + cj,
                (ci + 1) * n + cj,
                ci * n + cj + 1,
                (ci + 1) * n + cj + 1,
            ];
            let spans_zero = |field: &[f64]| -> bool {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for id in ids {
                    lo = lo.min(field[id]);
                    hi = hi.max(field[id]);
                }
                lo < 0.0 && hi > 0.0
            };
            if spans_zero(&gx) && spans_zero(&gy) {
                starts.push(vec![0.5 * (xs[ci] + xs[ci + 1]), 0.5 * (ys[cj] + ys[cj + 1])]);
            }
        }
    }
    let flat_cells = FlatCells {
        lo: [xlo, ylo],
        spacing: [
            (xhi - xlo) / ((n - 1) as f64),
            (yhi - ylo) / ((n - 1) as f64),
        ],
        cells,
        dim: 2,
        flags: flat,
    };
    Ok(Candidates { starts, flat_regions, flat_cells })
}

/// Locate the stationary points of `model` inside `region` (the model's own
/// domain when omitted) and match them against `prescribed`.
pub fn scan_stationary(
    model: &dyn SurfaceModel,
    prescribed: &PointSet,
    region: Option<&Region>,
    cfg: &ScanConfig,
) -> Result<ScanReport> {
    let dim = model.dim();
    if !prescribed.is_empty() && prescribed.dim() != dim {
        return Err(Error::spec("prescribed points do not match the model dimension"));
    }
    if cfg.resolution < 3 {
        return Err(Error::spec("scan resolution must be at least 3"));
    }
    let region = match region {
        None => model.region().clone(),
        Some(r) => {
            if !r.subset_of(model.region()) {
                return Err(Error::region(format!(
                    "scan region {r:?} exceeds the model domain {:?}",
                    model.region()
                )));
            }
            r.clone()
        }
    };

    let mut candidates = match dim {
        1 => collect_candidates_1d(model, &region, cfg)?,
        _ => collect_candidates_2d(model, &region, cfg)?,
    };
    // Prescribed points double as seeds. A zero sitting exactly on the scan
    // boundary can hide from the lattice passes (its norm valley may have no
    // interior local minimum and the strict sign-span test fails on an edge
    // zero), but Newton still has to converge, so this adds no false finds.
    for i in 0..prescribed.len() {
        let p = prescribed.coords(i);
        if region.contains(&p) {
            candidates.starts.push(p);
        }
    }

    let diameter = region.diameter();
    let match_radius = cfg.match_radius_rel * diameter;
    let spacing = (0..dim)
        .map(|a| {
            let [lo, hi] = region.axis_bounds(a);
            (hi - lo) / ((cfg.resolution - 1) as f64)
        })
        .fold(0.0f64, f64::max);
    let max_step = 4.0 * spacing;
    let fd_h = 1e-7 * diameter;

    let mut refined: Vec<(Vec<f64>, f64)> = Vec::new();
    for start in &candidates.starts {
        if let Some(hit) = newton_refine(model, start, max_step, fd_h, cfg)? {
            refined.push(hit);
        }
    }
    // Drop anything that slid into or against a flat block, then
    // deduplicate keeping the flattest representative of each cluster.
    refined.retain(|(p, _)| !candidates.flat_cells.near(p));
    refined.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut kept: Vec<(Vec<f64>, f64)> = Vec::new();
    for (p, norm) in refined {
        let dup = kept.iter().any(|(q, _)| {
            let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
            d2.sqrt() <= match_radius
        });
        if !dup {
            kept.push((p, norm));
        }
    }

    let mut found = Vec::with_capacity(kept.len());
    for (p, norm) in &kept {
        found.push(FoundPoint {
            location: p.clone(),
            gradient_norm: *norm,
            kind: classify_at(model, p)?,
        });
    }

    // Greedy nearest matching, injective on both sides.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..prescribed.len() {
        let pi = prescribed.coords(i);
        for (j, f) in found.iter().enumerate() {
            let d2: f64 = pi.iter().zip(&f.location).map(|(a, b)| (a - b) * (a - b)).sum();
            let d = d2.sqrt();
            if d <= match_radius {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut matches = Vec::new();
    let mut prescribed_used = vec![false; prescribed.len()];
    let mut found_used = vec![false; found.len()];
    for (_, i, j) in pairs {
        if !prescribed_used[i] && !found_used[j] {
            prescribed_used[i] = true;
            found_used[j] = true;
            matches.push([i, j]);
        }
    }
    let missed = (0..prescribed.len()).filter(|i| !prescribed_used[*i]).collect();
    let spurious = (0..found.len()).filter(|j| !found_used[*j]).collect();

    Ok(ScanReport {
        region,
        resolution: cfg.resolution,
        grad_tol: cfg.grad_tol,
        match_radius,
        found,
        matches,
        missed,
        spurious,
        flat_regions: candidates.flat_regions,
    })
}

/// One-sided limits on both sides of an interior joint, compared.
#[derive(Clone, Debug, Serialize)]
pub struct JointReport {
    pub axis: usize,
    pub coordinate: f64,
    pub max_value_jump: f64,
    pub max_gradient_jump: f64,
    pub max_second_jump: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContinuityReport {
    pub joints: Vec<JointReport>,
    pub max_value_jump: f64,
    pub max_gradient_jump: f64,
    pub max_second_jump: f64,
}

/// Measure value, gradient, and second-derivative jumps across every
/// axis-aligned interior joint of the model. The side limits are taken one
/// float below the joint versus at the joint (pieces own their lower edge
/// from above), `samples` points per joint.
pub fn continuity_report(model: &dyn SurfaceModel, samples: usize) -> Result<ContinuityReport> {
    if samples == 0 {
        return Err(Error::spec("at least one sample per joint is required"));
    }
    let dim = model.dim();
    let mut joints = Vec::new();
    let (mut vmax, mut gmax, mut smax) = (0.0f64, 0.0f64, 0.0f64);
    let mut ga = vec![0.0; dim];
    let mut gb = vec![0.0; dim];
    let mut ha = vec![0.0; dim * dim];
    let mut hb = vec![0.0; dim * dim];
    for axis in 0..dim {
        for joint in model.interior_joints(axis) {
            let mut probes: Vec<Vec<f64>> = Vec::new();
            if dim == 1 {
                probes.push(vec![joint]);
            } else {
                let other = 1 - axis;
                let [olo, ohi] = model.region().axis_bounds(other);
                for s in 0..samples {
                    let frac = (s as f64 + 0.5) / (samples as f64);
                    let mut p = vec![0.0; 2];
                    p[axis] = joint;
                    p[other] = olo + (ohi - olo) * frac;
                    probes.push(p);
                }
            }
            let (mut vj, mut gj, mut sj) = (0.0f64, 0.0f64, 0.0f64);
            for at in &probes {
                let mut below = at.clone();
                below[axis] = f64::next_down(joint);
                vj = vj.max((model.value(at)? - model.value(&below)?).abs());
                model.gradient(at, &mut ga)?;
                model.gradient(&below, &mut gb)?;
                let gd = ga
                    .iter()
                    .zip(&gb)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                gj = gj.max(gd);
                model.second_derivatives(at, &mut ha)?;
                model.second_derivatives(&below, &mut hb)?;
                let sd = ha
                    .iter()
                    .zip(&hb)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                sj = sj.max(sd);
            }
            vmax = vmax.max(vj);
            gmax = gmax.max(gj);
            smax = smax.max(sj);
            joints.push(JointReport {
                axis,
                coordinate: joint,
                max_value_jump: vj,
                max_gradient_jump: gj,
                max_second_jump: sj,
            });
        }
    }
    Ok(ContinuityReport {
        joints,
        max_value_jump: vmax,
        max_gradient_jump: gmax,
        max_second_jump: smax,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PointCheck {
    pub index: usize,
    pub gradient_norm: f64,
    pub fd_gradient_norm: f64,
    pub value_error: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProblemReport {
    pub problem: Mode,
    pub pass: bool,
    pub grad_tol: f64,
    pub value_tol: f64,
    pub checks: Vec<PointCheck>,
    /// Present for the exclusive problem: the scan over the hull box of the
    /// prescribed points.
    pub scan: Option<ScanReport>,
}

fn hull_region(points: &PointSet) -> Result<Region> {
    let rows = points.rows();
    let dim = points.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in &rows {
        for a in 0..dim {
            lo[a] = lo[a].min(p[a]);
            hi[a] = hi[a].max(p[a]);
        }
    }
    for a in 0..dim {
        if lo[a] >= hi[a] {
            return Err(Error::region(
                "prescribed points span no area to scan on some axis",
            ));
        }
    }
    Ok(match dim {
        1 => Region::Interval { lo: lo[0], hi: hi[0] },
        _ => Region::Rect { x: [lo[0], hi[0]], y: [lo[1], hi[1]] },
    })
}

/// Check the requested guarantee at the prescribed points. Problem A checks
/// stationarity, B adds value interpolation, C adds a scan of the hull box
/// for stray stationary points and flat blocks.
pub fn verify_problem(
    model: &dyn SurfaceModel,
    spec: &StationarySpec,
    problem: Mode,
    cfg: &ScanConfig,
) -> Result<ProblemReport> {
    if spec.points.dim() != model.dim() {
        return Err(Error::spec("spec dimension does not match the model"));
    }
    if problem == Mode::B && spec.values.is_none() {
        return Err(Error::spec("problem B verification needs target values"));
    }
    let mut gbuf = vec![0.0; model.dim()];
    let mut checks = Vec::with_capacity(spec.points.len());
    let mut pass = true;
    for i in 0..spec.points.len() {
        let p = spec.points.coords(i);
        let gradient_norm = grad_norm(model, &p, &mut gbuf)?;
        let fd = fd_gradient(model, &p, None)?;
        let fd_gradient_norm = fd.iter().map(|g| g * g).sum::<f64>().sqrt();
        let value_error = match (&spec.values, problem) {
            (Some(values), Mode::B) => {
                let err = (model.value(&p)? - values[i]).abs();
                if err > cfg.value_tol {
                    pass = false;
                }
                Some(err)
            }
            _ => None,
        };
        if gradient_norm > cfg.grad_tol {
            pass = false;
        }
        checks.push(PointCheck { index: i, gradient_norm, fd_gradient_norm, value_error });
    }
    let scan = if problem == Mode::C {
        let hull = hull_region(&spec.points)?;
        let report = scan_stationary(model, &spec.points, Some(&hull), cfg)?;
        if !report.spurious.is_empty() || !report.flat_regions.is_empty() {
            pass = false;
        }
        Some(report)
    } else {
        None
    };
    Ok(ProblemReport {
        problem,
        pass,
        grad_tol: cfg.grad_tol,
        value_tol: cfg.value_tol,
        checks,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Knots1D;
    use crate::trig1d::build_trig;
    use crate::trig2d::build_trig_tensor;
    use crate::GridKnots2D;

    fn trig_model() -> crate::trig1d::TrigSpline1D {
        let knots = Knots1D::new(vec![0.0, 1.0, 2.0, 3.5], vec![0.0, 1.0, -0.5, 0.5]).unwrap();
        build_trig(&knots).unwrap()
    }

    #[test]
    fn fd_gradient_tracks_the_analytic_one() {
        let m = trig_model();
        let mut g = [0.0];
        for x in [0.1, 0.9, 1.7, 3.2] {
            m.gradient(&[x], &mut g).unwrap();
            let fd = fd_gradient(&m, &[x], None).unwrap();
            assert!((fd[0] - g[0]).abs() < 1e-6 * (1.0 + g[0].abs()), "at {x}");
        }
        // One-sided at the boundary still close.
        let fd = fd_gradient(&m, &[0.0], None).unwrap();
        assert!(fd[0].abs() < 1e-4);
    }

    #[test]
    fn scanner_finds_exactly_the_knots_of_a_monotone_spline() {
        let m = trig_model();
        let prescribed = PointSet::D1(vec![0.0, 1.0, 2.0, 3.5]);
        let cfg = ScanConfig { resolution: 1024, ..ScanConfig::default() };
        let report = scan_stationary(&m, &prescribed, None, &cfg).unwrap();
        assert_eq!(report.found.len(), 4, "{:?}", report.found);
        assert_eq!(report.matches.len(), 4);
        assert!(report.missed.is_empty());
        assert!(report.spurious.is_empty());
        assert!(report.flat_regions.is_empty());
        // Alternating values sort the kinds.
        let mut kinds = vec![PointKind::Degenerate; 4];
        for [i, j] in &report.matches {
            kinds[*i] = report.found[*j].kind;
        }
        assert_eq!(
            kinds,
            vec![PointKind::Minimum, PointKind::Maximum, PointKind::Minimum, PointKind::Maximum]
        );
    }

    #[test]
    fn scanner_reports_flat_blocks_and_keeps_isolated_points_out_of_them() {
        // A spline with one genuinely flat cell.
        let knots = Knots1D::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let m = build_trig(&knots).unwrap();
        let prescribed = PointSet::D1(vec![0.0, 3.0]);
        let cfg = ScanConfig { resolution: 512, ..ScanConfig::default() };
        let report = scan_stationary(&m, &prescribed, None, &cfg).unwrap();
        assert_eq!(report.flat_regions.len(), 1);
        let flat = &report.flat_regions[0];
        // The flat block hugs the constant cell [1, 2].
        assert!(flat.min[0] > 0.9 && flat.max[0] < 2.1, "{flat:?}");
        assert!(report.missed.is_empty());
        for j in &report.spurious {
            let x = report.found[*j].location[0];
            assert!(x > 0.9 && x < 2.1, "unexpected spurious point at {x}");
        }
    }

    #[test]
    fn scanner_locates_the_stray_interior_point_of_a_tensor_cell() {
        let g = GridKnots2D::new(
            vec![0.0, 1.0],
            vec![0.0, 1.0],
            vec![vec![0.0, 0.4], vec![0.5, 0.1]],
        )
        .unwrap();
        let m = build_trig_tensor(&g).unwrap();
        let prescribed = PointSet::D2(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let cfg = ScanConfig { resolution: 128, ..ScanConfig::default() };
        let report = scan_stationary(&m, &prescribed, None, &cfg).unwrap();
        assert!(report.missed.is_empty(), "missed {:?}", report.missed);
        assert_eq!(report.spurious.len(), 1, "{:?}", report.found);
        let p = &report.found[report.spurious[0]];
        assert!(p.location[0] > 0.0 && p.location[0] < 1.0);
        assert!(p.location[1] > 0.0 && p.location[1] < 1.0);
        assert_eq!(p.kind, PointKind::Saddle);
    }

    #[test]
    fn continuity_report_sees_the_c2_defect_of_a_generic_spline() {
        let knots = Knots1D::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, -1.0]).unwrap();
        let m = build_trig(&knots).unwrap();
        let report = continuity_report(&m, 8).unwrap();
        assert_eq!(report.joints.len(), 1);
        assert!(report.max_value_jump < 1e-12);
        assert!(report.max_gradient_jump < 1e-12);
        assert!(report.max_second_jump > 1.0);
    }

    #[test]
    fn verify_problem_verdicts() {
        let knots = Knots1D::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.5]).unwrap();
        let m = build_trig(&knots).unwrap();
        let spec = StationarySpec::new(
            Mode::B,
            PointSet::D1(knots.x.clone()),
            Some(knots.z.clone()),
            None,
        )
        .unwrap();
        let cfg = ScanConfig::default();
        let a = verify_problem(&m, &spec, Mode::A, &cfg).unwrap();
        assert!(a.pass);
        assert!(a.scan.is_none());
        let b = verify_problem(&m, &spec, Mode::B, &cfg).unwrap();
        assert!(b.pass);
        let c = verify_problem(&m, &spec, Mode::C, &cfg).unwrap();
        assert!(c.pass);
        assert!(c.scan.is_some());

        // Wrong values make B fail while A still passes.
        let wrong = StationarySpec::new(
            Mode::B,
            PointSet::D1(knots.x.clone()),
            Some(vec![0.0, 1.0, 0.75]),
            None,
        )
        .unwrap();
        let b = verify_problem(&m, &wrong, Mode::B, &cfg).unwrap();
        assert!(!b.pass);
        let a = verify_problem(&m, &wrong, Mode::A, &cfg).unwrap();
        assert!(a.pass);
    }

    #[test]
    fn flat_cell_breaks_the_exclusive_verdict() {
        let knots = Knots1D::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0]).unwrap();
        let m = build_trig(&knots).unwrap();
        let spec =
            StationarySpec::new(Mode::C, PointSet::D1(knots.x.clone()), None, None).unwrap();
        let report = verify_problem(&m, &spec, Mode::C, &ScanConfig::default()).unwrap();
        assert!(!report.pass);
        assert!(!report.scan.unwrap().flat_regions.is_empty());
    }
}
