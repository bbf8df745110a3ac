//! Tensor cosine patches on a rectangular grid. Each cell blends its four
//! corner values with one cosine half-wave per axis:
//!
//! ```text
//! t(x, y) = P00 + P10 cos(xi) + P01 cos(eta) + P11 cos(xi) cos(eta)
//! ```
//!
//! with `xi`, `eta` the normalized phases across the cell. Every grid vertex
//! is interpolated with zero gradient, and the composite surface is C^1 for
//! arbitrary vertex values: values and first derivatives of neighboring
//! cells agree along shared edges because they only depend on the shared
//! corner pair there.
//!
//! The price is spurious flats: a cell whose mixed amplitude dominates both
//! axis amplitudes contains exactly one stray stationary point in its
//! interior. [`has_interior_stationary`] is that predicate; affected cells
//! are flagged at build time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{
    cell_index, ensure_inside, Diagnostic, GridKnots2D, Region, SurfaceModel,
};

#[derive(Clone, Copy, Debug)]
struct Cell {
    x0: f64,
    y0: f64,
    wx: f64,
    wy: f64,
    p00: f64,
    p10: f64,
    p01: f64,
    p11: f64,
}

/// True when a cell with these cosine amplitudes has a stationary point
/// strictly inside it: both axis amplitudes must be strictly dominated by
/// the mixed one.
pub fn has_interior_stationary(p10: f64, p01: f64, p11: f64) -> bool {
    p10.abs() < p11.abs() && p01.abs() < p11.abs()
}

pub struct TrigSurface2D {
    grid: GridKnots2D,
    cells: Vec<Cell>,
    region: Region,
    diagnostics: Vec<Diagnostic>,
}

pub fn build_trig_tensor(grid: &GridKnots2D) -> Result<TrigSurface2D> {
    let (nx, ny) = (grid.x.len(), grid.y.len());
    let mut cells = Vec::with_capacity((nx - 1) * (ny - 1));
    let mut diagnostics = Vec::new();
    for k in 1..nx {
        for l in 1..ny {
            let p = grid.z(k - 1, l - 1);
            let q = grid.z(k, l - 1);
            let r = grid.z(k - 1, l);
            let s = grid.z(k, l);
            let cell = Cell {
                x0: grid.x[k - 1],
                y0: grid.y[l - 1],
                wx: grid.x[k] - grid.x[k - 1],
                wy: grid.y[l] - grid.y[l - 1],
                p00: 0.25 * (p + q + r + s),
                p10: 0.25 * (p + r - q - s),
                p01: 0.25 * (p + q - r - s),
                p11: 0.25 * (p + s - q - r),
            };
            if has_interior_stationary(cell.p10, cell.p01, cell.p11) {
                diagnostics.push(Diagnostic::FalseStationaryRisk { cell: [k, l] });
            }
            cells.push(cell);
        }
    }
    let region = Region::Rect {
        x: [grid.x[0], grid.x[nx - 1]],
        y: [grid.y[0], grid.y[ny - 1]],
    };
    Ok(TrigSurface2D { grid: grid.clone(), cells, region, diagnostics })
}

impl Cell {
    fn phases(&self, x: f64, y: f64) -> (f64, f64) {
        let u = ((x - self.x0) / self.wx).clamp(0.0, 1.0);
        let v = ((y - self.y0) / self.wy).clamp(0.0, 1.0);
        (std::f64::consts::PI * u, std::f64::consts::PI * v)
    }
}

impl TrigSurface2D {
    pub fn grid(&self) -> &GridKnots2D {
        &self.grid
    }

    fn cell_at(&self, x: f64, y: f64) -> &Cell {
        let k = cell_index(&self.grid.x, x);
        let l = cell_index(&self.grid.y, y);
        &self.cells[(k - 1) * (self.grid.y.len() - 1) + (l - 1)]
    }
}

impl SurfaceModel for TrigSurface2D {
    fn dim(&self) -> usize {
        2
    }

    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, p: &[f64]) -> Result<f64> {
        ensure_inside(&self.region, p)?;
        let c = self.cell_at(p[0], p[1]);
        let (xi, eta) = c.phases(p[0], p[1]);
        Ok(c.p00 + c.p10 * xi.cos() + c.p01 * eta.cos() + c.p11 * xi.cos() * eta.cos())
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        let c = self.cell_at(p[0], p[1]);
        let (xi, eta) = c.phases(p[0], p[1]);
        let rx = std::f64::consts::PI / c.wx;
        let ry = std::f64::consts::PI / c.wy;
        out[0] = -rx * xi.sin() * (c.p10 + c.p11 * eta.cos());
        out[1] = -ry * eta.sin() * (c.p01 + c.p11 * xi.cos());
        Ok(())
    }

    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        let c = self.cell_at(p[0], p[1]);
        let (xi, eta) = c.phases(p[0], p[1]);
        let rx = std::f64::consts::PI / c.wx;
        let ry = std::f64::consts::PI / c.wy;
        out[0] = -rx * rx * xi.cos() * (c.p10 + c.p11 * eta.cos());
        out[3] = -ry * ry * eta.cos() * (c.p01 + c.p11 * xi.cos());
        let mixed = rx * ry * xi.sin() * eta.sin() * c.p11;
        out[1] = mixed;
        out[2] = mixed;
        Ok(())
    }

    fn interior_joints(&self, axis: usize) -> Vec<f64> {
        let knots = match axis {
            0 => &self.grid.x,
            _ => &self.grid.y,
        };
        knots[1..knots.len() - 1].to_vec()
    }

    fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }
}

fn alternating_square_sums(axis: &[f64]) -> Vec<f64> {
    let mut sums = Vec::with_capacity(axis.len());
    let mut s = 0.0;
    let mut sign = -1.0;
    sums.push(s);
    for w in axis.windows(2) {
        let d = w[1] - w[0];
        s += sign * d * d;
        sign = -sign;
        sums.push(s);
    }
    sums
}

/// Vertex values making the tensor cosine surface C^2. One-sided second
/// derivatives match across every edge exactly when the scaled second
/// differences alternate along both axes, which pins the grid down to four
/// scalars: a base value, one rate per axis, and a mixed rate.
pub fn c2_grid(x: &[f64], y: &[f64], z00: f64, nu0: f64, mu0: f64, lambda: f64) -> Result<GridKnots2D> {
    for v in [z00, nu0, mu0, lambda] {
        if !v.is_finite() {
            return Err(Error::spec("non-finite parameter"));
        }
    }
    // Axis checks happen in GridKnots2D::new below.
    let sx = alternating_square_sums(x);
    let sy = alternating_square_sums(y);
    let z = sx
        .iter()
        .map(|a| sy.iter().map(|b| z00 + nu0 * a + mu0 * b + lambda * a * b).collect())
        .collect();
    GridKnots2D::new(x.to_vec(), y.to_vec(), z)
}

/// One law violation found by [`check_c2_conditions`]: the scaled second
/// difference across `cell` along `axis` disagrees with the rate implied by
/// the first cell of its row or column.
#[derive(Clone, Debug, Serialize)]
pub struct C2Violation {
    pub axis: usize,
    pub cell: [usize; 2],
    pub expected: f64,
    pub actual: f64,
}

/// Result of checking a value grid against the two C^2 laws.
#[derive(Clone, Debug, Serialize)]
pub struct C2Report {
    pub pass: bool,
    /// Alternating rate along y at each x-knot (from the first y-cell).
    pub y_rates: Vec<f64>,
    /// Alternating rate along x at each y-knot (from the first x-cell).
    pub x_rates: Vec<f64>,
    pub first_violation: Option<C2Violation>,
}

/// Check whether `grid` lies in the C^2 family: along every grid line the
/// value differences scaled by squared spacing must alternate with a fixed
/// amplitude. Comparisons use a relative tolerance of `1e-9`.
pub fn check_c2_conditions(grid: &GridKnots2D) -> C2Report {
    const TOL: f64 = 1e-9;
    let (nx, ny) = (grid.x.len(), grid.y.len());
    let step = |za: f64, zb: f64, d: f64, parity: usize| -> f64 {
        // (-1)^parity * (zb - za) / d^2
        let raw = (zb - za) / (d * d);
        if parity % 2 == 0 {
            raw
        } else {
            -raw
        }
    };
    let mut y_rates = Vec::with_capacity(nx);
    let mut x_rates = Vec::with_capacity(ny);
    let mut first_violation: Option<C2Violation> = None;

    for k in 0..nx {
        let rate = step(grid.z(k, 0), grid.z(k, 1), grid.y[1] - grid.y[0], 1);
        y_rates.push(rate);
        for l in 2..ny {
            let actual = step(grid.z(k, l - 1), grid.z(k, l), grid.y[l] - grid.y[l - 1], l);
            if first_violation.is_none() && (actual - rate).abs() > TOL * rate.abs().max(1.0) {
                first_violation = Some(C2Violation {
                    axis: 1,
                    cell: [k, l],
                    expected: rate,
                    actual,
                });
            }
        }
    }
    for l in 0..ny {
        let rate = step(grid.z(0, l), grid.z(1, l), grid.x[1] - grid.x[0], 1);
        x_rates.push(rate);
        for k in 2..nx {
            let actual = step(grid.z(k - 1, l), grid.z(k, l), grid.x[k] - grid.x[k - 1], k);
            if first_violation.is_none() && (actual - rate).abs() > TOL * rate.abs().max(1.0) {
                first_violation = Some(C2Violation {
                    axis: 0,
                    cell: [k, l],
                    expected: rate,
                    actual,
                });
            }
        }
    }
    C2Report { pass: first_violation.is_none(), y_rates, x_rates, first_violation }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(x: &[f64], y: &[f64], z: Vec<Vec<f64>>) -> GridKnots2D {
        GridKnots2D::new(x.to_vec(), y.to_vec(), z).unwrap()
    }

    #[test]
    fn single_cell_amplitudes() {
        let g = grid(&[0.0, 1.0], &[0.0, 1.0], vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        let m = build_trig_tensor(&g).unwrap();
        let c = &m.cells[0];
        assert_eq!((c.p00, c.p10, c.p01, c.p11), (0.5, 0.0, 0.0, -0.5));
        assert_eq!(m.diagnostics().len(), 1);
        // The stray flat sits at the cell center here.
        let mut g2 = [1.0, 1.0];
        m.gradient(&[0.5, 0.5], &mut g2).unwrap();
        assert!(g2[0].abs() < 1e-15 && g2[1].abs() < 1e-15);
    }

    #[test]
    fn vertices_are_interpolated_and_stationary() {
        let g = grid(
            &[0.0, 1.0, 2.5],
            &[-1.0, 0.5, 1.0, 2.0],
            vec![
                vec![0.3, -1.0, 0.7, 0.0],
                vec![1.1, 0.4, -0.2, 0.9],
                vec![-0.5, 0.8, 0.1, -1.3],
            ],
        );
        let m = build_trig_tensor(&g).unwrap();
        let mut grad = [0.0; 2];
        for (k, x) in g.x.iter().enumerate() {
            for (l, y) in g.y.iter().enumerate() {
                assert!((m.value(&[*x, *y]).unwrap() - g.z(k, l)).abs() < 1e-12);
                m.gradient(&[*x, *y], &mut grad).unwrap();
                assert!(grad[0].abs() < 1e-12 && grad[1].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn c1_across_edges_for_arbitrary_values() {
        let g = grid(
            &[0.0, 1.0, 3.0],
            &[0.0, 2.0, 2.5],
            vec![
                vec![0.0, 1.0, -1.0],
                vec![2.0, -0.7, 0.3],
                vec![1.0, 0.5, 2.0],
            ],
        );
        let m = build_trig_tensor(&g).unwrap();
        let mut a = [0.0; 2];
        let mut b = [0.0; 2];
        // Cross the vertical edge x = 1 and the horizontal edge y = 2.
        for yy in [0.3, 1.1, 2.2] {
            let lo = [f64::next_down(1.0), yy];
            let hi = [1.0, yy];
            assert!((m.value(&lo).unwrap() - m.value(&hi).unwrap()).abs() < 1e-12);
            m.gradient(&lo, &mut a).unwrap();
            m.gradient(&hi, &mut b).unwrap();
            assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
        }
        for xx in [0.4, 1.7, 2.9] {
            let lo = [xx, f64::next_down(2.0)];
            let hi = [xx, 2.0];
            assert!((m.value(&lo).unwrap() - m.value(&hi).unwrap()).abs() < 1e-12);
            m.gradient(&lo, &mut a).unwrap();
            m.gradient(&hi, &mut b).unwrap();
            assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9);
        }
    }

    #[test]
    fn only_the_normal_second_derivative_jumps_across_an_edge() {
        let g = grid(
            &[0.0, 1.0],
            &[0.0, 1.0, 2.0],
            vec![vec![0.0, 1.0, -0.5], vec![0.7, -0.3, 0.2]],
        );
        let m = build_trig_tensor(&g).unwrap();
        let mut lo = [0.0; 4];
        let mut hi = [0.0; 4];
        // Horizontal edge y = 1: xx, xy continuous; yy jumps for generic data.
        let p = [0.6, 1.0];
        m.second_derivatives(&[p[0], f64::next_down(p[1])], &mut lo).unwrap();
        m.second_derivatives(&p, &mut hi).unwrap();
        assert!((lo[0] - hi[0]).abs() < 1e-9, "xx jumped");
        assert!((lo[1] - hi[1]).abs() < 1e-9, "xy jumped");
        assert!((lo[3] - hi[3]).abs() > 0.1, "yy should jump for generic data");
    }

    #[test]
    fn c2_grid_oracles() {
        let x = [0.0, 1.0, 2.0];
        let y = [0.0, 1.0, 2.0];
        let g = c2_grid(&x, &y, 1.0, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(g.z, vec![vec![1.0; 3], vec![0.0; 3], vec![1.0; 3]]);
        let g = c2_grid(&x, &y, 0.0, 0.0, 0.0, 1.0).unwrap();
        assert_eq!(g.z(1, 1), 1.0);
        assert_eq!(g.z(1, 0), 0.0);
        assert_eq!(g.z(2, 2), 0.0);
    }

    #[test]
    fn c2_check_accepts_the_family_and_pins_violations() {
        let x = [0.0, 0.5, 1.7, 2.0];
        let y = [0.0, 1.0, 1.5];
        let g = c2_grid(&x, &y, 0.3, -0.8, 0.6, 0.25).unwrap();
        let report = check_c2_conditions(&g);
        assert!(report.pass, "{:?}", report.first_violation);
        // The extracted rates match the parameters at the first knots.
        assert!((report.x_rates[0] - (-0.8)).abs() < 1e-12);
        assert!((report.y_rates[0] - 0.6).abs() < 1e-12);

        let mut broken = g.clone();
        broken.z[2][2] += 1e-3;
        let report = check_c2_conditions(&broken);
        assert!(!report.pass);
        assert!(report.first_violation.is_some());
    }

    #[test]
    fn c2_family_smooths_the_edge_second_derivatives() {
        let x = [0.0, 0.9, 2.0, 2.8];
        let y = [0.0, 1.2, 1.9];
        let g = c2_grid(&x, &y, 0.1, 0.7, -0.4, 0.2).unwrap();
        let m = build_trig_tensor(&g).unwrap();
        let mut lo = [0.0; 4];
        let mut hi = [0.0; 4];
        for xx in [0.3, 1.5, 2.5] {
            m.second_derivatives(&[xx, f64::next_down(1.2)], &mut lo).unwrap();
            m.second_derivatives(&[xx, 1.2], &mut hi).unwrap();
            for i in 0..4 {
                assert!((lo[i] - hi[i]).abs() < 1e-8, "entry {i} jumped at x={xx}");
            }
        }
        for yy in [0.2, 1.0, 1.8] {
            m.second_derivatives(&[f64::next_down(0.9), yy], &mut lo).unwrap();
            m.second_derivatives(&[0.9, yy], &mut hi).unwrap();
            for i in 0..4 {
                assert!((lo[i] - hi[i]).abs() < 1e-8, "entry {i} jumped at y={yy}");
            }
        }
    }

    #[test]
    fn interior_stationary_predicate_matches_an_actual_flat() {
        assert!(has_interior_stationary(0.1, -0.2, 0.5));
        assert!(!has_interior_stationary(0.6, 0.1, 0.5));
        assert!(!has_interior_stationary(0.1, 0.1, 0.0));

        let g = grid(&[0.0, 1.0], &[0.0, 1.0], vec![vec![0.0, 0.4], vec![0.5, 0.1]]);
        let m = build_trig_tensor(&g).unwrap();
        let c = &m.cells[0];
        assert!(has_interior_stationary(c.p10, c.p01, c.p11));
        // Solve the phases and confirm the gradient vanishes there.
        let xi = (-c.p01 / c.p11).acos();
        let eta = (-c.p10 / c.p11).acos();
        let p = [xi / std::f64::consts::PI, eta / std::f64::consts::PI];
        let mut grad = [0.0; 2];
        m.gradient(&p, &mut grad).unwrap();
        assert!(grad[0].abs() < 1e-12 && grad[1].abs() < 1e-12);
    }
}
