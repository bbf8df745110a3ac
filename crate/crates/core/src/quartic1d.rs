//! Piecewise-quartic interpolation with a stationary point at every knot.
//!
//! Cell `i` covers `[x[i-1], x[i]]` and is written in powers of
//! `t = x - x[i]`, anchored at its right knot:
//!
//! ```text
//! s(t) = a + c t^2/2 + d t^3/6 + e t^4/24
//! ```
//!
//! The linear term is identically zero, which is what makes both knots
//! stationary; `a` interpolates the right knot, `d` and `e` are forced by the
//! left knot's value and slope. The anchor curvature `c` stays free per cell:
//! any choice gives a C^1 spline, and chaining the choices so one-sided
//! curvatures agree at the knots gives the C^2 family with a single scalar
//! `c0` of freedom.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cell_index, ensure_inside, Knots1D, Region, SurfaceModel};

#[derive(Clone, Copy, Debug)]
struct Cell {
    anchor: f64,
    a: f64,
    c: f64,
    d: f64,
    e: f64,
}

impl Cell {
    fn from_curvature(x_left: f64, x_right: f64, z_left: f64, z_right: f64, c: f64) -> Cell {
        let dx = x_left - x_right;
        let q = (z_left - z_right) / (dx * dx);
        Cell {
            anchor: x_right,
            a: z_right,
            c,
            d: -6.0 * (c - 4.0 * q) / dx,
            e: 12.0 * (c - 6.0 * q) / (dx * dx),
        }
    }

    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let t = x - self.anchor;
        let v = self.a + t * t * (self.c / 2.0 + t * (self.d / 6.0 + t * self.e / 24.0));
        let d1 = t * (self.c + t * (self.d / 2.0 + t * self.e / 6.0));
        let d2 = self.c + t * (self.d + t * self.e / 2.0);
        (v, d1, d2)
    }

    /// Coefficients of `1, t, t^2, t^3, t^4`.
    fn monomials(&self) -> [f64; 5] {
        [self.a, 0.0, self.c / 2.0, self.d / 6.0, self.e / 24.0]
    }
}

pub struct QuarticSpline1D {
    knots: Knots1D,
    cells: Vec<Cell>,
    region: Region,
}

fn check_curvatures(knots: &Knots1D, c: &[f64]) -> Result<()> {
    if c.len() != knots.n_cells() {
        return Err(Error::spec(format!(
            "{} curvatures for {} cells",
            c.len(),
            knots.n_cells()
        )));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::spec("non-finite curvature"));
    }
    Ok(())
}

/// Build the C^1 spline with one free anchor curvature per cell.
pub fn build_quartic(knots: &Knots1D, cell_curvature: &[f64]) -> Result<QuarticSpline1D> {
    check_curvatures(knots, cell_curvature)?;
    let cells = (1..knots.x.len())
        .map(|i| {
            Cell::from_curvature(
                knots.x[i - 1],
                knots.x[i],
                knots.z[i - 1],
                knots.z[i],
                cell_curvature[i - 1],
            )
        })
        .collect();
    let region = Region::Interval { lo: knots.x[0], hi: *knots.x.last().unwrap() };
    Ok(QuarticSpline1D { knots: knots.clone(), cells, region })
}

/// Per-cell slope ratios `(z[i-1] - z[i]) / (x[i-1] - x[i])^2`, the increments
/// of the curvature chain.
fn chain_steps(knots: &Knots1D) -> Vec<f64> {
    (1..knots.x.len())
        .map(|i| {
            let dx = knots.x[i - 1] - knots.x[i];
            (knots.z[i - 1] - knots.z[i]) / (dx * dx)
        })
        .collect()
}

/// Spline curvature at each knot for the C^2 member selected by `c0`, the
/// curvature at the first knot. Entry `i` is `c0 + 12 * sum of the first i
/// chain steps`.
pub fn knot_curvatures(knots: &Knots1D, c0: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(knots.x.len());
    let mut c = c0;
    out.push(c);
    for q in chain_steps(knots) {
        c += 12.0 * q;
        out.push(c);
    }
    out
}

/// Build the C^2 spline selected by the curvature at the first knot.
pub fn build_quartic_c2(knots: &Knots1D, c0: f64) -> Result<QuarticSpline1D> {
    if !c0.is_finite() {
        return Err(Error::spec("non-finite curvature"));
    }
    let anchor_curvatures: Vec<f64> = knot_curvatures(knots, c0)[1..].to_vec();
    build_quartic(knots, &anchor_curvatures)
}

/// Global shape targets realizable by picking `c0` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurvatureStrategy {
    /// Non-negative curvature at every knot: each knot is a local minimum or
    /// degenerate.
    AllMinima,
    /// Non-positive curvature at every knot.
    AllMaxima,
    /// Knot curvatures average to zero.
    MeanCurvatureZero,
}

/// First-knot curvature realizing `strategy` for these knots.
pub fn choose_c0(knots: &Knots1D, strategy: CurvatureStrategy) -> f64 {
    // Partial sums of the chain steps; knot curvature i is c0 + 12 * sums[i].
    let mut sums = Vec::with_capacity(knots.x.len());
    let mut s = 0.0;
    sums.push(s);
    for q in chain_steps(knots) {
        s += q;
        sums.push(s);
    }
    match strategy {
        CurvatureStrategy::AllMinima => {
            -12.0 * sums.iter().cloned().fold(f64::INFINITY, f64::min)
        }
        CurvatureStrategy::AllMaxima => {
            -12.0 * sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        }
        CurvatureStrategy::MeanCurvatureZero => {
            -12.0 * sums.iter().sum::<f64>() / (sums.len() as f64)
        }
    }
}

impl QuarticSpline1D {
    pub fn knots(&self) -> &Knots1D {
        &self.knots
    }

    fn cell_at(&self, x: f64) -> &Cell {
        &self.cells[cell_index(&self.knots.x, x) - 1]
    }

    /// Anchored monomial coefficients (powers of `x - x[i]`) for cell `i-1`.
    pub(crate) fn cell_monomials(&self, cell: usize) -> [f64; 5] {
        self.cells[cell].monomials()
    }
}

impl SurfaceModel for QuarticSpline1D {
    fn dim(&self) -> usize {
        1
    }

    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, p: &[f64]) -> Result<f64> {
        ensure_inside(&self.region, p)?;
        Ok(self.cell_at(p[0]).eval(p[0]).0)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out[0] = self.cell_at(p[0]).eval(p[0]).1;
        Ok(())
    }

    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out[0] = self.cell_at(p[0]).eval(p[0]).2;
        Ok(())
    }

    fn interior_joints(&self, axis: usize) -> Vec<f64> {
        if axis == 0 {
            self.knots.x[1..self.knots.x.len() - 1].to_vec()
        } else {
            Vec::new()
        }
    }
}
