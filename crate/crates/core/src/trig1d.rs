//! Cosine half-wave interpolation: each cell runs one half period between
//! its knot values, so every knot is stationary and the spline is monotone
//! inside each cell. With distinct consecutive values this leaves no other
//! stationary point, solving the exclusive variant of the problem outright.

use crate::error::{Error, Result};
use crate::geometry::{cell_index, ensure_inside, Diagnostic, Knots1D, Region, SurfaceModel};

#[derive(Clone, Copy, Debug)]
struct Cell {
    left: f64,
    width: f64,
    mid: f64,
    half: f64,
}

impl Cell {
    fn eval(&self, x: f64) -> (f64, f64, f64) {
        let u = ((x - self.left) / self.width).clamp(0.0, 1.0);
        let phase = std::f64::consts::PI * u;
        let rate = std::f64::consts::PI / self.width;
        (
            self.mid + self.half * phase.cos(),
            -self.half * rate * phase.sin(),
            -self.half * rate * rate * phase.cos(),
        )
    }
}

pub struct TrigSpline1D {
    knots: Knots1D,
    cells: Vec<Cell>,
    region: Region,
    diagnostics: Vec<Diagnostic>,
}

pub fn build_trig(knots: &Knots1D) -> Result<TrigSpline1D> {
    let mut cells = Vec::with_capacity(knots.n_cells());
    let mut diagnostics = Vec::new();
    for i in 1..knots.x.len() {
        let (zl, zr) = (knots.z[i - 1], knots.z[i]);
        if zl == zr {
            diagnostics.push(Diagnostic::FlatCell { cell: i });
        }
        cells.push(Cell {
            left: knots.x[i - 1],
            width: knots.x[i] - knots.x[i - 1],
            mid: 0.5 * (zl + zr),
            half: 0.5 * (zl - zr),
        });
    }
    let region = Region::Interval { lo: knots.x[0], hi: *knots.x.last().unwrap() };
    Ok(TrigSpline1D { knots: knots.clone(), cells, region, diagnostics })
}

impl TrigSpline1D {
    pub fn knots(&self) -> &Knots1D {
        &self.knots
    }
}

impl SurfaceModel for TrigSpline1D {
    fn dim(&self) -> usize {
        1
    }

    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, p: &[f64]) -> Result<f64> {
        ensure_inside(&self.region, p)?;
        Ok(self.cells[cell_index(&self.knots.x, p[0]) - 1].eval(p[0]).0)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out[0] = self.cells[cell_index(&self.knots.x, p[0]) - 1].eval(p[0]).1;
        Ok(())
    }

    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out[0] = self.cells[cell_index(&self.knots.x, p[0]) - 1].eval(p[0]).2;
        Ok(())
    }

    fn interior_joints(&self, axis: usize) -> Vec<f64> {
        if axis == 0 {
            self.knots.x[1..self.knots.x.len() - 1].to_vec()
        } else {
            Vec::new()
        }
    }

    fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }
}

fn check_c2_input(x: &[f64], scale: f64) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::spec("at least two knots are required"));
    }
    if x.iter().any(|v| !v.is_finite()) || !scale.is_finite() {
        return Err(Error::spec("non-finite input"));
    }
    if x.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::spec("knots must be strictly increasing"));
    }
    Ok(())
}

/// Knot values making the half-wave spline twice continuously
/// differentiable: one-sided second derivatives at an interior knot agree
/// exactly when `(z[i] - z[i-1]) / dx[i]^2` alternates in sign, so the values
/// are forced up to the first value `z0` and one amplitude `mu`.
pub fn c2_values(x: &[f64], z0: f64, mu: f64) -> Result<Vec<f64>> {
    check_c2_input(x, z0 + mu)?;
    let mut z = Vec::with_capacity(x.len());
    let mut sign = -1.0;
    z.push(z0);
    for w in x.windows(2) {
        let dx = w[1] - w[0];
        z.push(z.last().unwrap() + sign * mu * dx * dx);
        sign = -sign;
    }
    Ok(z)
}

/// Mean of `z[i] - z[0]` over `i = 1..=n` for the C^2 family, in closed form:
/// step `l` enters the mean of the partial sums with weight `(n - l + 1)/n`.
pub fn mean_deviation(x: &[f64], mu: f64) -> Result<f64> {
    check_c2_input(x, mu)?;
    let n = x.len() - 1;
    let mut sum = 0.0;
    let mut sign = -1.0;
    for (l, w) in x.windows(2).enumerate() {
        let dx = w[1] - w[0];
        sum += sign * (1.0 - (l as f64) / (n as f64)) * dx * dx;
        sign = -sign;
    }
    Ok(mu * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Diagnostic;

    fn model(x: &[f64], z: &[f64]) -> TrigSpline1D {
        build_trig(&Knots1D::new(x.to_vec(), z.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn midpoint_value_and_slope() {
        let s = model(&[0.0, 1.0], &[0.0, 1.0]);
        assert!((s.value(&[0.5]).unwrap() - 0.5).abs() < 1e-15);
        let mut g = [0.0];
        s.gradient(&[0.5], &mut g).unwrap();
        assert!((g[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn knots_are_interpolated_and_stationary() {
        let s = model(&[0.0, 0.3, 1.1, 4.0], &[1.0, -2.0, 0.5, 0.0]);
        let mut g = [0.0];
        for (x, z) in s.knots.x.clone().into_iter().zip(s.knots.z.clone()) {
            assert!((s.value(&[x]).unwrap() - z).abs() < 1e-12);
            s.gradient(&[x], &mut g).unwrap();
            assert!(g[0].abs() < 1e-12);
        }
    }

    #[test]
    fn equal_values_flag_a_flat_cell() {
        let s = model(&[0.0, 1.0, 2.0], &[1.0, 1.0, 0.0]);
        assert_eq!(s.diagnostics(), &[Diagnostic::FlatCell { cell: 1 }]);
    }

    #[test]
    fn c2_values_recurrence() {
        assert_eq!(c2_values(&[0.0, 1.0, 2.0], 0.0, 1.0).unwrap(), vec![0.0, -1.0, 0.0]);
        assert_eq!(c2_values(&[0.0, 1.0, 3.0], 0.0, 1.0).unwrap(), vec![0.0, -1.0, 3.0]);
    }

    #[test]
    fn c2_values_remove_the_second_derivative_jump() {
        let x = [0.0, 0.7, 1.5, 3.0];
        let z = c2_values(&x, 0.3, 0.8).unwrap();
        let s = model(&x, &z);
        let mut a = [0.0];
        let mut b = [0.0];
        for knot in &x[1..3] {
            s.second_derivatives(&[f64::next_down(*knot)], &mut a).unwrap();
            s.second_derivatives(&[*knot], &mut b).unwrap();
            assert!((a[0] - b[0]).abs() < 1e-9, "jump {} at {knot}", (a[0] - b[0]).abs());
        }
        // A generic value set keeps the jump.
        let s = model(&x, &[0.0, 1.0, 2.0, 0.0]);
        s.second_derivatives(&[f64::next_down(0.7)], &mut a).unwrap();
        s.second_derivatives(&[0.7], &mut b).unwrap();
        assert!((a[0] - b[0]).abs() > 1.0);
    }

    #[test]
    fn mean_deviation_matches_direct_average() {
        for (x, mu) in [(vec![0.0, 1.0, 2.0], 1.0), (vec![0.0, 1.0, 3.0], 1.0), (vec![-1.0, 0.4, 2.0, 2.5], -0.7)] {
            let z = c2_values(&x, 0.0, mu).unwrap();
            let n = x.len() - 1;
            let direct: f64 = z[1..].iter().sum::<f64>() / (n as f64);
            let closed = mean_deviation(&x, mu).unwrap();
            assert!((closed - direct).abs() < 1e-12, "{closed} vs {direct}");
        }
        assert_eq!(mean_deviation(&[0.0, 1.0, 2.0], 1.0).unwrap(), -0.5);
        assert_eq!(mean_deviation(&[0.0, 1.0, 3.0], 1.0).unwrap(), 1.0);
    }
}
