//! Superpositions of compactly supported bumps, one per prescribed point.
//!
//! Each term is `c * chi(|p - center|^2) * shape(p - center)` where `chi` is
//! the smooth cutoff `a^(s/(s - r^2))` for `s < r^2` and zero outside. The
//! cutoff equals one with zero gradient at the center and vanishes to all
//! orders at the support boundary, so the sum is C^inf everywhere, each
//! center is stationary, and any two terms with disjoint supports cannot
//! disturb each other. Evaluation works in log space: the exponent
//! `ln(a) * s/(s - r^2)` is clamped before exponentiating, so tail underflow
//! is exact zero instead of a subnormal mess.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{ensure_inside, Diagnostic, Mode, Region, StationarySpec, SurfaceModel};

/// Exponents below this underflow `exp` to zero anyway; skip the work.
const EXP_UNDERFLOW: f64 = -745.0;

/// Per-term multiplier shaping the surface near each center. Every variant
/// keeps `shape(0) = 1`; all but `LinearSlope` also keep a zero gradient at
/// the center.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Shape {
    ConstantOne,
    /// `1 + u^T Q u` with `Q` given row-major (`dim * dim` entries,
    /// symmetrized internally). Shifts the center's second derivatives by
    /// `2 c Q` without moving the stationary point.
    Quadratic { q: Vec<f64> },
    /// `1 + g . u`. Deliberately tilts the surface so the center carries the
    /// prescribed gradient `c * g` instead of a stationary point; useful when
    /// slopes rather than flats are prescribed. Not used by the default
    /// problem modes.
    LinearSlope { g: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct BumpParams {
    /// Cutoff base `a > 1`; steeper bases concentrate the bump.
    pub base: f64,
    /// Fraction of the automatic radius to use, in `(0, 1]`.
    pub radius_scale: f64,
    /// Explicit support radii, overriding the automatic choice.
    pub radii: Option<Vec<f64>>,
    /// Explicit term coefficients (problems A and C only; B takes them from
    /// the target values).
    pub coefficients: Option<Vec<f64>>,
    pub shape: Shape,
}

impl Default for BumpParams {
    fn default() -> Self {
        BumpParams {
            base: std::f64::consts::E,
            radius_scale: 1.0,
            radii: None,
            coefficients: None,
            shape: Shape::ConstantOne,
        }
    }
}

struct Term {
    center: [f64; 2],
    radius_sq: f64,
    coeff: f64,
}

pub struct BumpSurface {
    dim: usize,
    log_base: f64,
    terms: Vec<Term>,
    shape: Shape,
    region: Region,
    diagnostics: Vec<Diagnostic>,
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Support radii when none are given. Problems A and B scale the distance to
/// the nearest other center, which keeps every center outside every other
/// support. The exclusive problem in one dimension instead ties each radius
/// to the spacing on the left, which tiles the hull without gaps when the
/// spacings never decrease.
fn auto_radii(spec: &StationarySpec, region: &Region, scale: f64) -> Result<Vec<f64>> {
    let rows = spec.points.rows();
    let n = rows.len();
    if spec.mode == Mode::C {
        let xs: Vec<f64> = rows.iter().map(|p| p[0]).collect();
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::spec(
                "the exclusive problem needs strictly increasing points",
            ));
        }
        if n == 1 {
            return Err(Error::spec("the exclusive problem needs at least two points"));
        }
        let mut r = vec![scale * (xs[1] - xs[0])];
        r.extend(xs.windows(2).map(|w| scale * (w[1] - w[0])));
        return Ok(r);
    }
    if n == 1 {
        // No neighbor to measure against; use half the narrowest region side.
        let half = (0..region.dim())
            .map(|a| {
                let [lo, hi] = region.axis_bounds(a);
                0.5 * (hi - lo)
            })
            .fold(f64::INFINITY, f64::min);
        return Ok(vec![scale * half]);
    }
    Ok((0..n)
        .map(|i| {
            let nearest = (0..n)
                .filter(|j| *j != i)
                .map(|j| dist_sq(&rows[i], &rows[j]))
                .fold(f64::INFINITY, f64::min);
            scale * nearest.sqrt()
        })
        .collect())
}

fn term_coefficients(spec: &StationarySpec, explicit: &Option<Vec<f64>>) -> Result<Vec<f64>> {
    let n = spec.points.len();
    if let Some(c) = explicit {
        if spec.mode == Mode::B {
            return Err(Error::spec(
                "problem B coefficients are determined by the target values",
            ));
        }
        if c.len() != n {
            return Err(Error::spec(format!("{} coefficients for {n} points", c.len())));
        }
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::spec("non-finite coefficient"));
        }
        if spec.mode == Mode::C && c.windows(2).any(|w| w[0] * w[1] >= 0.0) {
            return Err(Error::spec(
                "the exclusive problem needs strictly alternating coefficient signs",
            ));
        }
        return Ok(c.clone());
    }
    Ok(match spec.mode {
        Mode::A => vec![1.0; n],
        Mode::B => spec.values.clone().expect("validated: B has values"),
        Mode::C => (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
    })
}

impl Shape {
    fn check(&self, dim: usize) -> Result<()> {
        match self {
            Shape::ConstantOne => Ok(()),
            Shape::Quadratic { q } => {
                if q.len() != dim * dim || q.iter().any(|v| !v.is_finite()) {
                    Err(Error::spec(format!("quadratic shape needs {} finite entries", dim * dim)))
                } else {
                    Ok(())
                }
            }
            Shape::LinearSlope { g } => {
                if g.len() != dim || g.iter().any(|v| !v.is_finite()) {
                    Err(Error::spec(format!("linear shape needs {dim} finite entries")))
                } else {
                    Ok(())
                }
            }
        }
    }

    fn symmetrized(self, dim: usize) -> Shape {
        match self {
            Shape::Quadratic { q } => {
                let mut s = vec![0.0; dim * dim];
                for i in 0..dim {
                    for j in 0..dim {
                        s[i * dim + j] = 0.5 * (q[i * dim + j] + q[j * dim + i]);
                    }
                }
                Shape::Quadratic { q: s }
            }
            other => other,
        }
    }

    /// Value, gradient, and Hessian at offset `u` from the center.
    fn eval(&self, u: &[f64], dim: usize) -> (f64, [f64; 2], [f64; 4]) {
        let mut grad = [0.0; 2];
        let mut hess = [0.0; 4];
        let value = match self {
            Shape::ConstantOne => 1.0,
            Shape::Quadratic { q } => {
                let mut v = 1.0;
                for i in 0..dim {
                    let mut qu = 0.0;
                    for j in 0..dim {
                        qu += q[i * dim + j] * u[j];
                        hess[i * dim + j] = 2.0 * q[i * dim + j];
                    }
                    v += u[i] * qu;
                    grad[i] = 2.0 * qu;
                }
                v
            }
            Shape::LinearSlope { g } => {
                let mut v = 1.0;
                for i in 0..dim {
                    v += g[i] * u[i];
                    grad[i] = g[i];
                }
                v
            }
        };
        (value, grad, hess)
    }
}

pub fn build_bumps(spec: &StationarySpec, params: &BumpParams) -> Result<BumpSurface> {
    spec.validate()?;
    let dim = spec.points.dim();
    if spec.mode == Mode::C && dim == 2 {
        return Err(Error::unsupported(
            "the exclusive problem is only provided in one dimension for bumps",
        ));
    }
    if !(params.base.is_finite() && params.base > 1.0) {
        return Err(Error::spec("cutoff base must be a finite number above 1"));
    }
    if !(params.radius_scale > 0.0 && params.radius_scale <= 1.0) {
        return Err(Error::spec("radius scale must lie in (0, 1]"));
    }
    params.shape.check(dim)?;

    let region = spec.resolve_region();
    let rows = spec.points.rows();
    let n = rows.len();

    let radii = match &params.radii {
        Some(r) => {
            if r.len() != n {
                return Err(Error::spec(format!("{} radii for {n} points", r.len())));
            }
            if r.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::spec("radii must be positive and finite"));
            }
            r.clone()
        }
        None => auto_radii(spec, &region, params.radius_scale)?,
    };
    let coeffs = term_coefficients(spec, &params.coefficients)?;

    let mut diagnostics = Vec::new();
    if spec.mode == Mode::C {
        for i in 1..n {
            if radii[i] < rows[i][0] - rows[i - 1][0] {
                diagnostics.push(Diagnostic::RadiusBelowSpacing { index: i });
            }
        }
    }
    let log_base = params.base.ln();
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            // Flag only containment the evaluator can see: at the support
            // boundary the cutoff underflows to exact zero, so a neighbor at
            // (or within rounding of) distance r is harmless.
            let s = dist_sq(&rows[i], &rows[j]);
            let r2 = radii[i] * radii[i];
            if s < r2 && log_base * s / (s - r2) >= EXP_UNDERFLOW {
                diagnostics.push(Diagnostic::SupportContainsNeighbor { index: i, neighbor: j });
            }
        }
    }

    let terms = (0..n)
        .map(|i| {
            let mut center = [0.0; 2];
            center[..dim].copy_from_slice(&rows[i]);
            Term { center, radius_sq: radii[i] * radii[i], coeff: coeffs[i] }
        })
        .collect();

    Ok(BumpSurface {
        dim,
        log_base,
        terms,
        shape: params.shape.clone().symmetrized(dim),
        region,
        diagnostics,
    })
}

impl BumpSurface {
    /// Accumulate one term's value/gradient/Hessian contributions at `p`.
    fn accumulate(
        &self,
        term: &Term,
        p: &[f64],
        value: &mut f64,
        grad: Option<&mut [f64]>,
        hess: Option<&mut [f64]>,
    ) {
        let dim = self.dim;
        let mut u = [0.0; 2];
        let mut s = 0.0;
        for a in 0..dim {
            u[a] = p[a] - term.center[a];
            s += u[a] * u[a];
        }
        let r2 = term.radius_sq;
        if s >= r2 {
            return;
        }
        let denom = s - r2;
        let w = self.log_base * s / denom;
        if w < EXP_UNDERFLOW {
            return;
        }
        let chi = w.exp();
        // d/ds of the exponent and its derivative; chi' and chi'' follow by
        // the chain rule in s.
        let gp = -self.log_base * r2 / (denom * denom);
        let gpp = 2.0 * self.log_base * r2 / (denom * denom * denom);
        let chi_s = chi * gp;
        let chi_ss = chi * (gp * gp + gpp);

        let (phi, phi_g, phi_h) = self.shape.eval(&u[..dim], dim);
        let c = term.coeff;
        *value += c * chi * phi;
        if let Some(grad) = grad {
            for a in 0..dim {
                grad[a] += c * (chi * phi_g[a] + phi * chi_s * 2.0 * u[a]);
            }
        }
        if let Some(hess) = hess {
            for a in 0..dim {
                for b in 0..dim {
                    let id = if a == b { 1.0 } else { 0.0 };
                    let chi_ab = 4.0 * chi_ss * u[a] * u[b] + 2.0 * chi_s * id;
                    hess[a * dim + b] += c * (phi * chi_ab
                        + 2.0 * chi_s * u[a] * phi_g[b]
                        + phi_g[a] * 2.0 * chi_s * u[b]
                        + chi * phi_h[a * dim + b]);
                }
            }
        }
    }
}

impl SurfaceModel for BumpSurface {
    fn dim(&self) -> usize {
        self.dim
    }

    fn region(&self) -> &Region {
        &self.region
    }

    fn value(&self, p: &[f64]) -> Result<f64> {
        ensure_inside(&self.region, p)?;
        let mut v = 0.0;
        for t in &self.terms {
            self.accumulate(t, p, &mut v, None, None);
        }
        Ok(v)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out.fill(0.0);
        let mut v = 0.0;
        for t in &self.terms {
            self.accumulate(t, p, &mut v, Some(out), None);
        }
        Ok(())
    }

    fn second_derivatives(&self, p: &[f64], out: &mut [f64]) -> Result<()> {
        ensure_inside(&self.region, p)?;
        out.fill(0.0);
        let mut v = 0.0;
        for t in &self.terms {
            self.accumulate(t, p, &mut v, None, Some(out));
        }
        Ok(())
    }

    fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }
}
