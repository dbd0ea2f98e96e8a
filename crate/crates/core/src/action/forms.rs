//! Primitives of the lifted symplectic form, polylines, and line integrals.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::quad::{simpson, Estimate};

/// Per-segment quadrature target.
pub const SEGMENT_TOLERANCE: f64 = 1e-12;

/// `d(amplitude * sin(2 pi wave . x + phase))`, an exact correction term.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gauge {
    pub amplitude: f64,
    pub wave: Vec<f64>,
    pub phase: f64,
}

impl Gauge {
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let arg = TAU * self.wave.iter().zip(x).map(|(k, v)| k * v).sum::<f64>() + self.phase;
        let c = self.amplitude * TAU * arg.cos();
        self.wave.iter().map(|k| c * k).collect()
    }

    /// Lipschitz constant of the gradient.
    fn hessian_bound(&self) -> f64 {
        let k2: f64 = self.wave.iter().map(|k| k * k).sum();
        self.amplitude.abs() * TAU * TAU * k2
    }
}

/// A 1-form with `d alpha = omega` on a simply connected cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "cover", rename_all = "snake_case")]
pub enum PrimitiveForm {
    /// `alpha = sum_ab linear[a][b] x_a dx_b + constant . dx + sum of gauge
    /// differentials` on `R^{2n}` with coordinates `(p1, q1, ...)`.
    Plane {
        linear: Vec<Vec<f64>>,
        #[serde(default)]
        constant: Vec<f64>,
        #[serde(default)]
        gauge: Vec<Gauge>,
    },
    /// `alpha = dp / q + shift dp` on the upper half-plane, `omega = dp dq / q^2`.
    HalfPlane { shift: f64 },
}

impl PrimitiveForm {
    /// `sum_j p_j dq_j`.
    pub fn p_dq(dim: usize) -> Self {
        let mut linear = vec![vec![0.0; dim]; dim];
        for j in 0..dim / 2 {
            linear[2 * j][2 * j + 1] = 1.0;
        }
        PrimitiveForm::Plane { linear, constant: vec![], gauge: vec![] }
    }

    /// `sum_j -q_j dp_j`.
    pub fn minus_q_dp(dim: usize) -> Self {
        let mut linear = vec![vec![0.0; dim]; dim];
        for j in 0..dim / 2 {
            linear[2 * j + 1][2 * j] = -1.0;
        }
        PrimitiveForm::Plane { linear, constant: vec![], gauge: vec![] }
    }

    /// `sum_j (p_j dq_j - q_j dp_j) / 2`.
    pub fn symmetric(dim: usize) -> Self {
        let mut linear = vec![vec![0.0; dim]; dim];
        for j in 0..dim / 2 {
            linear[2 * j][2 * j + 1] = 0.5;
            linear[2 * j + 1][2 * j] = -0.5;
        }
        PrimitiveForm::Plane { linear, constant: vec![], gauge: vec![] }
    }

    /// `sum_j (p_j - c_j) dq_j`, the standard primitive recentred at `centre`.
    pub fn p_dq_centred(centre: &[f64]) -> Self {
        let dim = centre.len();
        let mut form = Self::p_dq(dim);
        if let PrimitiveForm::Plane { constant, .. } = &mut form {
            *constant = (0..dim).map(|b| if b % 2 == 1 { -centre[b - 1] } else { 0.0 }).collect();
        }
        form
    }

    /// `self + d(amplitude sin(2 pi wave . x + phase))`.
    pub fn with_gauge(mut self, amplitude: f64, wave: Vec<f64>, phase: f64) -> Self {
        if let PrimitiveForm::Plane { gauge, .. } = &mut self {
            gauge.push(Gauge { amplitude, wave, phase });
        }
        self
    }

    pub fn dim(&self) -> usize {
        match self {
            PrimitiveForm::Plane { linear, .. } => linear.first().map_or(0, |r| r.len()),
            PrimitiveForm::HalfPlane { .. } => 2,
        }
    }

    /// Verifies `d alpha = omega` on the coefficients:
    /// `linear[a][b] - linear[b][a]` must equal `omega(e_a, e_b)`.
    pub fn check_closed_differential(&self) -> Result<()> {
        match self {
            PrimitiveForm::HalfPlane { shift } => {
                if shift.is_finite() {
                    Ok(())
                } else {
                    precondition("half-plane primitive needs a finite shift")
                }
            }
            PrimitiveForm::Plane { linear, constant, gauge } => {
                let dim = self.dim();
                if dim == 0 || dim % 2 != 0 || linear.len() != dim || linear.iter().any(|r| r.len() != dim) {
                    return precondition("plane primitive needs an even dimension");
                }
                if !(constant.is_empty() || constant.len() == dim) || gauge.iter().any(|g| g.wave.len() != dim) {
                    return precondition("constant or gauge term has the wrong dimension");
                }
                for a in 0..dim {
                    for b in 0..dim {
                        let omega = if a / 2 != b / 2 {
                            0.0
                        } else if a % 2 == 0 && b == a + 1 {
                            1.0
                        } else if a % 2 == 1 && b + 1 == a {
                            -1.0
                        } else {
                            0.0
                        };
                        if (linear[a][b] - linear[b][a] - omega).abs() > 1e-15 {
                            return precondition(format!("d alpha differs from omega at ({a}, {b})"));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Components `alpha_x(e_b)`.
    pub fn covector(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            PrimitiveForm::HalfPlane { shift } => {
                if x[1] <= 0.0 {
                    return Err(Error::Domain(format!("half-plane point needs q > 0, got {}", x[1])));
                }
                Ok(vec![1.0 / x[1] + shift, 0.0])
            }
            PrimitiveForm::Plane { linear, constant, gauge } => {
                let dim = self.dim();
                let mut out: Vec<f64> = (0..dim).map(|b| (0..dim).map(|a| linear[a][b] * x[a]).sum()).collect();
                for (o, c) in out.iter_mut().zip(constant) {
                    *o += c;
                }
                for g in gauge {
                    for (o, d) in out.iter_mut().zip(g.gradient(x)) {
                        *o += d;
                    }
                }
                Ok(out)
            }
        }
    }

    /// `alpha_x(v)`.
    pub fn pair(&self, x: &[f64], v: &[f64]) -> Result<f64> {
        Ok(self.covector(x)?.iter().zip(v).map(|(a, b)| a * b).sum())
    }

    /// Covector norm in the model metric: flat, or `q |alpha|` on the half-plane.
    pub fn norm(&self, x: &[f64]) -> Result<f64> {
        let c = self.covector(x)?;
        let e = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        Ok(match self {
            PrimitiveForm::HalfPlane { .. } => x[1] * e,
            PrimitiveForm::Plane { .. } => e,
        })
    }

    /// Lipschitz constant of `x -> |alpha_x|` on the flat ball of radius
    /// `radius` about the origin, or on the hyperbolic ball of that radius
    /// about `i` for the half-plane (with respect to the hyperbolic metric).
    pub fn norm_lipschitz(&self, radius: f64) -> f64 {
        match self {
            // |1 + shift q| and |grad_hyp q| = q <= e^radius on the ball.
            PrimitiveForm::HalfPlane { shift } => shift.abs() * radius.exp(),
            PrimitiveForm::Plane { linear, gauge, .. } => {
                let frob: f64 = linear.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
                frob + gauge.iter().map(Gauge::hessian_bound).sum::<f64>()
            }
        }
    }
}

/// Piecewise-linear curve on a cover.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    pub vertices: Vec<Vec<f64>>,
    pub closed: bool,
}

impl Polyline {
    /// Consecutive vertices must be within `max_step` of each other so that
    /// curves unwrapped from a torus cannot alias.
    pub fn new(vertices: Vec<Vec<f64>>, closed: bool, max_step: f64) -> Result<Self> {
        let line = Polyline { vertices, closed };
        if line.vertices.is_empty() {
            return precondition("polyline needs at least one vertex");
        }
        let dim = line.vertices[0].len();
        if line.vertices.iter().any(|v| v.len() != dim || v.iter().any(|c| !c.is_finite())) {
            return precondition("polyline vertices must be finite and of equal dimension");
        }
        for (a, b) in line.segments() {
            if dist(a, b) > max_step {
                return precondition(format!("segment of length {} exceeds {max_step}", dist(a, b)));
            }
        }
        Ok(line)
    }

    pub fn open(vertices: Vec<Vec<f64>>) -> Self {
        Polyline { vertices, closed: false }
    }

    pub fn closed(vertices: Vec<Vec<f64>>) -> Self {
        Polyline { vertices, closed: true }
    }

    pub fn segments(&self) -> impl Iterator<Item = (&[f64], &[f64])> {
        let n = self.vertices.len();
        let count = if self.closed && n > 1 { n } else { n.saturating_sub(1) };
        (0..count).map(move |i| (self.vertices[i].as_slice(), self.vertices[(i + 1) % n].as_slice()))
    }

    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| dist(a, b)).sum()
    }

    pub fn start(&self) -> &[f64] {
        &self.vertices[0]
    }

    pub fn end(&self) -> &[f64] {
        if self.closed {
            &self.vertices[0]
        } else {
            self.vertices.last().unwrap()
        }
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Polyline { vertices: v, closed: self.closed }
    }

    /// Regular `sides`-gon of the given circumradius in the `(p1, q1)` plane
    /// of `R^dim`, counter-clockwise.
    pub fn regular_polygon(dim: usize, centre: (f64, f64), radius: f64, sides: usize) -> Self {
        let vertices = (0..sides)
            .map(|k| {
                let t = TAU * k as f64 / sides as f64;
                let mut v = vec![0.0; dim];
                v[0] = centre.0 + radius * t.cos();
                v[1] = centre.1 + radius * t.sin();
                v
            })
            .collect();
        Polyline::closed(vertices)
    }
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// `int_c alpha` by adaptive Simpson on every segment.
pub fn line_integral(alpha: &PrimitiveForm, c: &Polyline) -> Result<Estimate> {
    if matches!(alpha, PrimitiveForm::HalfPlane { .. }) && c.vertices.iter().any(|v| v[1] <= 0.0) {
        return Err(Error::Domain("half-plane polyline needs q > 0 at every vertex".into()));
    }
    let mut total = Estimate::default();
    for (a, b) in c.segments() {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let f = |t: f64| {
            let x: Vec<f64> = a.iter().zip(&d).map(|(p, v)| p + t * v).collect();
            alpha.pair(&x, &d).expect("segment stays in the domain")
        };
        total = total + simpson(f, 0.0, 1.0, SEGMENT_TOLERANCE);
    }
    Ok(total)
}
