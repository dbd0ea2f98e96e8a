//! Real polynomials, trigonometric series on the circle, and the compactly
//! supported radial profiles used for twist Hamiltonians. All derivatives are
//! taken symbolically on coefficients.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TAU: f64 = 2.0 * PI;

/// Polynomial with coefficients in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn constant(c: f64) -> Self {
        Poly(vec![c])
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly::default();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| self.0.get(i).unwrap_or(&0.0) + other.0.get(i).unwrap_or(&0.0)).collect())
    }

    /// `p(a x + b)`.
    pub fn compose_affine(&self, a: f64, b: f64) -> Poly {
        let lin = Poly(vec![b, a]);
        let mut out = Poly::default();
        for &c in self.0.iter().rev() {
            out = out.mul(&lin).add(&Poly::constant(c));
        }
        out
    }

    /// Rigorous bound on `max |p|` over `[lo, hi]`: the interval is split into
    /// pieces, `p` is re-expanded about each midpoint and the absolute Taylor
    /// coefficients are summed against powers of the half-width.
    pub fn abs_bound_on(&self, lo: f64, hi: f64) -> f64 {
        const PIECES: usize = 64;
        if self.0.is_empty() {
            return 0.0;
        }
        let w = (hi - lo) / PIECES as f64;
        let mut bound: f64 = 0.0;
        for i in 0..PIECES {
            let mid = lo + (i as f64 + 0.5) * w;
            let local = self.compose_affine(1.0, mid);
            let r = 0.5 * w;
            let b: f64 = local.0.iter().enumerate().map(|(k, c)| c.abs() * r.powi(k as i32)).sum();
            bound = bound.max(b);
        }
        bound * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }
}

/// A real trigonometric polynomial on the circle `R/Z`:
/// `psi(x) = constant + sum_k cos[k-1] cos(2 pi k x) + sin[k-1] sin(2 pi k x)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fourier {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl Fourier {
    /// `sin(2 pi x) / (2 pi)`, the running example of the crate.
    pub fn unit_sine() -> Self {
        Fourier { constant: 0.0, cos: vec![], sin: vec![1.0 / TAU] }
    }

    fn terms(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.cos.len().max(self.sin.len());
        (0..n).map(move |i| {
            let k = (i + 1) as f64;
            (k, *self.cos.get(i).unwrap_or(&0.0), *self.sin.get(i).unwrap_or(&0.0))
        })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.constant
            + self.terms().map(|(k, a, b)| a * (TAU * k * x).cos() + b * (TAU * k * x).sin()).sum::<f64>()
    }

    /// Derivative of order `order` (0..=3).
    pub fn deriv(&self, x: f64, order: u32) -> f64 {
        if order == 0 {
            return self.eval(x);
        }
        self.terms()
            .map(|(k, a, b)| {
                let w = TAU * k;
                let (s, c) = (w * x).sin_cos();
                let scale = w.powi(order as i32);
                // d/dx cycles cos -> -sin -> -cos -> sin.
                let (fa, fb) = match order % 4 {
                    1 => (-s, c),
                    2 => (-c, -s),
                    3 => (s, -c),
                    _ => (c, s),
                };
                scale * (a * fa + b * fb)
            })
            .sum()
    }

    /// `int_0^x psi`.
    pub fn antiderivative(&self, x: f64) -> f64 {
        self.constant * x
            + self
                .terms()
                .map(|(k, a, b)| {
                    let w = TAU * k;
                    a * (w * x).sin() / w - b * ((w * x).cos() - 1.0) / w
                })
                .sum::<f64>()
    }

    /// Mean over the circle.
    pub fn mean(&self) -> f64 {
        self.constant
    }

    /// Rigorous bound on `max |psi^{(order)}|` from the coefficients.
    pub fn deriv_bound(&self, order: u32) -> f64 {
        let c = if order == 0 { self.constant.abs() } else { 0.0 };
        c + self.terms().map(|(k, a, b)| (TAU * k).powi(order as i32) * a.hypot(b)).sum::<f64>()
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.cos.iter().chain(&self.sin).all(|&c| c == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let all = std::iter::once(&self.constant).chain(&self.cos).chain(&self.sin);
        if all.into_iter().any(|c| !c.is_finite()) {
            return Err(Error::Description("Fourier coefficients must be finite".into()));
        }
        Ok(())
    }
}

/// Radial profile `H(p) = G(|p|^2)` with `G = P * B`, where `P` is a
/// polynomial in `s = |p|^2` and `B` is the septic smootherstep cutoff:
/// `B = 1` for `|p| <= 0.5 eps`, `B = 0` for `|p| >= 0.9 eps`, C^3 across.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile {
    pub epsilon: f64,
    pub profile: Poly,
    s_inner: f64,
    s_outer: f64,
    /// `G` on the inner disc, the transition annulus, and zero outside.
    pieces: [Poly; 2],
    derivs: [[Poly; 4]; 2],
}

pub const CUTOFF_INNER: f64 = 0.5;
pub const CUTOFF_OUTER: f64 = 0.9;

impl RadialProfile {
    pub fn new(epsilon: f64, profile: Poly) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Description(format!("epsilon must be positive, got {epsilon}")));
        }
        if profile.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::Description("profile coefficients must be finite".into()));
        }
        let s_inner = (CUTOFF_INNER * epsilon).powi(2);
        let s_outer = (CUTOFF_OUTER * epsilon).powi(2);
        // 1 - (35 t^4 - 84 t^5 + 70 t^6 - 20 t^7), t = (s - s_inner) / (s_outer - s_inner)
        let step = Poly(vec![1.0, 0.0, 0.0, 0.0, -35.0, 84.0, -70.0, 20.0]);
        let width = s_outer - s_inner;
        let bump = step.compose_affine(1.0 / width, -s_inner / width);
        let inner = profile.clone();
        let outer = profile.mul(&bump);
        let d = |p: &Poly| {
            let d1 = p.derivative();
            let d2 = d1.derivative();
            let d3 = d2.derivative();
            [p.clone(), d1, d2, d3]
        };
        let derivs = [d(&inner), d(&outer)];
        Ok(RadialProfile { epsilon, profile, s_inner, s_outer, pieces: [inner, outer], derivs })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        RadialProfile::new(self.epsilon, self.profile.scale(factor)).expect("scaling keeps a valid profile")
    }

    pub fn support_radius(&self) -> f64 {
        CUTOFF_OUTER * self.epsilon
    }

    fn piece(&self, s: f64) -> Option<usize> {
        if s <= self.s_inner {
            Some(0)
        } else if s < self.s_outer {
            Some(1)
        } else {
            None
        }
    }

    /// `G^{(order)}(s)` for `order <= 3`.
    pub fn g(&self, s: f64, order: usize) -> f64 {
        match self.piece(s) {
            Some(i) => self.derivs[i][order].eval(s),
            None => 0.0,
        }
    }

    pub fn value(&self, p: &[f64]) -> f64 {
        self.g(norm2(p), 0)
    }

    /// `grad H = 2 G'(s) p`.
    pub fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let g1 = self.g(norm2(p), 1);
        p.iter().map(|x| 2.0 * g1 * x).collect()
    }

    /// `Hess H = 2 G'(s) I + 4 G''(s) p p^T`, row-major.
    pub fn hessian(&self, p: &[f64]) -> Vec<Vec<f64>> {
        let s = norm2(p);
        let (g1, g2) = (self.g(s, 1), self.g(s, 2));
        let m = p.len();
        (0..m)
            .map(|i| (0..m).map(|j| 4.0 * g2 * p[i] * p[j] + if i == j { 2.0 * g1 } else { 0.0 }).collect())
            .collect()
    }

    /// One-dimensional second derivative `d^2/dr^2 G(r^2) = 2 G' + 4 r^2 G''`.
    pub fn radial_d2(&self, r: f64) -> f64 {
        let s = r * r;
        2.0 * self.g(s, 1) + 4.0 * s * self.g(s, 2)
    }

    /// Rigorous bound for `|G^{(order)}|` on `[0, s_outer]`.
    pub fn g_bound(&self, order: usize) -> f64 {
        let a = self.derivs[0][order].abs_bound_on(0.0, self.s_inner);
        let b = self.derivs[1][order].abs_bound_on(self.s_inner, self.s_outer);
        a.max(b)
    }

    /// Rigorous bound on the operator-norm Lipschitz constant of `p -> Hess H(p)`,
    /// from `D Hess = 4 G'' (p sym dp + dp I) + 8 G''' (p.dp) p p^T`.
    pub fn hessian_lipschitz_bound(&self) -> f64 {
        let r = self.support_radius();
        12.0 * self.g_bound(2) * r + 8.0 * self.g_bound(3) * r.powi(3)
    }

    /// Rigorous bound for `max |grad H| = max 2 |G'(s)| sqrt(s)`.
    pub fn gradient_bound(&self) -> f64 {
        2.0 * self.g_bound(1) * self.support_radius()
    }

    /// Rigorous bound for the Lipschitz constant of `p -> |grad H(p)|`.
    pub fn gradient_lipschitz_bound(&self) -> f64 {
        let r = self.support_radius();
        2.0 * self.g_bound(1) + 4.0 * self.g_bound(2) * r * r
    }

    /// Rigorous bound for `max |H|`.
    pub fn value_bound(&self) -> f64 {
        self.g_bound(0)
    }
}

fn norm2(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum()
}
