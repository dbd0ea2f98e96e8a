//! Flux of symplectic paths on `T^2` and the length functionals `L`, `Lambda`.

use serde::Serialize;

use crate::error::{precondition, Result};
use crate::exec::Exec;
use crate::poly::{Fourier, RadialProfile};
use crate::quad::{simpson, Estimate};
use crate::zoo::wrap;

/// A function on the circle `R/Z` with exact derivatives.
#[derive(Clone, Debug)]
pub enum CircleFunction {
    Fourier(Fourier),
    /// `p -> H'(p)` for a one-dimensional bump Hamiltonian supported in
    /// `|p| < 0.9 eps <= 1/2`, extended periodically.
    BumpDerivative(RadialProfile),
}

impl CircleFunction {
    fn centred(x: f64) -> f64 {
        let w = wrap(x);
        if w >= 0.5 {
            w - 1.0
        } else {
            w
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.eval(x),
            CircleFunction::BumpDerivative(h) => h.gradient(&[Self::centred(x)])[0],
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.deriv(x, 1),
            CircleFunction::BumpDerivative(h) => h.hessian(&[Self::centred(x)])[0][0],
        }
    }

    /// An antiderivative, periodic when the mean vanishes.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.antiderivative(x),
            CircleFunction::BumpDerivative(h) => h.value(&[Self::centred(x)]),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.mean(),
            CircleFunction::BumpDerivative(_) => 0.0,
        }
    }

    pub fn value_bound(&self) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.deriv_bound(0),
            CircleFunction::BumpDerivative(h) => h.gradient_bound(),
        }
    }

    pub fn deriv_bound(&self) -> f64 {
        match self {
            CircleFunction::Fourier(f) => f.deriv_bound(1),
            CircleFunction::BumpDerivative(h) => h.gradient_lipschitz_bound(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CircleFunction::Fourier(f) => f.validate(),
            CircleFunction::BumpDerivative(h) => {
                if h.support_radius() < 0.5 {
                    Ok(())
                } else {
                    precondition("bump support must fit inside the circle")
                }
            }
        }
    }
}

/// A path of symplectic maps of `T^2` with closed-form generating field.
#[derive(Clone, Debug)]
pub enum TorusPath {
    /// `f_t(x, y) = (x, y + t psi(x))`, field `(0, psi(x))`.
    Shear(CircleFunction),
    /// `f_t(z) = z + t e`, field `e`.
    Translation([f64; 2]),
    /// First path on `[0, 1/2]`, second on `[1/2, 1]`, both at double speed.
    Concat(Box<TorusPath>, Box<TorusPath>),
    Identity,
}

impl TorusPath {
    pub fn field(&self, t: f64, z: [f64; 2]) -> [f64; 2] {
        match self {
            TorusPath::Shear(psi) => [0.0, psi.eval(z[0])],
            TorusPath::Translation(e) => *e,
            TorusPath::Concat(a, b) => {
                let (path, s) = if t < 0.5 { (a, 2.0 * t) } else { (b, 2.0 * t - 1.0) };
                let v = path.field(s, z);
                [2.0 * v[0], 2.0 * v[1]]
            }
            TorusPath::Identity => [0.0, 0.0],
        }
    }

    /// Times where the field may jump.
    fn breakpoints(&self) -> Vec<f64> {
        match self {
            TorusPath::Concat(a, b) => {
                let mut out: Vec<f64> = a.breakpoints().into_iter().map(|t| 0.5 * t).collect();
                out.pop();
                out.extend(b.breakpoints().into_iter().map(|t| 0.5 + 0.5 * t));
                out
            }
            _ => vec![0.0, 1.0],
        }
    }

    /// Maximum of `|xi_t|` over `T^2` with a Lipschitz error bar, as a
    /// function of `t`.
    fn field_max(&self, t: f64, resolution: usize, exec: Exec) -> (f64, f64) {
        match self {
            TorusPath::Shear(psi) => {
                let grid = exec.max_f64(resolution, |i| psi.eval(i as f64 / resolution as f64).abs());
                (grid, psi.deriv_bound() * 0.5 / resolution as f64)
            }
            TorusPath::Translation(e) => (e[0].hypot(e[1]), 0.0),
            TorusPath::Concat(a, b) => {
                let (m, e) = if t < 0.5 { a.field_max(2.0 * t, resolution, exec) } else { b.field_max(2.0 * t - 1.0, resolution, exec) };
                (2.0 * m, 2.0 * e)
            }
            TorusPath::Identity => (0.0, 0.0),
        }
    }

    /// Maximum of the normalised Hamiltonian `|F_t|` with error bar; `None`
    /// when the path is not Hamiltonian at time `t`.
    fn hamiltonian_max(&self, t: f64, resolution: usize, exec: Exec) -> Option<(f64, f64)> {
        match self {
            TorusPath::Shear(psi) => {
                if psi.mean().abs() > 1e-14 {
                    return None;
                }
                let mean = simpson(|x| psi.antiderivative(x), 0.0, 1.0, 1e-14).value;
                let grid = exec.max_f64(resolution, |i| (psi.antiderivative(i as f64 / resolution as f64) - mean).abs());
                Some((grid, psi.value_bound() * 0.5 / resolution as f64))
            }
            TorusPath::Translation(e) => (*e == [0.0, 0.0]).then_some((0.0, 0.0)),
            TorusPath::Concat(a, b) => {
                let r = if t < 0.5 { a.hamiltonian_max(2.0 * t, resolution, exec) } else { b.hamiltonian_max(2.0 * t - 1.0, resolution, exec) };
                r.map(|(m, e)| (2.0 * m, 2.0 * e))
            }
            TorusPath::Identity => Some((0.0, 0.0)),
        }
    }
}

/// Flux coefficients over the basis `[dx], [dy]` of `H^1(T^2)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Flux {
    pub dx: Estimate,
    pub dy: Estimate,
}

impl Flux {
    pub fn magnitude(&self) -> f64 {
        self.dx.value.hypot(self.dy.value)
    }
}

/// `int_0^1 [lambda_t] dt` with `lambda_t = -i_{xi_t} omega = xi_y dx - xi_x dy`,
/// paired with the cycles `{y = 0}` and `{x = 0}`.
pub fn flux_of_path(path: &TorusPath, tolerance: f64) -> Result<Flux> {
    if let TorusPath::Shear(psi) = path {
        psi.validate()?;
    }
    let cuts = path.breakpoints();
    let pieces = (cuts.len() - 1) as f64;
    let mut dx = Estimate::default();
    let mut dy = Estimate::default();
    for w in cuts.windows(2) {
        let tol = tolerance / pieces;
        dx = dx + simpson(|t| simpson(|s| path.field(t, [s, 0.0])[1], 0.0, 1.0, tol).value, w[0], w[1], tol);
        dy = dy + simpson(|t| -simpson(|s| path.field(t, [0.0, s])[0], 0.0, 1.0, tol).value, w[0], w[1], tol);
    }
    Ok(Flux { dx, dy })
}

/// Upper bounds for `L = int max |xi_t| dt` and `Lambda = int max |F_t| dt`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PathFunctionals {
    pub length: f64,
    pub length_error: f64,
    pub hamiltonian_length: Option<f64>,
    pub hamiltonian_length_error: f64,
}

impl PathFunctionals {
    /// `L + Lambda` including error bars.
    pub fn combined_upper(&self) -> Result<f64> {
        match self.hamiltonian_length {
            Some(h) => Ok(self.length + self.length_error + h + self.hamiltonian_length_error),
            None => precondition("path is not Hamiltonian"),
        }
    }
}

/// Grid maxima over `resolution` nodes of the circle, taken at the midpoint of
/// each smooth piece in time. Every path here has a field that is constant in
/// time on each piece, so the midpoint rule is exact.
pub fn path_functionals(path: &TorusPath, resolution: usize, exec: Exec) -> Result<PathFunctionals> {
    let cuts = path.breakpoints();
    let (mut length, mut length_error) = (0.0, 0.0);
    let (mut ham, mut ham_error) = (Some(0.0), 0.0);
    for w in cuts.windows(2) {
        let (t, dt) = (0.5 * (w[0] + w[1]), w[1] - w[0]);
        let (m, e) = path.field_max(t, resolution, exec);
        length += m * dt;
        length_error += e * dt;
        match (ham, path.hamiltonian_max(t, resolution, exec)) {
            (Some(h), Some((m, e))) => {
                ham = Some(h + m * dt);
                ham_error += e * dt;
            }
            _ => ham = None,
        }
    }
    Ok(PathFunctionals { length, length_error, hamiltonian_length: ham, hamiltonian_length_error: ham_error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn shear_flux() {
        let psi = Fourier { constant: 0.3, cos: vec![0.2], sin: vec![0.1] };
        let f = flux_of_path(&TorusPath::Shear(CircleFunction::Fourier(psi)), 1e-12).unwrap();
        assert!((f.dx.value - 0.3).abs() < 1e-10 && f.dy.value.abs() < 1e-12);
        let f = flux_of_path(&TorusPath::Shear(CircleFunction::Fourier(Fourier::unit_sine())), 1e-12).unwrap();
        assert!(f.magnitude() < 1e-10);
    }

    #[test]
    fn translation_flux() {
        let f = flux_of_path(&TorusPath::Translation([0.25, -0.5]), 1e-12).unwrap();
        assert!((f.dx.value + 0.5).abs() < 1e-12 && (f.dy.value + 0.25).abs() < 1e-12);
    }

    #[test]
    fn functionals_of_standard_shear() {
        let path = TorusPath::Shear(CircleFunction::Fourier(Fourier::unit_sine()));
        let r = path_functionals(&path, 400, Exec::Sequential).unwrap();
        assert!((r.length - 1.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((r.hamiltonian_length.unwrap() - 1.0 / (4.0 * PI * PI)).abs() < 1e-12);
        let id = path_functionals(&TorusPath::Identity, 10, Exec::Sequential).unwrap();
        assert_eq!((id.length, id.hamiltonian_length), (0.0, Some(0.0)));
        let t = path_functionals(&TorusPath::Translation([0.1, 0.0]), 10, Exec::Sequential).unwrap();
        assert!(t.combined_upper().is_err());
    }
}
