//! Action differences between fixed points of a lift.

use serde::Serialize;

use crate::error::{precondition, Result};
use crate::linalg::Matrix;
use crate::quad::{simpson, Estimate};
use crate::zoo::{Dynamics, LiftedMap};

use super::forms::{line_integral, PrimitiveForm, Polyline, SEGMENT_TOLERANCE};

/// Tolerance for "is a fixed point" and "curve ends at the point".
pub const FIXED_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, Serialize)]
pub struct ActionRecord {
    pub value: f64,
    pub error: f64,
    pub power: u32,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// `F^n z` together with `d_z F^n`, following a single orbit on the cover.
fn orbit_with_jacobian(lift: &LiftedMap, z: &[f64], n: u32) -> Result<(Vec<f64>, Matrix)> {
    let mut point = z.to_vec();
    let mut jac = Matrix::identity(z.len());
    for _ in 0..n {
        jac = &lift.base.jacobian(&point)? * &jac;
        point = lift.apply(&point)?;
    }
    Ok((point, jac))
}

/// `int over F^n(c) of alpha`, parametrising the image segment by segment;
/// the tangent is `dF^n` applied to the segment direction.
pub fn image_integral(lift: &LiftedMap, n: u32, c: &Polyline, alpha: &PrimitiveForm) -> Result<Estimate> {
    let mut total = Estimate::default();
    for (a, b) in c.segments() {
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        // Surface the first domain error before quadrature.
        orbit_with_jacobian(lift, a, n)?;
        let f = |t: f64| {
            let x: Vec<f64> = a.iter().zip(&d).map(|(p, v)| p + t * v).collect();
            let (y, j) = orbit_with_jacobian(lift, &x, n).expect("segment stays in the domain");
            alpha.pair(&y, &j.apply(&d)).expect("image stays in the domain")
        };
        total = total + simpson(f, 0.0, 1.0, SEGMENT_TOLERANCE);
    }
    Ok(total)
}

/// `delta(F^n; x, y) = int over (F^n gamma - gamma) of alpha`, where `gamma`
/// runs from the fixed point `x` to the fixed point `y`.
pub fn action_difference(
    lift: &LiftedMap,
    power: u32,
    x: &[f64],
    y: &[f64],
    gamma: &Polyline,
    alpha: &PrimitiveForm,
) -> Result<ActionRecord> {
    alpha.check_closed_differential()?;
    for (name, p) in [("x", x), ("y", y)] {
        if !lift.is_fixed(p, FIXED_TOLERANCE)? {
            return precondition(format!("{name} = {p:?} is not fixed by the lift"));
        }
    }
    if gamma.closed || !near(gamma.start(), x) || !near(gamma.end(), y) {
        return precondition("connecting curve must run from x to y");
    }
    let image = image_integral(lift, power, gamma, alpha)?;
    let base = line_integral(alpha, gamma)?;
    let d = image - base;
    Ok(ActionRecord { value: d.value, error: d.error, power, x: x.to_vec(), y: y.to_vec() })
}

fn near(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(u, v)| (u - v).abs() <= FIXED_TOLERANCE)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub base_delta: f64,
    pub deltas: Vec<f64>,
    /// `max_n |delta(F^n) / (n delta(F)) - 1|`.
    pub max_deviation: f64,
}

/// Checks `delta(F^n; x, y) = n delta(F; x, y)` for `n = 1..=n_max`.
pub fn verify_iterate_scaling(
    lift: &LiftedMap,
    x: &[f64],
    y: &[f64],
    gamma: &Polyline,
    alpha: &PrimitiveForm,
    n_max: u32,
) -> Result<ScalingReport> {
    let base = action_difference(lift, 1, x, y, gamma, alpha)?;
    if base.value.abs() <= 1e3 * base.error.max(f64::EPSILON) {
        return precondition("action difference of the base map vanishes");
    }
    let mut deltas = Vec::with_capacity(n_max as usize);
    let mut max_deviation: f64 = 0.0;
    for n in 1..=n_max {
        let d = if n == 1 { base.value } else { action_difference(lift, n, x, y, gamma, alpha)?.value };
        max_deviation = max_deviation.max((d / (n as f64 * base.value) - 1.0).abs());
        deltas.push(d);
    }
    Ok(ScalingReport { base_delta: base.value, deltas, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::SymplecticMap;
    use std::f64::consts::PI;

    fn skew_lift() -> LiftedMap {
        LiftedMap::canonical(&SymplecticMap::standard_skew()).unwrap()
    }

    fn segment(x: &[f64], y: &[f64]) -> Polyline {
        Polyline::open(vec![x.to_vec(), y.to_vec()])
    }

    #[test]
    fn skew_pair_value() {
        let lift = skew_lift();
        let (x, y) = ([0.0, 0.3], [0.5, 0.3]);
        let d = action_difference(&lift, 1, &x, &y, &segment(&x, &y), &PrimitiveForm::p_dq(2)).unwrap();
        assert!((d.value.abs() - 1.0 / (2.0 * PI * PI)).abs() < 1e-12);
        let d2 = action_difference(&lift, 2, &x, &y, &segment(&x, &y), &PrimitiveForm::p_dq(2)).unwrap();
        assert!((d2.value - 2.0 * d.value).abs() < 1e-11);
    }

    #[test]
    fn degenerate_pair_is_zero() {
        let lift = skew_lift();
        let x = [0.5, 0.3];
        let d = action_difference(&lift, 3, &x, &x, &segment(&x, &x), &PrimitiveForm::p_dq(2)).unwrap();
        assert_eq!(d.value, 0.0);
    }

    #[test]
    fn preconditions() {
        let lift = skew_lift();
        let (x, y) = ([0.0, 0.3], [0.25, 0.3]);
        assert!(action_difference(&lift, 1, &x, &y, &segment(&x, &y), &PrimitiveForm::p_dq(2)).is_err());
        let t = LiftedMap::canonical(&SymplecticMap::translation2([1.0, 0.0])).unwrap();
        let (a, b) = (t.fixed_points[0].clone(), t.fixed_points[1].clone());
        let r = verify_iterate_scaling(&t, &a, &b, &segment(&a, &b), &PrimitiveForm::p_dq(2), 4);
        assert!(r.is_err());
    }
}
