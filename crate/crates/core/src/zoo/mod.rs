//! Explicit symplectic maps with closed-form inverses and exact Jacobians.
//!
//! Coordinates are ordered `(p1, q1, ..., pn, qn)` and the symplectic form is
//! `sum dp_j ^ dq_j`. On the two-torus the pair `(x, y)` plays the role of
//! `(p, q)`. Periodic coordinates are reduced to `[0, 1)` on evaluation.
//!
//! A map is described in JSON as `{"model": ..., "params": {...}}`; see
//! [`MapDescription`] and [`schema`].

pub mod appendix;
mod lift;

use serde::{Deserialize, Serialize};

pub use lift::{Affine, DeckElement, LiftedMap};

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix};
use crate::poly::{Fourier, Poly, RadialProfile};

/// Guard on Jacobian entries while iterating.
pub const ENTRY_GUARD: f64 = 1e300;

/// Serialized form of a zoo member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum MapDescription {
    Torus2(Torus2Map),
    Torus2n(Torus2nMap),
    TwistCylinder(TwistParams),
    QuotientT4(QuotientParams),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Torus2Map {
    Translation { shift: [f64; 2] },
    /// `(x, y) -> (x + rotation, y + psi(x))`
    SkewProduct { rotation: f64, psi: Fourier },
    Linear { matrix: [[i64; 2]; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Torus2nMap {
    Translation { n: usize, shift: Vec<f64> },
    Linear { n: usize, matrix: Vec<Vec<i64>> },
}

/// Time-one map of `H(p) = G(|p|^2)` on `T^m x D^m(epsilon)`; `profile` holds
/// the coefficients of the polynomial part of `G` in `s = |p|^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistParams {
    pub m: usize,
    pub epsilon: f64,
    pub profile: Vec<f64>,
}

/// The flow `q1 -> q1 + 1/2` on `T^4`, optionally composed with the
/// involution `(p1, q1, p2, q2) -> (p1, q1 + 1/2, -p2, -q2)`. Both descend to
/// the same map of the quotient by the involution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientParams {
    #[serde(default)]
    pub compose_involution: bool,
}

/// How the maximum over the manifold samples one coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    /// Periodic with period one; `R` nodes at `i / R`.
    Periodic,
    /// Closed interval; `R` nodes including both endpoints.
    Interval(f64, f64),
    /// Jacobians of every iterate are independent of this coordinate.
    Irrelevant,
}

/// A smooth invertible map with exact derivative data, as consumed by the
/// growth computations.
pub trait Dynamics: Sync {
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn evaluate_inverse(&self, x: &[f64]) -> Result<Vec<f64>>;
    fn jacobian(&self, x: &[f64]) -> Result<Matrix>;
    /// Jacobian of the inverse map at `x`.
    fn jacobian_inverse(&self, x: &[f64]) -> Result<Matrix>;
    fn axes(&self) -> Vec<Axis>;
    /// Bound on the Lipschitz constant of `x -> |d_x f^{+-n}|` along the
    /// relevant axes. `None` when no bound is available.
    fn norm_lipschitz(&self, n: u64) -> Option<f64>;
    /// Radius of the momentum disc for maps defined on `T^m x D^m`.
    fn disc_radius(&self) -> Option<f64> {
        None
    }
}

#[derive(Clone, Debug)]
enum Kind {
    Translation { shift: Vec<f64> },
    Skew { rotation: f64, psi: Fourier },
    Linear { matrix: IntMatrix, inverse: IntMatrix, forward: Matrix, backward: Matrix },
    Twist { m: usize, profile: RadialProfile },
    Quotient { involution: bool },
}

/// A validated zoo member.
#[derive(Clone, Debug)]
pub struct SymplecticMap {
    description: MapDescription,
    kind: Kind,
}

impl PartialEq for SymplecticMap {
    fn eq(&self, other: &Self) -> bool {
        self.description == other.description
    }
}

impl SymplecticMap {
    pub fn from_description(description: MapDescription) -> Result<Self> {
        let kind = match &description {
            MapDescription::Torus2(t) => match t {
                Torus2Map::Translation { shift } => translation_kind(shift)?,
                Torus2Map::SkewProduct { rotation, psi } => {
                    psi.validate()?;
                    if !rotation.is_finite() {
                        return Err(Error::Description("rotation must be finite".into()));
                    }
                    Kind::Skew { rotation: *rotation, psi: psi.clone() }
                }
                Torus2Map::Linear { matrix } => {
                    linear_kind(IntMatrix(matrix.iter().map(|r| r.to_vec()).collect()))?
                }
            },
            MapDescription::Torus2n(t) => match t {
                Torus2nMap::Translation { n, shift } => {
                    if shift.len() != 2 * n || *n == 0 {
                        return Err(Error::Description(format!("shift must have length 2n = {}", 2 * n)));
                    }
                    translation_kind(shift)?
                }
                Torus2nMap::Linear { n, matrix } => {
                    let m = IntMatrix(matrix.clone());
                    if m.dim() != 2 * n || !m.is_square() || *n == 0 {
                        return Err(Error::Description(format!("matrix must be {0}x{0}", 2 * n)));
                    }
                    linear_kind(m)?
                }
            },
            MapDescription::TwistCylinder(t) => {
                if t.m == 0 {
                    return Err(Error::Description("twist cylinder needs m >= 1".into()));
                }
                Kind::Twist { m: t.m, profile: RadialProfile::new(t.epsilon, Poly(t.profile.clone()))? }
            }
            MapDescription::QuotientT4(q) => Kind::Quotient { involution: q.compose_involution },
        };
        Ok(SymplecticMap { description, kind })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: MapDescription = serde_json::from_str(text)?;
        Self::from_description(d)
    }

    pub fn description(&self) -> &MapDescription {
        &self.description
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.description).expect("descriptions serialize")
    }

    pub fn model_name(&self) -> &'static str {
        match self.description {
            MapDescription::Torus2(_) => "torus2",
            MapDescription::Torus2n(_) => "torus2n",
            MapDescription::TwistCylinder(_) => "twist_cylinder",
            MapDescription::QuotientT4(_) => "quotient_t4",
        }
    }

    // Convenience constructors for the maps used throughout the crate.

    pub fn translation2(shift: [f64; 2]) -> Self {
        Self::from_description(MapDescription::Torus2(Torus2Map::Translation { shift })).unwrap()
    }

    pub fn skew_product(rotation: f64, psi: Fourier) -> Self {
        Self::from_description(MapDescription::Torus2(Torus2Map::SkewProduct { rotation, psi })).unwrap()
    }

    /// `(x, y) -> (x, y + sin(2 pi x) / (2 pi))`.
    pub fn standard_skew() -> Self {
        Self::skew_product(0.0, Fourier::unit_sine())
    }

    pub fn linear2(matrix: [[i64; 2]; 2]) -> Result<Self> {
        Self::from_description(MapDescription::Torus2(Torus2Map::Linear { matrix }))
    }

    pub fn twist(m: usize, epsilon: f64, profile: Vec<f64>) -> Result<Self> {
        Self::from_description(MapDescription::TwistCylinder(TwistParams { m, epsilon, profile }))
    }

    /// Twist with `G(s) = h0 (1 - s / eps^2)` under the cutoff: a single
    /// interior maximum `h0` at the centre and the plateau `0` near the rim.
    pub fn peaked_twist(h0: f64, epsilon: f64) -> Self {
        Self::twist(1, epsilon, vec![h0, -h0 / (epsilon * epsilon)]).unwrap()
    }

    pub fn quotient(compose_involution: bool) -> Self {
        Self::from_description(MapDescription::QuotientT4(QuotientParams { compose_involution })).unwrap()
    }

    /// Radial profile of a twist map.
    pub fn twist_profile(&self) -> Option<&RadialProfile> {
        match &self.kind {
            Kind::Twist { profile, .. } => Some(profile),
            _ => None,
        }
    }

    pub fn integer_matrix(&self) -> Option<&IntMatrix> {
        match &self.kind {
            Kind::Linear { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    pub fn translation_shift(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Translation { shift } => Some(shift),
            _ => None,
        }
    }

    pub fn skew_data(&self) -> Option<(f64, &Fourier)> {
        match &self.kind {
            Kind::Skew { rotation, psi } => Some((*rotation, psi)),
            _ => None,
        }
    }

    pub fn is_quotient(&self) -> Option<bool> {
        match &self.kind {
            Kind::Quotient { involution } => Some(*involution),
            _ => None,
        }
    }

    fn check(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Domain(format!("expected a point of dimension {}, got {}", self.dim(), x.len())));
        }
        if x.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("point has non-finite coordinates".into()));
        }
        if let Kind::Twist { m, profile } = &self.kind {
            let p = twist_momenta(x, *m);
            let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
            if r > profile.epsilon * (1.0 + 1e-12) {
                return Err(Error::Domain(format!("|p| = {r} exceeds the disc radius {}", profile.epsilon)));
            }
        }
        Ok(())
    }

    /// Formula on the universal cover without periodic reduction.
    pub fn cover_evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(match &self.kind {
            Kind::Translation { shift } => x.iter().zip(shift).map(|(a, b)| a + b).collect(),
            Kind::Skew { rotation, psi } => vec![x[0] + rotation, x[1] + psi.eval(x[0])],
            Kind::Linear { matrix, .. } => matrix.apply(x),
            Kind::Twist { m, profile } => {
                let grad = profile.gradient(&twist_momenta(x, *m));
                let mut y = x.to_vec();
                for j in 0..*m {
                    y[2 * j + 1] += grad[j];
                }
                y
            }
            Kind::Quotient { involution } => {
                let y = [x[0], x[1] + 0.5, x[2], x[3]];
                if *involution {
                    appendix::involution_cover(&y).to_vec()
                } else {
                    y.to_vec()
                }
            }
        })
    }

    pub fn cover_evaluate_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(match &self.kind {
            Kind::Translation { shift } => x.iter().zip(shift).map(|(a, b)| a - b).collect(),
            Kind::Skew { rotation, psi } => {
                let x0 = x[0] - rotation;
                vec![x0, x[1] - psi.eval(x0)]
            }
            Kind::Linear { inverse, .. } => inverse.apply(x),
            Kind::Twist { m, profile } => {
                let grad = profile.gradient(&twist_momenta(x, *m));
                let mut y = x.to_vec();
                for j in 0..*m {
                    y[2 * j + 1] -= grad[j];
                }
                y
            }
            Kind::Quotient { involution } => {
                let y = if *involution { appendix::involution_inverse_cover(x) } else { [x[0], x[1], x[2], x[3]] };
                vec![y[0], y[1] - 0.5, y[2], y[3]]
            }
        })
    }

    fn reduce(&self, mut y: Vec<f64>) -> Vec<f64> {
        for (i, v) in y.iter_mut().enumerate() {
            if self.is_periodic(i) {
                *v = wrap(*v);
            }
        }
        y
    }

    pub fn is_periodic(&self, coord: usize) -> bool {
        match self.kind {
            Kind::Twist { .. } => coord % 2 == 1,
            _ => true,
        }
    }
}

/// Reduce to `[0, 1)`.
pub fn wrap(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Distance between two residues mod one.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn twist_momenta(x: &[f64], m: usize) -> Vec<f64> {
    (0..m).map(|j| x[2 * j]).collect()
}

fn translation_kind(shift: &[f64]) -> Result<Kind> {
    if shift.iter().any(|v| !v.is_finite()) {
        return Err(Error::Description("translation vector must be finite".into()));
    }
    Ok(Kind::Translation { shift: shift.to_vec() })
}

fn linear_kind(matrix: IntMatrix) -> Result<Kind> {
    if matrix.dim() % 2 != 0 || !matrix.is_square() {
        return Err(Error::Description("linear map needs an even square matrix".into()));
    }
    if matrix.det() != 1 {
        return Err(Error::Description(format!("integer matrix must have determinant 1, got {}", matrix.det())));
    }
    // A^T Omega A = Omega in exact integer arithmetic.
    let n = matrix.dim();
    let omega = |i: usize, j: usize| -> i64 {
        if i / 2 != j / 2 {
            0
        } else if i % 2 == 0 && j == i + 1 {
            1
        } else if i % 2 == 1 && j + 1 == i {
            -1
        } else {
            0
        }
    };
    for i in 0..n {
        for j in 0..n {
            let mut v = 0i64;
            for k in 0..n {
                for l in 0..n {
                    v += matrix.0[k][i] * omega(k, l) * matrix.0[l][j];
                }
            }
            if v != omega(i, j) {
                return Err(Error::Description("integer matrix is not symplectic".into()));
            }
        }
    }
    let inverse = matrix.inverse_unimodular().expect("det 1 matrices are invertible");
    let forward = matrix.to_matrix();
    let backward = inverse.to_matrix();
    Ok(Kind::Linear { matrix, inverse, forward, backward })
}

impl Dynamics for SymplecticMap {
    fn dim(&self) -> usize {
        match &self.kind {
            Kind::Translation { shift } => shift.len(),
            Kind::Skew { .. } => 2,
            Kind::Linear { matrix, .. } => matrix.dim(),
            Kind::Twist { m, .. } => 2 * m,
            Kind::Quotient { .. } => 4,
        }
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.cover_evaluate(x)?;
        Ok(self.reduce(y))
    }

    fn evaluate_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.cover_evaluate_inverse(x)?;
        Ok(self.reduce(y))
    }

    fn jacobian(&self, x: &[f64]) -> Result<Matrix> {
        self.check(x)?;
        Ok(match &self.kind {
            Kind::Translation { shift } => Matrix::identity(shift.len()),
            Kind::Skew { psi, .. } => Matrix::shear2(psi.deriv(x[0], 1)),
            Kind::Linear { forward, .. } => forward.clone(),
            Kind::Twist { m, profile } => twist_jacobian(*m, profile, x, 1.0),
            Kind::Quotient { involution } => quotient_jacobian(*involution),
        })
    }

    fn jacobian_inverse(&self, x: &[f64]) -> Result<Matrix> {
        self.check(x)?;
        Ok(match &self.kind {
            Kind::Translation { shift } => Matrix::identity(shift.len()),
            Kind::Skew { rotation, psi } => Matrix::shear2(-psi.deriv(x[0] - rotation, 1)),
            Kind::Linear { backward, .. } => backward.clone(),
            Kind::Twist { m, profile } => twist_jacobian(*m, profile, x, -1.0),
            Kind::Quotient { involution } => quotient_jacobian(*involution),
        })
    }

    fn axes(&self) -> Vec<Axis> {
        match &self.kind {
            Kind::Translation { shift } => vec![Axis::Irrelevant; shift.len()],
            Kind::Skew { .. } => vec![Axis::Periodic, Axis::Irrelevant],
            Kind::Linear { matrix, .. } => vec![Axis::Irrelevant; matrix.dim()],
            Kind::Twist { m, profile } => {
                let e = profile.epsilon;
                (0..2 * m).map(|i| if i % 2 == 0 { Axis::Interval(-e, e) } else { Axis::Irrelevant }).collect()
            }
            Kind::Quotient { .. } => vec![Axis::Irrelevant; 4],
        }
    }

    fn norm_lipschitz(&self, n: u64) -> Option<f64> {
        let n = n as f64;
        Some(match &self.kind {
            Kind::Translation { .. } | Kind::Linear { .. } | Kind::Quotient { .. } => 0.0,
            // |d/dc sigma_max([[1,0],[c,1]])| <= 1 and |d S_n / dx| <= n max|psi''|.
            Kind::Skew { psi, .. } => n * psi.deriv_bound(2),
            // |sigma_max([[I,0],[nS,I]]) - sigma_max([[I,0],[nS',I]])| <= n |S - S'|.
            Kind::Twist { profile, .. } => n * profile.hessian_lipschitz_bound(),
        })
    }

    fn disc_radius(&self) -> Option<f64> {
        self.twist_profile().map(|p| p.epsilon)
    }
}

fn twist_jacobian(m: usize, profile: &RadialProfile, x: &[f64], sign: f64) -> Matrix {
    let hess = profile.hessian(&twist_momenta(x, m));
    let mut j = Matrix::identity(2 * m);
    for a in 0..m {
        for b in 0..m {
            // d q'_a / d p_b
            j[(2 * a + 1, 2 * b)] = sign * hess[a][b];
        }
    }
    j
}

fn quotient_jacobian(involution: bool) -> Matrix {
    if involution {
        Matrix::diag(&[1.0, 1.0, -1.0, -1.0])
    } else {
        Matrix::identity(4)
    }
}

/// `d_x f^n` as the ordered product `J(f^{n-1} x) ... J(x)`; negative `n`
/// multiplies Jacobians of the closed-form inverse along the backward orbit.
pub fn iterate_jacobian<D: Dynamics + ?Sized>(map: &D, x: &[f64], n: i64) -> Result<Matrix> {
    let mut acc = Matrix::identity(map.dim());
    let mut point = x.to_vec();
    for k in 0..n.unsigned_abs() {
        let j = if n > 0 { map.jacobian(&point)? } else { map.jacobian_inverse(&point)? };
        acc = &j * &acc;
        if !acc.is_finite() || acc.max_abs_entry() > ENTRY_GUARD {
            return Err(Error::Range {
                completed: n.signum() * k as i64,
                reason: format!("Jacobian entries exceeded {ENTRY_GUARD:e}"),
            });
        }
        point = if n > 0 { map.evaluate(&point)? } else { map.evaluate_inverse(&point)? };
    }
    Ok(acc)
}

/// `f^n x` for any integer `n`.
pub fn iterate<D: Dynamics + ?Sized>(map: &D, x: &[f64], n: i64) -> Result<Vec<f64>> {
    let mut point = x.to_vec();
    for _ in 0..n.unsigned_abs() {
        point = if n > 0 { map.evaluate(&point)? } else { map.evaluate_inverse(&point)? };
    }
    Ok(point)
}

/// The `k`-th power of a map treated as a map in its own right.
pub struct Iterated<'a, D: Dynamics + ?Sized> {
    pub base: &'a D,
    pub power: u32,
}

impl<D: Dynamics + ?Sized> Dynamics for Iterated<'_, D> {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        iterate(self.base, x, self.power as i64)
    }
    fn evaluate_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        iterate(self.base, x, -(self.power as i64))
    }
    fn jacobian(&self, x: &[f64]) -> Result<Matrix> {
        iterate_jacobian(self.base, x, self.power as i64)
    }
    fn jacobian_inverse(&self, x: &[f64]) -> Result<Matrix> {
        iterate_jacobian(self.base, x, -(self.power as i64))
    }
    fn axes(&self) -> Vec<Axis> {
        self.base.axes()
    }
    fn norm_lipschitz(&self, n: u64) -> Option<f64> {
        self.base.norm_lipschitz(n * self.power as u64)
    }
    fn disc_radius(&self) -> Option<f64> {
        self.base.disc_radius()
    }
}

/// `h f h^{-1}`. Grid axes are taken to be fully periodic / interval, since
/// conjugation can mix coordinates; no Lipschitz certificate is offered.
pub struct Conjugated<'a> {
    pub conjugator: &'a SymplecticMap,
    pub map: &'a SymplecticMap,
}

impl Dynamics for Conjugated<'_> {
    fn dim(&self) -> usize {
        self.map.dim()
    }
    fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.conjugator.evaluate_inverse(x)?;
        self.conjugator.evaluate(&self.map.evaluate(&y)?)
    }
    fn evaluate_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        let y = self.conjugator.evaluate_inverse(x)?;
        self.conjugator.evaluate(&self.map.evaluate_inverse(&y)?)
    }
    fn jacobian(&self, x: &[f64]) -> Result<Matrix> {
        let y = self.conjugator.evaluate_inverse(x)?;
        let fy = self.map.evaluate(&y)?;
        let a = self.conjugator.jacobian_inverse(x)?;
        let b = self.map.jacobian(&y)?;
        let c = self.conjugator.jacobian(&fy)?;
        Ok(&(&c * &b) * &a)
    }
    fn jacobian_inverse(&self, x: &[f64]) -> Result<Matrix> {
        let y = self.conjugator.evaluate_inverse(x)?;
        let fy = self.map.evaluate_inverse(&y)?;
        let a = self.conjugator.jacobian_inverse(x)?;
        let b = self.map.jacobian_inverse(&y)?;
        let c = self.conjugator.jacobian(&fy)?;
        Ok(&(&c * &b) * &a)
    }
    fn axes(&self) -> Vec<Axis> {
        self.map
            .axes()
            .into_iter()
            .enumerate()
            .map(|(i, a)| match a {
                Axis::Irrelevant if self.map.is_periodic(i) => Axis::Periodic,
                other => other,
            })
            .collect()
    }
    fn norm_lipschitz(&self, _n: u64) -> Option<f64> {
        None
    }
    fn disc_radius(&self) -> Option<f64> {
        self.map.disc_radius()
    }
}

/// Human-readable schema of every model, printed by `zoo list`.
pub fn schema() -> Vec<(&'static str, &'static str, String)> {
    let ex = |d: MapDescription| serde_json::to_string(&d).unwrap();
    vec![
        (
            "torus2",
            "maps of T^2 = R^2/Z^2 with form dx^dy; kind = translation | skew_product | linear",
            format!(
                "{}\n{}\n{}",
                ex(MapDescription::Torus2(Torus2Map::Translation { shift: [0.5, 0.0] })),
                ex(MapDescription::Torus2(Torus2Map::SkewProduct { rotation: 0.0, psi: Fourier::unit_sine() })),
                ex(MapDescription::Torus2(Torus2Map::Linear { matrix: [[2, 1], [1, 1]] })),
            ),
        ),
        (
            "torus2n",
            "maps of T^2n in (p1,q1,...,pn,qn) order; kind = translation | linear (integer symplectic matrix)",
            format!(
                "{}\n{}",
                ex(MapDescription::Torus2n(Torus2nMap::Translation { n: 2, shift: vec![0.5, 0.0, 0.25, 0.0] })),
                ex(MapDescription::Torus2n(Torus2nMap::Linear {
                    n: 2,
                    matrix: vec![vec![1, 0, 0, 0], vec![1, 1, 1, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 1]],
                })),
            ),
        ),
        (
            "twist_cylinder",
            "time-one map (p, q) -> (p, q + grad H(p)) on T^m x D^m(epsilon), H(p) = G(|p|^2), \
             G = profile(s) * cutoff(s); the cutoff is 1 for |p| <= 0.5 eps and 0 for |p| >= 0.9 eps",
            ex(MapDescription::TwistCylinder(TwistParams { m: 1, epsilon: 0.4, profile: vec![0.1, -0.625] })),
        ),
        (
            "quotient_t4",
            "T^4 / Z_2 example: flow q1 -> q1 + t/2 at t = 1, optionally composed with the involution \
             (p1, q1, p2, q2) -> (p1, q1 + 1/2, -p2, -q2)",
            ex(MapDescription::QuotientT4(QuotientParams { compose_involution: false })),
        ),
    ]
}

/// Maps used as defaults by the experiment runner and the test-suites.
pub fn standard_members() -> Vec<(&'static str, SymplecticMap)> {
    vec![
        ("translation", SymplecticMap::translation2([0.5, 0.25])),
        ("skew", SymplecticMap::standard_skew()),
        (
            "skew_golden",
            SymplecticMap::skew_product((5f64.sqrt() - 1.0) / 2.0, Fourier::unit_sine()),
        ),
        ("cat", SymplecticMap::linear2([[2, 1], [1, 1]]).unwrap()),
        ("shear", SymplecticMap::linear2([[1, 0], [1, 1]]).unwrap()),
        ("twist", SymplecticMap::peaked_twist(0.1, 0.4)),
        (
            "twist_m2",
            SymplecticMap::twist(2, 0.4, vec![0.1, -0.625]).unwrap(),
        ),
        (
            "torus4_shear",
            SymplecticMap::from_description(MapDescription::Torus2n(Torus2nMap::Linear {
                n: 2,
                matrix: vec![vec![1, 0, 0, 0], vec![1, 1, 1, 0], vec![0, 0, 1, 0], vec![1, 0, 1, 1]],
            }))
            .unwrap(),
        ),
        ("quotient", SymplecticMap::quotient(false)),
        ("quotient_involution", SymplecticMap::quotient(true)),
    ]
}
