//! The `T^4 / Z_2` example: a map of finite order all of whose fixed points
//! fail to be of contractible type.
//!
//! Everything is computed upstairs on `T^4`, with `z ~ gamma(z)` as the
//! equivalence predicate of the quotient.

use serde::Serialize;

use crate::linalg::IntMatrix;

use super::{circle_distance, wrap};

const TOL: f64 = 1e-12;

/// Report tags for checks built on this module.
pub const TAGS: &[&str] = &["zoo.quotient-example"];

/// The involution on `R^4`, `(p1, q1, p2, q2) -> (p1, q1 + 1/2, -p2, -q2)`.
pub fn involution_cover(x: &[f64]) -> [f64; 4] {
    [x[0], x[1] + 0.5, -x[2], -x[3]]
}

pub fn involution_inverse_cover(x: &[f64]) -> [f64; 4] {
    [x[0], x[1] - 0.5, -x[2], -x[3]]
}

fn reduce(x: [f64; 4]) -> [f64; 4] {
    x.map(wrap)
}

/// The involution on `T^4`.
pub fn involution(x: &[f64]) -> [f64; 4] {
    reduce(involution_cover(x))
}

/// The flow `q1 -> q1 + t/2` on `T^4`.
pub fn half_flow(t: f64, x: &[f64]) -> [f64; 4] {
    reduce([x[0], x[1] + 0.5 * t, x[2], x[3]])
}

/// Equality mod `Z^4`.
pub fn same_on_torus(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| circle_distance(*x, *y) <= TOL)
}

/// Equality on the quotient `T^4 / Z_2`.
pub fn same_on_quotient(a: &[f64], b: &[f64]) -> bool {
    same_on_torus(a, b) || same_on_torus(a, &involution(b))
}

/// Whether `z` is fixed by the time-one map on the quotient.
pub fn is_fixed_on_quotient(z: &[f64]) -> bool {
    same_on_quotient(&half_flow(1.0, z), z)
}

/// One of the four 2-tori `{(p, q, m1/2, m2/2)}` of fixed points.
#[derive(Clone, Debug, Serialize)]
pub struct FixedComponent {
    pub m1: u8,
    pub m2: u8,
    pub samples: Vec<[f64; 4]>,
    /// Every sample satisfies `f z = gamma z` mod `Z^4`.
    pub verified: bool,
}

/// The fixed set sampled on a `per_axis x per_axis` grid in each component.
pub fn fixed_point_set(per_axis: usize) -> Vec<FixedComponent> {
    let mut out = Vec::with_capacity(4);
    for m1 in 0..2u8 {
        for m2 in 0..2u8 {
            let mut samples = Vec::with_capacity(per_axis * per_axis);
            for i in 0..per_axis {
                for j in 0..per_axis {
                    let p = i as f64 / per_axis as f64;
                    let q = j as f64 / per_axis as f64;
                    samples.push([p, q, 0.5 * m1 as f64, 0.5 * m2 as f64]);
                }
            }
            let verified = samples
                .iter()
                .all(|z| same_on_torus(&half_flow(1.0, z), &involution(z)) && is_fixed_on_quotient(z));
            out.push(FixedComponent { m1, m2, samples, verified });
        }
    }
    out
}

/// One lift of the quotient map to `T^4`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftRecord {
    pub name: &'static str,
    /// A point of the fixed set that this lift fixes on `T^4`, if any.
    pub fixed_witness: Option<[f64; 4]>,
    /// Action on `H_1(T^4) = Z^4`.
    pub homology_action: IntMatrix,
    pub acts_trivially: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub lifts: Vec<LiftRecord>,
    /// True when every lift that fixes a point acts non-trivially on `H_1`,
    /// so no fixed point can be of contractible type.
    pub no_contractible_witness: bool,
}

fn homology_action(lift: impl Fn(&[f64]) -> [f64; 4]) -> IntMatrix {
    let base = [0.1, 0.2, 0.3, 0.4];
    let image = lift(&base);
    let mut m = vec![vec![0i64; 4]; 4];
    for k in 0..4 {
        let mut shifted = base;
        shifted[k] += 1.0;
        let moved = lift(&shifted);
        for i in 0..4 {
            m[i][k] = (moved[i] - image[i]).round() as i64;
        }
    }
    IntMatrix(m)
}

/// Enumerates the two lifts `f` and `gamma . f` of the quotient map to `T^4`
/// and reports their fixed points and homology actions.
pub fn contractible_obstruction() -> ObstructionReport {
    let plain = |x: &[f64]| [x[0], x[1] + 0.5, x[2], x[3]];
    let twisted = |x: &[f64]| involution_cover(&plain(x));
    let candidates = fixed_point_set(8);
    let witness = |lift: &dyn Fn(&[f64]) -> [f64; 4]| {
        candidates
            .iter()
            .flat_map(|c| c.samples.iter())
            .find(|z| same_on_torus(&lift(z.as_slice()), z.as_slice()))
            .copied()
    };
    let mut lifts = Vec::new();
    for (name, lift) in [("flow", &plain as &dyn Fn(&[f64]) -> [f64; 4]), ("involution_after_flow", &twisted)] {
        let homology = homology_action(lift);
        let acts_trivially = homology.is_identity();
        lifts.push(LiftRecord { name, fixed_witness: witness(lift), homology_action: homology, acts_trivially });
    }
    let no_contractible_witness = lifts.iter().filter(|l| l.fixed_witness.is_some()).all(|l| !l.acts_trivially);
    ObstructionReport { lifts, no_contractible_witness }
}
