//! Lifts of zoo maps to the universal cover.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Matrix};

use super::{iterate_jacobian, Dynamics, SymplecticMap};

/// `x -> linear x + shift` on the cover.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Affine {
    pub linear: IntMatrix,
    pub shift: Vec<f64>,
}

impl Affine {
    pub fn translation(v: Vec<f64>) -> Self {
        Affine { linear: IntMatrix::identity(v.len()), shift: v }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.linear.apply(x).into_iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }
}

/// A deck transformation together with its image under the automorphism of
/// the deck group induced by the lift: `lift(g x) = image(lift(x))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeckElement {
    pub transform: Affine,
    pub image: Affine,
}

/// A lift `F` of a zoo map to the universal cover.
///
/// `F(x) = cover formula of the base map + offset`, where `offset` is an
/// integer vector choosing the lift. The deck group is generated by `deck`.
#[derive(Clone, Debug)]
pub struct LiftedMap {
    pub label: String,
    pub base: SymplecticMap,
    pub offset: Vec<f64>,
    /// Linear part of the induced action on lattice translations.
    pub linear_part: IntMatrix,
    pub deck: Vec<DeckElement>,
    pub fixed_points: Vec<Vec<f64>>,
    pub fundamental_domain: Vec<(f64, f64)>,
}

impl LiftedMap {
    /// The lift singled out by killing drift, with designated fixed points.
    ///
    /// * translation: `x + (e - round e)`; fixed points only when `e` is integral.
    /// * skew product: fixed points at simple zeros of `psi` when the rotation is integral.
    /// * linear: `x -> A x`, fixed at the origin.
    /// * twist: fixed at the centre of the disc and on the outer plateau.
    /// * quotient: `q1 -> q1 + 1/2` (no fixed points), or with the involution
    ///   composed in, `(p1, q1, -p2, -q2)`, fixed along `p2 = q2 = 0`.
    pub fn canonical(base: &SymplecticMap) -> Result<Self> {
        let dim = base.dim();
        let unit = |k: usize| {
            let mut v = vec![0.0; dim];
            v[k] = 1.0;
            v
        };
        let lattice = |linear: &IntMatrix, coords: &[usize]| -> Vec<DeckElement> {
            coords
                .iter()
                .map(|&k| DeckElement {
                    transform: Affine::translation(unit(k)),
                    image: Affine::translation(linear.apply(&unit(k))),
                })
                .collect()
        };
        let unit_box = vec![(0.0, 1.0); dim];
        let all: Vec<usize> = (0..dim).collect();
        let mut offset = vec![0.0; dim];

        if let Some(shift) = base.translation_shift() {
            for (o, s) in offset.iter_mut().zip(shift) {
                *o = -s.round();
            }
            let integral = shift.iter().all(|s| *s == s.round());
            let fixed = if integral { vec![vec![0.0; dim], vec![0.5; dim]] } else { vec![] };
            let id = IntMatrix::identity(dim);
            return Ok(LiftedMap {
                label: "translation".into(),
                base: base.clone(),
                offset,
                deck: lattice(&id, &all),
                linear_part: id,
                fixed_points: fixed,
                fundamental_domain: unit_box,
            });
        }
        if let Some((rotation, psi)) = base.skew_data() {
            offset[0] = -rotation.round();
            let fixed = if rotation == rotation.round() {
                if psi.is_zero() {
                    vec![vec![0.0, 0.0], vec![0.5, 0.0]]
                } else {
                    simple_zeros(|x| psi.eval(x)).into_iter().map(|x| vec![x, 0.0]).collect()
                }
            } else {
                vec![]
            };
            let id = IntMatrix::identity(2);
            return Ok(LiftedMap {
                label: "skew_product".into(),
                base: base.clone(),
                offset,
                deck: lattice(&id, &all),
                linear_part: id,
                fixed_points: fixed,
                fundamental_domain: unit_box,
            });
        }
        if let Some(a) = base.integer_matrix() {
            return Ok(LiftedMap {
                label: "linear".into(),
                base: base.clone(),
                offset,
                deck: lattice(a, &all),
                linear_part: a.clone(),
                fixed_points: vec![vec![0.0; dim]],
                fundamental_domain: unit_box,
            });
        }
        if let Some(profile) = base.twist_profile() {
            let m = dim / 2;
            let e = profile.epsilon;
            let mut plateau = vec![0.0; dim];
            plateau[0] = 0.95 * e;
            let id = IntMatrix::identity(dim);
            let q_axes: Vec<usize> = (0..m).map(|j| 2 * j + 1).collect();
            let domain = (0..dim).map(|i| if i % 2 == 0 { (-e, e) } else { (0.0, 1.0) }).collect();
            return Ok(LiftedMap {
                label: "twist".into(),
                base: base.clone(),
                offset,
                deck: lattice(&id, &q_axes),
                linear_part: id,
                fixed_points: vec![vec![0.0; dim], plateau],
                fundamental_domain: domain,
            });
        }
        if let Some(involution) = base.is_quotient() {
            let linear = if involution { IntMatrix::diag(&[1, 1, -1, -1]) } else { IntMatrix::identity(4) };
            let mut deck = lattice(&linear, &all);
            let gamma = Affine { linear: IntMatrix::diag(&[1, 1, -1, -1]), shift: vec![0.0, 0.5, 0.0, 0.0] };
            deck.push(DeckElement { transform: gamma.clone(), image: gamma });
            let fixed = if involution {
                offset[1] = -1.0;
                vec![vec![0.0; 4], vec![0.3, 0.6, 0.0, 0.0]]
            } else {
                vec![]
            };
            return Ok(LiftedMap {
                label: if involution { "quotient_point_fixing" } else { "quotient_flow" }.into(),
                base: base.clone(),
                offset,
                deck,
                linear_part: linear,
                fixed_points: fixed,
                fundamental_domain: vec![(0.0, 1.0), (0.0, 0.5), (0.0, 1.0), (0.0, 1.0)],
            });
        }
        Err(Error::Precondition("no canonical lift for this map".into()))
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if let Some(shift) = self.base.translation_shift() {
            // Fold the offset into the shift first so integral shifts give the identity exactly.
            return Ok(x.iter().zip(shift).zip(&self.offset).map(|((a, e), o)| a + (e + o)).collect());
        }
        let y = self.base.cover_evaluate(x)?;
        Ok(y.into_iter().zip(&self.offset).map(|(a, b)| a + b).collect())
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Result<Vec<f64>> {
        if let Some(shift) = self.base.translation_shift() {
            return Ok(x.iter().zip(shift).zip(&self.offset).map(|((a, e), o)| a - (e + o)).collect());
        }
        let shifted: Vec<f64> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.base.cover_evaluate_inverse(&shifted)
    }

    /// `F^n x` on the cover, `n` of either sign.
    pub fn iterate(&self, x: &[f64], n: i64) -> Result<Vec<f64>> {
        let mut y = x.to_vec();
        for _ in 0..n.unsigned_abs() {
            y = if n > 0 { self.apply(&y)? } else { self.apply_inverse(&y)? };
        }
        Ok(y)
    }

    /// Jacobians on the cover agree with those downstairs.
    pub fn iterate_jacobian(&self, x: &[f64], n: i64) -> Result<Matrix> {
        iterate_jacobian(&self.base, x, n)
    }

    pub fn is_fixed(&self, x: &[f64], tol: f64) -> Result<bool> {
        let y = self.apply(x)?;
        Ok(y.iter().zip(x).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// Largest `|F x - x|` over the designated fixed points.
    pub fn fixed_point_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in &self.fixed_points {
            let y = self.apply(x)?;
            for (a, b) in y.iter().zip(x) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok(worst)
    }

    /// Largest `|F(g x) - g'(F x)|` over deck generators and samples.
    pub fn equivariance_defect(&self, samples: &[Vec<f64>]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for x in samples {
            let fx = self.apply(x)?;
            for g in &self.deck {
                let lhs = self.apply(&g.transform.apply(x))?;
                let rhs = g.image.apply(&fx);
                for (a, b) in lhs.iter().zip(&rhs) {
                    worst = worst.max((a - b).abs());
                }
            }
        }
        Ok(worst)
    }

    /// Diameter of the fundamental domain in the flat metric.
    pub fn domain_diameter(&self) -> f64 {
        self.fundamental_domain.iter().map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
    }

    /// Whether a point of the fundamental domain box lies in the map's domain.
    pub fn in_domain(&self, x: &[f64]) -> bool {
        match self.base.twist_profile() {
            Some(profile) => {
                let r2: f64 = x.iter().step_by(2).map(|p| p * p).sum();
                r2.sqrt() <= profile.epsilon
            }
            None => true,
        }
    }
}

/// Simple zeros of a one-periodic function on `[0, 1)`, located by a sign
/// scan on 4096 cells and bisection.
fn simple_zeros(f: impl Fn(f64) -> f64) -> Vec<f64> {
    const CELLS: usize = 4096;
    let mut zeros = Vec::new();
    for i in 0..CELLS {
        let (mut a, mut b) = (i as f64 / CELLS as f64, (i + 1) as f64 / CELLS as f64);
        let (mut fa, fb) = (f(a), f(b));
        if fa == 0.0 {
            zeros.push(a);
            continue;
        }
        if fa * fb >= 0.0 {
            continue;
        }
        for _ in 0..80 {
            let m = 0.5 * (a + b);
            let fm = f(m);
            if fm == 0.0 {
                a = m;
                b = m;
                break;
            }
            if fa * fm < 0.0 {
                b = m;
            } else {
                a = m;
                fa = fm;
            }
        }
        zeros.push(0.5 * (a + b));
    }
    zeros
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::standard_members;

    /// Realises `gamma . f` on `T^4`, acting on `H_1` by `diag(1, 1, -1, -1)`.
    fn quotient_point_fixing_lift() -> LiftedMap {
        LiftedMap::canonical(&SymplecticMap::quotient(true)).expect("quotient lift exists")
    }

    #[test]
    fn canonical_lifts_fix_their_points() {
        for (name, m) in standard_members() {
            let lift = LiftedMap::canonical(&m).unwrap();
            assert!(lift.fixed_point_defect().unwrap() <= 1e-12, "{name}");
        }
        let skew = LiftedMap::canonical(&SymplecticMap::standard_skew()).unwrap();
        assert_eq!(skew.fixed_points.len(), 2);
        assert!((skew.fixed_points[1][0] - 0.5).abs() < 1e-15);
        let q = quotient_point_fixing_lift();
        assert_eq!(q.linear_part, IntMatrix::diag(&[1, 1, -1, -1]));
        assert!(q.is_fixed(&[0.3, 0.6, 0.0, 0.0], 1e-12).unwrap());
    }

    #[test]
    fn translation_lift_is_identity_when_integral() {
        let t = SymplecticMap::translation2([1.0, -2.0]);
        let lift = LiftedMap::canonical(&t).unwrap();
        assert_eq!(lift.apply(&[0.3, 0.4]).unwrap(), vec![0.3, 0.4]);
        assert_eq!(lift.fixed_points.len(), 2);
    }

    #[test]
    fn deck_equivariance_on_grid() {
        for (name, m) in standard_members() {
            let lift = LiftedMap::canonical(&m).unwrap();
            let samples: Vec<Vec<f64>> = (0..50)
                .map(|i| {
                    (0..m.dim())
                        .map(|k| if lift.base.is_periodic(k) { 0.37 * (i * (k + 3)) as f64 % 1.0 } else { 0.0 })
                        .collect()
                })
                .collect();
            assert!(lift.equivariance_defect(&samples).unwrap() <= 1e-12, "{name}");
        }
    }
}
