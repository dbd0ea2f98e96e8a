//! Action spectrum and width of autonomous bump Hamiltonians.
//!
//! For `H(p) = G(|p|^2)` on `T^m x D^m(eps)` the fixed points of contractible
//! type of the time-one map are the constant orbits, i.e. the critical points
//! of `H`. Fixed points with `grad H(p)` a nonzero integer vector wind around
//! the `q`-torus and are not of contractible type, so they are excluded. The
//! action of a constant orbit at `p` is `-H(p)` plus the mean of `H`, the mean
//! taken with respect to the volume of `omega^m`.

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::linalg::Matrix;
use crate::poly::{RadialProfile, CUTOFF_INNER, CUTOFF_OUTER};
use crate::quad::simpson;
use crate::zoo::{Dynamics, SymplecticMap};

const SCAN_CELLS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CriticalShape {
    Point,
    /// `|p| = radius`.
    Sphere { radius: f64 },
    /// `inner <= |p| <= outer`, where `H` is constant.
    Shell { inner: f64, outer: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalSet {
    pub shape: CriticalShape,
    /// A representative point `p` of the set.
    pub representative: Vec<f64>,
    pub hamiltonian: f64,
    pub action: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumRecord {
    pub critical_sets: Vec<CriticalSet>,
    pub mean: f64,
    pub width: f64,
}

impl SpectrumRecord {
    pub fn actions(&self) -> Vec<f64> {
        self.critical_sets.iter().map(|c| c.action).collect()
    }

    fn from_sets(mut critical_sets: Vec<CriticalSet>, mean: f64) -> Self {
        for c in &mut critical_sets {
            c.action = -c.hamiltonian + mean;
        }
        let (lo, hi) = critical_sets
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(c.action), hi.max(c.action)));
        SpectrumRecord { critical_sets, mean, width: hi - lo }
    }
}

/// Mean of `H` over `D^m(eps)`: `m int_0^eps G(r^2) r^{m-1} dr / eps^m`.
pub fn disc_mean(profile: &RadialProfile, m: usize) -> f64 {
    let e = profile.epsilon;
    let f = |r: f64| profile.g(r * r, 0) * r.powi(m as i32 - 1);
    let knots = [0.0, CUTOFF_INNER * e, CUTOFF_OUTER * e];
    let integral: f64 = knots.windows(2).map(|w| simpson(f, w[0], w[1], 1e-14).value).sum();
    m as f64 * integral / e.powi(m as i32)
}

fn on_ray(m: usize, r: f64) -> Vec<f64> {
    let mut p = vec![0.0; m];
    p[0] = r;
    p
}

/// Spectrum of the time-one map of `H(p) = G(|p|^2)` on `T^m x D^m`.
pub fn hamiltonian_action_spectrum(profile: &RadialProfile, m: usize) -> Result<SpectrumRecord> {
    if m == 0 {
        return precondition("need m >= 1");
    }
    let e = profile.epsilon;
    let (r_in, r_out) = (CUTOFF_INNER * e, CUTOFF_OUTER * e);
    let mut sets = Vec::new();
    let set = |shape, r: f64| CriticalSet {
        shape,
        representative: on_ray(m, r),
        hamiltonian: profile.g(r * r, 0),
        action: 0.0,
    };
    let inner_flat = profile.profile.derivative().0.iter().all(|c| *c == 0.0);
    let scan_from = if inner_flat {
        sets.push(set(CriticalShape::Shell { inner: 0.0, outer: r_in }, 0.0));
        r_in * r_in
    } else {
        sets.push(set(CriticalShape::Point, 0.0));
        0.0
    };
    // Spheres where G'(s) changes sign strictly inside the support.
    let s_end = r_out * r_out * (1.0 - 1e-9);
    let g1 = |s: f64| profile.g(s, 1);
    let h = (s_end - scan_from) / SCAN_CELLS as f64;
    // Sign flips of G' at round-off level near the flat edge are not spheres.
    let noise = 1e-9 * profile.g_bound(1);
    for i in 0..SCAN_CELLS {
        let (mut a, mut b) = (scan_from + i as f64 * h, scan_from + (i + 1) as f64 * h);
        let (mut fa, fb) = (g1(a), g1(b));
        if i == 0 && scan_from == 0.0 {
            // s = 0 is the centre, already recorded.
            a += 1e-3 * h;
            fa = g1(a);
        }
        if fa == 0.0 || fa * fb >= 0.0 || fa.abs().max(fb.abs()) <= noise {
            continue;
        }
        for _ in 0..100 {
            let mid = 0.5 * (a + b);
            let fm = g1(mid);
            if fm == 0.0 || b - a <= f64::EPSILON * b {
                a = mid;
                b = mid;
                break;
            }
            if fa * fm < 0.0 {
                b = mid;
            } else {
                a = mid;
                fa = fm;
            }
        }
        let r = (0.5 * (a + b)).sqrt();
        sets.push(set(CriticalShape::Sphere { radius: r }, r));
    }
    sets.push(set(CriticalShape::Shell { inner: r_out, outer: e }, r_out));
    Ok(SpectrumRecord::from_sets(sets, disc_mean(profile, m)))
}

/// Spectrum of a zoo twist map.
pub fn twist_spectrum(map: &SymplecticMap) -> Result<SpectrumRecord> {
    match map.twist_profile() {
        Some(profile) => hamiltonian_action_spectrum(profile, map.dim() / 2),
        None => precondition("spectrum is only available for twist maps"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WidthConjugation {
    pub width: f64,
    pub conjugated_width: f64,
    pub difference: f64,
}

/// `x -> linear x + shift` on the cover `R^m x R^m`, interleaved coordinates.
struct Conjugator {
    linear: Matrix,
    inverse: Matrix,
    shift: Vec<f64>,
}

impl Conjugator {
    fn from_zoo(h: &SymplecticMap, dim: usize) -> Result<Self> {
        if h.dim() != dim {
            return precondition("conjugator acts on a space of the wrong dimension");
        }
        if let Some(shift) = h.translation_shift() {
            return Ok(Conjugator { linear: Matrix::identity(dim), inverse: Matrix::identity(dim), shift: shift.to_vec() });
        }
        if let Some(a) = h.integer_matrix() {
            // Only q -> q + S p with S symmetric keeps the twist structure.
            for i in 0..dim {
                for j in 0..dim {
                    let v = a.0[i][j];
                    let allowed = if i == j {
                        v == 1
                    } else if i % 2 == 1 && j % 2 == 0 {
                        v == a.0[j + 1][i - 1]
                    } else {
                        v == 0
                    };
                    if !allowed {
                        return precondition("conjugator must be a translation or a p-preserving symmetric shear");
                    }
                }
            }
            let inverse = a.inverse_unimodular().expect("unipotent matrices are invertible").to_matrix();
            return Ok(Conjugator { linear: a.to_matrix(), inverse, shift: vec![0.0; dim] });
        }
        precondition("conjugator must be a translation or a p-preserving symmetric shear")
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.linear.apply(x).into_iter().zip(&self.shift).map(|(a, b)| a + b).collect()
    }

    fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, b)| a - b).collect();
        self.inverse.apply(&y)
    }
}

/// Recomputes the spectrum of `h f h^{-1}` from the conjugated Hamiltonian
/// `K = H o h^{-1}` at the images of the critical sets, checking that each
/// image is a critical point of `K` fixed by the conjugated map.
pub fn width_conjugation_check(map: &SymplecticMap, conjugator: &SymplecticMap) -> Result<WidthConjugation> {
    let spectrum = twist_spectrum(map)?;
    let profile = map.twist_profile().expect("checked by twist_spectrum");
    let dim = map.dim();
    let m = dim / 2;
    let h = Conjugator::from_zoo(conjugator, dim)?;
    let momenta = |x: &[f64]| -> Vec<f64> { (0..m).map(|j| x[2 * j]).collect() };
    let k_value = |w: &[f64]| profile.value(&momenta(&h.apply_inverse(w)));
    let k_gradient = |w: &[f64]| -> Vec<f64> {
        let z = h.apply_inverse(w);
        let mut grad = vec![0.0; dim];
        for (j, g) in profile.gradient(&momenta(&z)).into_iter().enumerate() {
            grad[2 * j] = g;
        }
        h.inverse.transpose().apply(&grad)
    };
    let mut sets = Vec::with_capacity(spectrum.critical_sets.len());
    for c in &spectrum.critical_sets {
        let mut z = vec![0.0; dim];
        for (j, p) in c.representative.iter().enumerate() {
            z[2 * j] = *p;
        }
        let w = h.apply(&z);
        let grad = k_gradient(&w);
        if grad.iter().any(|g| g.abs() > 1e-9) {
            return Err(Error::Precondition(format!("image of a critical set is not critical: {grad:?}")));
        }
        let moved = h.apply(&map.cover_evaluate(&h.apply_inverse(&w))?);
        if moved.iter().zip(&w).any(|(a, b)| (a - b).abs() > 1e-9) {
            return precondition("image of a critical set is not fixed by the conjugated map");
        }
        sets.push(CriticalSet { shape: c.shape.clone(), representative: w.clone(), hamiltonian: k_value(&w), action: 0.0 });
    }
    let conjugated = SpectrumRecord::from_sets(sets, spectrum.mean);
    Ok(WidthConjugation {
        width: spectrum.width,
        conjugated_width: conjugated.width,
        difference: (conjugated.width - spectrum.width).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn peaked_profile_width() {
        let map = SymplecticMap::peaked_twist(0.1, 0.4);
        let s = twist_spectrum(&map).unwrap();
        assert!((s.width - 0.1).abs() < 1e-12);
        assert_eq!(s.critical_sets.len(), 2);
    }

    #[test]
    fn time_n_scaling() {
        let map = SymplecticMap::peaked_twist(0.1, 0.4);
        let profile = map.twist_profile().unwrap();
        for n in [1.0, 2.0, 7.0, 32.0] {
            let s = hamiltonian_action_spectrum(&profile.scaled(n), 1).unwrap();
            assert!((s.width - n * 0.1).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_hamiltonian() {
        let profile = RadialProfile::new(0.4, Poly(vec![0.0])).unwrap();
        let s = hamiltonian_action_spectrum(&profile, 1).unwrap();
        assert_eq!(s.width, 0.0);
        assert!(s.actions().iter().all(|a| *a == 0.0));
    }

    #[test]
    fn interior_sphere_found() {
        // G(s) = s - 10 s^2 has G'(s) = 0 at s = 0.05, inside the plateau radius 0.5 * 0.8.
        let profile = RadialProfile::new(0.8, Poly(vec![0.0, 1.0, -10.0])).unwrap();
        let s = hamiltonian_action_spectrum(&profile, 2).unwrap();
        let sphere = s.critical_sets.iter().find(|c| matches!(c.shape, CriticalShape::Sphere { .. })).unwrap();
        assert!((sphere.representative[0] - 0.05f64.sqrt()).abs() < 1e-12);
        assert!((sphere.hamiltonian - 0.025).abs() < 1e-12);
    }

    #[test]
    fn conjugation_examples() {
        let map = SymplecticMap::peaked_twist(0.1, 0.4);
        for h in [
            SymplecticMap::translation2([0.0, 0.37]),
            SymplecticMap::translation2([0.2, 0.1]),
            SymplecticMap::translation2([0.0, 0.0]),
            SymplecticMap::linear2([[1, 0], [3, 1]]).unwrap(),
        ] {
            let r = width_conjugation_check(&map, &h).unwrap();
            assert!(r.difference < 1e-9);
        }
        let cat = SymplecticMap::linear2([[2, 1], [1, 1]]).unwrap();
        assert!(matches!(width_conjugation_check(&map, &cat), Err(Error::Precondition(_))));
    }
}
