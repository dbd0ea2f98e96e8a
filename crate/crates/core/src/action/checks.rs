//! Inequality chains assembled from actions, path lengths and filling bounds.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::exec::Exec;
use crate::filling::{default_candidates, torus_v_interval, u_upper, FillingEstimate, FillingModel};
use crate::poly::RadialProfile;

use super::flux::{path_functionals, CircleFunction, TorusPath};
use super::forms::{line_integral, PrimitiveForm, Polyline};
use super::spectrum::hamiltonian_action_spectrum;

#[derive(Clone, Debug, Serialize)]
pub struct GeometricInequality {
    pub width: f64,
    /// `L + Lambda` of the generating shear path, with error bars.
    pub path_bound: f64,
    pub diameter: f64,
    pub filling_upper: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// `width(f) <= 2 (b + b u(d + b))` for the time-one map of `H(p)` on `T^2`,
/// with `b` replaced by the upper bound `L + Lambda` of the shear path
/// `(x, y) -> (x, y + t H'(x))` and `u` by its certified upper bound.
pub fn geometric_inequality_check(profile: &RadialProfile, resolution: usize, exec: Exec) -> Result<GeometricInequality> {
    let width = hamiltonian_action_spectrum(profile, 1)?.width;
    let path = TorusPath::Shear(CircleFunction::BumpDerivative(profile.clone()));
    let b = path_functionals(&path, resolution, exec)?.combined_upper()?;
    let diameter = FRAC_1_SQRT_2;
    let model = FillingModel::Torus { n: 1 };
    let base = model.default_base();
    let filling_upper = u_upper(model, &base, diameter + b, &default_candidates(model, &base), resolution, exec)?;
    let rhs = 2.0 * (b + b * filling_upper);
    Ok(GeometricInequality { width, path_bound: b, diameter, filling_upper, rhs, slack: rhs - width, holds: width <= rhs })
}

/// Winding number of a closed polyline about `z` by signed crossings of the
/// ray to the right of `z`.
pub fn winding_number(c: &Polyline, z: [f64; 2]) -> i64 {
    let mut w = 0;
    for (a, b) in c.segments() {
        let cross = (b[0] - a[0]) * (z[1] - a[1]) - (z[0] - a[0]) * (b[1] - a[1]);
        if a[1] <= z[1] {
            if b[1] > z[1] && cross > 0.0 {
                w += 1;
            }
        } else if b[1] <= z[1] && cross < 0.0 {
            w -= 1;
        }
    }
    w
}

fn segment_point_distance(a: &[f64], b: &[f64], z: [f64; 2]) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 { 0.0 } else { (((z[0] - a[0]) * d[0] + (z[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0) };
    (a[0] + t * d[0] - z[0]).hypot(a[1] + t * d[1] - z[1])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct IsoperimetricRecord {
    pub area: f64,
    pub length: f64,
    pub ratio: f64,
    pub holds: bool,
}

/// Checks `|int_beta alpha| <= kappa length(beta)` for a loop in the plane
/// avoiding `Z^2` with zero winding about every lattice point.
pub fn isoperimetric_consistency(beta: &Polyline, kappa: f64) -> Result<IsoperimetricRecord> {
    if !beta.closed || beta.vertices.len() < 3 || beta.vertices.iter().any(|v| v.len() != 2) {
        return precondition("need a closed planar polyline");
    }
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &beta.vertices {
        for k in 0..2 {
            lo[k] = lo[k].min(v[k]);
            hi[k] = hi[k].max(v[k]);
        }
    }
    for i in lo[0].floor() as i64..=hi[0].ceil() as i64 {
        for j in lo[1].floor() as i64..=hi[1].ceil() as i64 {
            let z = [i as f64, j as f64];
            if beta.segments().any(|(a, b)| segment_point_distance(a, b, z) < 1e-12) {
                return precondition(format!("loop passes through the lattice point ({i}, {j})"));
            }
            let w = winding_number(beta, z);
            if w != 0 {
                return precondition(format!("loop winds {w} times about ({i}, {j})"));
            }
        }
    }
    let area = line_integral(&PrimitiveForm::p_dq(2), beta)?.value;
    let length = beta.length();
    let ratio = area.abs() / length;
    Ok(IsoperimetricRecord { area, length, ratio, holds: ratio <= kappa })
}

fn lobe(cx: f64, cy: f64, r: f64, from: f64, sign: f64, points: usize) -> Vec<Vec<f64>> {
    (0..points)
        .map(|k| {
            let t = from + sign * TAU * k as f64 / points as f64;
            vec![cx + r * t.cos(), cy + r * t.sin()]
        })
        .collect()
}

/// Deterministic corpus of loops with zero winding about every lattice point:
/// star polygons and figure-eights inside a cell, long strips between lattice
/// rows, and plus-shaped regions centred on cells.
pub fn loop_corpus(count: usize, seed: u64) -> Vec<Polyline> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let (ci, cj) = (rng.gen_range(-5..5) as f64 + 0.5, rng.gen_range(-5..5) as f64 + 0.5);
            match k % 4 {
                0 => {
                    let sides = rng.gen_range(3..24);
                    let vertices = (0..sides)
                        .map(|i| {
                            let t = TAU * i as f64 / sides as f64;
                            let r = rng.gen_range(0.05..0.48);
                            vec![ci + r * t.cos(), cj + r * t.sin()]
                        })
                        .collect();
                    Polyline::closed(vertices)
                }
                1 => {
                    let (y0, y1) = (cj - 0.5 + rng.gen_range(0.02..0.4), cj - 0.5 + rng.gen_range(0.6..0.98));
                    let (x0, x1) = (ci - rng.gen_range(0.1..3.0), ci + rng.gen_range(0.1..6.0));
                    Polyline::closed(vec![vec![x0, y0], vec![x1, y0], vec![x1, y1], vec![x0, y1]])
                }
                2 => {
                    let r = rng.gen_range(0.05..0.24);
                    let mut vertices = lobe(ci - r, cj, r, 0.0, 1.0, 16);
                    vertices.extend(lobe(ci + r, cj, r, std::f64::consts::PI, -1.0, 16));
                    Polyline::closed(vertices)
                }
                _ => {
                    let (a, l) = (rng.gen_range(0.05..0.45), rng.gen_range(0.5..4.0));
                    let corners = [
                        (a, a),
                        (l, a),
                        (l, -a),
                        (a, -a),
                        (a, -l),
                        (-a, -l),
                        (-a, -a),
                        (-l, -a),
                        (-l, a),
                        (-a, a),
                        (-a, l),
                        (a, l),
                    ];
                    Polyline::closed(corners.iter().map(|(x, y)| vec![ci + x, cj + y]).collect())
                }
            }
        })
        .collect()
}

/// Loops that wind about at least one lattice point.
pub fn winding_corpus(count: usize, seed: u64) -> Vec<Polyline> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (i, j) = (rng.gen_range(-5..5) as f64, rng.gen_range(-5..5) as f64);
            let r = rng.gen_range(0.1..2.3);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            // Offset the centre so that no vertex or edge meets a lattice point.
            Polyline::closed(lobe(i + 0.01, j + 0.02, r, 0.1, sign, 40))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub accepted: usize,
    pub rejected: usize,
    pub max_ratio: f64,
    pub all_hold: bool,
}

/// Runs [`isoperimetric_consistency`] over a corpus; the maximum ratio is an
/// empirical lower estimate of the isoperimetric constant of the lattice.
pub fn corpus_report(loops: &[Polyline], kappa: f64, exec: Exec) -> CorpusReport {
    let records = exec.map_slice(loops, |l| isoperimetric_consistency(l, kappa));
    let mut report = CorpusReport { accepted: 0, rejected: 0, max_ratio: 0.0, all_hold: true };
    for r in records {
        match r {
            Ok(rec) => {
                report.accepted += 1;
                report.max_ratio = report.max_ratio.max(rec.ratio);
                report.all_hold &= rec.holds;
            }
            Err(_) => report.rejected += 1,
        }
    }
    report
}

/// Source of lower bounds for the filling function `v`.
#[derive(Clone, Copy, Debug)]
pub enum FillingLower<'a> {
    Estimate(&'a FillingEstimate),
    /// `v(t) >= sqrt(t)` on the flat torus.
    TorusClosedForm,
}

impl FillingLower<'_> {
    pub fn v_lo(&self, t: f64) -> Result<f64> {
        match self {
            FillingLower::Estimate(e) => Ok(e.v_from_u(t)?.0),
            FillingLower::TorusClosedForm => Ok(torus_v_interval(t).0),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Certificate {
    pub n: u32,
    pub action: f64,
    pub curve_length: f64,
    pub t: f64,
    pub v_lo: f64,
    pub bound: f64,
}

/// Lower bound `(1/b) v_lo(n c / 2)` for `Gamma_n`, where `c = |delta|` for a
/// pair of fixed points joined by a curve of length `b`.
pub fn lower_bound_certificate(action: f64, n: u32, filling: FillingLower<'_>, curve_length: f64) -> Result<Certificate> {
    if n == 0 {
        return precondition("certificate needs n >= 1");
    }
    let c = action.abs();
    if !(c > 0.0) {
        return precondition("certificate needs a nonzero action difference");
    }
    if !(curve_length > 0.0) {
        return Err(Error::Precondition("connecting curve must have positive length".into()));
    }
    let t = 0.5 * n as f64 * c;
    let v_lo = filling.v_lo(t)?;
    Ok(Certificate { n, action: c, curve_length, t, v_lo, bound: v_lo / curve_length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    use crate::zoo::SymplecticMap;

    #[test]
    fn inequality_on_peaked_twist() {
        let map = SymplecticMap::peaked_twist(0.1, 0.4);
        let r = geometric_inequality_check(map.twist_profile().unwrap(), 40, Exec::Parallel).unwrap();
        assert!(r.holds && r.slack > 0.0);
        assert!((r.width - 0.1).abs() < 1e-12);
        let zero = SymplecticMap::peaked_twist(0.0, 0.4);
        let r = geometric_inequality_check(zero.twist_profile().unwrap(), 40, Exec::Parallel).unwrap();
        assert!(r.holds && r.width == 0.0);
    }

    #[test]
    fn winding_numbers() {
        let sq = Polyline::closed(vec![vec![-0.5, -0.5], vec![0.5, -0.5], vec![0.5, 0.5], vec![-0.5, 0.5]]);
        assert_eq!(winding_number(&sq, [0.0, 0.0]), 1);
        assert_eq!(winding_number(&sq.reversed(), [0.0, 0.0]), -1);
        assert_eq!(winding_number(&sq, [1.0, 0.0]), 0);
    }

    #[test]
    fn rotated_unit_square() {
        let h = 0.5 * 2f64.sqrt();
        let sq = Polyline::closed(vec![vec![0.5 + h, 0.5], vec![0.5, 0.5 + h], vec![0.5 - h, 0.5], vec![0.5, 0.5 - h]]);
        let r = isoperimetric_consistency(&sq, 10.0).unwrap();
        assert!((r.ratio - 0.25).abs() < 1e-12 && r.holds);
    }

    #[test]
    fn figure_eight_cancels() {
        let r0 = 0.2;
        let mut v = lobe(0.5 - r0, 0.5, r0, 0.0, 1.0, 64);
        v.extend(lobe(0.5 + 0.1, 0.5, 0.1, PI, -1.0, 64));
        let rec = isoperimetric_consistency(&Polyline::closed(v), 10.0).unwrap();
        let area = |r: f64| 0.5 * 64.0 * r * r * (TAU / 64.0).sin();
        assert!((rec.area - (area(r0) - area(0.1))).abs() < 1e-12);
    }

    #[test]
    fn corpora() {
        let good = corpus_report(&loop_corpus(200, 7), 10.0, Exec::Parallel);
        assert_eq!((good.accepted, good.rejected), (200, 0));
        assert!(good.all_hold && good.max_ratio.is_finite() && good.max_ratio > 0.0);
        let bad = corpus_report(&winding_corpus(50, 7), 10.0, Exec::Parallel);
        assert_eq!(bad.accepted, 0);
    }

    #[test]
    fn certificate_values() {
        let c = 1.0 / (2.0 * PI * PI);
        let cert = lower_bound_certificate(c, 100, FillingLower::TorusClosedForm, 0.5).unwrap();
        assert!((cert.bound - 2.0 * (50.0 * c).sqrt()).abs() < 1e-12);
        assert!(lower_bound_certificate(c, 0, FillingLower::TorusClosedForm, 0.5).is_err());
        assert!(lower_bound_certificate(0.0, 3, FillingLower::TorusClosedForm, 0.5).is_err());
    }
}
