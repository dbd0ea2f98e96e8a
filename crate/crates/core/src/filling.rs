//! Certified two-sided bounds for the filling functions `u(s)`, `w(s) = s u(s)`
//! and the inverse `v` of `w`, on the flat plane `R^{2n}` (cover of `T^{2n}`)
//! and on the hyperbolic upper half-plane.
//!
//! Upper bounds come from grid suprema of `|alpha|` for explicit primitives,
//! widened by a Lipschitz term. Lower bounds come from test cycles: for any
//! primitive, `|area| = |int alpha| <= length * sup |alpha|`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::action::forms::{dist, line_integral, PrimitiveForm, Polyline};
use crate::error::{precondition, Error, Result};
use crate::exec::Exec;

/// Report tags for checks built on this module.
pub const TAGS: &[&str] = &["filling.torus-linear", "filling.hyperbolic-bounded"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FillingModel {
    /// `R^{2n}` with the flat metric and `omega = sum dp_j ^ dq_j`.
    Torus { n: usize },
    /// Upper half-plane `q > 0` with `ds^2 = (dp^2 + dq^2) / q^2`.
    Hyperbolic,
}

impl FillingModel {
    pub fn dim(self) -> usize {
        match self {
            FillingModel::Torus { n } => 2 * n,
            FillingModel::Hyperbolic => 2,
        }
    }

    pub fn default_base(self) -> Vec<f64> {
        match self {
            FillingModel::Torus { n } => vec![0.0; 2 * n],
            FillingModel::Hyperbolic => vec![0.0, 1.0],
        }
    }

    fn validate_base(self, base: &[f64]) -> Result<()> {
        if base.len() != self.dim() {
            return precondition(format!("base point needs {} coordinates", self.dim()));
        }
        if self == FillingModel::Hyperbolic && base[1] <= 0.0 {
            return Err(Error::Domain("hyperbolic base point needs q > 0".into()));
        }
        if let FillingModel::Torus { n: 0 } = self {
            return precondition("torus model needs n >= 1");
        }
        Ok(())
    }

    /// Model distance between two points.
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            FillingModel::Torus { .. } => dist(a, b),
            FillingModel::Hyperbolic => {
                let d2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2);
                (1.0 + d2 / (2.0 * a[1] * b[1])).acosh()
            }
        }
    }

    /// Model length of a polyline with straight (Euclidean) edges.
    pub fn length(self, c: &Polyline) -> f64 {
        c.segments()
            .map(|(a, b)| match self {
                FillingModel::Torus { .. } => dist(a, b),
                FillingModel::Hyperbolic => {
                    let e = dist(a, b);
                    let (q0, q1) = (a[1], b[1]);
                    if (q1 - q0).abs() <= 1e-12 * q0 {
                        e / q0
                    } else {
                        e * (q1 / q0).ln() / (q1 - q0)
                    }
                }
            })
            .sum()
    }

    /// The primitive whose line integral gives enclosed `omega`-area.
    fn area_primitive(self) -> PrimitiveForm {
        match self {
            FillingModel::Torus { n } => PrimitiveForm::p_dq(2 * n),
            FillingModel::Hyperbolic => PrimitiveForm::HalfPlane { shift: 0.0 },
        }
    }
}

/// Point at hyperbolic distance `r` and angle `theta` from `base`, via the
/// disc model and the Cayley map.
fn hyperbolic_polar(base: &[f64], r: f64, theta: f64) -> Vec<f64> {
    let rho = (0.5 * r).tanh();
    let (x, y) = (rho * theta.cos(), rho * theta.sin());
    // i (1 + z) / (1 - z)
    let den = (1.0 - x).powi(2) + y * y;
    let (p, q) = (-2.0 * y / den, (1.0 - x * x - y * y) / den);
    vec![base[0] + base[1] * p, base[1] * q]
}

/// The standard primitive recentred at `base`, plus a gauge-shifted copy.
pub fn default_candidates(model: FillingModel, base: &[f64]) -> Vec<PrimitiveForm> {
    match model {
        FillingModel::Torus { n } => {
            let centred = PrimitiveForm::p_dq_centred(base);
            let mut wave = vec![0.0; 2 * n];
            wave[0] = 1.0;
            vec![centred.clone(), centred.with_gauge(0.05, wave, 0.0)]
        }
        FillingModel::Hyperbolic => vec![PrimitiveForm::HalfPlane { shift: 0.0 }, PrimitiveForm::HalfPlane { shift: 0.1 }],
    }
}

/// Sample points covering the closed ball `B(base, s)` together with the
/// covering radius (every ball point lies within it of some sample).
fn ball_samples(model: FillingModel, base: &[f64], s: f64, resolution: usize) -> (Vec<Vec<f64>>, f64) {
    match model {
        FillingModel::Torus { n } => {
            let dim = 2 * n;
            let h = s / resolution as f64;
            let cover = 0.5 * h * (dim as f64).sqrt();
            let side = 2 * resolution + 3;
            let total = side.pow(dim as u32);
            let mut points = Vec::new();
            for idx in 0..total {
                let mut rest = idx;
                let offset: Vec<f64> = (0..dim)
                    .map(|_| {
                        let k = (rest % side) as f64 - (resolution + 1) as f64;
                        rest /= side;
                        k * h
                    })
                    .collect();
                let r = offset.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r > s + cover {
                    continue;
                }
                // Radial projection onto the ball is 1-Lipschitz, so projected
                // samples keep the covering radius.
                let scale = if r > s { s / r } else { 1.0 };
                points.push(base.iter().zip(&offset).map(|(b, o)| b + scale * o).collect());
            }
            (points, cover)
        }
        FillingModel::Hyperbolic => {
            let rings = resolution.max(1);
            let spokes = 8 * resolution.max(1);
            let mut points = vec![base.to_vec()];
            for k in 1..=rings {
                let r = s * k as f64 / rings as f64;
                for j in 0..spokes {
                    points.push(hyperbolic_polar(base, r, TAU * j as f64 / spokes as f64));
                }
            }
            let cover = 0.5 * s / rings as f64 + s.sinh() * PI / spokes as f64;
            (points, cover)
        }
    }
}

/// Certified upper bound for `u(s)`: the smallest, over the candidates, of the
/// grid supremum of `|alpha|` over `B(base, s)` plus Lipschitz constant times
/// covering radius.
pub fn u_upper(
    model: FillingModel,
    base: &[f64],
    s: f64,
    candidates: &[PrimitiveForm],
    resolution: usize,
    exec: Exec,
) -> Result<f64> {
    model.validate_base(base)?;
    if candidates.is_empty() {
        return precondition("need at least one candidate primitive");
    }
    if !(s > 0.0) || resolution == 0 {
        return precondition("need s > 0 and a positive resolution");
    }
    for c in candidates {
        c.check_closed_differential()?;
        if c.dim() != model.dim() || matches!(c, PrimitiveForm::HalfPlane { .. }) != (model == FillingModel::Hyperbolic) {
            return precondition("candidate primitive lives on a different cover");
        }
    }
    let (points, cover) = ball_samples(model, base, s, resolution);
    let reach = match model {
        FillingModel::Torus { .. } => dist(base, &vec![0.0; base.len()]) + s,
        FillingModel::Hyperbolic => model.distance(base, &[0.0, 1.0]) + s,
    };
    let mut best = f64::INFINITY;
    for c in candidates {
        let sup = exec.max_f64(points.len(), |i| c.norm(&points[i]).unwrap_or(f64::NAN));
        best = best.min(sup + c.norm_lipschitz(reach) * cover);
    }
    Ok(best)
}

/// A closed test cycle with its enclosed `omega`-area and model length.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestCycle {
    /// Round circle of the given model radius about the base point, in the
    /// `(p1, q1)` plane.
    Circle { radius: f64 },
    /// Regular polygon with vertices on the circle of the given model radius.
    Polygon { sides: usize, radius: f64 },
    /// An explicit closed polyline.
    Loop { polyline: Polyline },
}

impl TestCycle {
    /// `(|area|, length, farthest model distance from base)`.
    fn measure(&self, model: FillingModel, base: &[f64]) -> Result<(f64, f64, f64)> {
        match self {
            TestCycle::Circle { radius } => Ok(match model {
                FillingModel::Torus { .. } => (PI * radius * radius, TAU * radius, *radius),
                FillingModel::Hyperbolic => (TAU * (radius.cosh() - 1.0), TAU * radius.sinh(), *radius),
            }),
            TestCycle::Polygon { sides, radius } => {
                if *sides < 3 {
                    return precondition("polygon needs at least 3 sides");
                }
                match model {
                    FillingModel::Torus { .. } => {
                        let n = *sides as f64;
                        let area = 0.5 * n * radius * radius * (TAU / n).sin();
                        let length = 2.0 * n * radius * (PI / n).sin();
                        Ok((area, length, *radius))
                    }
                    FillingModel::Hyperbolic => {
                        let vertices =
                            (0..*sides).map(|k| hyperbolic_polar(base, *radius, TAU * k as f64 / *sides as f64)).collect();
                        TestCycle::Loop { polyline: Polyline::closed(vertices) }.measure(model, base)
                    }
                }
            }
            TestCycle::Loop { polyline } => {
                if !polyline.closed || polyline.vertices.iter().any(|v| v.len() != model.dim()) {
                    return precondition("test cycle must be a closed polyline in the model");
                }
                let area = line_integral(&model.area_primitive(), polyline)?;
                let reach = polyline.vertices.iter().map(|v| model.distance(base, v)).fold(0.0, f64::max);
                Ok((area.value.abs() - area.error, model.length(polyline), reach))
            }
        }
    }
}

/// The round circle and the inscribed 64-gon of radius `s`.
pub fn default_cycles(s: f64) -> Vec<TestCycle> {
    vec![TestCycle::Circle { radius: s }, TestCycle::Polygon { sides: 64, radius: s }]
}

/// Certified lower bound for `u(s)`: the largest `|area| / length` over cycles
/// inside `B(base, s)`. Balls are convex in both models, so checking vertices
/// suffices.
pub fn u_lower(model: FillingModel, base: &[f64], s: f64, cycles: &[TestCycle]) -> Result<f64> {
    model.validate_base(base)?;
    let mut best: f64 = 0.0;
    for c in cycles {
        let (area, length, reach) = c.measure(model, base)?;
        if reach > s * (1.0 + 1e-9) {
            return precondition(format!("test cycle leaves the ball of radius {s}"));
        }
        if length > 0.0 {
            best = best.max(area.max(0.0) / length);
        }
    }
    Ok(best)
}

/// Inputs of a filling computation other than the `s` grid.
#[derive(Clone, Debug)]
pub struct FillingSetup {
    pub model: FillingModel,
    pub base_point: Vec<f64>,
    /// The metric is `metric_scale^2` times the model metric.
    pub metric_scale: f64,
    pub candidates: Vec<PrimitiveForm>,
    pub resolution: usize,
}

impl FillingSetup {
    pub fn new(model: FillingModel, resolution: usize) -> Self {
        let base_point = model.default_base();
        let candidates = default_candidates(model, &base_point);
        FillingSetup { model, base_point, metric_scale: 1.0, candidates, resolution }
    }

    pub fn with_base(mut self, base: Vec<f64>) -> Self {
        self.candidates = default_candidates(self.model, &base);
        self.base_point = base;
        self
    }

    pub fn with_metric_scale(mut self, scale: f64) -> Self {
        self.metric_scale = scale;
        self
    }

    /// `(u_lo, u_hi)` at one radius. Scaling the metric by `lambda` divides
    /// covector norms by `lambda` and shrinks balls to model radius `s / lambda`.
    pub fn bounds(&self, s: f64, exec: Exec) -> Result<(f64, f64)> {
        if !(self.metric_scale > 0.0) {
            return precondition("metric scale must be positive");
        }
        let lambda = self.metric_scale;
        let r = s / lambda;
        let hi = u_upper(self.model, &self.base_point, r, &self.candidates, self.resolution, exec)? / lambda;
        let lo = u_lower(self.model, &self.base_point, r, &default_cycles(r))? / lambda;
        Ok((lo, hi))
    }
}

/// `0.5 * 2^(k / per_octave)` for every integer `k` landing in `[s_min, s_max]`.
/// Anchoring at `0.5` makes grids for metrics scaled by powers of two nest.
pub fn geometric_grid(s_min: f64, s_max: f64, per_octave: u32) -> Vec<f64> {
    let step = 1.0 / per_octave as f64;
    let k_lo = ((s_min / 0.5).log2() / step).ceil() as i64;
    let k_hi = ((s_max / 0.5).log2() / step + 1e-9).floor() as i64;
    (k_lo..=k_hi).map(|k| 0.5 * (k as f64 * step).exp2()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FillingEstimate {
    pub model: FillingModel,
    pub metric_scale: f64,
    pub base_point: Vec<f64>,
    pub s_grid: Vec<f64>,
    pub u_lo: Vec<f64>,
    pub u_hi: Vec<f64>,
}

/// Evaluates the setup on every grid radius.
pub fn estimate(setup: &FillingSetup, s_grid: &[f64], exec: Exec) -> Result<FillingEstimate> {
    if s_grid.is_empty() || s_grid.windows(2).any(|w| w[0] >= w[1]) {
        return precondition("s grid must be non-empty and increasing");
    }
    let mut u_lo = Vec::with_capacity(s_grid.len());
    let mut u_hi = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        let (lo, hi) = setup.bounds(s, exec)?;
        u_lo.push(lo);
        u_hi.push(hi);
    }
    Ok(FillingEstimate {
        model: setup.model,
        metric_scale: setup.metric_scale,
        base_point: setup.base_point.clone(),
        s_grid: s_grid.to_vec(),
        u_lo,
        u_hi,
    })
}

impl FillingEstimate {
    pub fn w_lo(&self, i: usize) -> f64 {
        self.s_grid[i] * self.u_lo[i]
    }

    pub fn w_hi(&self, i: usize) -> f64 {
        self.s_grid[i] * self.u_hi[i]
    }

    /// Running maximum of `w_lo`, a lower bound for the increasing `w`.
    fn w_lo_envelope(&self) -> Vec<f64> {
        let mut m = f64::NEG_INFINITY;
        (0..self.s_grid.len())
            .map(|i| {
                m = m.max(self.w_lo(i));
                m
            })
            .collect()
    }

    /// Range of `t` for which [`Self::v_from_u`] gives a finite interval.
    pub fn t_range(&self) -> (f64, f64) {
        (0.0, *self.w_lo_envelope().last().unwrap())
    }

    /// Certified interval for `v(t)`. Because `w` is increasing,
    /// `w_hi(s) <= t` forces `v(t) >= s` and `max_{s' <= s} w_lo(s') >= t`
    /// forces `v(t) <= s`.
    pub fn v_from_u(&self, t: f64) -> Result<(f64, f64)> {
        let (t_min, t_max) = self.t_range();
        if !(t > t_min && t <= t_max) {
            return Err(Error::Range {
                completed: 0,
                reason: format!("t = {t} lies outside the sampled range ({t_min}, {t_max}]"),
            });
        }
        let lo = (0..self.s_grid.len()).filter(|&i| self.w_hi(i) <= t).map(|i| self.s_grid[i]).fold(0.0, f64::max);
        let env = self.w_lo_envelope();
        let i = env.partition_point(|w| *w < t);
        Ok((lo, self.s_grid[i]))
    }

    /// `[v_lo(t_lo), v_hi(t_hi)]`, the hull of `v` over `[t_lo, t_hi]`.
    pub fn invert_interval(&self, t_lo: f64, t_hi: f64) -> Result<(f64, f64)> {
        let lo = if t_lo > 0.0 { self.v_from_u(t_lo)?.0 } else { 0.0 };
        Ok((lo, self.v_from_u(t_hi)?.1))
    }

    /// `u_lo <= u_hi` everywhere and the running max of `u_lo` stays below
    /// every later `u_hi`.
    pub fn is_consistent(&self) -> bool {
        let mut run = f64::NEG_INFINITY;
        (0..self.s_grid.len()).all(|i| {
            run = run.max(self.u_lo[i]);
            self.u_lo[i] <= self.u_hi[i] && run <= self.u_hi[i] * (1.0 + 1e-12)
        })
    }

    /// `w` intervals increase strictly in interval order on a subsequence:
    /// returns the indices `i < j` where `w_hi(i) < w_lo(j)` fails for
    /// `s_j >= 2 s_i`.
    pub fn w_order_violations(&self) -> Vec<(usize, usize)> {
        let n = self.s_grid.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.s_grid[j] >= 2.0 * self.s_grid[i] && self.w_hi(i) >= self.w_lo(j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Closed-form `v` interval on the torus from `s/2 <= u(s) <= s`.
pub fn torus_v_interval(t: f64) -> (f64, f64) {
    (t.sqrt(), (2.0 * t).sqrt())
}

/// Closed-form `v` interval on the hyperbolic plane from `c <= u(s) <= 1`.
pub fn hyperbolic_v_interval(t: f64, c: f64) -> (f64, f64) {
    (t, t / c)
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    /// Smallest `c` with `v_a / c <= v_b <= c v_a` on both interval ends at
    /// every sampled `t`.
    pub constant: f64,
    pub samples: Vec<f64>,
    /// Largest `v(c t) / (c v(t))` over `c in {2, 5, 10}` on the closed-form
    /// torus intervals, compared end to end.
    pub scaling_ratio: f64,
}

/// Sandwich constant between two estimates of the same model, on `samples`
/// values of `t` spread geometrically over the common range.
pub fn equivalence_properties(a: &FillingEstimate, b: &FillingEstimate, samples: usize) -> Result<EquivalenceReport> {
    if a.model != b.model {
        return precondition("estimates live on different models");
    }
    let lo = a.w_lo(0).max(b.w_lo(0)).max(f64::MIN_POSITIVE);
    let hi = a.t_range().1.min(b.t_range().1);
    if !(hi > lo) || samples < 2 {
        return precondition("estimates share no range of t");
    }
    let ts: Vec<f64> = (0..samples).map(|k| lo * (hi / lo).powf(k as f64 / (samples - 1) as f64)).collect();
    let mut constant: f64 = 1.0;
    for &t in &ts {
        let (alo, ahi) = a.v_from_u(t)?;
        let (blo, bhi) = b.v_from_u(t)?;
        if alo > 0.0 && blo > 0.0 {
            constant = constant.max(alo / blo).max(blo / alo);
        }
        constant = constant.max(ahi / bhi).max(bhi / ahi);
    }
    let mut scaling_ratio: f64 = 0.0;
    for c in [2.0, 5.0, 10.0] {
        for &t in &ts {
            let (lo1, hi1) = torus_v_interval(t);
            let (lo2, hi2) = torus_v_interval(c * t);
            scaling_ratio = scaling_ratio.max(lo2 / (c * lo1)).max(hi2 / (c * hi1));
        }
    }
    Ok(EquivalenceReport { constant, samples: ts, scaling_ratio })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: FillingModel = FillingModel::Torus { n: 1 };

    #[test]
    fn torus_upper_is_radius() {
        let base = TORUS.default_base();
        let u = u_upper(TORUS, &base, 2.0, &[PrimitiveForm::p_dq(2)], 100, Exec::Sequential).unwrap();
        assert!(u >= 2.0 && u <= 2.02, "{u}");
        let two = default_candidates(TORUS, &base);
        let m = u_upper(TORUS, &base, 2.0, &two, 100, Exec::Sequential).unwrap();
        assert!(m <= u);
        assert!(u_upper(TORUS, &base, 2.0, &[], 10, Exec::Sequential).is_err());
    }

    #[test]
    fn symmetric_primitive_halves_the_bound() {
        let base = TORUS.default_base();
        let u = u_upper(TORUS, &base, 2.0, &[PrimitiveForm::symmetric(2)], 100, Exec::Sequential).unwrap();
        assert!(u >= 1.0 && u <= 1.02, "{u}");
    }

    #[test]
    fn torus_lower_bounds() {
        let base = TORUS.default_base();
        assert!((u_lower(TORUS, &base, 2.0, &[TestCycle::Circle { radius: 2.0 }]).unwrap() - 1.0).abs() < 1e-15);
        let poly = u_lower(TORUS, &base, 2.0, &[TestCycle::Polygon { sides: 64, radius: 2.0 }]).unwrap();
        assert!(poly >= 0.99 && poly < 1.0);
        let too_big = TestCycle::Circle { radius: 2.5 };
        assert!(u_lower(TORUS, &base, 2.0, &[too_big]).is_err());
    }

    #[test]
    fn hyperbolic_bounds() {
        let h = FillingModel::Hyperbolic;
        let base = h.default_base();
        for s in [1.0, 4.0, 10.0] {
            let u = u_upper(h, &base, s, &default_candidates(h, &base), 8, Exec::Sequential).unwrap();
            assert!(u <= 1.0 + 1e-12, "{u}");
            let lo = u_lower(h, &base, s, &default_cycles(s)).unwrap();
            assert!((lo - (0.5 * s).tanh()).abs() < 1e-12);
        }
        // Polygon area from Green's theorem stays below the circle's.
        let poly = u_lower(h, &base, 2.0, &[TestCycle::Polygon { sides: 64, radius: 2.0 }]).unwrap();
        assert!(poly > 0.9 * (1.0f64).tanh() && poly <= (1.0f64).tanh() + 1e-9);
    }

    #[test]
    fn polar_points_sit_at_distance() {
        let base = [0.3, 2.0];
        for (r, th) in [(0.5, 0.1), (3.0, 2.0), (7.0, 4.0)] {
            let z = hyperbolic_polar(&base, r, th);
            assert!((FillingModel::Hyperbolic.distance(&base, &z) - r).abs() < 1e-9 * r.max(1.0));
        }
    }

    #[test]
    fn v_interval_at_eight() {
        let setup = FillingSetup::new(TORUS, 60);
        let est = estimate(&setup, &geometric_grid(0.5, 8.0, 8), Exec::Parallel).unwrap();
        assert!(est.is_consistent());
        let (lo, hi) = est.v_from_u(8.0).unwrap();
        let (a, b) = torus_v_interval(8.0);
        assert!(lo <= a && hi >= b, "({lo}, {hi})");
        assert!(est.v_from_u(1e6).is_err());
        for i in (0..est.s_grid.len()).filter(|&i| est.w_hi(i) <= est.t_range().1) {
            let (lo, hi) = est.invert_interval(est.w_lo(i), est.w_hi(i)).unwrap();
            assert!(lo <= est.s_grid[i] && est.s_grid[i] <= hi);
        }
        assert!(est.w_order_violations().is_empty());
    }

    #[test]
    fn metric_scaling_and_base_point() {
        let grid = geometric_grid(0.5, 8.0, 8);
        let plain = estimate(&FillingSetup::new(TORUS, 30), &grid, Exec::Parallel).unwrap();
        let scaled = estimate(&FillingSetup::new(TORUS, 30).with_metric_scale(2.0), &grid, Exec::Parallel).unwrap();
        let r = equivalence_properties(&plain, &scaled, 12).unwrap();
        assert!(r.constant <= 2.0 + 1e-9, "{}", r.constant);
        assert!(r.scaling_ratio <= 1.0);
        let moved = estimate(&FillingSetup::new(TORUS, 30).with_base(vec![0.5, 0.5]), &grid, Exec::Parallel).unwrap();
        let r = equivalence_properties(&plain, &moved, 12).unwrap();
        assert!(r.constant <= 1.0 + 1e-9, "{}", r.constant);
    }

    #[test]
    fn grid_anchor() {
        let g = geometric_grid(0.5, 8.0, 8);
        assert_eq!(g.len(), 33);
        assert_eq!(g[0], 0.5);
        assert_eq!(*g.last().unwrap(), 8.0);
    }
}
