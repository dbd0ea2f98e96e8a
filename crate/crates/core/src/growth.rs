//! Growth sequences, propagation on the cover, and growth-order comparison.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::exec::Exec;
use crate::linalg::Matrix;
use crate::poly::Fourier;
use crate::zoo::{Axis, Dynamics, LiftedMap};

/// Report tags for checks built on this module.
pub const TAGS: &[&str] = &["growth.laws", "growth.propagation", "growth.classification"];

/// Sample points for a maximum over the manifold.
#[derive(Clone, Debug)]
pub struct Grid {
    pub points: Vec<Vec<f64>>,
    /// Every point of the sampled region is within this Euclidean distance
    /// of a grid point, measured along the relevant axes.
    pub covering_radius: f64,
}

/// Periodic axes get `resolution` nodes `i / resolution`; intervals get
/// `resolution + 1` nodes including both ends, so doubling the resolution
/// refines the grid. Irrelevant axes are pinned at zero.
pub fn axis_grid(axes: &[Axis], resolution: usize, keep: impl Fn(&[f64]) -> bool) -> Grid {
    let resolution = resolution.max(1);
    let mut nodes: Vec<Vec<f64>> = Vec::with_capacity(axes.len());
    let mut cover2 = 0.0;
    for axis in axes {
        match *axis {
            Axis::Periodic => {
                nodes.push((0..resolution).map(|i| i as f64 / resolution as f64).collect());
                cover2 += (0.5 / resolution as f64).powi(2);
            }
            Axis::Interval(a, b) => {
                nodes.push((0..=resolution).map(|i| a + (b - a) * i as f64 / resolution as f64).collect());
                cover2 += (0.5 * (b - a) / resolution as f64).powi(2);
            }
            Axis::Irrelevant => nodes.push(vec![0.0]),
        }
    }
    let mut points = vec![Vec::with_capacity(axes.len())];
    for axis_nodes in &nodes {
        let mut next = Vec::with_capacity(points.len() * axis_nodes.len());
        for p in &points {
            for &v in axis_nodes {
                let mut q: Vec<f64> = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        points = next;
    }
    points.retain(|p| keep(p));
    Grid { points, covering_radius: cover2.sqrt() }
}

fn in_disc(x: &[f64], radius: f64) -> bool {
    x.iter().step_by(2).map(|p| p * p).sum::<f64>().sqrt() <= radius
}

/// `Gamma_1 .. Gamma_N` of a map, with certified additive error bars.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthSeries {
    pub map_id: String,
    pub resolution: usize,
    pub grid_points: usize,
    pub values: Vec<f64>,
    /// `sup over M - grid max <= error_bars[n-1]`; infinite when no
    /// Lipschitz bound is available.
    pub error_bars: Vec<f64>,
    /// Worst power-iteration residual encountered (zero in dimension two).
    pub max_norm_residual: f64,
}

impl GrowthSeries {
    pub fn gamma(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Gamma_n(f) = max over grid x of max(|d_x f^n|, |d_x f^{-n}|)` for
/// `n = 1..=n_max`.
pub fn growth_sequence<D: Dynamics + ?Sized>(
    map: &D,
    map_id: &str,
    n_max: usize,
    resolution: usize,
    exec: Exec,
) -> Result<GrowthSeries> {
    if n_max == 0 {
        return precondition("n_max must be at least 1");
    }
    let disc = map.disc_radius();
    let grid = axis_grid(&map.axes(), resolution, |x| disc.map_or(true, |r| in_disc(x, r)));
    let per_point = exec.try_map(grid.points.len(), |i| point_norms(map, &grid.points[i], n_max));
    let per_point = per_point?;
    let mut values = vec![f64::NEG_INFINITY; n_max];
    let mut residual: f64 = 0.0;
    for (norms, r) in &per_point {
        for (v, w) in values.iter_mut().zip(norms) {
            *v = v.max(*w);
        }
        residual = residual.max(*r);
    }
    // Outside the support radius the Jacobian is the identity; the grid
    // covers the support only if its spacing is fine relative to the rim.
    let disc_ok = disc.map_or(true, |r| grid.covering_radius <= 0.1 * r);
    let error_bars = (1..=n_max as u64)
        .map(|n| match map.norm_lipschitz(n) {
            Some(l) if disc_ok => l * grid.covering_radius,
            _ => f64::INFINITY,
        })
        .collect();
    Ok(GrowthSeries {
        map_id: map_id.to_string(),
        resolution,
        grid_points: grid.points.len(),
        values,
        error_bars,
        max_norm_residual: residual,
    })
}

fn point_norms<D: Dynamics + ?Sized>(map: &D, x: &[f64], n_max: usize) -> Result<(Vec<f64>, f64)> {
    let dim = map.dim();
    let (mut fwd, mut bwd) = (Matrix::identity(dim), Matrix::identity(dim));
    let (mut xf, mut xb) = (x.to_vec(), x.to_vec());
    let mut out = Vec::with_capacity(n_max);
    let mut residual: f64 = 0.0;
    for k in 0..n_max {
        fwd = &map.jacobian(&xf)? * &fwd;
        bwd = &map.jacobian_inverse(&xb)? * &bwd;
        for m in [&fwd, &bwd] {
            if !m.is_finite() || m.max_abs_entry() > crate::zoo::ENTRY_GUARD {
                return Err(crate::Error::Range {
                    completed: k as i64,
                    reason: "Jacobian entries exceeded the guard".into(),
                });
            }
        }
        let (a, b) = (fwd.op_norm(), bwd.op_norm());
        residual = residual.max(a.residual).max(b.residual);
        out.push(a.value.max(b.value));
        xf = map.evaluate(&xf)?;
        xb = map.evaluate_inverse(&xb)?;
    }
    Ok((out, residual))
}

/// `d_1 .. d_N` for a lift with a designated fixed point.
#[derive(Clone, Debug, Serialize)]
pub struct PropagationSeries {
    pub lift_id: String,
    pub base_fixed_point: Vec<f64>,
    pub resolution: usize,
    pub values: Vec<f64>,
}

/// `d_n = sup over z in D of |x - F^n z|`, the sup taken on a closed grid of
/// the fundamental domain `D` (endpoints included) and `x` the first
/// designated fixed point.
pub fn propagation(lift: &LiftedMap, n_max: usize, resolution: usize, exec: Exec) -> Result<PropagationSeries> {
    let Some(x) = lift.fixed_points.first().cloned() else {
        return precondition("propagation needs a lift with a designated fixed point");
    };
    let axes: Vec<Axis> = lift.fundamental_domain.iter().map(|&(a, b)| Axis::Interval(a, b)).collect();
    let grid = axis_grid(&axes, resolution, |z| lift.in_domain(z));
    let rows = exec.try_map(grid.points.len(), |i| {
        let mut z = grid.points[i].clone();
        let mut out = Vec::with_capacity(n_max);
        for _ in 0..n_max {
            z = lift.apply(&z)?;
            out.push(z.iter().zip(&x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt());
        }
        Ok::<_, crate::Error>(out)
    })?;
    let mut values = vec![0.0f64; n_max];
    for row in rows {
        for (v, w) in values.iter_mut().zip(row) {
            *v = v.max(w);
        }
    }
    Ok(PropagationSeries { lift_id: lift.label.clone(), base_fixed_point: x, resolution, values })
}

/// Outcome of checking `Gamma_n >= d_n / c` with `c = 1 + diam D`.
#[derive(Clone, Debug, Serialize)]
pub struct PropagationCheck {
    pub constant: f64,
    /// Largest `d_n / (c (Gamma_n + err_n))`; the inequality holds iff `<= 1`.
    pub worst_ratio: f64,
    pub holds: bool,
}

pub fn propagation_inequality(lift: &LiftedMap, growth: &GrowthSeries, prop: &PropagationSeries) -> PropagationCheck {
    let constant = 1.0 + lift.domain_diameter();
    let worst_ratio = prop
        .values
        .iter()
        .zip(growth.values.iter().zip(&growth.error_bars))
        .map(|(d, (g, e))| d / (constant * (g + e)))
        .fold(0.0, f64::max);
    PropagationCheck { constant, worst_ratio, holds: worst_ratio <= 1.0 }
}

/// Fixed heuristic thresholds for [`classify_growth`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyThresholds {
    /// Relative slack for the bounded test against the first four terms.
    pub elliptic_slack: f64,
    /// An exponential fit must beat its RMS residual by this factor.
    pub hyperbolic_margin: f64,
    /// Largest RMS residual accepted for the power-law fit.
    pub parabolic_residual: f64,
}

impl Default for ClassifyThresholds {
    fn default() -> Self {
        ClassifyThresholds { elliptic_slack: 1e-6, hyperbolic_margin: 10.0, parabolic_residual: 0.05 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum GrowthClass {
    Elliptic,
    Parabolic { degree: f64, residual: f64 },
    Hyperbolic { rate: f64, residual: f64 },
    Inconclusive { reason: String },
}

/// Least-squares line through `(x, y)`; returns slope, intercept, RMS residual.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Heuristic trichotomy on the second half of the series.
pub fn classify_growth(series: &GrowthSeries, t: &ClassifyThresholds) -> Result<GrowthClass> {
    let v = &series.values;
    if v.len() < 16 {
        return precondition("classification needs at least 16 terms");
    }
    let head = v[..4].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if v.iter().all(|g| *g <= (1.0 + t.elliptic_slack) * head) {
        return Ok(GrowthClass::Elliptic);
    }
    let start = v.len() / 2;
    let n: Vec<f64> = (start + 1..=v.len()).map(|k| k as f64).collect();
    let logn: Vec<f64> = n.iter().map(|k| k.ln()).collect();
    let logg: Vec<f64> = v[start..].iter().map(|g| g.ln()).collect();
    let (rate, _, exp_res) = fit_line(&n, &logg);
    let (degree, _, pow_res) = fit_line(&logn, &logg);
    if rate > t.hyperbolic_margin * exp_res && exp_res < pow_res {
        return Ok(GrowthClass::Hyperbolic { rate, residual: exp_res });
    }
    if pow_res <= t.parabolic_residual {
        return Ok(GrowthClass::Parabolic { degree, residual: pow_res });
    }
    Ok(GrowthClass::Inconclusive {
        reason: format!("exponential residual {exp_res:.3e}, power-law residual {pow_res:.3e}"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Dominates,
    Dominated,
    Equivalent,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthOrderVerdict {
    pub relation: Relation,
    /// `c` with `a_n >= c b_n` on the window (or `b_n >= c a_n` when dominated;
    /// for equivalence the smaller of the two).
    pub constant_witness: f64,
    pub fit_window: (usize, usize),
    /// Slope of `log(a_n / b_n)` against `log n` on the window.
    pub log_ratio_slope: f64,
}

/// Slopes of `log(a/b)` below this size count as flat.
pub const FLAT_SLOPE: f64 = 0.1;

/// Empirical `a_n >= c b_n` test. A witness for one direction needs the
/// minimal ratio on the later half of the window to stay within a factor two
/// of the minimal ratio on the earlier half, and a log-log slope above
/// `-FLAT_SLOPE`.
pub fn growth_order_compare(a: &[f64], b: &[f64]) -> Result<GrowthOrderVerdict> {
    if a.len() != b.len() || a.len() < 16 {
        return precondition("series must have equal lengths of at least 16");
    }
    let len = a.len();
    let (lo, mid) = (len / 4, len / 2);
    let ratio: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / y).collect();
    let logn: Vec<f64> = (lo + 1..=len).map(|k| (k as f64).ln()).collect();
    let logr: Vec<f64> = ratio[lo..].iter().map(|r| r.ln()).collect();
    let (slope, _, _) = fit_line(&logn, &logr);
    let min = |s: &[f64]| s.iter().cloned().fold(f64::INFINITY, f64::min);
    let witness = |r: &[f64]| -> Option<f64> {
        let (early, late) = (min(&r[lo..mid]), min(&r[mid..]));
        (late >= 0.5 * early && late > 0.0).then_some(late.min(early))
    };
    let inverse: Vec<f64> = ratio.iter().map(|r| 1.0 / r).collect();
    let ab = witness(&ratio).filter(|_| slope > -FLAT_SLOPE);
    let ba = witness(&inverse).filter(|_| slope < FLAT_SLOPE);
    let (relation, constant_witness) = match (ab, ba) {
        (Some(c1), Some(c2)) => (Relation::Equivalent, c1.min(c2)),
        (Some(c), None) => (Relation::Dominates, c),
        (None, Some(c)) => (Relation::Dominated, c),
        (None, None) => (Relation::Inconclusive, 0.0),
    };
    Ok(GrowthOrderVerdict { relation, constant_witness, fit_window: (lo + 1, len), log_ratio_slope: slope })
}

/// `max over grid x of |sum_{k<n} psi'(x + k rotation)|` for `n = 1..=n_max`,
/// the shear coefficient of `d f^n` for the skew product.
pub fn birkhoff_growth(psi: &Fourier, rotation: f64, n_max: usize, resolution: usize, exec: Exec) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&rotation) {
        return precondition("rotation must lie in [0, 1)");
    }
    let resolution = resolution.max(1);
    Ok(exec.max_vec(resolution, n_max, |i| {
        let x = i as f64 / resolution as f64;
        let mut sum = 0.0;
        (0..n_max)
            .map(|k| {
                sum += psi.deriv(x + k as f64 * rotation, 1);
                sum.abs()
            })
            .collect()
    }))
}
