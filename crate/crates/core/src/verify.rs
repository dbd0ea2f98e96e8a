//! The acceptance checks and the config-driven experiment runner.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::action::{
    action_difference, corpus_report, flux_of_path, geometric_inequality_check, hamiltonian_action_spectrum, loop_corpus,
    lower_bound_certificate, path_functionals, verify_iterate_scaling, width_conjugation_check, winding_corpus,
    CircleFunction, FillingLower, Polyline, PrimitiveForm, TorusPath,
};
use crate::config::{resolve_map, ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::filling::{estimate, geometric_grid, FillingEstimate, FillingModel, FillingSetup};
use crate::groups::{
    distortion_profile, equal_in_group, log_word_construct, CayleyBall, GroupWord, LengthKind, Presentation,
};
use crate::growth::{
    classify_growth, growth_order_compare, growth_sequence, propagation, propagation_inequality, ClassifyThresholds,
    GrowthSeries, Relation,
};
use crate::linalg::IntMatrix;
use crate::poly::Fourier;
use crate::report::{CheckRecord, Report};
use crate::zoo::appendix::{
    contractible_obstruction, fixed_point_set, half_flow, involution, is_fixed_on_quotient, same_on_torus,
};
use crate::zoo::{standard_members, Dynamics, LiftedMap, SymplecticMap};

/// Runs `body`, timing it; an error becomes a failed record.
fn timed(id: &str, tag: &str, bound: impl Into<String>, body: impl FnOnce() -> Result<(bool, Value)>) -> CheckRecord {
    let start = Instant::now();
    let (passed, values) = match body() {
        Ok(r) => r,
        Err(e) => (false, json!({ "error": e.to_string() })),
    };
    CheckRecord {
        check_id: id.to_string(),
        tag: tag.to_string(),
        values,
        bound: bound.into(),
        passed,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn elapsed_s(start: Instant) -> f64 {
    start.elapsed().as_secs_f64()
}

fn delta_setup(cfg: &ExperimentConfig) -> Result<(LiftedMap, Vec<f64>, Vec<f64>)> {
    let (_, map) = resolve_map(&cfg.delta.map)?;
    Ok((LiftedMap::canonical(&map)?, cfg.delta.x.clone(), cfg.delta.y.clone()))
}

pub fn check_iterate_scaling(cfg: &ExperimentConfig) -> CheckRecord {
    let tol = cfg.delta.scaling_tolerance;
    timed("iterate_scaling", "action.iterate-scaling", format!("max deviation < {tol:e}, runtime < 5 s"), || {
        let start = Instant::now();
        let (lift, x, y) = delta_setup(cfg)?;
        let gamma = Polyline::open(vec![x.clone(), y.clone()]);
        let alpha = PrimitiveForm::p_dq(lift.dim());
        let r = verify_iterate_scaling(&lift, &x, &y, &gamma, &alpha, cfg.delta.n_max)?;
        let secs = elapsed_s(start);
        let pass = r.max_deviation < tol && secs < 5.0;
        Ok((pass, json!({ "base_delta": r.base_delta, "max_deviation": r.max_deviation, "n_max": cfg.delta.n_max, "seconds": secs })))
    })
}

pub fn check_delta_well_defined(cfg: &ExperimentConfig) -> CheckRecord {
    let tol = cfg.delta.independence_tolerance;
    timed("delta_well_defined", "action.well-defined", format!("spread over curves and primitives < {tol:e}"), || {
        let (lift, x, y) = delta_setup(cfg)?;
        let dim = lift.dim();
        let mid: Vec<f64> = x.iter().zip(&y).enumerate().map(|(i, (a, b))| 0.5 * (a + b) + if i % 2 == 1 { 0.45 } else { 0.1 }).collect();
        let curves = [Polyline::open(vec![x.clone(), y.clone()]), Polyline::open(vec![x.clone(), mid, y.clone()])];
        let forms = [PrimitiveForm::p_dq(dim), PrimitiveForm::minus_q_dp(dim)];
        let mut values = Vec::new();
        for c in &curves {
            for a in &forms {
                values.push(action_difference(&lift, 1, &x, &y, c, a)?.value);
            }
        }
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(*v), h.max(*v)));
        Ok((hi - lo < tol, json!({ "values": values, "spread": hi - lo })))
    })
}

fn torus_estimate(cfg: &ExperimentConfig, exec: Exec) -> Result<FillingEstimate> {
    let f = &cfg.filling;
    let setup = FillingSetup::new(FillingModel::Torus { n: 1 }, f.resolution);
    estimate(&setup, &geometric_grid(f.s_min, f.s_max, f.per_octave), exec)
}

fn hyperbolic_estimate(cfg: &ExperimentConfig, exec: Exec) -> Result<FillingEstimate> {
    let f = &cfg.filling;
    let setup = FillingSetup::new(FillingModel::Hyperbolic, f.hyperbolic_resolution);
    let steps = ((f.hyperbolic_s_max - 1.0) / 0.5).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| 1.0 + 0.5 * k as f64).collect();
    estimate(&setup, &grid, exec)
}

pub fn check_torus_filling(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let t = cfg.filling.invert_t;
    timed(
        "torus_filling",
        "filling.torus-linear",
        format!("u_lo >= 0.49 s and u_hi <= 1.01 s at s in {{0.5,1,2,4,8}}; v({t}) contains [2.83, 4.0]; runtime < 30 s"),
        || {
            let start = Instant::now();
            let est = torus_estimate(cfg, exec)?;
            let mut rows = Vec::new();
            let mut pass = true;
            for s in [0.5, 1.0, 2.0, 4.0, 8.0] {
                let i = est
                    .s_grid
                    .iter()
                    .position(|g| (g - s).abs() < 1e-12)
                    .ok_or_else(|| Error::Config(format!("filling grid does not contain s = {s}")))?;
                pass &= est.u_lo[i] >= 0.49 * s && est.u_hi[i] <= 1.01 * s;
                rows.push(json!({ "s": s, "u_lo": est.u_lo[i], "u_hi": est.u_hi[i] }));
            }
            let (v_lo, v_hi) = est.v_from_u(t)?;
            let secs = elapsed_s(start);
            pass &= v_lo <= 2.83 && v_hi >= 4.0 && secs < 30.0;
            Ok((pass, json!({ "samples": rows, "t": t, "v_interval": [v_lo, v_hi], "seconds": secs })))
        },
    )
}

pub fn check_hyperbolic_filling(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    timed("hyperbolic_filling", "filling.hyperbolic-bounded", "u_hi(s) <= 1.001 for s in [1, 10]", || {
        let est = hyperbolic_estimate(cfg, exec)?;
        let worst = est.u_hi.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok((worst <= 1.001, json!({ "s": est.s_grid, "u_lo": est.u_lo, "u_hi": est.u_hi, "max_u_hi": worst })))
    })
}

fn member(name: &str) -> Result<SymplecticMap> {
    Ok(resolve_map(name)?.1)
}

pub fn check_growth_laws(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let g = &cfg.growth;
    let bound = format!(
        "translation Gamma_n = 1 (n <= {}); skew within {:e} of the shear norm (n <= {}); twist Gamma_n/n within {}% of max|H''| ({} <= n <= {})",
        g.translation_n_max,
        g.shear_tolerance,
        g.skew_n_max,
        100.0 * g.twist_tolerance,
        g.twist_n_min,
        g.twist_n_max
    );
    timed("growth_laws", "growth.laws", bound, || {
        let translation = growth_sequence(&member("translation")?, "translation", g.translation_n_max, g.grid, exec)?;
        let translation_ok = translation.values.iter().all(|v| *v == 1.0);

        let skew = member("skew")?;
        let (_, psi) = skew.skew_data().expect("skew member");
        let slope = psi.deriv_bound(1);
        let skew_series = growth_sequence(&skew, "skew", g.skew_n_max, g.grid, exec)?;
        let skew_dev = skew_series
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let c = (i + 1) as f64 * slope;
                (v - 0.5 * (c + (c * c + 4.0).sqrt())).abs()
            })
            .fold(0.0, f64::max);

        let twist = member("twist")?;
        let profile = twist.twist_profile().expect("twist member");
        let fine = 200_000;
        let r_max = profile.support_radius();
        let max_d2 = (0..=fine).map(|k| profile.radial_d2(r_max * k as f64 / fine as f64).abs()).fold(0.0, f64::max);
        let twist_series = growth_sequence(&twist, "twist", g.twist_n_max, g.twist_grid, exec)?;
        let twist_dev = (g.twist_n_min..=g.twist_n_max)
            .map(|n| (twist_series.gamma(n) / n as f64 / max_d2 - 1.0).abs())
            .fold(0.0, f64::max);

        let pass = translation_ok && skew_dev < g.shear_tolerance && twist_dev < g.twist_tolerance;
        Ok((
            pass,
            json!({
                "translation_all_one": translation_ok,
                "skew_max_abs_deviation": skew_dev,
                "twist_max_second_derivative": max_d2,
                "twist_max_relative_deviation": twist_dev,
            }),
        ))
    })
}

pub fn check_certificate_chain(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    timed(
        "certificate_chain",
        "action.certificate",
        format!("(1/b) v_lo(n c / 2) <= Gamma_n + error bar for n <= {}, growing at least like sqrt(n)", cfg.certificate.n_max),
        || {
            let (lift, x, y) = delta_setup(cfg)?;
            let gamma = Polyline::open(vec![x.clone(), y.clone()]);
            let c = action_difference(&lift, 1, &x, &y, &gamma, &PrimitiveForm::p_dq(lift.dim()))?.value;
            let b = gamma.length();
            let filling = torus_estimate(cfg, exec)?;
            let n_max = cfg.certificate.n_max;
            let growth = growth_sequence(&lift.base, "certificate", n_max as usize, cfg.certificate.grid, exec)?;
            let mut bounds = Vec::with_capacity(n_max as usize);
            let mut worst: f64 = f64::NEG_INFINITY;
            for n in 1..=n_max {
                let cert = lower_bound_certificate(c, n, FillingLower::Estimate(&filling), b)?;
                let i = n as usize - 1;
                worst = worst.max(cert.bound - (growth.values[i] + growth.error_bars[i]));
                bounds.push(cert.bound);
            }
            let roots: Vec<f64> = (1..=n_max).map(|n| (n as f64).sqrt()).collect();
            let verdict = growth_order_compare(&bounds, &roots)?;
            let grows = matches!(verdict.relation, Relation::Dominates | Relation::Equivalent);
            Ok((
                worst <= 0.0 && grows,
                json!({
                    "action": c,
                    "curve_length": b,
                    "max_certificate_minus_gamma": worst,
                    "certificate_at_n_max": bounds.last(),
                    "gamma_at_n_max": growth.values.last(),
                    "sqrt_relation": verdict.relation,
                    "sqrt_constant": verdict.constant_witness,
                }),
            ))
        },
    )
}

pub fn check_propagation(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let p = &cfg.propagation;
    timed("propagation", "growth.propagation", format!("d_n <= (1 + diam D)(Gamma_n + err) on every zoo lift, n <= {}", p.n_max), || {
        let mut rows = Vec::new();
        let mut pass = true;
        for (name, map) in standard_members() {
            let lift = LiftedMap::canonical(&map)?;
            if lift.fixed_points.is_empty() {
                rows.push(json!({ "map": name, "skipped": "lift has no designated fixed point" }));
                continue;
            }
            let res = if map.dim() == 4 { p.grid_4d } else { p.grid };
            let growth = growth_sequence(&map, name, p.n_max, cfg.growth.grid, exec)?;
            let prop = propagation(&lift, p.n_max, res, exec)?;
            let check = propagation_inequality(&lift, &growth, &prop);
            pass &= check.holds;
            rows.push(json!({ "map": name, "constant": check.constant, "worst_ratio": check.worst_ratio, "holds": check.holds }));
        }
        Ok((pass, json!({ "lifts": rows })))
    })
}

pub fn check_width(cfg: &ExperimentConfig) -> CheckRecord {
    let s = &cfg.spectrum;
    timed(
        "width",
        "action.width",
        format!("width(f^n) = n h0 within {:e} for n <= {}; translation conjugates keep the width", s.tolerance, s.n_max),
        || {
            let map = SymplecticMap::peaked_twist(s.h0, s.epsilon);
            let profile = map.twist_profile().expect("twist");
            let mut scaling_dev: f64 = 0.0;
            for n in 1..=s.n_max {
                let w = hamiltonian_action_spectrum(&profile.scaled(n as f64), 1)?.width;
                scaling_dev = scaling_dev.max((w - n as f64 * s.h0).abs());
            }
            let mut conj_dev: f64 = 0.0;
            for shift in &s.conjugators {
                let r = width_conjugation_check(&map, &SymplecticMap::translation2(*shift))?;
                conj_dev = conj_dev.max(r.difference.abs());
            }
            Ok((
                scaling_dev < s.tolerance && conj_dev < s.tolerance,
                json!({ "max_scaling_deviation": scaling_dev, "max_conjugation_difference": conj_dev }),
            ))
        },
    )
}

/// The width bound through the shear path and the torus filling, for the
/// configured iterates of the peaked twist.
pub fn check_geometric_inequality(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let s = &cfg.spectrum;
    timed("geometric_inequality", "action.geometric-inequality", "width <= 2 (b + b u_hi(d + b))", || {
        let map = SymplecticMap::peaked_twist(s.h0, s.epsilon);
        let profile = map.twist_profile().expect("twist");
        let mut rows = Vec::new();
        let mut pass = true;
        for &n in &s.inequality_n {
            let r = geometric_inequality_check(&profile.scaled(n as f64), s.inequality_grid, exec)?;
            pass &= r.holds;
            rows.push(json!({ "n": n, "result": r }));
        }
        Ok((pass, json!({ "iterates": rows })))
    })
}

pub fn check_distortion(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let d = &cfg.distortion;
    timed(
        "bs_distortion",
        "groups.log-distortion",
        format!(
            "BS({}, {}): exact |a^n| <= 2 log2 n + 3 for n <= {}; constructed a^(2^k) has length <= 3k + 5 for k <= {}; search to radius {} in < 60 s",
            d.q, d.p, d.n_max, d.construct_k_max, d.timing_radius
        ),
        || {
            let pres = Presentation::new(d.q, d.p)?;
            let start = Instant::now();
            let timed_ball = CayleyBall::explore(pres, d.timing_radius, d.max_nodes, exec)?;
            let timing_secs = elapsed_s(start);
            let ball = CayleyBall::explore(pres, d.radius, d.max_nodes, exec)?;
            let mut exact_ok = true;
            let mut worst_slack = f64::INFINITY;
            let mut beyond = Vec::new();
            for n in 1..=d.n_max {
                match ball.length(&GroupWord::a_power(n)) {
                    Some(len) => {
                        let slack = 2.0 * (n as f64).log2() + 3.0 - len as f64;
                        worst_slack = worst_slack.min(slack);
                        exact_ok &= slack >= 0.0;
                    }
                    None => {
                        exact_ok = false;
                        beyond.push(n);
                    }
                }
            }
            let mut construct_ok = true;
            let mut lengths = Vec::new();
            for k in 0..=d.construct_k_max {
                let n = BigInt::from(1u8) << k;
                let w = log_word_construct(pres, &n)?;
                let len = w.length();
                construct_ok &= equal_in_group(&w, &GroupWord::a_power(n), pres) && len <= BigInt::from(3 * k + 5);
                lengths.push(len.to_string());
            }
            Ok((
                exact_ok && construct_ok && timing_secs < 60.0,
                json!({
                    "radius": d.radius,
                    "ball_size": ball.size(),
                    "ball_complete": ball.complete,
                    "min_slack": worst_slack,
                    "beyond_radius": beyond,
                    "constructed_lengths": lengths,
                    "timing_radius": d.timing_radius,
                    "timing_ball_size": timed_ball.size(),
                    "timing_seconds": timing_secs,
                }),
            ))
        },
    )
}

pub fn check_appendix(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let a = &cfg.appendix;
    timed(
        "appendix",
        "zoo.quotient-example",
        "f^2 = id, involution^2 = id, they commute, fixed set = {(p, q, m1/2, m2/2)}, Gamma_n bounded, only point-fixing lift acts as diag(1,1,-1,-1)",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let points: Vec<[f64; 4]> = (0..256).map(|_| [rng.gen(), rng.gen(), rng.gen(), rng.gen()]).collect();
            let square = points.iter().all(|z| same_on_torus(&half_flow(1.0, &half_flow(1.0, z)), z));
            let involutive = points.iter().all(|z| same_on_torus(&involution(&involution(z)), z));
            let commute = points.iter().all(|z| same_on_torus(&involution(&half_flow(1.0, z)), &half_flow(1.0, &involution(z))));

            let components = fixed_point_set(a.fixed_samples);
            let sampled_fixed = components.len() == 4 && components.iter().all(|c| c.verified);
            let half = |v: f64| v == 0.0 || v == 0.5;
            let mut exact_set = true;
            let steps = 2 * a.grid;
            for idx in 0..steps.pow(4) {
                let z: Vec<f64> = (0..4).map(|k| ((idx / steps.pow(k as u32)) % steps) as f64 / steps as f64).collect();
                exact_set &= is_fixed_on_quotient(&z) == (half(z[2]) && half(z[3]));
            }
            exact_set &= points.iter().all(|z| !is_fixed_on_quotient(z));

            let mut bounded = true;
            let mut gammas = Vec::new();
            for inv in [false, true] {
                let map = SymplecticMap::quotient(inv);
                let s = growth_sequence(&map, "quotient", a.n_max, a.grid, exec)?;
                let top = s.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                bounded &= top <= s.values[0].max(s.values[1]) * (1.0 + 1e-12);
                gammas.push(top);
            }

            let report = contractible_obstruction();
            let fixing: Vec<_> = report.lifts.iter().filter(|l| l.fixed_witness.is_some()).collect();
            let expected = IntMatrix::diag(&[1, 1, -1, -1]);
            let obstruction =
                fixing.len() == 1 && fixing[0].homology_action == expected && !fixing[0].acts_trivially && report.no_contractible_witness;

            Ok((
                square && involutive && commute && sampled_fixed && exact_set && bounded && obstruction,
                json!({
                    "square_is_identity": square,
                    "involution_is_involutive": involutive,
                    "commute": commute,
                    "fixed_set_sampled": sampled_fixed,
                    "fixed_set_exact_on_grid": exact_set,
                    "max_gamma": gammas,
                    "obstruction": report,
                }),
            ))
        },
    )
}

pub fn check_isoperimetric(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let c = &cfg.isoperimetric;
    timed(
        "isoperimetric",
        "action.isoperimetric",
        format!("{} zero-winding loops accepted with finite max ratio; {} winding loops rejected", c.loops, c.winding_loops),
        || {
            let good = corpus_report(&loop_corpus(c.loops, cfg.seed), c.kappa, exec);
            let bad = corpus_report(&winding_corpus(c.winding_loops, cfg.seed), c.kappa, exec);
            let pass = good.accepted == c.loops && good.max_ratio.is_finite() && bad.rejected == c.winding_loops && bad.accepted == 0;
            Ok((pass, json!({ "corpus": good, "winding_corpus": bad, "kappa": c.kappa })))
        },
    )
}

/// Seeded Fourier functions; even indices have zero mean.
pub fn random_psi(count: usize, seed: u64) -> Vec<Fourier> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let modes = rng.gen_range(1..=4);
            let cos = (0..modes).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let sin = (0..modes).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let constant = if i % 2 == 0 {
                0.0
            } else {
                let m: f64 = rng.gen_range(0.05..1.0);
                if rng.gen::<bool>() {
                    m
                } else {
                    -m
                }
            };
            Fourier { constant, cos, sin }
        })
        .collect()
}

pub fn check_flux(cfg: &ExperimentConfig, exec: Exec) -> CheckRecord {
    let f = &cfg.flux;
    timed(
        "flux",
        "action.flux-hamiltonian",
        format!("flux vanishes iff the mean of psi vanishes, tolerance {:e}, {} samples", f.tolerance, f.samples),
        || {
            let mut pass = true;
            let mut rows = Vec::new();
            for psi in random_psi(f.samples, cfg.seed) {
                let mean = psi.mean();
                let path = TorusPath::Shear(CircleFunction::Fourier(psi));
                let flux = flux_of_path(&path, f.tolerance)?;
                let hamiltonian = path_functionals(&path, 64, exec)?.hamiltonian_length.is_some();
                let vanishes = flux.magnitude() <= f.tolerance;
                let ok = vanishes == (mean == 0.0) && hamiltonian == (mean == 0.0) && (flux.dx.value - mean).abs() <= f.tolerance;
                pass &= ok;
                rows.push(json!({ "mean": mean, "flux": [flux.dx.value, flux.dy.value], "ok": ok }));
            }
            Ok((pass, json!({ "samples": rows })))
        },
    )
}

/// The twelve acceptance checks, in order.
pub fn acceptance_checks(cfg: &ExperimentConfig, exec: Exec) -> Vec<CheckRecord> {
    vec![
        check_iterate_scaling(cfg),
        check_delta_well_defined(cfg),
        check_torus_filling(cfg, exec),
        check_hyperbolic_filling(cfg, exec),
        check_growth_laws(cfg, exec),
        check_certificate_chain(cfg, exec),
        check_propagation(cfg, exec),
        check_width(cfg),
        check_distortion(cfg, exec),
        check_appendix(cfg, exec),
        check_isoperimetric(cfg, exec),
        check_flux(cfg, exec),
    ]
}

/// Growth series for every configured map, with `d_n` where the lift has a
/// designated fixed point.
fn growth_series(cfg: &ExperimentConfig, exec: Exec, report: &mut Report) -> Result<()> {
    let thresholds = ClassifyThresholds {
        elliptic_slack: cfg.classify.elliptic_slack,
        hyperbolic_margin: cfg.classify.hyperbolic_margin,
        parabolic_residual: cfg.classify.parabolic_residual,
    };
    let mut seen = HashSet::new();
    for spec in &cfg.growth.maps {
        let (mut id, map) = resolve_map(spec)?;
        let mut k = 2;
        while !seen.insert(id.clone()) {
            id = format!("{}_{k}", resolve_map(spec)?.0);
            k += 1;
        }
        let series = growth_sequence(&map, &id, cfg.growth.n_max, cfg.growth.grid, exec)?;
        let prop = match LiftedMap::canonical(&map) {
            Ok(lift) if !lift.fixed_points.is_empty() => {
                let res = if map.dim() == 4 { cfg.propagation.grid_4d } else { cfg.propagation.grid };
                Some(propagation(&lift, cfg.growth.n_max, res, exec)?)
            }
            _ => None,
        };
        report.records.push(classification_record(&series, &thresholds));
        report.series.growth.push((series, prop));
    }
    Ok(())
}

fn classification_record(series: &GrowthSeries, thresholds: &ClassifyThresholds) -> CheckRecord {
    timed(&format!("growth_{}", series.map_id), "growth.classification", "Gamma_n >= 1 (class is heuristic)", || {
        let class = classify_growth(series, thresholds).ok();
        let min = series.values.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok((min >= 1.0, json!({ "class": class, "min_gamma": min, "gamma_last": series.values.last() })))
    })
}

fn distortion_series(cfg: &ExperimentConfig, exec: Exec) -> Result<crate::groups::DistortionProfile> {
    let d = &cfg.distortion;
    let pres = Presentation::new(d.q, d.p)?;
    let extra: Vec<BigInt> = (0..=d.liminf_k_max).map(|k| BigInt::from(1u8) << k).collect();
    distortion_profile(pres, d.n_max, &extra, d.radius, d.max_nodes, exec)
}

/// Runs the configured experiment. Errors are configuration or input
/// problems; failed checks are reported in the records.
pub fn run(cfg: &ExperimentConfig, exec: Exec) -> Result<Report> {
    use ExperimentKind as K;
    let kind = cfg.experiment;
    let mut report = Report::new(cfg.seed, kind, exec.is_parallel());
    let wants = |k: K| kind == k || kind == K::All;
    if wants(K::Delta) {
        report.records.push(check_iterate_scaling(cfg));
        report.records.push(check_delta_well_defined(cfg));
    }
    if wants(K::Filling) {
        report.records.push(check_torus_filling(cfg, exec));
        report.records.push(check_hyperbolic_filling(cfg, exec));
        report.series.filling.push(("torus2".into(), torus_estimate(cfg, exec)?));
        report.series.filling.push(("hyperbolic".into(), hyperbolic_estimate(cfg, exec)?));
    }
    if wants(K::Growth) {
        report.records.push(check_growth_laws(cfg, exec));
        growth_series(cfg, exec, &mut report)?;
    }
    if wants(K::Certificate) {
        report.records.push(check_certificate_chain(cfg, exec));
    }
    if wants(K::Propagation) {
        report.records.push(check_propagation(cfg, exec));
    }
    if wants(K::Spectrum) {
        report.records.push(check_width(cfg));
        report.records.push(check_geometric_inequality(cfg, exec));
    }
    if wants(K::Distortion) {
        report.records.push(check_distortion(cfg, exec));
        let profile = distortion_series(cfg, exec)?;
        report.records.push(timed("distortion_profile", crate::report::PLUMBING, "profile computed", || {
            let exact = profile.entries.iter().filter(|e| e.kind == LengthKind::Exact).count();
            Ok((true, json!({ "entries": profile.entries.len(), "exact": exact, "liminf_estimate": profile.liminf_estimate })))
        }));
        report.series.distortion = Some(profile);
    }
    if wants(K::Appendix) {
        report.records.push(check_appendix(cfg, exec));
    }
    if wants(K::Isoperimetric) {
        report.records.push(check_isoperimetric(cfg, exec));
    }
    if wants(K::Flux) {
        report.records.push(check_flux(cfg, exec));
    }
    Ok(report)
}
