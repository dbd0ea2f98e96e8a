//! The twelve acceptance criteria. Each passes only if the library's own check
//! passes and an independent oracle computed here agrees. One PASS/FAIL line
//! per criterion goes to stderr.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::io::Write;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symplab::action::{
    action_difference, corpus_report, flux_of_path, hamiltonian_action_spectrum, isoperimetric_consistency, loop_corpus,
    lower_bound_certificate, verify_iterate_scaling, width_conjugation_check, winding_corpus, CircleFunction,
    FillingLower, Polyline, PrimitiveForm, TorusPath,
};
use symplab::filling::{estimate, geometric_grid, FillingModel, FillingSetup};
use symplab::groups::{log_word_construct, CayleyBall, Generator, GroupWord, Presentation};
use symplab::config::ExperimentConfig;
use symplab::growth::{growth_sequence, propagation};
use symplab::linalg::IntMatrix;
use symplab::poly::Fourier;
use symplab::verify::acceptance_checks;
use symplab::zoo::appendix::{contractible_obstruction, half_flow, involution, is_fixed_on_quotient};
use symplab::zoo::{standard_members, Dynamics, LiftedMap, SymplecticMap};
use symplab::Exec;

type Outcome = (bool, String);

const EXEC: Exec = Exec::Parallel;

/// `int_0^{1/2} sin(2 pi x) / (2 pi) dx`.
fn skew_pair_action() -> f64 {
    1.0 / (2.0 * PI * PI)
}

fn skew_lift() -> LiftedMap {
    LiftedMap::canonical(&SymplecticMap::standard_skew()).unwrap()
}

const X: [f64; 2] = [0.0, 0.3];
const Y: [f64; 2] = [0.5, 0.3];

fn iterate_scaling() -> Outcome {
    let start = Instant::now();
    let lift = skew_lift();
    let gamma = Polyline::open(vec![X.to_vec(), Y.to_vec()]);
    let r = verify_iterate_scaling(&lift, &X, &Y, &gamma, &PrimitiveForm::p_dq(2), 64).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let base_ok = (r.base_delta.abs() - skew_pair_action()).abs() < 1e-10;
    let pass = r.max_deviation < 1e-8 && base_ok && secs < 5.0;
    (pass, format!("max deviation {:.2e}, |delta| = {:.10}, {secs:.2} s", r.max_deviation, r.base_delta.abs()))
}

fn delta_well_defined() -> Outcome {
    let lift = skew_lift();
    let curves = [
        Polyline::open(vec![X.to_vec(), Y.to_vec()]),
        Polyline::open(vec![X.to_vec(), vec![0.1, 0.9], vec![0.4, -0.2], Y.to_vec()]),
    ];
    let forms = [PrimitiveForm::p_dq(2), PrimitiveForm::minus_q_dp(2)];
    let mut values = Vec::new();
    for c in &curves {
        for a in &forms {
            values.push(action_difference(&lift, 1, &X, &Y, c, a).unwrap().value);
        }
    }
    let spread = values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max);
    let oracle = (values[0].abs() - skew_pair_action()).abs();
    (spread < 1e-9 && oracle < 1e-10, format!("spread {spread:.2e}, distance to closed form {oracle:.2e}"))
}

fn torus_filling() -> Outcome {
    let start = Instant::now();
    let setup = FillingSetup::new(FillingModel::Torus { n: 1 }, 100);
    let grid = geometric_grid(0.05, 8.0, 8);
    let est = estimate(&setup, &grid, EXEC).unwrap();
    let mut pass = true;
    let mut worst_lo = f64::INFINITY;
    let mut worst_hi: f64 = 0.0;
    for s in [0.5, 1.0, 2.0, 4.0, 8.0] {
        let i = grid.iter().position(|g| (g - s).abs() < 1e-12).expect("grid contains s");
        worst_lo = worst_lo.min(est.u_lo[i] / s);
        worst_hi = worst_hi.max(est.u_hi[i] / s);
        pass &= est.u_lo[i] >= 0.49 * s && est.u_hi[i] <= 1.01 * s;
    }
    let (v_lo, v_hi) = est.v_from_u(8.0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    pass &= v_lo <= 2.83 && v_hi >= 4.0 && secs < 30.0;
    (pass, format!("min u_lo/s {worst_lo:.3}, max u_hi/s {worst_hi:.4}, v(8) in [{v_lo:.3}, {v_hi:.3}], {secs:.2} s"))
}

fn hyperbolic_filling() -> Outcome {
    let setup = FillingSetup::new(FillingModel::Hyperbolic, 16);
    let grid: Vec<f64> = (0..=18).map(|k| 1.0 + 0.5 * k as f64).collect();
    let est = estimate(&setup, &grid, EXEC).unwrap();
    let worst = est.u_hi.iter().cloned().fold(0.0, f64::max);
    // A disc of radius s has area / length = tanh(s / 2), so u >= tanh(s / 2).
    let lower_ok = grid.iter().zip(&est.u_lo).all(|(s, lo)| (lo - (s / 2.0).tanh()).abs() < 1e-9);
    (worst <= 1.001 && lower_ok, format!("max u_hi {worst:.6} on s in [1, 10]"))
}

fn shear_norm(c: f64) -> f64 {
    0.5 * (c.abs() + (c * c + 4.0).sqrt())
}

fn growth_laws() -> Outcome {
    let translation = growth_sequence(&SymplecticMap::translation2([0.5, 0.25]), "t", 256, 64, EXEC).unwrap();
    let translation_ok = translation.values.iter().all(|v| *v == 1.0);

    // psi = sin(2 pi x) / (2 pi) has max |psi'| = 1.
    let skew = growth_sequence(&SymplecticMap::standard_skew(), "s", 100, 64, EXEC).unwrap();
    let skew_dev = (1..=100).map(|n| (skew.gamma(n) - shear_norm(n as f64)).abs()).fold(0.0, f64::max);

    let twist = SymplecticMap::peaked_twist(0.1, 0.4);
    let profile = twist.twist_profile().unwrap();
    let h = 1e-4;
    let hamiltonian = |p: f64| profile.value(&[p]);
    let max_h2 = (0..=40_000)
        .map(|k| {
            let p = 0.4 * k as f64 / 40_000.0;
            ((hamiltonian(p + h) - 2.0 * hamiltonian(p) + hamiltonian(p - h)) / (h * h)).abs()
        })
        .fold(0.0, f64::max);
    let series = growth_sequence(&twist, "w", 200, 400, EXEC).unwrap();
    let twist_dev = (50..=200).map(|n| (series.gamma(n) / n as f64 / max_h2 - 1.0).abs()).fold(0.0, f64::max);

    (
        translation_ok && skew_dev < 1e-6 && twist_dev < 0.05,
        format!("translation flat: {translation_ok}, skew deviation {skew_dev:.2e}, twist deviation {:.2}% of max|H''| = {max_h2:.3}", 100.0 * twist_dev),
    )
}

fn certificate_chain() -> Outcome {
    let c = skew_pair_action();
    let b = 0.5;
    let est = estimate(&FillingSetup::new(FillingModel::Torus { n: 1 }, 100), &geometric_grid(0.05, 8.0, 8), EXEC).unwrap();
    let growth = growth_sequence(&SymplecticMap::standard_skew(), "s", 100, 200, EXEC).unwrap();
    let mut pass = true;
    let mut ratios = Vec::new();
    for n in 1..=100u32 {
        let cert = lower_bound_certificate(c, n, FillingLower::Estimate(&est), b).unwrap();
        let i = n as usize - 1;
        pass &= cert.bound <= growth.values[i] + growth.error_bars[i];
        // Independent sanity: the certificate never beats the closed-form shear norm.
        pass &= cert.bound <= shear_norm(n as f64);
        ratios.push(cert.bound / (n as f64).sqrt());
    }
    // At least sqrt(n): the ratio to sqrt(n) stays bounded below on the tail.
    let tail_min = ratios[24..].iter().cloned().fold(f64::INFINITY, f64::min);
    let pass = pass && tail_min > 0.1;
    (pass, format!("certificate <= Gamma_n + err for n <= 100; min certificate/sqrt(n) on n >= 25: {tail_min:.3}"))
}

fn propagation_inequality() -> Outcome {
    let mut pass = true;
    let mut checked = Vec::new();
    for (name, map) in standard_members() {
        let lift = LiftedMap::canonical(&map).unwrap();
        if lift.fixed_points.is_empty() {
            continue;
        }
        let diam = lift.fundamental_domain.iter().map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt();
        let constant = 1.0 + diam;
        let res = if map.dim() == 4 { 5 } else { 24 };
        let growth = growth_sequence(&map, name, 64, 64, EXEC).unwrap();
        let prop = propagation(&lift, 64, res, EXEC).unwrap();
        let worst = (0..64)
            .map(|i| prop.values[i] / (constant * (growth.values[i] + growth.error_bars[i])))
            .fold(0.0, f64::max);
        pass &= worst <= 1.0;
        checked.push(format!("{name} {worst:.3}"));
    }
    (pass, format!("worst d_n / (c (Gamma_n + err)): {}", checked.join(", ")))
}

fn width() -> Outcome {
    let h0 = 0.1;
    let map = SymplecticMap::peaked_twist(h0, 0.4);
    let profile = map.twist_profile().unwrap();
    let scaling = (1..=32)
        .map(|n| (hamiltonian_action_spectrum(&profile.scaled(n as f64), 1).unwrap().width - n as f64 * h0).abs())
        .fold(0.0, f64::max);
    let conj = [[0.0, 0.37], [0.25, 0.0], [0.5, 0.5]]
        .iter()
        .map(|s| width_conjugation_check(&map, &SymplecticMap::translation2(*s)).unwrap().difference.abs())
        .fold(0.0, f64::max);
    (scaling < 1e-9 && conj < 1e-9, format!("max |width(f^n) - n h0| {scaling:.2e}, conjugation change {conj:.2e}"))
}

/// `BS(2, 1)` acts faithfully on `Z[1/2]` by `a: x -> x + 1`, `b: x -> 2x`.
/// An element is `x -> 2^e x + t`, with `t` stored scaled by `2^SCALE`.
const SCALE: i32 = 24;

fn affine_step(state: (i32, i64), g: Generator, sign: i64) -> (i32, i64) {
    let (e, t) = state;
    match g {
        Generator::A => (e, t + sign * (1i64 << (e + SCALE))),
        Generator::B => (e + sign as i32, t),
    }
}

fn affine_of(w: &GroupWord) -> (i32, i64) {
    let mut s = (0, 0);
    for (g, k) in w.blocks() {
        let k = k.to_i64().unwrap();
        match g {
            Generator::A => s = (s.0, s.1 + k * (1i64 << (s.0 + SCALE))),
            Generator::B => s = (s.0 + k as i32, s.1),
        }
    }
    s
}

/// Word lengths of every element within `radius`, by BFS in the affine model.
fn affine_ball(radius: usize) -> HashMap<(i32, i64), usize> {
    let mut dist = HashMap::from([((0, 0), 0usize)]);
    let mut frontier = vec![(0i32, 0i64)];
    for d in 1..=radius {
        let mut next = Vec::new();
        for s in &frontier {
            for (g, sign) in [(Generator::A, 1), (Generator::A, -1), (Generator::B, 1), (Generator::B, -1)] {
                let t = affine_step(*s, g, sign);
                if let std::collections::hash_map::Entry::Vacant(v) = dist.entry(t) {
                    v.insert(d);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    dist
}

fn bs_distortion() -> Outcome {
    let pres = Presentation::new(2, 1).unwrap();
    let start = Instant::now();
    let timed = CayleyBall::explore(pres, 12, 4_000_000, EXEC).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let ball = CayleyBall::explore(pres, 14, 4_000_000, EXEC).unwrap();
    let oracle = affine_ball(14);
    let mut pass = secs < 60.0 && ball.size() == oracle.len();
    let mut worst_slack = f64::INFINITY;
    for n in 1..=64i64 {
        let len = ball.length(&GroupWord::a_power(n));
        let expected = oracle.get(&(0, n << SCALE)).copied();
        pass &= len.is_some() && len == expected;
        if let Some(l) = len {
            let slack = 2.0 * (n as f64).log2() + 3.0 - l as f64;
            worst_slack = worst_slack.min(slack);
            pass &= slack >= 0.0;
        }
    }
    for k in 0..=20u32 {
        let n = BigInt::from(1u8) << k;
        let w = log_word_construct(pres, &n).unwrap();
        pass &= affine_of(&w) == (0, (1i64 << k) << SCALE);
        pass &= w.length() <= BigInt::from(3 * k + 5);
    }
    (
        pass,
        format!(
            "radius 12 ball {} in {secs:.3} s; radius 14 ball {} matches affine model; min slack vs 2 log2 n + 3: {worst_slack:.3}",
            timed.size(),
            ball.size()
        ),
    )
}

fn mod1(v: f64) -> f64 {
    v - v.floor()
}

fn same_mod_z4(a: &[f64; 4], b: &[f64; 4]) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let d = mod1(x - y);
        d.min(1.0 - d) < 1e-12
    })
}

fn appendix() -> Outcome {
    let f = |z: &[f64; 4]| [z[0], z[1] + 0.5, z[2], z[3]];
    let g = |z: &[f64; 4]| [z[0], z[1] + 0.5, -z[2], -z[3]];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut pass = true;
    for _ in 0..200 {
        let z: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
        pass &= same_mod_z4(&half_flow(1.0, &z), &f(&z));
        pass &= same_mod_z4(&involution(&z), &g(&z));
        pass &= same_mod_z4(&f(&f(&z)), &z);
        pass &= same_mod_z4(&g(&g(&z)), &z);
        pass &= same_mod_z4(&f(&g(&z)), &g(&f(&z)));
        pass &= !is_fixed_on_quotient(&z);
    }
    // On the quotient, z is fixed iff f z = z or f z = g z upstairs.
    for idx in 0..8usize.pow(4) {
        let z: [f64; 4] = std::array::from_fn(|k| ((idx / 8usize.pow(k as u32)) % 8) as f64 / 8.0);
        let fixed = same_mod_z4(&f(&z), &z) || same_mod_z4(&f(&z), &g(&z));
        let half = |v: f64| v == 0.0 || v == 0.5;
        pass &= fixed == (half(z[2]) && half(z[3]));
        pass &= is_fixed_on_quotient(&z) == fixed;
    }
    let mut bounded = true;
    for inv in [false, true] {
        let s = growth_sequence(&SymplecticMap::quotient(inv), "q", 32, 4, EXEC).unwrap();
        bounded &= s.values.iter().all(|v| (v - 1.0).abs() < 1e-12);
    }
    let report = contractible_obstruction();
    let fixing: Vec<_> = report.lifts.iter().filter(|l| l.fixed_witness.is_some()).collect();
    let obstruction =
        fixing.len() == 1 && fixing[0].homology_action == IntMatrix::diag(&[1, 1, -1, -1]) && !fixing[0].acts_trivially;
    (
        pass && bounded && obstruction,
        format!("relations hold: {pass}, Gamma_n bounded: {bounded}, single point-fixing lift acts as diag(1,1,-1,-1): {obstruction}"),
    )
}

/// Winding number about `z` by summing turning angles.
fn winding_by_angles(c: &Polyline, z: [f64; 2]) -> i64 {
    let n = c.vertices.len();
    let mut total = 0.0;
    for i in 0..n {
        let a = &c.vertices[i];
        let b = &c.vertices[(i + 1) % n];
        let (ax, ay, bx, by) = (a[0] - z[0], a[1] - z[1], b[0] - z[0], b[1] - z[1]);
        total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
    }
    (total / TAU).round() as i64
}

fn max_winding(c: &Polyline) -> i64 {
    let xs = c.vertices.iter().map(|v| v[0]);
    let ys = c.vertices.iter().map(|v| v[1]);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    let mut m = 0;
    for i in x0.floor() as i64..=x1.ceil() as i64 {
        for j in y0.floor() as i64..=y1.ceil() as i64 {
            m = m.max(winding_by_angles(c, [i as f64, j as f64]).abs());
        }
    }
    m
}

fn isoperimetric() -> Outcome {
    let loops = loop_corpus(200, 20240611);
    let report = corpus_report(&loops, 10.0, EXEC);
    let zero_winding = loops.iter().all(|l| max_winding(l) == 0);
    let bad = winding_corpus(50, 20240611);
    let bad_wind = bad.iter().all(|l| max_winding(l) != 0);
    let all_rejected = bad.iter().all(|l| isoperimetric_consistency(l, 10.0).is_err());
    let pass = report.accepted == 200 && report.max_ratio.is_finite() && zero_winding && bad_wind && all_rejected;
    (pass, format!("200 accepted, max |area|/length = {:.4}; 50 winding loops rejected: {all_rejected}", report.max_ratio))
}

fn flux() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut pass = true;
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let modes = rng.gen_range(1..=5);
        let cos: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sin: Vec<f64> = (0..modes).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let constant = if i % 2 == 0 { 0.0 } else { rng.gen_range(0.05..1.0) * if rng.gen() { 1.0 } else { -1.0 } };
        // Every non-constant mode integrates to zero over the circle, so the
        // mean is the constant term.
        let mean = constant;
        let f = flux_of_path(&TorusPath::Shear(CircleFunction::Fourier(Fourier { constant, cos, sin })), 1e-10).unwrap();
        let vanishes = f.magnitude() <= 1e-10;
        pass &= vanishes == (mean == 0.0);
        worst = worst.max((f.dx.value - mean).abs()).max(f.dy.value.abs());
    }
    (pass && worst <= 1e-10, format!("flux vanishes exactly for the 10 mean-zero psi; max error vs mean {worst:.2e}"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("1 iterate scaling", iterate_scaling),
        ("2 action difference well defined", delta_well_defined),
        ("3 torus filling", torus_filling),
        ("4 hyperbolic filling", hyperbolic_filling),
        ("5 growth laws", growth_laws),
        ("6 certificate chain", certificate_chain),
        ("7 propagation inequality", propagation_inequality),
        ("8 width scaling and conjugation", width),
        ("9 BS(2,1) distortion", bs_distortion),
        ("10 quotient example", appendix),
        ("11 isoperimetric consistency", isoperimetric),
        ("12 flux criterion", flux),
    ];
    let records = acceptance_checks(&ExperimentConfig::defaults(), EXEC);
    assert_eq!(records.len(), criteria.len());
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for ((name, check), record) in criteria.into_iter().zip(&records) {
        let (oracle, detail) = check();
        let pass = oracle && record.passed;
        let _ = writeln!(
            err,
            "acceptance {} {name}: library check {} ({:.0} ms); oracle: {detail}",
            if pass { "PASS" } else { "FAIL" },
            if record.passed { "passed" } else { "failed" },
            record.runtime_ms
        );
        if !pass {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
