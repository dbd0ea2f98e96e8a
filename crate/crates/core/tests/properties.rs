//! Property tests for the invariants the library relies on.

use std::sync::OnceLock;

use approx::assert_abs_diff_eq;
use num_bigint::BigInt;
use proptest::prelude::*;

use symplab::action::{action_difference, flux_of_path, line_integral, CircleFunction, Polyline, PrimitiveForm, TorusPath};
use symplab::filling::{FillingModel, FillingSetup};
use symplab::groups::{britton_reduce, equal_in_group, CayleyBall, Generator, GroupWord, Presentation};
use symplab::growth::growth_sequence;
use symplab::poly::Fourier;
use symplab::zoo::{LiftedMap, SymplecticMap};
use symplab::Exec;

fn bs21() -> Presentation {
    Presentation::new(2, 1).unwrap()
}

/// Image of a word in the affine group of `Z[1/2]`: `a: x -> x + 1`,
/// `b: x -> 2x`, as `(e, t)` for `x -> 2^e x + t` with `t` scaled by `2^64`.
fn affine(w: &GroupWord) -> (i64, i128) {
    let (mut e, mut t) = (0i64, 0i128);
    for (g, k) in w.blocks() {
        let k: i64 = k.try_into().unwrap();
        match g {
            Generator::A => t += k as i128 * (1i128 << (e + 64)),
            Generator::B => e += k,
        }
    }
    (e, t)
}

fn word(steps: &[u8]) -> GroupWord {
    GroupWord::from_blocks(steps.iter().map(|s| match s {
        0 => (Generator::A, BigInt::from(1)),
        1 => (Generator::A, BigInt::from(-1)),
        2 => (Generator::B, BigInt::from(1)),
        _ => (Generator::B, BigInt::from(-1)),
    }))
}

fn steps(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, 0..=max)
}

fn ball() -> &'static CayleyBall {
    static BALL: OnceLock<CayleyBall> = OnceLock::new();
    BALL.get_or_init(|| CayleyBall::explore(bs21(), 10, 1_000_000, Exec::Sequential).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reduction_is_idempotent_and_sound(s in steps(30)) {
        let w = word(&s);
        let r = britton_reduce(&w, bs21());
        prop_assert_eq!(britton_reduce(&r, bs21()), r.clone());
        prop_assert_eq!(r.is_empty(), affine(&w) == (0, 0));
        prop_assert_eq!(affine(&r), affine(&w));
    }

    #[test]
    fn equality_matches_affine_model(u in steps(16), v in steps(16)) {
        let (u, v) = (word(&u), word(&v));
        prop_assert_eq!(equal_in_group(&u, &v, bs21()), affine(&u) == affine(&v));
    }
}

proptest! {
    #[test]
    fn word_length_is_subadditive(u in steps(5), v in steps(5)) {
        let (u, v) = (word(&u), word(&v));
        let b = ball();
        let (lu, lv) = (b.length(&u).unwrap(), b.length(&v).unwrap());
        prop_assert!(lu <= u.length().try_into().unwrap());
        prop_assert_eq!(b.length(&u.inverse()), Some(lu));
        let luv = b.length(&u.concat(&v)).unwrap();
        prop_assert!(luv <= lu + lv);
    }

    #[test]
    fn powers_grow_by_at_most_one(n in 0i64..200) {
        let b = ball();
        if let (Some(l0), Some(l1)) = (b.length(&GroupWord::a_power(n)), b.length(&GroupWord::a_power(n + 1))) {
            prop_assert!(l1 <= l0 + 1 && l0 <= l1 + 1);
        }
    }
}

fn skew_lift() -> &'static LiftedMap {
    static LIFT: OnceLock<LiftedMap> = OnceLock::new();
    LIFT.get_or_init(|| LiftedMap::canonical(&SymplecticMap::standard_skew()).unwrap())
}

fn delta(x: &[f64], y: &[f64]) -> f64 {
    let c = Polyline::open(vec![x.to_vec(), y.to_vec()]);
    action_difference(skew_lift(), 1, x, y, &c, &PrimitiveForm::p_dq(2)).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_difference_is_an_antisymmetric_cocycle(
        p in prop::array::uniform3(0usize..2),
        q in prop::array::uniform3(-1.0f64..2.0),
    ) {
        let pts: Vec<Vec<f64>> = (0..3).map(|i| vec![0.5 * p[i] as f64, q[i]]).collect();
        for z in &pts {
            prop_assert!(skew_lift().is_fixed(z, 1e-12).unwrap());
        }
        let (x, y, z) = (&pts[0], &pts[1], &pts[2]);
        assert_abs_diff_eq!(delta(x, y), -delta(y, x), epsilon = 1e-10);
        assert_abs_diff_eq!(delta(x, z), delta(x, y) + delta(y, z), epsilon = 1e-10);
    }

    #[test]
    fn exact_forms_integrate_to_zero_on_loops(
        verts in prop::collection::vec(prop::array::uniform2(-2.0f64..2.0), 3..8),
        amplitude in -1.0f64..1.0,
        wave in prop::array::uniform2(-2i32..=2),
        phase in 0.0f64..6.3,
    ) {
        let loop_ = Polyline::closed(verts.iter().map(|v| v.to_vec()).collect());
        let plain = PrimitiveForm::p_dq(2);
        let gauged = plain.clone().with_gauge(amplitude, wave.iter().map(|&k| k as f64).collect(), phase);
        let diff = line_integral(&gauged, &loop_).unwrap().value - line_integral(&plain, &loop_).unwrap().value;
        prop_assert!(diff.abs() < 1e-10, "{}", diff);
    }

    #[test]
    fn flux_is_additive_under_concatenation(
        c1 in -1.0f64..1.0, s1 in prop::collection::vec(-1.0f64..1.0, 1..4),
        shift in prop::array::uniform2(-1.0f64..1.0),
    ) {
        let shear = TorusPath::Shear(CircleFunction::Fourier(Fourier { constant: c1, cos: vec![], sin: s1 }));
        let translation = TorusPath::Translation(shift);
        let tol = 1e-10;
        let a = flux_of_path(&shear, tol).unwrap();
        let b = flux_of_path(&translation, tol).unwrap();
        let ab = flux_of_path(&TorusPath::Concat(Box::new(shear), Box::new(translation)), tol).unwrap();
        assert_abs_diff_eq!(ab.dx.value, a.dx.value + b.dx.value, epsilon = 1e-9);
        assert_abs_diff_eq!(ab.dy.value, a.dy.value + b.dy.value, epsilon = 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn filling_bounds_are_ordered(s in 0.05f64..8.0, hyperbolic in any::<bool>()) {
        let model = if hyperbolic { FillingModel::Hyperbolic } else { FillingModel::Torus { n: 1 } };
        let (lo, hi) = FillingSetup::new(model, 12).bounds(s, Exec::Sequential).unwrap();
        prop_assert!(0.0 <= lo && lo <= hi, "{} > {}", lo, hi);
    }
}

fn small_maps() -> Vec<SymplecticMap> {
    vec![
        SymplecticMap::standard_skew(),
        SymplecticMap::linear2([[2, 1], [1, 1]]).unwrap(),
        SymplecticMap::linear2([[1, 0], [3, 1]]).unwrap(),
        SymplecticMap::peaked_twist(0.1, 0.4),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn growth_is_at_least_one_and_submultiplicative(which in 0usize..4, res in 4usize..12) {
        let map = &small_maps()[which];
        let g = growth_sequence(map, "m", 12, res, Exec::Sequential).unwrap();
        for n in 1..=12 {
            prop_assert!(g.gamma(n) >= 1.0 - 1e-12);
        }
        let upper = |n: usize| g.values[n - 1] + g.error_bars[n - 1];
        for m in 1..=6 {
            for n in 1..=6 {
                prop_assert!(g.gamma(m + n) <= upper(m) * upper(n) * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn refining_the_grid_never_lowers_the_maximum(which in 0usize..4, res in 2usize..10) {
        let map = &small_maps()[which];
        let coarse = growth_sequence(map, "m", 6, res, Exec::Sequential).unwrap();
        let fine = growth_sequence(map, "m", 6, 2 * res, Exec::Sequential).unwrap();
        for i in 0..6 {
            prop_assert!(fine.values[i] >= coarse.values[i] * (1.0 - 1e-12));
            prop_assert!(fine.values[i] <= coarse.values[i] + coarse.error_bars[i]);
        }
    }
}
