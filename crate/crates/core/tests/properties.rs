use barn_core::compactness::{compactness, factorized_ratio, ratio_of_shape};
use barn_core::fields::{compactness_contours, AxisRange};
use barn_core::geometry::{
    gamma, params_from_ratios, ratios_from_params, surface, volume, HouseParams, ShapeRatios,
    ALPHA_MAX, ALPHA_MIN,
};
use barn_core::optimize_floor::{
    optimize_fixed_floor, solve_cubic, surface_of_width, surface_of_width_derivative,
};
use barn_core::optimize_volume::{gamma_gradient, optimal_ratios, optimize_fixed_volume};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn slope() -> impl Strategy<Value = f64> {
    (1.0f64..85.0).prop_map(f64::to_radians)
}

fn design() -> impl Strategy<Value = HouseParams> {
    (1.0f64..40.0, 1.0f64..40.0, 1.0f64..12.0, slope())
        .prop_map(|(w, l, h, a)| HouseParams::new(w, l, h, a).unwrap())
}

/// Positive root by plain bisection, independent of the solver under test.
fn bisection_root(a: f64, b: f64, c: f64) -> f64 {
    let f = |x: f64| a * x * x * x + b * x * x + c;
    let (mut lo, mut hi) = (0.0, 1.0);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn factorization_identity(r in 0.05f64..20.0, k in 0.05f64..20.0, alpha in slope(), v in 1.0f64..1e5) {
        let s = ShapeRatios::new(r, k, alpha).unwrap();
        let p = params_from_ratios(&s, v).unwrap();
        let direct = surface(&p).unwrap().total;
        let factored = v.powf(2.0 / 3.0) * gamma(&s).unwrap();
        prop_assert!(rel(direct, factored) <= 1e-10);
        prop_assert!(rel(volume(&p).unwrap(), v) <= 1e-10);
    }

    #[test]
    fn ratio_round_trip(r in 0.05f64..20.0, k in 0.05f64..20.0, alpha in slope(), v in 1.0f64..1e5) {
        let s = ShapeRatios::new(r, k, alpha).unwrap();
        let back = ratios_from_params(&params_from_ratios(&s, v).unwrap()).unwrap();
        prop_assert!(rel(back.r, r) <= 1e-10 && rel(back.k, k) <= 1e-10);
    }

    #[test]
    fn breakdown_adds_up(p in design()) {
        let b = surface(&p).unwrap();
        prop_assert!(rel(b.walls_long + b.walls_short + b.roof + b.gables, b.total) <= 1e-12);
    }

    #[test]
    fn scaling_law(p in design(), s in 0.01f64..100.0) {
        let q = p.scaled(s).unwrap();
        prop_assert!(rel(surface(&q).unwrap().total, s * s * surface(&p).unwrap().total) <= 1e-12);
        prop_assert!(rel(volume(&q).unwrap(), s * s * s * volume(&p).unwrap()) <= 1e-12);
    }

    #[test]
    fn surface_increases_with_slope(p in design(), d in 0.001f64..0.2) {
        prop_assume!(p.alpha + d < std::f64::consts::FRAC_PI_2);
        let steeper = HouseParams { alpha: p.alpha + d, ..p };
        prop_assert!(surface(&steeper).unwrap().total > surface(&p).unwrap().total);
    }

    #[test]
    fn gradient_matches_central_differences(r in 0.2f64..5.0, k in 0.2f64..5.0, alpha in slope()) {
        let s = ShapeRatios::new(r, k, alpha).unwrap();
        let (dr, dk) = gamma_gradient(&s).unwrap();
        let h = 1e-6;
        let g = |r: f64, k: f64| gamma(&ShapeRatios::new(r, k, alpha).unwrap()).unwrap();
        let fd_r = (g(r + h, k) - g(r - h, k)) / (2.0 * h);
        let fd_k = (g(r, k + h) - g(r, k - h)) / (2.0 * h);
        // relative to the gradient scale so near-zero components don't blow up
        let scale = dr.abs().max(dk.abs()).max(1e-3);
        prop_assert!((dr - fd_r).abs() / scale <= 1e-5, "{} vs {}", dr, fd_r);
        prop_assert!((dk - fd_k).abs() / scale <= 1e-5, "{} vs {}", dk, fd_k);
    }

    #[test]
    fn compactness_dual_paths_agree(p in design()) {
        let rep = compactness(&p).unwrap();
        let factored = factorized_ratio(&ratios_from_params(&p).unwrap()).unwrap();
        prop_assert!(rel(rep.ratio, factored) <= 1e-9);
        prop_assert!(rel(rep.ratio, ratio_of_shape(&ratios_from_params(&p).unwrap()).unwrap()) <= 1e-9);
        prop_assert!(rel(rep.headroom, rep.surface - rep.surface_min) <= 1e-9 || rep.headroom.abs() < 1e-6);
    }

    #[test]
    fn compactness_scale_free(p in design(), s in prop::sample::select(vec![0.5, 3.0, 10.0, 0.1, 2.0])) {
        let a = compactness(&p).unwrap().ratio;
        let b = compactness(&p.scaled(s).unwrap()).unwrap().ratio;
        prop_assert!(rel(a, b) <= 1e-9);
    }

    #[test]
    fn floor_surface_matches_geometry(w in 0.5f64..40.0, f in 10.0f64..800.0, h in 1.0f64..10.0, alpha in slope()) {
        let via_width = surface_of_width(w, f, h, alpha).unwrap();
        let direct = surface(&HouseParams::new(w, f / w, h, alpha).unwrap()).unwrap().total;
        prop_assert_eq!(via_width, direct);
    }

    #[test]
    fn floor_derivative_matches_central_differences(w in 1.0f64..40.0, f in 10.0f64..800.0, h in 1.0f64..10.0, alpha in slope()) {
        let d = surface_of_width_derivative(w, f, h, alpha).unwrap();
        let step = 1e-5 * w;
        let s = |x: f64| surface_of_width(x, f, h, alpha).unwrap();
        let fd = (s(w + step) - s(w - step)) / (2.0 * step);
        let scale = (2.0 * h).max(2.0 * f * h / (w * w)).max(w * alpha.tan());
        prop_assert!((d - fd).abs() / scale <= 1e-6, "{} vs {}", d, fd);
    }

    #[test]
    fn floor_optimum_invariants(f in 20.0f64..800.0, h in 2.0f64..10.0, alpha in slope()) {
        let o = optimize_fixed_floor(f, h, alpha).unwrap();
        prop_assert!(rel(o.width * o.length, f) <= 1e-10);
        prop_assert!(o.cubic_residual <= 1e-10);
        prop_assert!(rel(o.surface_min, surface(&o.params()).unwrap().total) <= 1e-10);
        let delta = 1e-3 * o.width;
        let s = |w: f64| surface_of_width(w, f, h, alpha).unwrap();
        prop_assert!(s(o.width - delta) > o.surface_min);
        prop_assert!(s(o.width + delta) > o.surface_min);
        // fewer free variables can only cost envelope area
        let same_volume = optimize_fixed_volume(f * h, alpha).unwrap();
        prop_assert!(o.surface_min >= same_volume.surface_min * (1.0 - 1e-9));
    }

    #[test]
    fn floor_and_volume_optima_share_width(v in 10.0f64..1e4, alpha in slope()) {
        let vo = optimize_fixed_volume(v, alpha).unwrap();
        let fo = optimize_fixed_floor(vo.width * vo.length, vo.height, alpha).unwrap();
        prop_assert!(rel(fo.width, vo.width) <= 1e-8);
    }
}

#[test]
fn cubic_matches_bisection_on_1000_triples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        let a = 10f64.powf(rng.random_range(-3.0..2.0));
        let b = 10f64.powf(rng.random_range(-2.0..2.0));
        let c = -(10f64.powf(rng.random_range(-2.0..5.0)));
        let got = solve_cubic(a, b, c).unwrap();
        assert!(got.root > 0.0);
        assert!(got.residual <= 1e-12, "{a} {b} {c}: {got:?}");
        let oracle = bisection_root(a, b, c);
        assert!(rel(got.root, oracle) <= 1e-10, "{a} {b} {c}: {} vs {oracle}", got.root);
    }
}

#[test]
fn compactness_at_least_one_on_10000_designs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    for _ in 0..10_000 {
        let p = HouseParams::from_degrees(
            rng.random_range(1.0..40.0),
            rng.random_range(1.0..40.0),
            rng.random_range(1.0..12.0),
            rng.random_range(1.0..85.0),
        )
        .unwrap();
        assert!(compactness(&p).unwrap().ratio >= 1.0 - 1e-9, "{p:?}");
    }
}

#[test]
fn stationarity_across_domain() {
    for i in 0..100 {
        let alpha = ALPHA_MIN + (ALPHA_MAX - ALPHA_MIN) * i as f64 / 99.0;
        // k_min grows like 1/cos α; stay where the analytic partials are well scaled
        let (r, k) = optimal_ratios(alpha).unwrap();
        let (dr, dk) = gamma_gradient(&ShapeRatios::new(r, k, alpha).unwrap()).unwrap();
        assert!(dr.abs() <= 1e-10 && dk.abs() <= 1e-10, "alpha {alpha}: {dr} {dk}");
    }
}

#[test]
fn optimal_ratios_increase_with_slope() {
    let mut prev = optimal_ratios(ALPHA_MIN).unwrap();
    for i in 1..1000 {
        let alpha = ALPHA_MIN + (ALPHA_MAX - ALPHA_MIN) * i as f64 / 999.0;
        let cur = optimal_ratios(alpha).unwrap();
        assert!(cur.0 > prev.0 && cur.1 > prev.1);
        prev = cur;
    }
}

#[test]
fn minimal_surface_scale_law() {
    for d in [1.0, 20.0, 45.0, 80.0] {
        let alpha = f64::to_radians(d);
        let unit = optimize_fixed_volume(1.0, alpha).unwrap().surface_min;
        for v in [0.3, 17.0, 2500.0] {
            let s = optimize_fixed_volume(v, alpha).unwrap().surface_min;
            assert!(rel(s, v.powf(2.0 / 3.0) * unit) <= 1e-10);
        }
    }
}

#[test]
fn closed_form_beats_every_grid_node() {
    use barn_core::oracle::log_space;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let nodes = log_space(0.05, 20.0, 400);
    for _ in 0..25 {
        let alpha = rng.random_range(5.0f64..75.0).to_radians();
        let (r, k) = optimal_ratios(alpha).unwrap();
        let best = gamma(&ShapeRatios::new(r, k, alpha).unwrap()).unwrap();
        for &rr in &nodes {
            for &kk in &nodes {
                let g = gamma(&ShapeRatios::new(rr, kk, alpha).unwrap()).unwrap();
                assert!(best <= g, "alpha {alpha}: ({rr}, {kk})");
            }
        }
    }
}

fn inside(poly: &[[f64; 2]], p: [f64; 2]) -> bool {
    let mut hit = false;
    for w in poly.windows(2) {
        let ([x0, y0], [x1, y1]) = (w[0], w[1]);
        if (y0 > p[1]) != (y1 > p[1]) && p[0] < x0 + (p[1] - y0) * (x1 - x0) / (y1 - y0) {
            hit = !hit;
        }
    }
    hit
}

#[test]
fn contours_hit_their_levels_and_nest() {
    let alpha = 45f64.to_radians();
    // wide enough that the 1.2 level closes inside the window
    let range = AxisRange::new(0.2, 8.0);
    let set = compactness_contours(alpha, &[1.05, 1.1, 1.2], range, range, 256).unwrap();
    for c in &set.contours {
        assert_eq!(c.polylines.len(), 1);
        for line in &c.polylines {
            for &[r, k] in line {
                let v = ratio_of_shape(&ShapeRatios::new(r, k, alpha).unwrap()).unwrap();
                assert!(rel(v, c.level) <= 5e-3, "level {} at ({r}, {k}): {v}", c.level);
            }
        }
    }
    // level 1.1 closes around the optimum
    let (r0, k0) = optimal_ratios(alpha).unwrap();
    let ring = &set.contours[1].polylines[0];
    assert_eq!(ring.first(), ring.last());
    assert!(inside(ring, [r0, k0]));
    // sublevel sets nest
    let outer = &set.contours[2].polylines[0];
    assert_eq!(outer.first(), outer.last());
    for &p in &set.contours[0].polylines[0] {
        assert!(inside(outer, p));
    }
}
