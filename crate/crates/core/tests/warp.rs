use proptest::prelude::*;
use weylspec_core::warp::eval::eval_value;
use weylspec_core::warp::{builtin_model, eval_warp, parse_warp, BinOp, Func, WarpExpr};

const CORPUS: &[&str] = &[
    "r",
    "s",
    "pi",
    "e",
    "2",
    "0.5",
    "1e-3",
    "2.5e2",
    "-r",
    "-(-r)",
    "r + s",
    "r - s - 1",
    "r - (s - 1)",
    "r * s / 2",
    "r / (s * 2)",
    "r ^ 2",
    "r ^ 2 ^ 3",
    "(r ^ 2) ^ 3",
    "-r ^ 2",
    "(-r) ^ 2",
    "sinh(r)",
    "cosh(r) - 1",
    "tanh(r / 2)",
    "exp(r)",
    "exp(-r)",
    "log(1 + r)",
    "sqrt(r^2 + 1)",
    "abs(sin(s))",
    "tan(s / 4)",
    "r * exp(r^2 * sin(s/2)^2 + r)",
    "r * (1 + 0.3 * sin(s)^2)",
    "r * (2 + sin(s))",
    "exp(0.5 * r) * cos(s)^2 + 1",
    "sinh(r) / r",
    "2 * pi * r",
    "e ^ r",
    "exp(r) - exp(-r)",
    "((r))",
    "r*s*r*s",
    "1/(1/r)",
];

#[test]
fn corpus_round_trips_through_display() {
    assert!(CORPUS.len() >= 30);
    for text in CORPUS {
        let ast = parse_warp(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let shown = ast.to_string();
        let again = parse_warp(&shown).unwrap_or_else(|e| panic!("{shown}: {e}"));
        assert_eq!(ast, again, "{text} -> {shown}");
    }
}

#[test]
fn parse_examples() {
    assert_eq!(parse_warp("sinh(r)").unwrap(), WarpExpr::func(Func::Sinh, WarpExpr::r()));
    let err = parse_warp("sin(").unwrap_err();
    assert_eq!(err.position, 4);
    let app = parse_warp("r*exp(r^2*sin(s/2)^2 + r)").unwrap();
    let two = || WarpExpr::num(2.0);
    let g = WarpExpr::bin(
        BinOp::Pow,
        WarpExpr::func(Func::Sin, WarpExpr::bin(BinOp::Div, WarpExpr::s(), two())),
        two(),
    );
    let expected = WarpExpr::bin(
        BinOp::Mul,
        WarpExpr::r(),
        WarpExpr::func(
            Func::Exp,
            WarpExpr::bin(
                BinOp::Add,
                WarpExpr::bin(BinOp::Mul, WarpExpr::bin(BinOp::Pow, WarpExpr::r(), two()), g),
                WarpExpr::r(),
            ),
        ),
    );
    assert_eq!(app, expected);
}

#[test]
fn appendix_warp_values() {
    let e = parse_warp("r*exp(r^2*sin(s/2)^2 + r)").unwrap();
    let j = eval_warp(&e, 2.0, 0.0).unwrap();
    assert!((j.psi - 2.0 * 2f64.exp()).abs() < 1e-12);
    assert_eq!(j.psi_s, 0.0);
    for r in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let j = eval_warp(&e, r, 0.0).unwrap();
        // r e^r: ψ_rr/ψ = 1 + 2/r
        assert!((j.psi_rr / j.psi - (1.0 + 2.0 / r)).abs() < 1e-12);
    }
    let j = eval_warp(&parse_warp("exp(r)").unwrap(), 1.0, 0.0).unwrap();
    let e1 = std::f64::consts::E;
    assert!((j.psi - e1).abs() < 1e-15 && (j.psi_r - e1).abs() < 1e-15 && (j.psi_rr - e1).abs() < 1e-15);
    assert_eq!(j.psi_s, 0.0);
}

fn leaf() -> impl Strategy<Value = WarpExpr> {
    prop_oneof![
        Just(WarpExpr::r()),
        Just(WarpExpr::s()),
        prop_oneof![Just(0.5), Just(1.0), Just(2.0), Just(3.25), Just(1e-3), Just(0.1)].prop_map(WarpExpr::num),
    ]
}

/// Trees that stay smooth and finite on `[0.5, 2] × [−1, 1]`.
fn smooth_tree() -> impl Strategy<Value = WarpExpr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| WarpExpr::bin(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| WarpExpr::bin(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| WarpExpr::bin(BinOp::Mul, a, b)),
            // denominators bounded away from zero
            (inner.clone(), inner.clone()).prop_map(|(a, b)| WarpExpr::bin(
                BinOp::Div,
                a,
                WarpExpr::bin(BinOp::Add, WarpExpr::num(2.0), WarpExpr::func(Func::Sin, b))
            )),
            inner.clone().prop_map(|a| WarpExpr::bin(BinOp::Pow, a, WarpExpr::num(2.0))),
            inner.clone().prop_map(|a| WarpExpr::func(Func::Sin, a)),
            inner.clone().prop_map(|a| WarpExpr::func(Func::Cos, a)),
            inner.clone().prop_map(|a| WarpExpr::func(Func::Tanh, a)),
            inner.clone().prop_map(|a| WarpExpr::func(Func::Exp, WarpExpr::func(Func::Sin, a))),
            inner.clone().prop_map(|a| WarpExpr::func(
                Func::Sqrt,
                WarpExpr::bin(BinOp::Add, WarpExpr::num(1.0), WarpExpr::bin(BinOp::Pow, a, WarpExpr::num(2.0)))
            )),
            inner.prop_map(WarpExpr::neg),
        ]
    })
}

fn close(ad: f64, fd: f64, scale: f64, tol: f64) -> bool {
    (ad - fd).abs() <= tol * (ad.abs().max(fd.abs()) + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn random_trees_round_trip(t in smooth_tree()) {
        let again = parse_warp(&t.to_string()).unwrap();
        prop_assert_eq!(t, again);
    }

    #[test]
    fn hyperdual_matches_central_differences(t in smooth_tree(), r in 0.5f64..2.0, s in -1.0f64..1.0) {
        let j = eval_warp(&t, r, s).unwrap();
        let f = |x: f64, y: f64| eval_value(&t, x, y).unwrap();
        let scale = 1.0 + j.psi.abs();
        // first derivatives at step 1e-5
        let h = 1e-5;
        let fr = (f(r + h, s) - f(r - h, s)) / (2.0 * h);
        let fs = (f(r, s + h) - f(r, s - h)) / (2.0 * h);
        prop_assert!(close(j.psi_r, fr, scale, 1e-6), "psi_r {} vs {}", j.psi_r, fr);
        prop_assert!(close(j.psi_s, fs, scale, 1e-6), "psi_s {} vs {}", j.psi_s, fs);
        // second differences of values need a wider step to stay above roundoff
        let h = 1e-3;
        let frr = (f(r + h, s) - 2.0 * f(r, s) + f(r - h, s)) / (h * h);
        let fss = (f(r, s + h) - 2.0 * f(r, s) + f(r, s - h)) / (h * h);
        let frs = (f(r + h, s + h) - f(r + h, s - h) - f(r - h, s + h) + f(r - h, s - h)) / (4.0 * h * h);
        let scale2 = scale + j.psi_rr.abs() + j.psi_ss.abs() + j.psi_rs.abs();
        prop_assert!(close(j.psi_rr, frr, scale2, 1e-4), "psi_rr {} vs {}", j.psi_rr, frr);
        prop_assert!(close(j.psi_ss, fss, scale2, 1e-4), "psi_ss {} vs {}", j.psi_ss, fss);
        prop_assert!(close(j.psi_rs, frs, scale2, 1e-4), "psi_rs {} vs {}", j.psi_rs, frs);
    }

    #[test]
    fn appendix_angular_log_derivative(r in 0.1f64..20.0, th in -3.0f64..3.0) {
        let e = parse_warp("r*exp(r^2*sin(s/2)^2 + r)").unwrap();
        let j = eval_warp(&e, r, th).unwrap();
        // ψ_θ/ψ = r² g′(θ), g = sin²(θ/2)
        let gp = (0.5 * th).sin() * (0.5 * th).cos();
        prop_assert!((j.psi_s / j.psi - r * r * gp).abs() <= 1e-10 * (1.0 + r * r));
    }
}

#[test]
fn builtins_match_central_differences() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for name in [
        "euclidean-cone(2)",
        "euclidean-cone(3, 0.5)",
        "hyperbolic(2)",
        "hyperbolic(4)",
        "exp-model(2, 1, 0.5)",
        "exp-model(3, 2, 0.5)",
        "appendix-surface(1)",
    ] {
        let m = builtin_model(name).unwrap();
        for _ in 0..100 {
            let r = rng.random_range(0.2..6.0);
            let s = rng.random_range(-1.0..1.0) * m.s_radius(r).min(1.0);
            let j = m.jet(r, s).unwrap();
            let f = |x: f64, y: f64| m.jet(x, y).unwrap().psi;
            let h = 1e-5 * r.max(1.0);
            let fr = (f(r + h, s) - f(r - h, s)) / (2.0 * h);
            let fs = (f(r, s + h) - f(r, s - h)) / (2.0 * h);
            let h2 = 1e-3;
            let frr = (f(r + h2, s) - 2.0 * f(r, s) + f(r - h2, s)) / (h2 * h2);
            let tol = |ad: f64, fd: f64, what: &str, tol: f64| {
                assert!(
                    (ad - fd).abs() <= tol * (ad.abs() + 1e-8 * j.psi.abs()),
                    "{name} {what} at ({r}, {s}): {ad} vs {fd}"
                );
            };
            tol(j.psi_r, fr, "psi_r", 1e-5);
            if m.warp.depends_on_s() {
                tol(j.psi_s, fs, "psi_s", 1e-5);
            } else {
                assert_eq!(j.psi_s, 0.0);
            }
            tol(j.psi_rr, frr, "psi_rr", 1e-5);
        }
    }
}
