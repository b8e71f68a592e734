use proptest::prelude::*;
use weylspec_core::geometry::{
    check_kumura, check_thm1, check_thm2, curvature_at, horoball_margin, horoball_margin_at, SRange, SampleGrid,
    Verdict,
};
use weylspec_core::warp::{builtin_model, ManifoldModel};

fn grid() -> SampleGrid {
    SampleGrid::geometric(1.0, 2000.0, 40).unwrap()
}

fn custom(n: usize, warp: &str, a: f64, c2: f64) -> ManifoldModel {
    let doc = format!(r#"{{"n": {n}, "warp": "{warp}", "a": {a}, "c2": {c2}}}"#);
    ManifoldModel::from_json(&doc).unwrap()
}

#[test]
fn curvature_of_builtins() {
    let app = builtin_model("appendix-surface(1)").unwrap();
    for r in [1.0, 2.0, 5.0, 10.0] {
        let k = curvature_at(&app, r, 0.0).unwrap().radial_k;
        assert!((k - (-1.0 - 2.0 / r)).abs() < 1e-10, "K({r},0) = {k}");
    }
    assert!((curvature_at(&app, 2.0, 0.0).unwrap().radial_k + 2.0).abs() < 1e-12);

    let ks: Vec<f64> = [2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&r| curvature_at(&app, r, 1.0).unwrap().radial_k)
        .collect();
    assert!(ks.windows(2).all(|w| w[1] < w[0]), "{ks:?}");
    let k0: Vec<f64> = [2.0, 4.0, 8.0, 16.0, 1e4]
        .iter()
        .map(|&r| curvature_at(&app, r, 0.0).unwrap().radial_k)
        .collect();
    assert!(k0.windows(2).all(|w| w[1] > w[0]) && (k0[4] + 1.0).abs() < 1e-3);

    let hyp = builtin_model("hyperbolic(2)").unwrap();
    let cone = builtin_model("euclidean-cone(3)").unwrap();
    for (r, s) in [(0.5, 0.1), (3.0, -0.2), (10.0, 0.4)] {
        assert!((curvature_at(&hyp, r, s).unwrap().radial_k + 1.0).abs() < 1e-12);
        let c = curvature_at(&cone, r, s).unwrap();
        assert_eq!(c.radial_k, 0.0);
        assert!((c.laplacian_r - 2.0 / r).abs() < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn laplacian_is_n_minus_one_times_mean_curvature(
        which in 0usize..5, r in 0.1f64..30.0, s in -1.0f64..1.0,
    ) {
        let name = ["euclidean-cone(4)", "hyperbolic(3)", "exp-model(5, 2, 1)", "appendix-surface(1)", "hyperbolic(2)"][which];
        let m = builtin_model(name).unwrap();
        let c = curvature_at(&m, r, s).unwrap();
        prop_assert_eq!(c.laplacian_r, (m.n - 1) as f64 * c.mean_curvature_ratio);
    }
}

#[test]
fn thm1_passes_across_exp_models() {
    let cases = [
        (2, 1.0, 0.5),
        (2, 2.0, 1.0),
        (2, 0.5, 0.1),
        (3, 1.0, 0.5),
        (3, 1.5, 0.2),
        (4, 1.0, 0.9),
        (4, 3.0, 1.0),
        (5, 0.8, 0.3),
        (6, 1.0, 0.25),
        (7, 2.5, 2.0),
    ];
    for (n, c, a) in cases {
        let m = builtin_model(&format!("exp-model({n}, {c}, {a})")).unwrap();
        let rep = check_thm1(&m, c, 1.0, &grid()).unwrap();
        assert_eq!(rep.verdict, Verdict::Pass, "exp-model({n}, {c}, {a})");
        assert!(rep.observed_sup < 1e-14);
    }
}

#[test]
fn thm1_examples() {
    let app = builtin_model("appendix-surface(1)").unwrap();
    let rep = check_thm1(&app, 1.0, 1.0, &grid()).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    for &(r, sup) in &rep.trend {
        // |ψ_r/ψ − 1| ≤ 1/r + C r e^{−2r}
        assert!(sup <= (1.0 / r + 4.0 * r * (-2.0 * r).exp()) * (1.0 + 1e-12), "{r}: {sup}");
    }

    let hyp = builtin_model("hyperbolic(2)").unwrap();
    let rep = check_thm1(&hyp, 0.5, 1.0, &grid()).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
    // coth r → 1
    assert!((rep.trend.last().unwrap().1 - 0.5).abs() < 1e-9);
}

#[test]
fn thm2_examples() {
    let cone = builtin_model("euclidean-cone(2, 0.5)").unwrap();
    assert_eq!(check_thm2(&cone, 1.0, 1.2, &grid()).unwrap().verdict, Verdict::Pass);

    let forced = custom(2, "exp(r)", 0.0, 1.0);
    let rep = check_thm2(&forced, 1.0, 1.2, &grid()).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);

    let wobble = custom(2, "r*(2+sin(s))", 0.0, 1.0);
    let rep = check_thm2(&wobble, 1.0, 1.5, &grid()).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
}

#[test]
fn kumura_examples() {
    let radii = [2.0, 4.0, 8.0, 16.0, 32.0];
    let hyp = builtin_model("hyperbolic(2)").unwrap();
    let rep = check_kumura(&hyp, 1.0, &radii, SRange::Neighbourhood).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    for &(n, sup) in &rep.trend {
        assert!((sup - (1.0 / n.tanh() - 1.0)).abs() < 1e-9, "{n}: {sup}");
    }

    // 1/n must fall below the tolerance by the last radius
    let cone = builtin_model("euclidean-cone(2)").unwrap();
    let radii = [2.0, 20.0, 200.0, 2000.0];
    let rep = check_kumura(&cone, 0.0, &radii, SRange::Neighbourhood).unwrap();
    assert_eq!(rep.verdict, Verdict::Pass);
    for &(n, sup) in &rep.trend {
        assert!((sup - 1.0 / n).abs() < 1e-12);
    }

    let app = builtin_model("appendix-surface(1)").unwrap();
    let rep = check_kumura(&app, 1.0, &[2.0, 4.0, 8.0], SRange::FullSphere).unwrap();
    assert_eq!(rep.verdict, Verdict::Fail);
}

#[test]
fn horoball_examples() {
    let (inside, margin) = horoball_margin(50.0, 400).unwrap();
    assert!(inside && margin > 0.0);
    assert!((horoball_margin_at(0.0, 1.0) - ((1.0 + 1f64.cos()).powi(2) - 1f64.sin().powi(2))).abs() < 1e-15);
    assert!(horoball_margin_at(0.0, 1.0) > 0.0);
    for r in [0.0, 10.0, 40.0] {
        assert!((horoball_margin_at(r, 1e-12) - 4.0).abs() < 1e-6);
    }
}
