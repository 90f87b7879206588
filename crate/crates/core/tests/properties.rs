use polya_approx::analysis::{modulus_estimate, omega, ModulusSource};
use polya_approx::bivariate::{eval_2d, BivariateFunctionSpec, BivariateParams};
use polya_approx::catalog::lookup;
use polya_approx::moments::{central_moment_lupas_closed, moment_oracle_log, xi_bound, MomentKind};
use polya_approx::num::{compensated_sum, polya_weight_row};
use polya_approx::operators::{eval_kantorovich_stancu_k, eval_lupas_k, Operator};
use polya_approx::{FunctionSpec, OperatorParams, QuadratureRule};
use proptest::prelude::*;

const NAMES: [&str; 8] = ["f1", "f2", "f3", "f4", "f5", "f6", "e3", "abs_half"];

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&NAMES[..])
}

fn kant_params() -> impl Strategy<Value = OperatorParams> {
    (1u32..80, 0.0..4.0f64, 0.0..2.0f64, 0.0..2.0f64)
        .prop_map(|(n, k, a, d)| OperatorParams::new(n, k, a, a + d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_form_a_distribution(n in 1u32..300, k in 0.0..10.0f64, x in 0.0..=1.0f64) {
        let w = polya_weight_row(n, k, x).unwrap().weights;
        prop_assert_eq!(w.len(), n as usize + 1);
        prop_assert!(w.iter().all(|&v| v >= 0.0));
        prop_assert!((compensated_sum(w.iter().copied()) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn linear_functions_are_reproduced(n in 1u32..200, k in 0.0..5.0f64, x in 0.0..=1.0f64) {
        let e0 = lookup("e0").unwrap();
        let e1 = lookup("e1").unwrap();
        prop_assert!((eval_lupas_k(&e0, n, k, x).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!((eval_lupas_k(&e1, n, k, x).unwrap() - x).abs() <= 1e-12);
    }

    #[test]
    fn operators_are_linear(
        f in name(), g in name(), a in -3.0..3.0f64, b in -3.0..3.0f64,
        p in kant_params(), x in 0.0..=1.0f64,
    ) {
        let (f, g) = (lookup(f).unwrap(), lookup(g).unwrap());
        let h = FunctionSpec::linear_combination(a, &f, b, &g);
        let q = QuadratureRule::default_rule();
        let lhs = eval_lupas_k(&h, p.n, p.k, x).unwrap();
        let rhs = a * eval_lupas_k(&f, p.n, p.k, x).unwrap() + b * eval_lupas_k(&g, p.n, p.k, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()));
        let lhs = eval_kantorovich_stancu_k(&h, &p, x, &q).unwrap();
        let rhs = a * eval_kantorovich_stancu_k(&f, &p, x, &q).unwrap()
            + b * eval_kantorovich_stancu_k(&g, &p, x, &q).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + rhs.abs()));
    }

    #[test]
    fn operators_are_positive(p in kant_params(), x in 0.0..=1.0f64, c in 0.0..1.0f64) {
        // |t - c| is nonnegative, so both images must be too
        let f = FunctionSpec::new("shifted_abs", move |t| (t - c).abs());
        let q = QuadratureRule::default_rule();
        prop_assert!(eval_lupas_k(&f, p.n, p.k, x).unwrap() >= 0.0);
        prop_assert!(eval_kantorovich_stancu_k(&f, &p, x, &q).unwrap() >= 0.0);
    }

    #[test]
    fn reflection_symmetry(f in name(), n in 1u32..120, k in 0.0..4.0f64, x in 0.0..=1.0f64) {
        let f = lookup(f).unwrap();
        let g = f.clone();
        let reflected = FunctionSpec::new("reflected", move |t| g.eval(1.0 - t));
        let q = QuadratureRule::default_rule();
        let a = eval_lupas_k(&reflected, n, k, x).unwrap();
        let b = eval_lupas_k(&f, n, k, 1.0 - x).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        let p = OperatorParams::new(n, k, 0.0, 0.0).unwrap();
        let a = eval_kantorovich_stancu_k(&reflected, &p, x, &q).unwrap();
        let b = eval_kantorovich_stancu_k(&f, &p, 1.0 - x, &q).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
    }

    #[test]
    fn modulus_is_monotone_in_delta(f in name(), d1 in 0.001..0.5f64, d2 in 0.001..0.5f64) {
        let f = lookup(f).unwrap();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = modulus_estimate(&f, lo, 401).unwrap().value;
        let b = modulus_estimate(&f, hi, 401).unwrap().value;
        prop_assert!(a <= b);
    }

    #[test]
    fn grid_modulus_never_exceeds_exact(which in prop::sample::select(&["e1", "e2", "e3", "abs_half"][..]), delta in 0.0005..1.0f64) {
        let f = lookup(which).unwrap();
        let grid = omega(&f, delta, ModulusSource::Grid(501)).unwrap();
        let exact = omega(&f, delta, ModulusSource::Exact).unwrap();
        prop_assert!(grid <= exact + 1e-12);
    }

    #[test]
    fn second_central_moment_within_xi(p in kant_params(), x in 0.0..=1.0f64) {
        let nu2 = moment_oracle_log(&Operator::KantorovichStancuK(p), x, 2, MomentKind::Central).unwrap();
        prop_assert!(nu2 >= 0.0);
        prop_assert!(nu2 <= xi_bound(&p));
    }

    #[test]
    fn k_below_one_shrinks_the_variance(n in 1u32..500, k in 0.0..=1.0f64, x in 0.0..=1.0f64) {
        let a = central_moment_lupas_closed(n, k, x, 2).unwrap();
        let b = central_moment_lupas_closed(n, 1.0, x, 2).unwrap();
        prop_assert!(a <= b);
    }

    #[test]
    fn tensor_products_separate(
        g in name(), h in name(), px in kant_params(), py in kant_params(),
        x in 0.0..=1.0f64, y in 0.0..=1.0f64,
    ) {
        let (g, h) = (lookup(g).unwrap(), lookup(h).unwrap());
        let f = BivariateFunctionSpec::product(&g, &h);
        let q = QuadratureRule::default_rule();
        let bp = BivariateParams::new(px, py);
        let want = eval_kantorovich_stancu_k(&g, &px, x, &q).unwrap() * eval_kantorovich_stancu_k(&h, &py, y, &q).unwrap();
        prop_assert!((eval_2d(&f, &bp, x, y, &q).unwrap() - want).abs() <= 1e-10 * (1.0 + want.abs()));
    }
}
