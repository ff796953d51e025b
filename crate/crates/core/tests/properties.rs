//! Property suites: Schwarz–Pick, shear identities, Hornich decompositions,
//! affine invariance, path independence and symbolic derivatives.

mod support;

use geoshear::exprlang::{BinOp, Expr, Func};
use proptest::prelude::*;
use support::*;

fn disk_point(max_r: f64) -> impl Strategy<Value = C> {
    (0.0..max_r, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C::from_polar(r, t))
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn schwarz_pick_hyperbolic_norm(
        t in 0.0..std::f64::consts::TAU,
        k in 0u32..3,
        a in disk_point(0.9),
        b in proptest::option::of(disk_point(0.9)),
    ) {
        let src = blaschke(t, k, a, b);
        let v = hyperbolic_norm(&src);
        prop_assert!(v <= 1.0 + 1e-9, "{src}: {v}");
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn shear_identities_on_presets(idx in 0usize..8, z in disk_point(0.95), theta in prop_oneof![Just(0.0), 0.0..1.0]) {
        let (dg, dphi) = shear_identity_errors(idx, theta, z);
        prop_assert!(dg <= 1e-13, "{:?}: G' - omega H' = {dg}", PRESET_PARAMS[idx]);
        prop_assert!(dphi <= 1e-9, "{:?}: H - G - phi = {dphi}", PRESET_PARAMS[idx]);
    }
}

#[test]
fn hornich_decompositions() {
    for (fam, alpha, beta) in HORNICH_CASES {
        let e = hornich_error(fam, alpha, beta, 20);
        assert!(e < 1e-9, "{fam}: {e}");
    }
}

#[test]
fn harmonic_pre_schwarzian_affine_invariance() {
    for idx in [0, 2, 4, 6] {
        let e = affine_invariance_error(idx, cx(0.3, 0.1), 20);
        assert!(e < 1e-9, "{:?}: {e}", PRESET_PARAMS[idx]);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn quadrature_path_independence(z in disk_point(0.9), mid in disk_point(0.9), fam in 0usize..4, alpha in 0.1..1.5f64) {
        let (gap, allowed) = path_discrepancy(PATH_FAMILIES[fam], alpha, z, mid);
        prop_assert!(gap <= allowed, "{} {alpha}: {gap}", PATH_FAMILIES[fam]);
    }
}

fn expr_strategy() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        3 => Just(Expr::Var),
        1 => (-2.0..2.0f64, -1.0..1.0f64).prop_map(|(re, im)| Expr::Lit(cx(re, im))),
        1 => (1u32..4).prop_map(|k| Expr::real(k as f64)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Add, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Sub, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Mul, a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::bin(BinOp::Div, a, b)),
            (inner.clone(), 1u32..4).prop_map(|(a, k)| Expr::bin(BinOp::Pow, a, Expr::real(k as f64))),
            (inner.clone(), -1.5..1.5f64).prop_map(|(a, e)| Expr::bin(BinOp::Pow, a, Expr::real(e))),
            inner.clone().prop_map(|a| Expr::call(Func::Exp, a)),
            inner.clone().prop_map(|a| Expr::call(Func::Log, a)),
            inner.clone().prop_map(|a| Expr::call(Func::Sqrt, a)),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn symbolic_matches_finite_difference(e in expr_strategy(), z in disk_point(0.9)) {
        if let Some(gap) = derivative_gap(&e, z) {
            prop_assert!(gap <= 1e-6, "{e} at {z}: {gap}");
        }
    }
}
