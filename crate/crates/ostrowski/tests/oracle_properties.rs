//! Property tests for the two numerical workhorses: sampled sup-norms of
//! f' and the adaptive quadrature oracle.

use ostrowski::expr::{BinOp, ExprAst};
use ostrowski::{corpus, norms, quad, FunctionModel, NormConfig};
use proptest::prelude::*;

fn corpus_model() -> impl Strategy<Value = FunctionModel> {
    (0..corpus::SMOOTH.len()).prop_map(|i| corpus::SMOOTH[i].model())
}

// A subinterval of the model's domain with at least 1% of its width.
fn subrange(model: &FunctionModel, f0: f64, f1: f64) -> (f64, f64) {
    let (lo, hi) = model.domain();
    let w = hi - lo;
    let (s, e) = if f0 <= f1 { (f0, f1) } else { (f1, f0) };
    let c = lo + s * 0.9 * w;
    let d = (c + 0.01 * w).max(lo + e * w).min(hi);
    (c, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_of_a_subinterval_never_exceeds_the_whole(
        model in corpus_model(),
        f0 in 0.0..1.0f64,
        f1 in 0.0..1.0f64,
    ) {
        let cfg = NormConfig::default();
        let (lo, hi) = model.domain();
        let (c, d) = subrange(&model, f0, f1);
        let whole = norms::sup_norm(&model, lo, hi, &cfg).unwrap().value;
        let part = norms::sup_norm(&model, c, d, &cfg).unwrap().value;
        // both are grid estimates, so allow the stabilisation tolerance
        prop_assert!(
            part <= whole * (1.0 + 1e-5) + 1e-9,
            "norm over [{c}, {d}] = {part} exceeds norm over [{lo}, {hi}] = {whole}"
        );
    }

    #[test]
    fn tighter_tolerance_never_shrinks_the_estimate(
        model in corpus_model(),
        f0 in 0.0..1.0f64,
        f1 in 0.0..1.0f64,
    ) {
        let (c, d) = subrange(&model, f0, f1);
        let coarse = NormConfig { tol: 1e-3, ..NormConfig::default() };
        let fine = NormConfig { tol: 1e-10, ..NormConfig::default() };
        let lo_est = norms::sup_norm(&model, c, d, &coarse).unwrap();
        let hi_est = norms::sup_norm(&model, c, d, &fine).unwrap();
        // the refinement grids are nested, so more work only finds more
        prop_assert!(hi_est.value >= lo_est.value);
        prop_assert!(hi_est.samples_used >= lo_est.samples_used);
    }

    #[test]
    fn segment_split_agrees_with_the_direct_norm(
        model in corpus_model(),
        cut in 0.05..0.95f64,
    ) {
        let cfg = NormConfig::default();
        let (lo, hi) = model.domain();
        let m = lo + cut * (hi - lo);
        let whole = norms::sup_norm(&model, lo, hi, &cfg).unwrap().value;
        let parts = norms::segment_norms(&model, &[lo, m, hi], &cfg).unwrap();
        let stitched = parts.iter().fold(0.0f64, |acc, s| acc.max(s.value));
        prop_assert!(
            (stitched - whole).abs() <= 1e-5 * whole.max(1.0),
            "stitched {stitched} vs whole {whole} at cut {m}"
        );
    }

    #[test]
    fn integral_is_additive_across_a_split(
        model in corpus_model(),
        cut in 0.05..0.95f64,
    ) {
        let (lo, hi) = model.domain();
        let m = lo + cut * (hi - lo);
        let whole = quad::integrate(&model, lo, hi, 1e-12).unwrap().value;
        let left = quad::integrate(&model, lo, m, 1e-12).unwrap().value;
        let right = quad::integrate(&model, m, hi, 1e-12).unwrap().value;
        prop_assert!((left + right - whole).abs() <= 1e-10);
    }

    #[test]
    fn integral_is_linear_in_the_integrand(
        model in corpus_model(),
        alpha in -10.0..10.0f64,
    ) {
        let (lo, hi) = model.domain();
        let scaled_ast = ExprAst::Binary(
            BinOp::Mul,
            Box::new(ExprAst::Const(alpha)),
            Box::new(model.ast().clone()),
        );
        let scaled = FunctionModel::new(scaled_ast, lo, hi).unwrap();
        let base = quad::integrate(&model, lo, hi, 1e-12).unwrap().value;
        let stretched = quad::integrate(&scaled, lo, hi, 1e-12).unwrap().value;
        prop_assert!((stretched - alpha * base).abs() <= 1e-10 * (1.0 + alpha.abs()));
    }

    #[test]
    fn cubics_integrate_exactly(
        c0 in -10.0..10.0f64,
        c1 in -10.0..10.0f64,
        c2 in -10.0..10.0f64,
        c3 in -10.0..10.0f64,
        lo in -5.0..4.0f64,
        width in 0.1..2.0f64,
    ) {
        let hi = lo + width;
        let text = format!("{c0} + {c1}*x + {c2}*x^2 + {c3}*x^3");
        let ast: ExprAst = text.parse().unwrap();
        let model = FunctionModel::new(ast, lo, hi).unwrap();
        // a single corrected panel is already exact on cubics, so a loose
        // tolerance must still give the closed form
        let got = quad::integrate(&model, lo, hi, 1e-6).unwrap().value;
        let anti = |x: f64| c0 * x + c1 * x * x / 2.0 + c2 * x * x * x / 3.0 + c3 * x * x * x * x / 4.0;
        let exact = anti(hi) - anti(lo);
        prop_assert!(
            (got - exact).abs() <= 1e-12 * (1.0 + exact.abs()),
            "got {got}, closed form {exact}"
        );
    }
}
