//! Adaptive Simpson quadrature, used as the oracle the bounds are
//! verified against.
//!
//! The integrand is split at every declared breakpoint first, so each
//! adaptive pass only ever sees a smooth piece; the tolerance is divided
//! among pieces and panels in proportion to their width. Each panel is
//! accepted via the standard Richardson comparison of one Simpson
//! estimate against two half-width ones, and the accepted value includes
//! the `(S2 - S1)/15` correction, which makes single panels exact on
//! cubics.

use crate::expr::{EvalError, FunctionModel};

/// Hard cap on panel halving. Interval widths underflow long before this
/// depth; it exists to bound the recursion, not to be reached.
pub const MAX_DEPTH: usize = 60;

/// Absolute tolerance on the integral mean used by [`integral_mean`].
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Outcome of an integration.
#[derive(Clone, Copy, Debug)]
pub struct IntegralResult {
    pub value: f64,
    /// Sum of the per-panel Richardson error estimates.
    pub error_estimate: f64,
    /// Number of accepted panels.
    pub subdivisions: usize,
}

/// Integration failures.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum QuadError {
    #[error("integration interval [{lo}, {hi}] is degenerate or reversed")]
    Degenerate { lo: f64, hi: f64 },
    #[error("integration interval [{lo}, {hi}] is outside the model domain [{dlo}, {dhi}]")]
    OutsideDomain { lo: f64, hi: f64, dlo: f64, dhi: f64 },
    #[error("integration tolerance must be finite and positive (got {tol})")]
    BadTolerance { tol: f64 },
    #[error("integrand evaluation failed at x = {x}: {source}")]
    Evaluation {
        x: f64,
        #[source]
        source: EvalError,
    },
    #[error(
        "adaptive refinement hit the depth limit; best value {value} with error estimate {error_estimate}"
    )]
    NonConvergence { value: f64, error_estimate: f64, subdivisions: usize },
    #[error("p = {p} must lie strictly inside ({lo}, {hi})")]
    PointNotInterior { p: f64, lo: f64, hi: f64 },
}

struct Accumulator<'a> {
    model: &'a FunctionModel,
    value: f64,
    error_estimate: f64,
    subdivisions: usize,
    converged: bool,
}

impl Accumulator<'_> {
    fn eval(&self, x: f64) -> Result<f64, QuadError> {
        self.model
            .eval(x)
            .map_err(|source| QuadError::Evaluation { x, source })
    }
}

fn simpson(width: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    width / 6.0 * (fa + 4.0 * fm + fb)
}

/// Integrate `f` over `[lo, hi]` to the given absolute tolerance.
///
/// If any region fails to settle within [`MAX_DEPTH`] halvings the result
/// is reported as [`QuadError::NonConvergence`], carrying the best value
/// reached so callers can still inspect it.
pub fn integrate(
    model: &FunctionModel,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<IntegralResult, QuadError> {
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(QuadError::Degenerate { lo, hi });
    }
    let (dlo, dhi) = model.domain();
    if lo < dlo || hi > dhi {
        return Err(QuadError::OutsideDomain { lo, hi, dlo, dhi });
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(QuadError::BadTolerance { tol });
    }

    let mut cuts = vec![lo];
    cuts.extend(
        model
            .breakpoints()
            .iter()
            .copied()
            .filter(|&bp| lo < bp && bp < hi),
    );
    cuts.push(hi);

    let width = hi - lo;
    let mut acc = Accumulator {
        model,
        value: 0.0,
        error_estimate: 0.0,
        subdivisions: 0,
        converged: true,
    };
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let piece_tol = tol * (b - a) / width;
        let m = 0.5 * (a + b);
        let fa = acc.eval(a)?;
        let fm = acc.eval(m)?;
        let fb = acc.eval(b)?;
        let whole = simpson(b - a, fa, fm, fb);
        refine(&mut acc, a, b, fa, fm, fb, whole, piece_tol, 0)?;
    }
    let result = IntegralResult {
        value: acc.value,
        error_estimate: acc.error_estimate,
        subdivisions: acc.subdivisions,
    };
    if !acc.converged {
        return Err(QuadError::NonConvergence {
            value: result.value,
            error_estimate: result.error_estimate,
            subdivisions: result.subdivisions,
        });
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    acc: &mut Accumulator,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<(), QuadError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = acc.eval(lm)?;
    let frm = acc.eval(rm)?;
    let left = simpson(m - a, fa, flm, fm);
    let right = simpson(b - m, fm, frm, fb);
    let delta = left + right - whole;
    let split_is_degenerate = lm <= a || rm >= b;
    if delta.abs() <= 15.0 * tol || depth >= MAX_DEPTH || split_is_degenerate {
        acc.value += left + right + delta / 15.0;
        acc.error_estimate += delta.abs() / 15.0;
        acc.subdivisions += 1;
        if delta.abs() > 15.0 * tol {
            acc.converged = false;
        }
        return Ok(());
    }
    refine(acc, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
    refine(acc, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)
}

/// `1/(b-a) * integral of f over the full domain [a, b]`, to
/// [`MEAN_TOLERANCE`] absolute on the mean.
///
/// On non-convergence the error's payload carries the best mean (already
/// divided by the width) rather than the raw integral.
pub fn integral_mean(model: &FunctionModel) -> Result<f64, QuadError> {
    let (lo, hi) = model.domain();
    let width = hi - lo;
    match integrate(model, lo, hi, MEAN_TOLERANCE * width) {
        Ok(r) => Ok(r.value / width),
        Err(QuadError::NonConvergence { value, error_estimate, subdivisions }) => {
            Err(QuadError::NonConvergence {
                value: value / width,
                error_estimate: error_estimate / width,
                subdivisions,
            })
        }
        Err(e) => Err(e),
    }
}

/// `|f(p) - integral mean|` for an interior point `p`.
pub fn deviation(model: &FunctionModel, p: f64) -> Result<f64, QuadError> {
    let (lo, hi) = model.domain();
    if !(p > lo && p < hi) {
        return Err(QuadError::PointNotInterior { p, lo, hi });
    }
    let fp = model
        .eval(p)
        .map_err(|source| QuadError::Evaluation { x: p, source })?;
    Ok((fp - integral_mean(model)?).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ExprAst;

    fn model(text: &str, lo: f64, hi: f64, bps: Vec<f64>) -> FunctionModel {
        let ast: ExprAst = text.parse().unwrap();
        FunctionModel::with_breakpoints(ast, lo, hi, bps).unwrap()
    }

    #[test]
    fn integrates_square() {
        let m = model("x^2", 0.0, 1.0, vec![]);
        let r = integrate(&m, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() <= 1e-12);
        assert!(r.subdivisions >= 1);
    }

    #[test]
    fn integrates_tent_with_breakpoint_split() {
        let m = model("abs(x - 0.5)", 0.0, 1.0, vec![0.5]);
        let r = integrate(&m, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.25).abs() <= 1e-12);
    }

    #[test]
    fn mean_of_reciprocal_is_log_two() {
        let m = model("1/x", 1.0, 2.0, vec![]);
        let mean = integral_mean(&m).unwrap();
        assert!((mean - 2.0f64.ln()).abs() <= 1e-12);
    }

    #[test]
    fn deviation_examples() {
        let m = model("x^2", 0.0, 1.0, vec![]);
        let d = deviation(&m, 0.25).unwrap();
        assert!((d - 13.0 / 48.0).abs() <= 1e-11);

        let m = model("abs(x - 0.5)", 0.0, 1.0, vec![0.5]);
        let d = deviation(&m, 0.5).unwrap();
        assert!((d - 0.25).abs() <= 1e-11);
    }

    #[test]
    fn deviation_requires_interior_point() {
        let m = model("x^2", 0.0, 1.0, vec![]);
        assert!(matches!(
            deviation(&m, 0.0),
            Err(QuadError::PointNotInterior { .. })
        ));
        assert!(matches!(
            deviation(&m, 1.0),
            Err(QuadError::PointNotInterior { .. })
        ));
    }

    #[test]
    fn partial_ranges_and_additivity() {
        let m = model("exp(x)", 0.0, 1.0, vec![]);
        let whole = integrate(&m, 0.0, 1.0, 1e-12).unwrap().value;
        let a = integrate(&m, 0.0, 0.3, 1e-12).unwrap().value;
        let b = integrate(&m, 0.3, 1.0, 1e-12).unwrap().value;
        assert!((whole - (a + b)).abs() <= 1e-10);
        assert!((whole - (1.0f64.exp() - 1.0)).abs() <= 1e-12);
    }

    #[test]
    fn error_estimate_tracks_true_error() {
        let m = model("sin(x)", 0.0, 3.0, vec![]);
        let exact = 1.0 - 3.0f64.cos();
        for tol in [1e-6, 1e-9, 1e-12] {
            let r = integrate(&m, 0.0, 3.0, tol).unwrap();
            let err = (r.value - exact).abs();
            assert!(err <= tol, "tol {tol}: err {err}");
            assert!(err <= r.error_estimate.max(tol));
        }
    }

    #[test]
    fn invalid_requests_are_rejected() {
        let m = model("x", 0.0, 1.0, vec![]);
        assert!(matches!(
            integrate(&m, 0.7, 0.3, 1e-9),
            Err(QuadError::Degenerate { .. })
        ));
        assert!(matches!(
            integrate(&m, 0.0, 2.0, 1e-9),
            Err(QuadError::OutsideDomain { .. })
        ));
        assert!(matches!(
            integrate(&m, 0.0, 1.0, 0.0),
            Err(QuadError::BadTolerance { .. })
        ));
    }
}
