use super::{DualValue, EvalError, ExprAst};

/// Number of interior probe points checked by the constructors.
const PROBE_POINTS: usize = 33;

/// Model construction failures.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("domain endpoints must be finite with a < b (got [{lo}, {hi}])")]
    BadDomain { lo: f64, hi: f64 },
    #[error("breakpoint {value} must lie strictly inside ({lo}, {hi})")]
    BreakpointOutside { value: f64, lo: f64, hi: f64 },
    #[error("breakpoints must be finite and strictly increasing (offending value {value})")]
    BreakpointOrder { value: f64 },
    #[error("evaluation failed at probe point x = {x}: {source}")]
    Probe {
        x: f64,
        #[source]
        source: EvalError,
    },
    #[error("exact norm interval [{lo}, {hi}] is invalid or outside the domain")]
    BadExactNormInterval { lo: f64, hi: f64 },
    #[error("exact norm value must be finite and non-negative (got {value})")]
    BadExactNormValue { value: f64 },
}

#[derive(Clone, Copy, Debug)]
struct ExactNorm {
    lo: f64,
    hi: f64,
    value: f64,
}

/// An expression together with the interval it is studied on, the points
/// where its derivative is declared undefined, and optional exact
/// derivative sup-norms for specific sub-intervals.
///
/// Breakpoints are caller-declared: the model does not search for kinks.
/// Everything downstream (norm sampling, quadrature splitting, the
/// piecewise bounds) trusts this list, so an undeclared kink shows up, at
/// best, as a derivative evaluation error during sampling.
#[derive(Clone, Debug)]
pub struct FunctionModel {
    ast: ExprAst,
    lo: f64,
    hi: f64,
    breakpoints: Vec<f64>,
    exact_norms: Vec<ExactNorm>,
}

impl FunctionModel {
    /// A model with no breakpoints.
    pub fn new(ast: ExprAst, lo: f64, hi: f64) -> Result<Self, ModelError> {
        Self::with_breakpoints(ast, lo, hi, Vec::new())
    }

    /// A model whose derivative is undefined at the given points, which
    /// must be finite, strictly increasing, and strictly inside `(lo, hi)`.
    ///
    /// Construction probes the evaluation at the endpoints, the
    /// breakpoints, and a coarse interior grid, so obvious domain mistakes
    /// (say, `log(x)` on an interval containing zero) fail here rather
    /// than deep inside a bound computation. The probe is a spot check,
    /// not a proof that every point of `[lo, hi]` evaluates.
    pub fn with_breakpoints(
        ast: ExprAst,
        lo: f64,
        hi: f64,
        breakpoints: Vec<f64>,
    ) -> Result<Self, ModelError> {
        if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
            return Err(ModelError::BadDomain { lo, hi });
        }
        for (i, &bp) in breakpoints.iter().enumerate() {
            if !bp.is_finite() || (i > 0 && bp <= breakpoints[i - 1]) {
                return Err(ModelError::BreakpointOrder { value: bp });
            }
            if bp <= lo || bp >= hi {
                return Err(ModelError::BreakpointOutside { value: bp, lo, hi });
            }
        }
        let model = FunctionModel { ast, lo, hi, breakpoints, exact_norms: Vec::new() };
        model.probe()?;
        Ok(model)
    }

    fn probe(&self) -> Result<(), ModelError> {
        let mut points = vec![self.lo, self.hi];
        points.extend_from_slice(&self.breakpoints);
        let h = (self.hi - self.lo) / (PROBE_POINTS + 1) as f64;
        for k in 1..=PROBE_POINTS {
            points.push(self.lo + k as f64 * h);
        }
        for x in points {
            self.eval(x).map_err(|source| ModelError::Probe { x, source })?;
        }
        Ok(())
    }

    /// Record the exact sup of `|f'|` over `[lo, hi]`, to be preferred
    /// over sampling whenever that exact sub-interval is requested.
    /// Lookup matches the endpoints bit-for-bit.
    pub fn set_exact_norm(&mut self, lo: f64, hi: f64, value: f64) -> Result<(), ModelError> {
        if !(lo < hi) || lo < self.lo || hi > self.hi {
            return Err(ModelError::BadExactNormInterval { lo, hi });
        }
        if !value.is_finite() || value < 0.0 {
            return Err(ModelError::BadExactNormValue { value });
        }
        self.exact_norms.retain(|n| !(n.lo == lo && n.hi == hi));
        self.exact_norms.push(ExactNorm { lo, hi, value });
        Ok(())
    }

    pub fn ast(&self) -> &ExprAst {
        &self.ast
    }

    /// The interval `(lo, hi)` the model is defined on.
    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn is_breakpoint(&self, x: f64) -> bool {
        self.breakpoints.iter().any(|&bp| bp == x)
    }

    pub fn exact_norm_for(&self, lo: f64, hi: f64) -> Option<f64> {
        self.exact_norms
            .iter()
            .find(|n| n.lo == lo && n.hi == hi)
            .map(|n| n.value)
    }

    /// Evaluate at `x`, which must lie in `[lo, hi]`.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        if !(self.lo..=self.hi).contains(&x) {
            return Err(EvalError::OutsideInterval { x, lo: self.lo, hi: self.hi });
        }
        self.ast.eval(x)
    }

    /// Evaluate value and derivative at `x`, which must lie in `[lo, hi]`
    /// and must not be a declared breakpoint.
    pub fn eval_dual(&self, x: f64) -> Result<DualValue, EvalError> {
        if !(self.lo..=self.hi).contains(&x) {
            return Err(EvalError::OutsideInterval { x, lo: self.lo, hi: self.hi });
        }
        if self.is_breakpoint(x) {
            return Err(EvalError::NonDifferentiable { x });
        }
        self.ast.eval_dual(x)
    }
}
