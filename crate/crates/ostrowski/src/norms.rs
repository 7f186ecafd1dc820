//! Sup-norm estimation for `|f'|` over sub-intervals.
//!
//! [`sup_norm`] samples the derivative on a uniform grid and doubles the
//! resolution until the observed maximum stabilizes. Grids nest (each
//! refinement keeps every previous sample), so the estimate is
//! non-decreasing under refinement, and it is always a **lower** estimate
//! of the true sup: a spike between samples can be missed. Reports built
//! from sampled norms are therefore never marked certified; callers who
//! know the exact sup for an interval can register it on the model
//! ([`crate::FunctionModel::set_exact_norm`]) and get
//! [`NormMethod::ExactProvided`] back.
//!
//! A segment may start or end at a declared breakpoint. The derivative
//! does not exist there, so the norm is taken over the open interior:
//! samples landing on a breakpoint are nudged inward by
//! `1e-12 * (hi - lo)`.

use crate::expr::{EvalError, FunctionModel};

/// Grid size the sampler starts from.
pub const INITIAL_SAMPLES: usize = 129;

/// Sampling parameters for [`sup_norm`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormConfig {
    /// Relative stabilization tolerance: refinement stops when the maximum
    /// grows by less than this fraction.
    pub tol: f64,
    /// Upper limit on the grid size (refinement stops before exceeding it).
    pub max_samples: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        NormConfig { tol: 1e-6, max_samples: (1 << 20) + 1 }
    }
}

/// How a [`SubintervalNorm`] value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// Grid-sampled lower estimate of the sup.
    Sampled,
    /// Exact value registered on the model by the caller.
    ExactProvided,
}

/// An estimate of `sup |f'|` over `[lo, hi]`.
#[derive(Clone, Copy, Debug)]
pub struct SubintervalNorm {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub method: NormMethod,
    /// Grid size of the final refinement (0 for exact values).
    pub samples_used: usize,
}

/// Norm estimation failures.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NormError {
    #[error("norm interval [{lo}, {hi}] is degenerate or reversed")]
    Degenerate { lo: f64, hi: f64 },
    #[error("norm interval [{lo}, {hi}] is outside the model domain [{dlo}, {dhi}]")]
    OutsideDomain { lo: f64, hi: f64, dlo: f64, dhi: f64 },
    #[error(
        "breakpoint {breakpoint} lies strictly inside [{lo}, {hi}]; split the interval there first"
    )]
    BreakpointInside { breakpoint: f64, lo: f64, hi: f64 },
    #[error("invalid norm config: {what}")]
    BadConfig { what: &'static str },
    #[error("cut points must be strictly increasing and inside the model domain")]
    BadCuts,
    #[error("cut list is missing breakpoint {breakpoint}")]
    MissingBreakpointCut { breakpoint: f64 },
    #[error("derivative evaluation failed at x = {x}: {source}")]
    Derivative {
        x: f64,
        #[source]
        source: EvalError,
    },
}

fn validate_config(cfg: &NormConfig) -> Result<(), NormError> {
    if !cfg.tol.is_finite() || cfg.tol <= 0.0 {
        return Err(NormError::BadConfig { what: "tol must be finite and positive" });
    }
    if cfg.max_samples < INITIAL_SAMPLES {
        return Err(NormError::BadConfig { what: "max_samples must be at least 129" });
    }
    Ok(())
}

/// Estimate `sup |f'|` over `[lo, hi]`.
///
/// If the model carries an exact norm for exactly this interval it is
/// returned as [`NormMethod::ExactProvided`]; otherwise the derivative is
/// sampled as described in the module docs. Breakpoints may coincide with
/// `lo` or `hi` but must not lie strictly inside.
pub fn sup_norm(
    model: &FunctionModel,
    lo: f64,
    hi: f64,
    cfg: &NormConfig,
) -> Result<SubintervalNorm, NormError> {
    validate_config(cfg)?;
    if !lo.is_finite() || !hi.is_finite() || !(lo < hi) {
        return Err(NormError::Degenerate { lo, hi });
    }
    let (dlo, dhi) = model.domain();
    if lo < dlo || hi > dhi {
        return Err(NormError::OutsideDomain { lo, hi, dlo, dhi });
    }
    if let Some(&breakpoint) = model
        .breakpoints()
        .iter()
        .find(|&&bp| lo < bp && bp < hi)
    {
        return Err(NormError::BreakpointInside { breakpoint, lo, hi });
    }
    if let Some(value) = model.exact_norm_for(lo, hi) {
        return Ok(SubintervalNorm {
            lo,
            hi,
            value,
            method: NormMethod::ExactProvided,
            samples_used: 0,
        });
    }

    let mut n = INITIAL_SAMPLES;
    let mut best = grid_max(model, lo, hi, n)?;
    loop {
        // Refining n to 2n-1 keeps every existing sample, so the maximum
        // can only grow.
        let next_n = 2 * n - 1;
        if next_n > cfg.max_samples {
            break;
        }
        let next = grid_max(model, lo, hi, next_n)?;
        let grown = next - best;
        n = next_n;
        best = next;
        if grown <= cfg.tol * next.abs() {
            break;
        }
    }
    Ok(SubintervalNorm { lo, hi, value: best, method: NormMethod::Sampled, samples_used: n })
}

fn grid_max(model: &FunctionModel, lo: f64, hi: f64, n: usize) -> Result<f64, NormError> {
    let h = (hi - lo) / (n - 1) as f64;
    let nudge = 1e-12 * (hi - lo);
    let mut best = 0.0f64;
    for k in 0..n {
        let mut t = if k == 0 {
            lo
        } else if k == n - 1 {
            hi
        } else {
            lo + k as f64 * h
        };
        if model.is_breakpoint(t) {
            // Norms over segments touching a kink are sups over the open
            // interior; sample just inside instead.
            t = if t - lo <= hi - t { t + nudge } else { t - nudge };
        }
        let d = model
            .eval_dual(t)
            .map_err(|source| NormError::Derivative { x: t, source })?;
        best = best.max(d.derivative.abs());
    }
    Ok(best)
}

/// Estimate `sup |f'|` for every segment between consecutive cut points.
///
/// Cut points must be strictly increasing, lie in the model domain, and
/// include every breakpoint that falls strictly inside the covered range,
/// so that each segment is breakpoint-free inside.
pub fn segment_norms(
    model: &FunctionModel,
    cut_points: &[f64],
    cfg: &NormConfig,
) -> Result<Vec<SubintervalNorm>, NormError> {
    validate_config(cfg)?;
    if cut_points.len() < 2 {
        return Err(NormError::BadCuts);
    }
    let (dlo, dhi) = model.domain();
    for (i, &c) in cut_points.iter().enumerate() {
        if !c.is_finite() || c < dlo || c > dhi || (i > 0 && c <= cut_points[i - 1]) {
            return Err(NormError::BadCuts);
        }
    }
    let first = cut_points[0];
    let last = cut_points[cut_points.len() - 1];
    for &bp in model.breakpoints() {
        if first < bp && bp < last && !cut_points.contains(&bp) {
            return Err(NormError::MissingBreakpointCut { breakpoint: bp });
        }
    }
    cut_points
        .windows(2)
        .map(|w| sup_norm(model, w[0], w[1], cfg))
        .collect()
}
