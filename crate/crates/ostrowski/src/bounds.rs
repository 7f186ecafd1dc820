//! Ostrowski-type bounds on the deviation of a point value from the
//! integral mean, each verified against the quadrature oracle.
//!
//! Four bound families are computed:
//!
//! * classical: `[1/4 + ((p - (a+b)/2)/(b-a))^2] * (b-a) * sup|f'|`
//! * halfmax: `(1/2) * max{(p-a)*sup|f'| on [a,p], (b-p)*sup|f'| on [p,b]}`
//! * refined: the smaller of the two above
//! * piecewise and at-breakpoint: a segment max term plus an additive
//!   term built from the function values at the interval ends and the
//!   declared breakpoints
//!
//! The additive term of the piecewise bounds can be negative, and the
//! resulting total can fall below the observed deviation. That outcome
//! is reported as [`BoundStatus::ViolatedObserved`]; nothing is clamped
//! and nothing panics, because the point of the report is to record what
//! the formulas actually produce.
//!
//! Every report carries the classical, halfmax, and refined values as
//! comparison columns regardless of mode. When the model has
//! breakpoints, sup-norms over ranges that straddle them are taken as
//! the max over the smooth pieces.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::expr::{EvalError, FunctionModel};
use crate::norms::{self, NormConfig, NormError, NormMethod, SubintervalNorm};
use crate::quad::{self, QuadError};

/// Absolute slack in the `deviation <= total_bound` verification. Covers
/// oracle error plus the sampled-norm underestimate on smooth inputs.
pub const VERIFICATION_SLACK: f64 = 1e-9;

/// Which bound family the report's `total_bound` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    Classical,
    Refined,
    Piecewise,
    AtBreakpoint,
}

impl BoundMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundMode::Classical => "classical",
            BoundMode::Refined => "refined",
            BoundMode::Piecewise => "piecewise",
            BoundMode::AtBreakpoint => "at-breakpoint",
        }
    }
}

impl fmt::Display for BoundMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundMode {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, BoundError> {
        match s {
            "classical" => Ok(BoundMode::Classical),
            "refined" => Ok(BoundMode::Refined),
            "piecewise" => Ok(BoundMode::Piecewise),
            "at-breakpoint" => Ok(BoundMode::AtBreakpoint),
            _ => Err(BoundError::UnknownMode { got: s.to_owned() }),
        }
    }
}

/// Outcome of comparing the oracle deviation with the total bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// deviation <= total_bound + [`VERIFICATION_SLACK`]
    Holds,
    /// The oracle deviation exceeds the bound. Legitimate for the
    /// piecewise family; reported, never raised as an error.
    ViolatedObserved,
    /// The oracle did not converge, so the comparison is best-effort.
    Inconclusive,
}

impl fmt::Display for BoundStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundStatus::Holds => "holds",
            BoundStatus::ViolatedObserved => "violated-observed",
            BoundStatus::Inconclusive => "inconclusive",
        })
    }
}

/// A bound computation to run: which model, where, and which family.
#[derive(Clone, Copy, Debug)]
pub struct BoundRequest<'a> {
    pub model: &'a FunctionModel,
    pub p: f64,
    pub mode: BoundMode,
    pub norm_config: NormConfig,
}

impl<'a> BoundRequest<'a> {
    pub fn new(model: &'a FunctionModel, p: f64, mode: BoundMode) -> Self {
        BoundRequest { model, p, mode, norm_config: NormConfig::default() }
    }

    pub fn with_norm_config(mut self, config: NormConfig) -> Self {
        self.norm_config = config;
        self
    }
}

/// Everything a bound computation produced. The piecewise fields are
/// `None` in the classical and refined modes.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    /// Oracle value of |f(p) - integral mean|.
    pub deviation: f64,
    pub classical: f64,
    pub halfmax: f64,
    /// min(classical, halfmax).
    pub refined: f64,
    pub piecewise_maxterm: Option<f64>,
    pub additive_term: Option<f64>,
    /// f(a) + sum of f at the breakpoints + f(b).
    #[serde(rename = "S")]
    pub s: Option<f64>,
    /// The bound selected by the requested mode.
    pub total_bound: f64,
    pub status: BoundStatus,
    /// True only when every sup-norm consulted was an exact value
    /// registered on the model; sampled norms are lower estimates and
    /// certify nothing.
    pub certified: bool,
    /// deviation / total_bound, or 0 when the bound is not positive.
    pub tightness_ratio: f64,
    /// Index of the segment that realises the piecewise max term
    /// (lowest index on ties). Diagnostic only, not serialized.
    #[serde(skip)]
    pub argmax_segment: Option<usize>,
}

/// One sweep grid point together with its report.
#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub p: f64,
    #[serde(flatten)]
    pub report: BoundReport,
}

/// Bound computation failures.
#[derive(Debug, thiserror::Error)]
pub enum BoundError {
    #[error("p = {p} must lie strictly inside ({lo}, {hi})")]
    PointNotInterior { p: f64, lo: f64, hi: f64 },
    #[error("unknown bound mode {got:?}; expected classical, refined, piecewise, or at-breakpoint")]
    UnknownMode { got: String },
    #[error("{op} was called with a request in {got} mode")]
    ModeMismatch { op: &'static str, got: BoundMode },
    #[error("refined mode handles at most one breakpoint, and it must equal p (p = {p})")]
    RefinedNeedsSimpleModel { p: f64 },
    #[error("piecewise mode requires at least one declared breakpoint")]
    NoBreakpoints,
    #[error("p = {p} coincides with a declared breakpoint; use at-breakpoint mode")]
    PointIsBreakpoint { p: f64 },
    #[error("p = {p} does not match any declared breakpoint")]
    NotABreakpoint { p: f64 },
    #[error("norm over [{got_lo}, {got_hi}] does not cover the required range [{need_lo}, {need_hi}]")]
    NormCoverage { need_lo: f64, need_hi: f64, got_lo: f64, got_hi: f64 },
    #[error("sweep grid must contain at least 2 points (got {got})")]
    GridTooSmall { got: usize },
    #[error("evaluating f({x}) failed: {source}")]
    Evaluation {
        x: f64,
        #[source]
        source: EvalError,
    },
    #[error(transparent)]
    Norm(#[from] NormError),
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// The interval-geometry form of the classical bound:
/// `[1/4 + ((p - (a+b)/2)/(b-a))^2] * (b-a) * norm`.
pub fn classical_bound(
    p: f64,
    a: f64,
    b: f64,
    norm_ab: &SubintervalNorm,
) -> Result<f64, BoundError> {
    require_interior(p, a, b)?;
    require_coverage(norm_ab, a, b)?;
    let width = b - a;
    // (p - a) + (p - b) halves the midpoint offset without forming
    // (a + b)/2, whose rounding would swamp the offset when the
    // interval is much narrower than its distance from zero
    let offset = 0.5 * ((p - a) + (p - b)) / width;
    Ok((0.25 + offset * offset) * width * norm_ab.value)
}

/// `(1/2) * max{(p-a) * norm over [a,p], (b-p) * norm over [p,b]}`.
pub fn halfmax_bound(
    p: f64,
    a: f64,
    b: f64,
    norm_ap: &SubintervalNorm,
    norm_pb: &SubintervalNorm,
) -> Result<f64, BoundError> {
    require_interior(p, a, b)?;
    require_coverage(norm_ap, a, p)?;
    require_coverage(norm_pb, p, b)?;
    Ok(0.5 * ((p - a) * norm_ap.value).max((b - p) * norm_pb.value))
}

fn require_interior(p: f64, lo: f64, hi: f64) -> Result<(), BoundError> {
    if p.is_finite() && lo < p && p < hi {
        Ok(())
    } else {
        Err(BoundError::PointNotInterior { p, lo, hi })
    }
}

fn require_coverage(norm: &SubintervalNorm, lo: f64, hi: f64) -> Result<(), BoundError> {
    if norm.lo <= lo && norm.hi >= hi {
        Ok(())
    } else {
        Err(BoundError::NormCoverage {
            need_lo: lo,
            need_hi: hi,
            got_lo: norm.lo,
            got_hi: norm.hi,
        })
    }
}

/// Sup-norm of f' over [lo, hi] tolerating interior breakpoints: the
/// range is cut at each one and the per-piece norms are combined by max.
/// An exact value registered for the whole range short-circuits.
fn composite_norm(
    model: &FunctionModel,
    lo: f64,
    hi: f64,
    config: &NormConfig,
) -> Result<SubintervalNorm, BoundError> {
    let inner: Vec<f64> = model
        .breakpoints()
        .iter()
        .copied()
        .filter(|&t| lo < t && t < hi)
        .collect();
    if inner.is_empty() {
        return Ok(norms::sup_norm(model, lo, hi, config)?);
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
    let mut cuts = Vec::with_capacity(inner.len() + 2);
    cuts.push(lo);
    cuts.extend(inner);
    cuts.push(hi);
    let pieces = norms::segment_norms(model, &cuts, config)?;
    let mut value: f64 = 0.0;
    let mut samples = 0;
    let mut all_exact = true;
    for piece in &pieces {
        value = value.max(piece.value);
        samples += piece.samples_used;
        all_exact &= piece.method == NormMethod::ExactProvided;
    }
    Ok(SubintervalNorm {
        lo,
        hi,
        value,
        method: if all_exact { NormMethod::ExactProvided } else { NormMethod::Sampled },
        samples_used: samples,
    })
}

struct Comparisons {
    classical: f64,
    halfmax: f64,
    refined: f64,
    certified: bool,
}

fn comparisons(model: &FunctionModel, p: f64, config: &NormConfig) -> Result<Comparisons, BoundError> {
    let (a, b) = model.domain();
    let norm_ab = composite_norm(model, a, b, config)?;
    let norm_ap = composite_norm(model, a, p, config)?;
    let norm_pb = composite_norm(model, p, b, config)?;
    let classical = classical_bound(p, a, b, &norm_ab)?;
    let halfmax = halfmax_bound(p, a, b, &norm_ap, &norm_pb)?;
    let certified = [&norm_ab, &norm_ap, &norm_pb]
        .iter()
        .all(|n| n.method == NormMethod::ExactProvided);
    Ok(Comparisons { classical, halfmax, refined: classical.min(halfmax), certified })
}

fn eval_at(model: &FunctionModel, x: f64) -> Result<f64, BoundError> {
    model.eval(x).map_err(|source| BoundError::Evaluation { x, source })
}

/// Oracle deviation, tolerating quadrature non-convergence: the second
/// component is false when the mean is only a best-effort value.
fn oracle_deviation(model: &FunctionModel, p: f64) -> Result<(f64, bool), BoundError> {
    let fp = eval_at(model, p)?;
    match quad::integral_mean(model) {
        Ok(mean) => Ok(((fp - mean).abs(), true)),
        Err(QuadError::NonConvergence { value, .. }) => Ok(((fp - value).abs(), false)),
        Err(e) => Err(e.into()),
    }
}

fn status_for(deviation: f64, total_bound: f64, oracle_converged: bool) -> BoundStatus {
    if !oracle_converged {
        BoundStatus::Inconclusive
    } else if deviation <= total_bound + VERIFICATION_SLACK {
        BoundStatus::Holds
    } else {
        BoundStatus::ViolatedObserved
    }
}

fn tightness(deviation: f64, total_bound: f64) -> f64 {
    if total_bound > 0.0 {
        deviation / total_bound
    } else {
        0.0
    }
}

/// Build the report for the mode selected in the request.
pub fn bound_report(req: &BoundRequest) -> Result<BoundReport, BoundError> {
    match req.mode {
        BoundMode::Classical => simple_report(req, BoundMode::Classical),
        BoundMode::Refined => refined_bound(req),
        BoundMode::Piecewise => piecewise_bound(req),
        BoundMode::AtBreakpoint => breakpoint_bound(req),
    }
}

fn simple_report(req: &BoundRequest, mode: BoundMode) -> Result<BoundReport, BoundError> {
    let (a, b) = req.model.domain();
    require_interior(req.p, a, b)?;
    let cmp = comparisons(req.model, req.p, &req.norm_config)?;
    let (deviation, converged) = oracle_deviation(req.model, req.p)?;
    let total_bound = match mode {
        BoundMode::Classical => cmp.classical,
        _ => cmp.refined,
    };
    Ok(BoundReport {
        deviation,
        classical: cmp.classical,
        halfmax: cmp.halfmax,
        refined: cmp.refined,
        piecewise_maxterm: None,
        additive_term: None,
        s: None,
        total_bound,
        status: status_for(deviation, total_bound, converged),
        certified: cmp.certified,
        tightness_ratio: tightness(deviation, total_bound),
        argmax_segment: None,
    })
}

/// total_bound = min(classical, halfmax). The model must be smooth, or
/// have its single breakpoint exactly at p (side norms are then taken
/// over the open interiors on either side of the kink).
pub fn refined_bound(req: &BoundRequest) -> Result<BoundReport, BoundError> {
    if req.mode != BoundMode::Refined {
        return Err(BoundError::ModeMismatch { op: "refined_bound", got: req.mode });
    }
    let bps = req.model.breakpoints();
    if !(bps.is_empty() || (bps.len() == 1 && bps[0] == req.p)) {
        return Err(BoundError::RefinedNeedsSimpleModel { p: req.p });
    }
    simple_report(req, BoundMode::Refined)
}

/// Shared tail of the two piecewise builders: max-term over the cut
/// segments, additive term, totals, and status.
fn piecewise_report(
    req: &BoundRequest,
    cuts: &[f64],
    additive_of_s: impl FnOnce(f64, f64, f64) -> f64,
) -> Result<BoundReport, BoundError> {
    let model = req.model;
    let segments = norms::segment_norms(model, cuts, &req.norm_config)?;
    let mut maxterm = f64::NEG_INFINITY;
    let mut argmax = 0;
    let mut segments_exact = true;
    for (i, seg) in segments.iter().enumerate() {
        let term = 0.5 * (seg.hi - seg.lo) * seg.value;
        if term > maxterm {
            maxterm = term;
            argmax = i;
        }
        segments_exact &= seg.method == NormMethod::ExactProvided;
    }

    let (a, b) = model.domain();
    let fa = eval_at(model, a)?;
    let fb = eval_at(model, b)?;
    let mut s = fa + fb;
    for &bp in model.breakpoints() {
        s += eval_at(model, bp)?;
    }
    let additive = additive_of_s(fa, fb, s);
    let total_bound = maxterm + additive;

    let cmp = comparisons(model, req.p, &req.norm_config)?;
    let (deviation, converged) = oracle_deviation(model, req.p)?;
    Ok(BoundReport {
        deviation,
        classical: cmp.classical,
        halfmax: cmp.halfmax,
        refined: cmp.refined,
        piecewise_maxterm: Some(maxterm),
        additive_term: Some(additive),
        s: Some(s),
        total_bound,
        status: status_for(deviation, total_bound, converged),
        certified: cmp.certified && segments_exact,
        tightness_ratio: tightness(deviation, total_bound),
        argmax_segment: Some(argmax),
    })
}

/// Piecewise bound for p strictly between breakpoints: the interval is
/// cut at every breakpoint and at p itself, and the additive term is
/// `max{f(a) - S, S - f(b)}`.
pub fn piecewise_bound(req: &BoundRequest) -> Result<BoundReport, BoundError> {
    if req.mode != BoundMode::Piecewise {
        return Err(BoundError::ModeMismatch { op: "piecewise_bound", got: req.mode });
    }
    let model = req.model;
    let (a, b) = model.domain();
    require_interior(req.p, a, b)?;
    if model.breakpoints().is_empty() {
        return Err(BoundError::NoBreakpoints);
    }
    if model.is_breakpoint(req.p) {
        return Err(BoundError::PointIsBreakpoint { p: req.p });
    }

    let mut cuts = Vec::with_capacity(model.breakpoints().len() + 3);
    cuts.push(a);
    cuts.extend_from_slice(model.breakpoints());
    cuts.push(req.p);
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("cut points are finite"));

    piecewise_report(req, &cuts, |fa, fb, s| (fa - s).max(s - fb))
}

/// Piecewise bound for p sitting exactly on a breakpoint: the interval
/// is cut at the breakpoints only, and the additive term is
/// `max{f(a) + f(p) - S, S - f(p) - f(b)}`.
pub fn breakpoint_bound(req: &BoundRequest) -> Result<BoundReport, BoundError> {
    if req.mode != BoundMode::AtBreakpoint {
        return Err(BoundError::ModeMismatch { op: "breakpoint_bound", got: req.mode });
    }
    let model = req.model;
    let (a, b) = model.domain();
    require_interior(req.p, a, b)?;
    if !model.is_breakpoint(req.p) {
        return Err(BoundError::NotABreakpoint { p: req.p });
    }

    let mut cuts = Vec::with_capacity(model.breakpoints().len() + 2);
    cuts.push(a);
    cuts.extend_from_slice(model.breakpoints());
    cuts.push(b);

    let fp = eval_at(model, req.p)?;
    piecewise_report(req, &cuts, move |fa, fb, s| (fa + fp - s).max(s - fp - fb))
}

/// Reports at `grid_size` uniformly spaced interior points
/// `p_k = a + k (b-a)/(grid_size+1)`, skipping points that land exactly
/// on a breakpoint. Grid points are evaluated in parallel; the result
/// order follows the grid regardless of scheduling.
pub fn sweep(
    model: &FunctionModel,
    grid_size: usize,
    mode: BoundMode,
    norm_config: NormConfig,
) -> Result<Vec<SweepEntry>, BoundError> {
    use rayon::prelude::*;

    if grid_size < 2 {
        return Err(BoundError::GridTooSmall { got: grid_size });
    }
    let (a, b) = model.domain();
    let step = (b - a) / (grid_size as f64 + 1.0);
    let points: Vec<f64> = (1..=grid_size)
        .map(|k| a + k as f64 * step)
        .filter(|&p| !model.is_breakpoint(p))
        .collect();

    points
        .into_par_iter()
        .map(|p| {
            let req = BoundRequest { model, p, mode, norm_config };
            bound_report(&req).map(|report| SweepEntry { p, report })
        })
        .collect()
}
