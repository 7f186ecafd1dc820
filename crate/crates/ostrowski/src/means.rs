//! Classical discrete means of a positive pair and the refined
//! inequalities bounding the gaps between them.
//!
//! For `0 < a < b` the arithmetic, geometric, harmonic, and logarithmic
//! means interleave strictly:
//!
//! ```text
//! a < H < G < L < A < b
//! ```
//!
//! The three refined inequalities bound `A - L`, `L - G`, and `L - H`.
//! They are evaluated exactly as stated, with no rescaling or clamping;
//! the `holds` flags record what the formulas actually do, and the
//! reciprocal-substitution bound they descend from is exposed separately
//! so the relationship can be tested.

use serde::Serialize;

/// Absolute slack applied when flagging an inequality as holding.
pub const MEANS_SLACK: f64 = 1e-12;

/// The four means of a pair `0 < a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeansValues {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "A")]
    pub arithmetic: f64,
    #[serde(rename = "G")]
    pub geometric: f64,
    #[serde(rename = "H")]
    pub harmonic: f64,
    #[serde(rename = "L")]
    pub logarithmic: f64,
}

/// One inequality: left side, right side, and whether
/// `0 <= lhs <= rhs + MEANS_SLACK`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        InequalityCheck { lhs, rhs, holds: (0.0..=rhs + MEANS_SLACK).contains(&lhs) }
    }
}

/// Means of a pair plus the three refined gap inequalities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeansReport {
    #[serde(flatten)]
    pub values: MeansValues,
    /// `A - L` against `A L (b-a) / (4 a^2)`.
    pub ineq_i: InequalityCheck,
    /// `L - G` against `min{G L (b-a)/a^2 [1/4 + ((G-A)/(b-a))^2], (G-a)/(2a^2)}`.
    pub ineq_ii: InequalityCheck,
    /// `L - H` against `min{H L (b-a)/a^2 [1/4 + ((H-A)/(b-a))^2], (b-H)/(2H^2)}`.
    pub ineq_iii: InequalityCheck,
}

impl MeansReport {
    pub fn all_hold(&self) -> bool {
        self.ineq_i.holds && self.ineq_ii.holds && self.ineq_iii.holds
    }
}

/// The deviation bound for f(t) = 1/t on [a, b], the substitution the
/// refined mean inequalities are derived from. The integral mean of 1/t
/// is 1/L, so the deviation at p is |1/p - 1/L| = |(L - p)/(L p)|.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReciprocalBound {
    pub lhs: f64,
    /// `((p-a)^2 + (b-p)^2) / (2(b-a)) * 1/a^2`
    pub classical_term: f64,
    /// `(1/2) max{(p-a)/a^2, (b-p)/p^2}`
    pub halfmax_term: f64,
    /// min of the two terms.
    pub rhs: f64,
    pub holds: bool,
}

/// Mean computation failures.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MeansError {
    #[error("means require 0 < a < b (got a = {a}, b = {b})")]
    BadPair { a: f64, b: f64 },
    #[error("p = {p} must lie strictly inside ({a}, {b})")]
    PointNotInterior { p: f64, a: f64, b: f64 },
}

/// A, G, H, and L for `0 < a < b`.
pub fn compute_means(a: f64, b: f64) -> Result<MeansValues, MeansError> {
    if !(a.is_finite() && b.is_finite() && 0.0 < a && a < b) {
        return Err(MeansError::BadPair { a, b });
    }
    let width = b - a;
    Ok(MeansValues {
        a,
        b,
        arithmetic: 0.5 * (a + b),
        geometric: (a * b).sqrt(),
        harmonic: 2.0 * a * b / (a + b),
        // (b-a)/(ln b - ln a) computed via ln(1 + (b-a)/a), which stays
        // accurate as b approaches a
        logarithmic: width / (width / a).ln_1p(),
    })
}

/// The three refined inequalities on the mean gaps, evaluated literally.
pub fn refined_mean_bounds(a: f64, b: f64) -> Result<MeansReport, MeansError> {
    let values = compute_means(a, b)?;
    let MeansValues {
        arithmetic: am,
        geometric: gm,
        harmonic: hm,
        logarithmic: lm,
        ..
    } = values;
    let width = b - a;
    let quadratic_factor = |m: f64| {
        let offset = (m - am) / width;
        0.25 + offset * offset
    };

    let ineq_i = InequalityCheck::new(am - lm, am * lm * width / (4.0 * a * a));

    let first_ii = gm * lm * width / (a * a) * quadratic_factor(gm);
    let second_ii = (gm - a) / (2.0 * a * a);
    let ineq_ii = InequalityCheck::new(lm - gm, first_ii.min(second_ii));

    let first_iii = hm * lm * width / (a * a) * quadratic_factor(hm);
    let second_iii = (b - hm) / (2.0 * hm * hm);
    let ineq_iii = InequalityCheck::new(lm - hm, first_iii.min(second_iii));

    Ok(MeansReport { values, ineq_i, ineq_ii, ineq_iii })
}

/// Deviation bound for f(t) = 1/t at p, using `sup |f'| = 1/a^2` on
/// [a, p] and `1/p^2` on [p, b].
pub fn reciprocal_deviation_bound(a: f64, b: f64, p: f64) -> Result<ReciprocalBound, MeansError> {
    let lm = compute_means(a, b)?.logarithmic;
    if !(p.is_finite() && a < p && p < b) {
        return Err(MeansError::PointNotInterior { p, a, b });
    }
    let lhs = ((lm - p) / (lm * p)).abs();
    let classical_term =
        ((p - a) * (p - a) + (b - p) * (b - p)) / (2.0 * (b - a)) / (a * a);
    let halfmax_term = 0.5 * ((p - a) / (a * a)).max((b - p) / (p * p));
    let rhs = classical_term.min(halfmax_term);
    Ok(ReciprocalBound { lhs, classical_term, halfmax_term, rhs, holds: lhs <= rhs + MEANS_SLACK })
}
