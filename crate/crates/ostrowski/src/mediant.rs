//! The mediant inequality.
//!
//! For ratios `a_i / b_i` with positive denominators, the mediant
//! `(a_1 + ... + a_n) / (b_1 + ... + b_n)` always lies between the
//! smallest and the largest ratio: it is the convex combination of the
//! ratios with weights `b_i / (b_1 + ... + b_n)`.

/// Construction failures for [`RatioList`].
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MediantError {
    #[error("ratio list must not be empty")]
    Empty,
    #[error("numerators and denominators must have equal length ({numerators} vs {denominators})")]
    LengthMismatch { numerators: usize, denominators: usize },
    #[error("numerator at index {index} must be finite (got {value})")]
    BadNumerator { index: usize, value: f64 },
    #[error("denominator at index {index} must be finite and positive (got {value})")]
    BadDenominator { index: usize, value: f64 },
}

/// A non-empty list of ratios with finite numerators and strictly
/// positive denominators. Invalid inputs are rejected at construction,
/// so [`mediant`] and [`convex_weights`] cannot fail.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioList {
    numerators: Vec<f64>,
    denominators: Vec<f64>,
}

impl RatioList {
    pub fn new(numerators: Vec<f64>, denominators: Vec<f64>) -> Result<Self, MediantError> {
        if numerators.len() != denominators.len() {
            return Err(MediantError::LengthMismatch {
                numerators: numerators.len(),
                denominators: denominators.len(),
            });
        }
        if numerators.is_empty() {
            return Err(MediantError::Empty);
        }
        for (index, &value) in numerators.iter().enumerate() {
            if !value.is_finite() {
                return Err(MediantError::BadNumerator { index, value });
            }
        }
        for (index, &value) in denominators.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(MediantError::BadDenominator { index, value });
            }
        }
        Ok(RatioList { numerators, denominators })
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn numerators(&self) -> &[f64] {
        &self.numerators
    }

    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    /// The individual ratios `a_i / b_i`.
    pub fn ratios(&self) -> impl Iterator<Item = f64> + '_ {
        self.numerators
            .iter()
            .zip(&self.denominators)
            .map(|(&a, &b)| a / b)
    }

    /// `(sum of numerators) / (sum of denominators)`.
    pub fn mediant(&self) -> f64 {
        let num: f64 = self.numerators.iter().sum();
        let den: f64 = self.denominators.iter().sum();
        num / den
    }

    /// The weights `b_i / (b_1 + ... + b_n)` expressing the mediant as a
    /// convex combination of the ratios.
    pub fn convex_weights(&self) -> Vec<f64> {
        let den: f64 = self.denominators.iter().sum();
        self.denominators.iter().map(|&b| b / den).collect()
    }
}
