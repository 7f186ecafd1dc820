//! Bundled reference corpus: twelve smooth functions on intervals where
//! they are well behaved, used by the self-test suites and benchmarks.

use crate::expr::FunctionModel;

/// One corpus function with its interval.
#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub expression: &'static str,
    pub lo: f64,
    pub hi: f64,
}

impl CorpusEntry {
    /// Build the model. Corpus entries are maintained to be valid, so a
    /// failure here is an internal defect.
    pub fn model(&self) -> FunctionModel {
        let ast = self.expression.parse().expect("corpus expression parses");
        FunctionModel::new(ast, self.lo, self.hi).expect("corpus entry is well formed")
    }
}

/// Polynomials through degree five plus exp, log, 1/t, and sine.
pub const SMOOTH: &[CorpusEntry] = &[
    CorpusEntry { name: "constant", expression: "2.5", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "linear", expression: "x", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "affine", expression: "2*x + 1", lo: -1.0, hi: 1.0 },
    CorpusEntry { name: "quadratic", expression: "x^2", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "cubic", expression: "x^3 - x", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "quartic", expression: "0.5*x^4 - 2*x^2", lo: -1.0, hi: 1.0 },
    CorpusEntry { name: "quintic", expression: "x^5", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "quintic-mixed", expression: "x^5 - 2*x^2 + x", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "exponential", expression: "exp(x)", lo: 0.0, hi: 1.0 },
    CorpusEntry { name: "logarithm", expression: "log(x)", lo: 1.0, hi: 3.0 },
    CorpusEntry { name: "reciprocal", expression: "1/x", lo: 1.0, hi: 2.0 },
    CorpusEntry { name: "sine", expression: "sin(x)", lo: 0.0, hi: 3.0 },
];

/// Look up a corpus entry by name.
pub fn by_name(name: &str) -> Option<&'static CorpusEntry> {
    SMOOTH.iter().find(|e| e.name == name)
}
