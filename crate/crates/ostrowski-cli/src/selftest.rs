use ostrowski::bounds::{classical_bound, halfmax_bound};
use ostrowski::norms::{sup_norm, NormMethod, SubintervalNorm};
use ostrowski::{corpus, means, quad, NormConfig, RatioList};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES_PER_SUITE: usize = 1_000;

/// Name of the environment variable that injects a deliberate defect, so
/// the failure path of the selftest can itself be exercised. The only
/// recognised value is `halfmax-sign-flip`.
pub const MUTATION_ENV: &str = "OSTROWSKI_SELFTEST_MUTATION";

pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    fn pass(name: &'static str) -> Self {
        SuiteOutcome { name, cases: CASES_PER_SUITE, failures: 0, first_failure: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn summary_line(&self) -> String {
        match &self.first_failure {
            None => format!("suite {}: pass ({} cases)", self.name, self.cases),
            Some(detail) => format!(
                "suite {}: FAIL ({} of {} cases; first: {detail})",
                self.name, self.failures, self.cases
            ),
        }
    }
}

fn record(outcome: &mut SuiteOutcome, detail: String) {
    outcome.failures += 1;
    outcome.first_failure.get_or_insert(detail);
}

/// Runs the four bundled suites at reduced iteration counts. A mutation
/// string (from [`MUTATION_ENV`]) corrupts one computation on purpose;
/// `None` runs the honest build.
pub fn run_all(mutation: Option<&str>) -> Vec<SuiteOutcome> {
    vec![
        mediant_sandwich(),
        form_equivalence(),
        dominance_chain(mutation),
        means_ordering(),
    ]
}

/// min ratio <= mediant <= max ratio on random ratio lists.
fn mediant_sandwich() -> SuiteOutcome {
    let mut outcome = SuiteOutcome::pass("mediant-sandwich");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..CASES_PER_SUITE {
        let n = rng.random_range(1..=8usize);
        let nums: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
        let dens: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..100.0)).collect();
        let list = RatioList::new(nums, dens).expect("positive denominators");
        let mediant = list.mediant();
        let lo = list.ratios().fold(f64::INFINITY, f64::min);
        let hi = list.ratios().fold(f64::NEG_INFINITY, f64::max);
        let slack = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        if !(lo - slack <= mediant && mediant <= hi + slack) {
            record(
                &mut outcome,
                format!("case {case}: mediant {mediant} outside [{lo}, {hi}]"),
            );
        }
    }
    outcome
}

/// The interval-geometry classical factor against its quotient form.
fn form_equivalence() -> SuiteOutcome {
    let mut outcome = SuiteOutcome::pass("form-equivalence");
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for case in 0..CASES_PER_SUITE {
        let a: f64 = rng.random_range(-100.0..100.0);
        let width: f64 = rng.random_range(1e-3..200.0);
        let b = a + width;
        let p = a + rng.random_range(1e-6..1.0f64) * width;
        let norm = SubintervalNorm {
            lo: a,
            hi: b,
            value: 1.0,
            method: NormMethod::ExactProvided,
            samples_used: 0,
        };
        let geometry = classical_bound(p, a, b, &norm).expect("interior point");
        let quotient = ((p - a) * (p - a) + (b - p) * (b - p)) / (2.0 * width);
        if (geometry - quotient).abs() > 1e-12 * geometry.abs() {
            record(
                &mut outcome,
                format!("case {case}: {geometry} vs {quotient} at p {p} in [{a}, {b}]"),
            );
        }
    }
    outcome
}

/// deviation <= min(classical, halfmax) <= classical over the corpus.
/// The integral mean of each corpus function is computed once; the
/// mutation hook flips the sign of the right halfmax arm.
fn dominance_chain(mutation: Option<&str>) -> SuiteOutcome {
    let mut outcome = SuiteOutcome::pass("dominance-chain");
    let right_arm_sign = match mutation {
        Some("halfmax-sign-flip") => -1.0,
        _ => 1.0,
    };
    let cfg = NormConfig::default();
    let models: Vec<_> = corpus::SMOOTH
        .iter()
        .map(|entry| {
            let model = entry.model();
            let mean = quad::integral_mean(&model).expect("corpus integrates");
            (model, mean)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for case in 0..CASES_PER_SUITE {
        let (model, mean) = &models[case % models.len()];
        let (lo, hi) = model.domain();
        let p = lo + rng.random_range(0.02..0.98) * (hi - lo);
        let deviation = (model.eval(p).expect("corpus evaluates") - mean).abs();
        let norm_ab = sup_norm(model, lo, hi, &cfg).expect("norm converges");
        let norm_ap = sup_norm(model, lo, p, &cfg).expect("norm converges");
        let norm_pb = sup_norm(model, p, hi, &cfg).expect("norm converges");
        let classical = classical_bound(p, lo, hi, &norm_ab).expect("interior point");
        let halfmax = {
            let plain = halfmax_bound(p, lo, hi, &norm_ap, &norm_pb).expect("interior point");
            let left = (p - lo) * norm_ap.value;
            let right = right_arm_sign * (hi - p) * norm_pb.value;
            let local = 0.5 * left.max(right);
            if (local - plain).abs() > 1e-12 * plain.abs() {
                record(
                    &mut outcome,
                    format!("case {case}: halfmax recomputation {local} disagrees with {plain}"),
                );
                continue;
            }
            local
        };
        let refined = classical.min(halfmax);
        if !(deviation <= refined + 1e-9 && refined <= classical + 1e-9) {
            record(
                &mut outcome,
                format!("case {case}: chain broken: {deviation} / {refined} / {classical}"),
            );
        }
    }
    outcome
}

/// a < H < G < L < A < b on random positive pairs across twelve decades.
fn means_ordering() -> SuiteOutcome {
    let mut outcome = SuiteOutcome::pass("means-ordering");
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for case in 0..CASES_PER_SUITE {
        let x = 10.0f64.powf(rng.random_range(-6.0..6.0));
        let y = 10.0f64.powf(rng.random_range(-6.0..6.0));
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        if a == b {
            continue;
        }
        let m = means::compute_means(a, b).expect("valid pair");
        let slack = 1e-12 * b;
        let chain = [a, m.harmonic, m.geometric, m.logarithmic, m.arithmetic, b];
        if chain.windows(2).any(|w| w[0] >= w[1] + slack) {
            record(&mut outcome, format!("case {case}: ordering broken for ({a}, {b})"));
        }
    }
    outcome
}
