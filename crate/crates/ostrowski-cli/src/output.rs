use ostrowski::{BoundReport, MeansReport, SweepEntry};

pub const SWEEP_HEADER: &str =
    "p,deviation,classical,halfmax,refined,total_bound,status,tightness_ratio";

/// 17 significant digits, enough to reconstruct the exact binary64 value.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn bound_json(report: &BoundReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn means_json(report: &MeansReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn sweep_json(entries: &[SweepEntry]) -> String {
    let mut s = serde_json::to_string_pretty(entries).expect("entries serialize");
    s.push('\n');
    s
}

fn csv_row(p: f64, report: &BoundReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        num(p),
        num(report.deviation),
        num(report.classical),
        num(report.halfmax),
        num(report.refined),
        num(report.total_bound),
        report.status,
        num(report.tightness_ratio),
    )
}

pub fn bound_csv(p: f64, report: &BoundReport) -> String {
    format!("{SWEEP_HEADER}\n{}\n", csv_row(p, report))
}

pub fn sweep_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for entry in entries {
        out.push_str(&csv_row(entry.p, &entry.report));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_through_the_csv_format() {
        for &x in &[0.1, 1.0 / 3.0, 0.8100000000000001, 2.5e-17, -4.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }
}
