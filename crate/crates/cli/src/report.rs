//! Check reports and their JSON and text renderings.

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The quantity diverges and divergence was the expected outcome.
    Diverges,
}

/// One sample of a check, kept when it is among the worst.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub sample: String,
    pub error: f64,
}

/// Field order here is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub status: Status,
    pub max_error: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub details: Vec<Detail>,
}

/// How many worst-case samples a report keeps.
pub const DETAIL_COUNT: usize = 3;

impl CheckReport {
    /// Builds a report from per-sample errors, in sample order. NaN and
    /// infinite errors are stored as `f64::MAX` so the JSON stays numeric.
    pub fn from_errors(check_id: &str, tolerance: f64, seed: u64, errors: Vec<(String, f64)>) -> Self {
        let clean = |e: f64| if e.is_finite() { e } else { f64::MAX };
        let max_error = errors.iter().map(|(_, e)| clean(*e)).fold(0.0, f64::max);
        let samples = errors.len();
        let mut worst: Vec<Detail> = errors.into_iter().map(|(sample, e)| Detail { sample, error: clean(e) }).collect();
        // stable sort: ties keep sample order
        worst.sort_by(|a, b| b.error.total_cmp(&a.error));
        worst.truncate(DETAIL_COUNT);
        let status = if max_error <= tolerance { Status::Pass } else { Status::Fail };
        CheckReport { check_id: check_id.to_string(), status, max_error, tolerance, samples, seed, details: worst }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(format!("unknown format `{s}` (expected json or text)")),
        }
    }
}

pub fn emit(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Diverges => "diverges",
                };
                let _ = writeln!(
                    s,
                    "{:<8} {:<40} max_error {:.3e}  tol {:.1e}  samples {}  seed {}",
                    status, r.check_id, r.max_error, r.tolerance, r.samples, r.seed
                );
                for d in &r.details {
                    let _ = writeln!(s, "         {:.3e} at {}", d.error, d.sample);
                }
            }
            s
        }
    }
}

/// 0 when every check passed or diverged as expected, 1 otherwise.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::passed) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_details_first() {
        let errs = vec![("a".into(), 1e-12), ("b".into(), 3e-11), ("c".into(), f64::NAN), ("d".into(), 0.0)];
        let r = CheckReport::from_errors("x", 1e-9, 1, errs);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.max_error, f64::MAX);
        let order: Vec<_> = r.details.iter().map(|d| d.sample.as_str()).collect();
        assert_eq!(order, ["c", "b", "a"]);
        assert_eq!(r.samples, 4);
    }

    #[test]
    fn empty_list() {
        assert_eq!(emit(&[], Format::Json), "[]\n");
        assert_eq!(exit_code(&[]), 0);
    }

    #[test]
    fn key_order() {
        let r = CheckReport::from_errors("x", 1.0, 2, vec![("p".into(), 0.5)]);
        let s = serde_json::to_string(&r).unwrap();
        let keys = ["check_id", "status", "max_error", "tolerance", "samples", "seed", "details"];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]), "{s}");
    }
}
