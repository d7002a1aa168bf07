use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Outcome class of one experiment instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    TheoremViolation,
    BoundExceeded,
    Error,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceReport {
    pub group: String,
    pub prime: u64,
    pub inputs: serde_json::Value,
    pub results: serde_json::Value,
    pub witnesses: serde_json::Value,
    pub ms: u64,
    pub outcome: Outcome,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub instances: Vec<InstanceReport>,
    pub version: String,
    pub hashes: Vec<String>,
}

impl Report {
    pub fn new(experiment: &str, instances: Vec<InstanceReport>, hashes: Vec<String>) -> Self {
        Report {
            experiment: experiment.to_string(),
            instances,
            version: env!("CARGO_PKG_VERSION").to_string(),
            hashes,
        }
    }

    pub fn passed(&self) -> bool {
        self.instances.iter().all(|i| i.passed())
    }

    pub fn worst_outcome(&self) -> Outcome {
        let mut worst = Outcome::Pass;
        for i in &self.instances {
            worst = match (worst, i.outcome) {
                (_, Outcome::TheoremViolation) | (Outcome::TheoremViolation, _) => {
                    Outcome::TheoremViolation
                }
                (_, Outcome::BoundExceeded) | (Outcome::BoundExceeded, _) => Outcome::BoundExceeded,
                (_, Outcome::Error) | (Outcome::Error, _) => Outcome::Error,
                (_, Outcome::Fail) | (Outcome::Fail, _) => Outcome::Fail,
                _ => Outcome::Pass,
            };
        }
        worst
    }

    /// Copy with timings zeroed, for byte-identical comparisons.
    pub fn redact_timings(&self) -> Report {
        let mut r = self.clone();
        for i in &mut r.instances {
            i.ms = 0;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            _ => Err(Error::Parse(format!("unknown format '{s}'"))),
        }
    }
}

/// Serialize a report with stable field ordering.
pub fn emit(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes") + "\n"),
        Format::Csv => {
            let mut out = String::new();
            // degree-indexed results flatten to one column per degree
            let max_deg = report
                .instances
                .iter()
                .filter_map(|i| i.results.get("limits").and_then(|l| l.as_array()).map(|a| a.len()))
                .max()
                .unwrap_or(0);
            out.push_str("experiment,group,prime,inputs,outcome,ms");
            for k in 0..max_deg {
                out.push_str(&format!(",lim{k}"));
            }
            out.push('\n');
            for i in &report.instances {
                let inputs = serde_json::to_string(&i.inputs).unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{:?},{}",
                    report.experiment,
                    i.group,
                    i.prime,
                    csv_quote(&inputs),
                    i.outcome,
                    i.ms
                ));
                let lims = i.results.get("limits").and_then(|l| l.as_array());
                for k in 0..max_deg {
                    let cell = lims
                        .and_then(|a| a.get(k))
                        .map(|v| v.to_string())
                        .unwrap_or_default();
                    out.push_str(&format!(",{}", csv_quote(&cell)));
                }
                out.push('\n');
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = format!("experiment {}\n", report.experiment);
            for i in &report.instances {
                out.push_str(&format!(
                    "  {:<24} p={:<2} {:>6} ms  {:?}  {}\n",
                    i.group,
                    i.prime,
                    i.ms,
                    i.outcome,
                    serde_json::to_string(&i.results).unwrap_or_default()
                ));
            }
            out.push_str(&format!(
                "result: {}\n",
                if report.passed() { "PASS" } else { "FAIL" }
            ));
            Ok(out)
        }
    }
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            "vanishing",
            vec![InstanceReport {
                group: "S4".into(),
                prime: 2,
                inputs: serde_json::json!({"degrees": [2, 3]}),
                results: serde_json::json!({"limits": ["1", "1"]}),
                witnesses: serde_json::json!(null),
                ms: 12,
                outcome: Outcome::Pass,
            }],
            vec!["abc".into()],
        )
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let r = sample();
        let s = emit(&r, Format::Json).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&r).unwrap());
    }

    #[test]
    fn csv_has_degree_columns() {
        let r = sample();
        let s = emit(&r, Format::Csv).unwrap();
        assert!(s.lines().next().unwrap().ends_with("lim0,lim1"));
    }

    #[test]
    fn redaction_zeroes_timings() {
        let r = sample().redact_timings();
        assert_eq!(r.instances[0].ms, 0);
    }
}
