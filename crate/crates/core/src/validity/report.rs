use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub measured: Option<f64>,
    pub threshold: Option<f64>,
    pub unit: Option<String>,
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, status: CheckStatus) -> Self {
        CheckResult {
            name: name.to_string(),
            status,
            measured: None,
            threshold: None,
            unit: None,
            detail: None,
        }
    }

    pub fn pass_if(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { CheckStatus::Pass } else { CheckStatus::Fail })
    }

    pub fn skipped(name: &str, why: impl Into<String>) -> Self {
        Self::new(name, CheckStatus::Skipped).detail(why)
    }

    pub fn measured(mut self, value: f64, threshold: f64, unit: &str) -> Self {
        self.measured = Some(value);
        self.threshold = Some(threshold);
        self.unit = Some(unit.to_string());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub chemistry: Vec<CheckResult>,
    pub intramolecular: Vec<CheckResult>,
    pub intermolecular: Vec<CheckResult>,
    pub pb_valid: bool,
    pub skipped_count: usize,
}

impl ValidityReport {
    /// Assemble a report, deriving the verdict from the individual checks.
    pub fn new(
        chemistry: Vec<CheckResult>,
        intramolecular: Vec<CheckResult>,
        intermolecular: Vec<CheckResult>,
    ) -> Self {
        let mut r = ValidityReport {
            chemistry,
            intramolecular,
            intermolecular,
            pb_valid: false,
            skipped_count: 0,
        };
        r.pb_valid = pb_valid(&r);
        r.skipped_count = r.checks().filter(|c| c.status == CheckStatus::Skipped).count();
        r
    }

    pub fn checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.chemistry
            .iter()
            .chain(&self.intramolecular)
            .chain(&self.intermolecular)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// True iff no check failed. Skipped checks do not block.
pub fn pb_valid(report: &ValidityReport) -> bool {
    report.checks().all(|c| c.status != CheckStatus::Fail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn passes(n: usize) -> Vec<CheckResult> {
        (0..n).map(|i| CheckResult::pass_if(&format!("c{i}"), true)).collect()
    }

    #[test]
    fn all_pass() {
        let r = ValidityReport::new(passes(6), passes(6), passes(6));
        assert!(r.pb_valid);
        assert_eq!(r.skipped_count, 0);
    }

    #[test]
    fn one_failure_blocks() {
        let mut inter = passes(6);
        inter[3] = CheckResult::pass_if("bad", false);
        let r = ValidityReport::new(passes(7), passes(6), inter);
        assert!(!r.pb_valid);
        assert_eq!(r.failed(), vec!["bad"]);
    }

    #[test]
    fn skip_does_not_block() {
        let mut intra = passes(5);
        intra.push(CheckResult::skipped("internal_energy", "no provider"));
        let r = ValidityReport::new(passes(6), intra, passes(6));
        assert!(r.pb_valid);
        assert_eq!(r.skipped_count, 1);
    }

    #[test]
    fn json_field_names() {
        let r = ValidityReport::new(
            vec![CheckResult::pass_if("x", true).measured(1.0, 2.0, "Å")],
            vec![],
            vec![],
        );
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let c = &v["chemistry"][0];
        for key in ["name", "status", "measured", "threshold", "unit", "detail"] {
            assert!(c.get(key).is_some(), "{key}");
        }
        assert_eq!(c["status"], "pass");
        assert_eq!(v["pb_valid"], true);
    }
}
