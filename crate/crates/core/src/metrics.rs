//! Benchmark aggregation: success rates, target-level averaging, correlation,
//! moving averages and report emission.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Å; a pose succeeds when its RMSD is strictly below this.
pub const SUCCESS_RMSD: f64 = 2.0;
/// Pocket similarity at or above which an entry counts as "similar".
pub const SIMILARITY_STRATUM: f64 = 0.70;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("no records")]
    Empty,
    #[error("input lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least two values are needed, got {0}")]
    TooShort(usize),
    #[error("correlation is undefined for constant input")]
    ConstantInput,
    #[error("window {window} must be between 1 and the series length {len}")]
    Window { window: usize, len: usize },
    #[error("record {0} has no pocket_similarity; required for stratification")]
    MissingSimilarity(String),
    #[error("record {entry_id}: {reason}")]
    InvalidRecord { entry_id: String, reason: String },
    #[error("record CSV: {0}")]
    Csv(String),
}

/// One top-1 prediction. CSV column order matches field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub entry_id: String,
    pub target_id: String,
    pub method: String,
    /// Å.
    pub rmsd: f64,
    pub pb_valid: bool,
    pub pocket_similarity: Option<f64>,
    pub relaxed: bool,
    pub run_id: Option<String>,
}

impl EvaluationRecord {
    pub fn validate(&self) -> Result<(), MetricsError> {
        let bad = |reason: &str| MetricsError::InvalidRecord {
            entry_id: self.entry_id.clone(),
            reason: reason.to_string(),
        };
        if !(self.rmsd >= 0.0) || !self.rmsd.is_finite() {
            return Err(bad("rmsd must be a finite value ≥ 0"));
        }
        if let Some(s) = self.pocket_similarity {
            if !(0.0..=1.0).contains(&s) {
                return Err(bad("pocket_similarity must be in [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn succeeds(&self, criterion: Criterion) -> bool {
        self.succeeds_at(criterion, SUCCESS_RMSD)
    }

    pub fn succeeds_at(&self, criterion: Criterion, threshold: f64) -> bool {
        self.rmsd < threshold && (criterion == Criterion::RmsdOnly || self.pb_valid)
    }

    fn sort_key(&self) -> (&str, &str, Option<&str>, &str, bool) {
        (&self.method, &self.entry_id, self.run_id.as_deref(), &self.target_id, self.relaxed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    RmsdOnly,
    RmsdAndValid,
}

impl Criterion {
    pub const ALL: [Criterion; 2] = [Criterion::RmsdOnly, Criterion::RmsdAndValid];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::RmsdOnly => "rmsd_only",
            Criterion::RmsdAndValid => "rmsd_and_valid",
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rmsd_only" => Ok(Criterion::RmsdOnly),
            "rmsd_and_valid" => Ok(Criterion::RmsdAndValid),
            _ => Err(format!("unknown criterion {s:?} (expected rmsd_only or rmsd_and_valid)")),
        }
    }
}

/// Percent of records meeting `criterion`, unrounded.
pub fn success_rate(records: &[EvaluationRecord], criterion: Criterion) -> Result<f64, MetricsError> {
    success_rate_at(records, criterion, SUCCESS_RMSD)
}

/// [`success_rate`] with a custom RMSD threshold (still strict).
pub fn success_rate_at(records: &[EvaluationRecord], criterion: Criterion, threshold: f64) -> Result<f64, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    let hits = records.iter().filter(|r| r.succeeds_at(criterion, threshold)).count();
    Ok(100.0 * (hits as f64 / records.len() as f64))
}

/// Unweighted mean over targets of each target's success rate, in percent.
pub fn target_level_success(records: &[EvaluationRecord], criterion: Criterion) -> Result<f64, MetricsError> {
    target_level_success_at(records, criterion, SUCCESS_RMSD)
}

pub fn target_level_success_at(
    records: &[EvaluationRecord],
    criterion: Criterion,
    threshold: f64,
) -> Result<f64, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut per_target: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for r in records {
        let t = per_target.entry(&r.target_id).or_default();
        t.0 += r.succeeds_at(criterion, threshold) as usize;
        t.1 += 1;
    }
    let sum: f64 = per_target.values().map(|&(h, n)| h as f64 / n as f64).sum();
    Ok(100.0 * (sum / per_target.len() as f64))
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, MetricsError> {
    if x.len() != y.len() {
        return Err(MetricsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(MetricsError::TooShort(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(MetricsError::ConstantInput);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Trailing mean over each contiguous window; `n − window + 1` values.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>, MetricsError> {
    if window == 0 || window > values.len() {
        return Err(MetricsError::Window {
            window,
            len: values.len(),
        });
    }
    // windows summed directly so every output is independent of the others' rounding
    Ok(values
        .windows(window)
        .map(|w| w.iter().sum::<f64>() / window as f64)
        .collect())
}

/// Mean and sample standard deviation over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunStat {
    pub mean: f64,
    /// `null` with fewer than two runs.
    pub sample_std: Option<f64>,
    pub runs: usize,
}

impl RunStat {
    pub fn from_values(v: &[f64]) -> Option<RunStat> {
        if v.is_empty() {
            return None;
        }
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let sample_std = (v.len() > 1).then(|| (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt());
        Some(RunStat {
            mean,
            sample_std,
            runs: v.len(),
        })
    }

    /// Two-decimal `mean ± std` (or just the mean for a single run).
    pub fn display(&self) -> String {
        match self.sample_std {
            Some(s) => format!("{:.2} ± {:.2}", self.mean, s),
            None => format!("{:.2}", self.mean),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub records: usize,
    pub mean_rmsd: f64,
    pub success_rmsd_only: RunStat,
    pub success_rmsd_and_valid: RunStat,
    pub target_level_rmsd_only: RunStat,
    pub target_level_rmsd_and_valid: RunStat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodSummary {
    pub method: String,
    pub runs: Vec<String>,
    pub overall: GroupSummary,
    /// Keys `relaxed` / `unrelaxed`, present when that group has records.
    pub by_relaxation: BTreeMap<String, GroupSummary>,
    /// Keys `similar` / `dissimilar`; only in stratified reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub by_pocket_similarity: Option<BTreeMap<String, GroupSummary>>,
    /// Pearson r of pocket similarity vs RMSD over records that carry a
    /// similarity; `null` when undefined.
    pub pearson_similarity_rmsd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub record_count: usize,
    pub success_threshold_rmsd: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub similarity_threshold: Option<f64>,
    pub std_kind: &'static str,
    pub methods: Vec<MethodSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportConfig {
    /// Split by pocket similarity at this threshold (inclusive on the
    /// "similar" side).
    pub stratify: Option<f64>,
    /// Å, strict.
    pub success_threshold: f64,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            stratify: Some(SIMILARITY_STRATUM),
            success_threshold: SUCCESS_RMSD,
        }
    }
}

/// Rendered report artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportArtifacts {
    pub report: Report,
    pub json: String,
    /// Per-record CSV, sorted by (method, entry_id, run_id).
    pub records_csv: String,
    /// One row per method, two-decimal presentation.
    pub summary_csv: String,
}

fn group_summary(records: &[&EvaluationRecord], threshold: f64) -> GroupSummary {
    let mut runs: BTreeMap<Option<&str>, Vec<EvaluationRecord>> = BTreeMap::new();
    for r in records {
        runs.entry(r.run_id.as_deref()).or_default().push((*r).clone());
    }
    let stat = |f: &dyn Fn(&[EvaluationRecord]) -> f64| {
        let v: Vec<f64> = runs.values().map(|rs| f(rs)).collect();
        RunStat::from_values(&v).expect("groups are non-empty")
    };
    let rate = |c| move |rs: &[EvaluationRecord]| success_rate_at(rs, c, threshold).expect("non-empty");
    let tl = |c| move |rs: &[EvaluationRecord]| target_level_success_at(rs, c, threshold).expect("non-empty");
    GroupSummary {
        records: records.len(),
        mean_rmsd: records.iter().map(|r| r.rmsd).sum::<f64>() / records.len() as f64,
        success_rmsd_only: stat(&rate(Criterion::RmsdOnly)),
        success_rmsd_and_valid: stat(&rate(Criterion::RmsdAndValid)),
        target_level_rmsd_only: stat(&tl(Criterion::RmsdOnly)),
        target_level_rmsd_and_valid: stat(&tl(Criterion::RmsdAndValid)),
    }
}

fn split_summary<'a>(
    records: &[&'a EvaluationRecord],
    threshold: f64,
    key: impl Fn(&EvaluationRecord) -> &'static str,
) -> BTreeMap<String, GroupSummary> {
    let mut groups: BTreeMap<&'static str, Vec<&'a EvaluationRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(key(r)).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(k, v)| (k.to_string(), group_summary(&v, threshold)))
        .collect()
}

/// Aggregate records per method. Output does not depend on record order.
pub fn build_report(records: &[EvaluationRecord], config: &ReportConfig) -> Result<Report, MetricsError> {
    if records.is_empty() {
        return Err(MetricsError::Empty);
    }
    for r in records {
        r.validate()?;
        if config.stratify.is_some() && r.pocket_similarity.is_none() {
            return Err(MetricsError::MissingSimilarity(r.entry_id.clone()));
        }
    }
    let mut sorted: Vec<&EvaluationRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let mut by_method: BTreeMap<&str, Vec<&EvaluationRecord>> = BTreeMap::new();
    for r in &sorted {
        by_method.entry(&r.method).or_default().push(r);
    }
    let methods = by_method
        .into_iter()
        .map(|(method, rs)| {
            let mut runs: Vec<String> = rs.iter().map(|r| r.run_id.clone().unwrap_or_default()).collect();
            runs.sort();
            runs.dedup();
            let (sx, sy): (Vec<f64>, Vec<f64>) = rs
                .iter()
                .filter_map(|r| r.pocket_similarity.map(|s| (s, r.rmsd)))
                .unzip();
            MethodSummary {
                method: method.to_string(),
                runs,
                overall: group_summary(&rs, config.success_threshold),
                by_relaxation: split_summary(&rs, config.success_threshold, |r| if r.relaxed { "relaxed" } else { "unrelaxed" }),
                by_pocket_similarity: config.stratify.map(|t| {
                    split_summary(&rs, config.success_threshold, move |r| {
                        if r.pocket_similarity.expect("checked") >= t {
                            "similar"
                        } else {
                            "dissimilar"
                        }
                    })
                }),
                pearson_similarity_rmsd: pearson(&sx, &sy).ok(),
            }
        })
        .collect();
    Ok(Report {
        record_count: records.len(),
        success_threshold_rmsd: config.success_threshold,
        similarity_threshold: config.stratify,
        std_kind: "sample standard deviation over runs",
        methods,
    })
}

/// Report plus its JSON, per-record CSV and summary CSV renderings.
pub fn generate_report(records: &[EvaluationRecord], config: &ReportConfig) -> Result<ReportArtifacts, MetricsError> {
    let report = build_report(records, config)?;
    let mut json = serde_json::to_string_pretty(&report).expect("report serialises");
    json.push('\n');
    let mut sorted = records.to_vec();
    sorted.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    let records_csv = write_records_csv(&sorted);

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "method",
        "records",
        "runs",
        "success_rmsd_only",
        "success_rmsd_and_valid",
        "target_level_rmsd_only",
        "target_level_rmsd_and_valid",
        "mean_rmsd",
    ])
    .expect("in-memory CSV");
    for m in &report.methods {
        let o = &m.overall;
        w.write_record([
            m.method.clone(),
            o.records.to_string(),
            m.runs.len().to_string(),
            o.success_rmsd_only.display(),
            o.success_rmsd_and_valid.display(),
            o.target_level_rmsd_only.display(),
            o.target_level_rmsd_and_valid.display(),
            format!("{:.2}", o.mean_rmsd),
        ])
        .expect("in-memory CSV");
    }
    let summary_csv = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    Ok(ReportArtifacts {
        report,
        json,
        records_csv,
        summary_csv,
    })
}

pub const RECORD_COLUMNS: [&str; 8] = [
    "entry_id",
    "target_id",
    "method",
    "rmsd",
    "pb_valid",
    "pocket_similarity",
    "relaxed",
    "run_id",
];

/// Records as CSV in the given order.
pub fn write_records_csv(records: &[EvaluationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if records.is_empty() {
        w.write_record(RECORD_COLUMNS).expect("in-memory CSV");
    }
    for r in records {
        w.serialize(r).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

#[derive(Debug, Deserialize)]
struct RawRecord {
    entry_id: String,
    target_id: String,
    method: String,
    rmsd: Option<f64>,
    pb_valid: Option<bool>,
    pocket_similarity: Option<f64>,
    relaxed: bool,
    run_id: Option<String>,
    #[serde(default)]
    error: Option<String>,
}

/// Parsed records and the number of rows skipped because they carry an
/// `error` (an optional extra column written by batch evaluation).
pub fn read_records_csv(text: &str) -> Result<(Vec<EvaluationRecord>, usize), MetricsError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut out, mut skipped) = (Vec::new(), 0);
    for row in rdr.deserialize::<RawRecord>() {
        let r = row.map_err(|e| MetricsError::Csv(e.to_string()))?;
        if r.error.as_deref().is_some_and(|e| !e.is_empty()) {
            skipped += 1;
            continue;
        }
        let missing = |f: &str| MetricsError::InvalidRecord {
            entry_id: r.entry_id.clone(),
            reason: format!("{f} is empty"),
        };
        let rec = EvaluationRecord {
            rmsd: r.rmsd.ok_or_else(|| missing("rmsd"))?,
            pb_valid: r.pb_valid.ok_or_else(|| missing("pb_valid"))?,
            entry_id: r.entry_id,
            target_id: r.target_id,
            method: r.method,
            pocket_similarity: r.pocket_similarity,
            relaxed: r.relaxed,
            run_id: r.run_id.filter(|s| !s.is_empty()),
        };
        rec.validate()?;
        out.push(rec);
    }
    Ok((out, skipped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn rec(entry: &str, target: &str, rmsd: f64, valid: bool) -> EvaluationRecord {
        EvaluationRecord {
            entry_id: entry.into(),
            target_id: target.into(),
            method: "m".into(),
            rmsd,
            pb_valid: valid,
            pocket_similarity: None,
            relaxed: false,
            run_id: None,
        }
    }

    #[test]
    fn success_rate_examples() {
        let rs = vec![rec("a", "a", 1.2, true), rec("b", "b", 2.5, true), rec("c", "c", 1.8, true)];
        assert_eq!(success_rate(&rs, Criterion::RmsdOnly).unwrap(), 100.0 * (2.0 / 3.0));
        assert_eq!(success_rate(&[rec("a", "a", 2.0, true)], Criterion::RmsdOnly).unwrap(), 0.0);
        let mut rs2 = rs.clone();
        rs2[2].pb_valid = false;
        assert_eq!(success_rate(&rs2, Criterion::RmsdAndValid).unwrap(), 100.0 * (1.0 / 3.0));
        assert_eq!(success_rate(&[], Criterion::RmsdOnly), Err(MetricsError::Empty));
    }

    #[test]
    fn target_level_examples() {
        let rs = vec![rec("1", "A", 1.0, true), rec("2", "A", 3.0, true), rec("3", "B", 1.0, true)];
        assert_eq!(target_level_success(&rs, Criterion::RmsdOnly).unwrap(), 75.0);
        assert_eq!(success_rate(&rs, Criterion::RmsdOnly).unwrap(), 100.0 * (2.0 / 3.0));
        let one = vec![rec("1", "A", 1.0, true), rec("2", "A", 3.0, true), rec("3", "A", 1.0, true)];
        assert_eq!(
            target_level_success(&one, Criterion::RmsdOnly).unwrap(),
            success_rate(&one, Criterion::RmsdOnly).unwrap()
        );
        let even = vec![rec("1", "A", 1.0, true), rec("2", "A", 3.0, true), rec("3", "B", 1.0, true), rec("4", "B", 1.0, true), rec("5", "B", 3.0, true), rec("6", "B", 3.0, true)];
        assert_eq!(target_level_success(&even, Criterion::RmsdOnly).unwrap(), 50.0);
    }

    #[test]
    fn pearson_examples() {
        let x: Vec<f64> = (0..10).map(|i| i as f64 * 0.37 - 1.0).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-12);
        let z: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &z).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(pearson(&x, &[3.0; 10]), Err(MetricsError::ConstantInput));
        assert_eq!(pearson(&[1.0], &[2.0]), Err(MetricsError::TooShort(1)));
    }

    #[test]
    fn moving_average_examples() {
        assert_eq!(moving_average(&[1.0, 2.0, 3.0, 4.0], 3).unwrap(), vec![2.0, 3.0]);
        assert_eq!(moving_average(&[1.0, 5.0, 2.0], 1).unwrap(), vec![1.0, 5.0, 2.0]);
        assert_eq!(moving_average(&[1.0, 5.0, 3.0], 3).unwrap(), vec![3.0]);
        assert!(moving_average(&[1.0], 2).is_err());
        assert!(moving_average(&[1.0], 0).is_err());
    }

    #[test]
    fn report_schema_and_determinism() {
        let mut rs = vec![rec("a", "A", 1.0, true), rec("b", "B", 2.5, true), rec("c", "C", 1.5, false)];
        let art = generate_report(&rs, &ReportConfig { stratify: None, ..Default::default() }).unwrap();
        let v: serde_json::Value = serde_json::from_str(&art.json).unwrap();
        assert_eq!(v["record_count"], 3);
        let overall = &v["methods"][0]["overall"];
        assert!(overall["success_rmsd_only"]["mean"].is_number());
        assert!(overall["success_rmsd_and_valid"]["mean"].is_number());
        assert!(v["methods"][0].get("by_pocket_similarity").is_none());

        let err = generate_report(&rs, &ReportConfig::default()).unwrap_err();
        assert!(err.to_string().contains("pocket_similarity"));

        rs.reverse();
        let again = generate_report(&rs, &ReportConfig { stratify: None, ..Default::default() }).unwrap();
        assert_eq!(art, again);
    }

    #[test]
    fn runs_aggregate_with_sample_std() {
        let mut rs = Vec::new();
        for (run, hits) in [("r1", 1), ("r2", 2), ("r3", 3)] {
            for k in 0..4 {
                let mut r = rec(&format!("e{k}"), &format!("t{k}"), if k < hits { 1.0 } else { 3.0 }, true);
                r.run_id = Some(run.into());
                r.pocket_similarity = Some(0.2 * k as f64 + 0.1);
                rs.push(r);
            }
        }
        let rep = build_report(&rs, &ReportConfig::default()).unwrap();
        let s = rep.methods[0].overall.success_rmsd_only;
        assert_eq!(s.runs, 3);
        assert_eq!(s.mean, 50.0);
        assert_eq!(s.sample_std, Some(25.0));
        assert_eq!(s.display(), "50.00 ± 25.00");
        let strata = rep.methods[0].by_pocket_similarity.as_ref().unwrap();
        // similarities 0.1, 0.3, 0.5, 0.7: only the last is "similar"
        assert_eq!(strata["similar"].records, 3);
        assert_eq!(strata["dissimilar"].records, 9);
    }

    #[test]
    fn records_csv_round_trip() {
        let mut r = rec("a", "A", 1.25, true);
        r.pocket_similarity = Some(0.5);
        r.run_id = Some("1".into());
        let rs = vec![r, rec("b", "B", 3.0, false)];
        let text = write_records_csv(&rs);
        assert!(text.starts_with("entry_id,target_id,method,rmsd,pb_valid,pocket_similarity,relaxed,run_id\n"));
        assert_eq!(read_records_csv(&text).unwrap(), (rs, 0));
        let with_error = "entry_id,target_id,method,rmsd,pb_valid,pocket_similarity,relaxed,run_id,error\n\
                          x,X,m,,,,false,,missing file\n\
                          y,Y,m,1.0,true,,false,,\n";
        let (parsed, skipped) = read_records_csv(with_error).unwrap();
        assert_eq!((parsed.len(), skipped), (1, 1));
    }

    #[test]
    fn valid_rate_never_exceeds_rmsd_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let n = rng.gen_range(1..30);
            let rs: Vec<_> = (0..n)
                .map(|k| rec(&k.to_string(), &(k % 5).to_string(), rng.gen_range(0.0..4.0), rng.gen_bool(0.5)))
                .collect();
            assert!(success_rate(&rs, Criterion::RmsdAndValid).unwrap() <= success_rate(&rs, Criterion::RmsdOnly).unwrap());
            assert!(
                target_level_success(&rs, Criterion::RmsdAndValid).unwrap()
                    <= target_level_success(&rs, Criterion::RmsdOnly).unwrap()
            );
        }
    }
}
