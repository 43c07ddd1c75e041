//! Verification reports and the grid runner that fills them.
//!
//! Every engine check produces one [`Case`] per grid cell. Cases are sorted by
//! `(task, key values)` after execution, so the report does not depend on how
//! many workers ran or in what order they finished.

use std::fmt::Write as _;
use std::io;
use std::time::{Duration, Instant};

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Whether a case instantiates a proved statement or an open conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Theorem,
    Conjecture,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Theorem => "theorem",
            Severity::Conjecture => "conjecture",
        }
    }
}

/// Ordered named integer coordinates, e.g. `l=2,n=7,eps=-1`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CaseKey(Vec<(&'static str, i64)>);

impl CaseKey {
    pub fn new() -> Self {
        CaseKey(Vec::new())
    }

    pub fn with(mut self, name: &'static str, value: i64) -> Self {
        self.0.push((name, value));
        self
    }

    pub fn fields(&self) -> &[(&'static str, i64)] {
        &self.0
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().map(|&(_, v)| v)
    }
}

impl std::fmt::Display for CaseKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, (name, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{name}={v}")?;
        }
        Ok(())
    }
}

impl Serialize for CaseKey {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (name, v) in &self.0 {
            map.serialize_entry(name, v)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub task: String,
    pub key: CaseKey,
    pub status: Status,
    pub witness: Option<String>,
    pub severity: Severity,
    pub note: Option<String>,
}

impl Case {
    pub fn new(task: &str, key: CaseKey, severity: Severity) -> Self {
        Case {
            task: task.to_string(),
            key,
            status: Status::Pass,
            witness: None,
            severity,
            note: None,
        }
    }

    pub fn pass(task: &str, key: CaseKey, severity: Severity) -> Self {
        Self::new(task, key, severity)
    }

    pub fn fail(task: &str, key: CaseKey, severity: Severity, witness: impl Into<String>) -> Self {
        Case {
            status: Status::Fail,
            witness: Some(witness.into()),
            ..Self::new(task, key, severity)
        }
    }

    /// Pass when `witness` is `None`, fail with it otherwise.
    pub fn from_witness(
        task: &str,
        key: CaseKey,
        severity: Severity,
        witness: Option<String>,
    ) -> Self {
        match witness {
            None => Self::pass(task, key, severity),
            Some(w) => Self::fail(task, key, severity, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn sort_key(&self) -> (&str, Vec<i64>) {
        (&self.task, self.key.values().collect())
    }
}

impl Serialize for Case {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Case", 7)?;
        st.serialize_field("task", &self.task)?;
        st.serialize_field("case_key", &self.key.to_string())?;
        st.serialize_field("key", &self.key)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("witness", &self.witness)?;
        st.serialize_field("severity", &self.severity)?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    /// Failures in cases that instantiate an open conjecture.
    pub conjecture_fail: usize,
}

/// Timing lives apart from everything else so that reports can be compared
/// byte-for-byte with this block stripped.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Metadata {
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub task: String,
    pub config: Vec<(String, String)>,
    pub summary: Summary,
    /// First failing case in key order, if any.
    pub counterexample: Option<Case>,
    pub cases: Vec<Case>,
    pub metadata: Metadata,
}

impl VerificationReport {
    pub fn new(task: &str, config: Vec<(String, String)>, mut cases: Vec<Case>) -> Self {
        cases.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let fail = cases.iter().filter(|c| !c.passed()).count();
        let summary = Summary {
            total: cases.len(),
            pass: cases.len() - fail,
            fail,
            conjecture_fail: cases
                .iter()
                .filter(|c| !c.passed() && c.severity == Severity::Conjecture)
                .count(),
        };
        let counterexample = cases.iter().find(|c| !c.passed()).cloned();
        VerificationReport {
            task: task.to_string(),
            config,
            summary,
            counterexample,
            cases,
            metadata: Metadata::default(),
        }
    }

    /// Concatenates several reports into one under a new task id.
    pub fn merge(task: &str, config: Vec<(String, String)>, parts: Vec<VerificationReport>) -> Self {
        let wall: f64 = parts.iter().map(|r| r.metadata.wall_time_ms).sum();
        let cases = parts.into_iter().flat_map(|r| r.cases).collect();
        let mut merged = Self::new(task, config, cases);
        merged.metadata.wall_time_ms = wall;
        merged
    }

    pub fn with_wall_time(mut self, d: Duration) -> Self {
        self.metadata.wall_time_ms = d.as_secs_f64() * 1e3;
        self
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        // Config as an object keeps the echo readable while preserving order
        // through the struct-field layout above.
        if let Some(obj) = v.as_object_mut() {
            let cfg: serde_json::Map<String, serde_json::Value> = self
                .config
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
                .collect();
            obj.insert("config".into(), serde_json::Value::Object(cfg));
        }
        let mut s = serde_json::to_string_pretty(&v).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("task,case_key,status,witness,severity\n");
        for c in &self.cases {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&c.task),
                csv_field(&c.key.to_string()),
                c.status.as_str(),
                csv_field(c.witness.as_deref().unwrap_or("")),
                c.severity.as_str()
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "task: {}", self.task);
        if !self.config.is_empty() {
            let cfg: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(out, "config: {}", cfg.join(" "));
        }
        let w_task = self.cases.iter().map(|c| c.task.len()).max().unwrap_or(4).max(4);
        let w_key = self
            .cases
            .iter()
            .map(|c| c.key.to_string().len())
            .max()
            .unwrap_or(3)
            .max(3);
        let _ = writeln!(out, "{:<w_task$}  {:<w_key$}  {:<6}  {:<10}  detail", "task", "key", "status", "severity");
        for c in &self.cases {
            let mut detail = c.witness.clone().unwrap_or_default();
            if let Some(n) = &c.note {
                if !detail.is_empty() {
                    detail.push_str("; ");
                }
                detail.push_str(n);
            }
            let _ = writeln!(
                out,
                "{:<w_task$}  {:<w_key$}  {:<6}  {:<10}  {}",
                c.task,
                c.key.to_string(),
                c.status.as_str(),
                c.severity.as_str(),
                detail
            );
        }
        if let Some(cx) = &self.counterexample {
            let _ = writeln!(
                out,
                "first failure: {} {} ({}) {}",
                cx.task,
                cx.key,
                cx.severity.as_str(),
                cx.witness.as_deref().unwrap_or("")
            );
        }
        if self.all_pass() {
            let _ = writeln!(out, "PASS {}/{}", self.summary.pass, self.summary.total);
        } else {
            let _ = writeln!(out, "FAIL {}/{}", self.summary.fail, self.summary.total);
        }
        out
    }

    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    pub fn write_to<W: io::Write>(&self, format: Format, mut w: W) -> io::Result<()> {
        w.write_all(self.serialize(format).as_bytes())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Executes independent grid cells on a fixed-size worker pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Runner {
    jobs: usize,
}

impl Default for Runner {
    fn default() -> Self {
        Runner::serial()
    }
}

impl Runner {
    pub fn serial() -> Self {
        Runner { jobs: 1 }
    }

    pub fn with_jobs(jobs: usize) -> Self {
        Runner { jobs: jobs.max(1) }
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    /// Maps `f` over `cells`, preserving input order in the output.
    pub fn map<T, R, F>(&self, cells: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        if self.jobs == 1 {
            return cells.into_iter().map(f).collect();
        }
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(|| cells.into_par_iter().map(&f).collect()),
            Err(_) => cells.into_iter().map(f).collect(),
        }
    }

    /// Runs a grid and wraps the cases in a timed report.
    pub fn run<T, F>(&self, task: &str, config: Vec<(String, String)>, cells: Vec<T>, f: F) -> VerificationReport
    where
        T: Send,
        F: Fn(T) -> Case + Sync + Send,
    {
        let start = Instant::now();
        let cases = self.map(cells, f);
        VerificationReport::new(task, config, cases).with_wall_time(start.elapsed())
    }
}

/// Builds a config echo from `name = value` pairs.
#[macro_export]
macro_rules! config_echo {
    ($($name:literal => $v:expr),* $(,)?) => {
        vec![$(($name.to_string(), $v.to_string())),*]
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VerificationReport {
        let cases = vec![
            Case::pass("t", CaseKey::new().with("n", 10), Severity::Theorem),
            Case::fail("t", CaseKey::new().with("n", 2), Severity::Conjecture, "x0=1, value=1/2"),
            Case::pass("t", CaseKey::new().with("n", -1), Severity::Theorem),
        ];
        VerificationReport::new("t", config_echo!("n_max" => 10), cases)
    }

    #[test]
    fn cases_sorted_numerically() {
        let r = sample();
        let ns: Vec<i64> = r.cases.iter().map(|c| c.key.get("n").unwrap()).collect();
        assert_eq!(ns, vec![-1, 2, 10]);
        assert_eq!(r.summary, Summary { total: 3, pass: 2, fail: 1, conjecture_fail: 1 });
        assert_eq!(r.counterexample.as_ref().unwrap().key.get("n"), Some(2));
    }

    #[test]
    fn empty_report_json() {
        let r = VerificationReport::new("transform", vec![], vec![]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["summary"]["total"], 0);
        assert_eq!(v["summary"]["fail"], 0);
        assert!(v["cases"].as_array().unwrap().is_empty());
        assert!(r.to_text().ends_with("PASS 0/0\n"));
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "task,case_key,status,witness,severity");
        assert_eq!(lines[2], "t,n=2,fail,\"x0=1, value=1/2\",conjecture");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn text_summary_line() {
        assert!(sample().to_text().trim_end().ends_with("FAIL 1/3"));
    }

    #[test]
    fn json_round_trips_case_keys() {
        let r = sample();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<String> = v["cases"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| c["case_key"].as_str().unwrap().to_string())
            .collect();
        let expect: Vec<String> = r.cases.iter().map(|c| c.key.to_string()).collect();
        assert_eq!(keys, expect);
        assert_eq!(v["cases"][1]["key"]["n"], 2);
        assert_eq!(v["config"]["n_max"], "10");
    }

    #[test]
    fn parallel_map_preserves_order() {
        let out = Runner::with_jobs(4).map((0..100).collect(), |i: i32| i * i);
        assert_eq!(out, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
