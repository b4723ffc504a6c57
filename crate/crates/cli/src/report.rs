//! Suite reports: a text summary and JSON lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    NotConverged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotConverged => "not-converged",
        }
    }
}

/// The result of one law on one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail { detail: String, replay: Option<String> },
    NotConverged { detail: String, replay: Option<String> },
}

impl Outcome {
    pub fn fail(detail: impl Into<String>) -> Self {
        Outcome::Fail { detail: detail.into(), replay: None }
    }

    pub fn check(ok: bool, detail: impl FnOnce() -> String) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::fail(detail())
        }
    }

    /// Attaches a document that reproduces a failure.
    pub fn with_replay(self, doc: impl FnOnce() -> String) -> Self {
        match self {
            Outcome::Pass => Outcome::Pass,
            Outcome::Fail { detail, .. } => Outcome::Fail { detail, replay: Some(doc()) },
            Outcome::NotConverged { detail, .. } => Outcome::NotConverged { detail, replay: Some(doc()) },
        }
    }

    pub fn from_error(e: &sketchy_core::Error) -> Self {
        match e {
            sketchy_core::Error::NotConverged { .. } => Outcome::NotConverged { detail: e.to_string(), replay: None },
            _ => Outcome::fail(e.to_string()),
        }
    }

    pub fn status(&self) -> Status {
        match self {
            Outcome::Pass => Status::Pass,
            Outcome::Fail { .. } => Status::Fail,
            Outcome::NotConverged { .. } => Status::NotConverged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub instance: String,
    pub status: Status,
    pub detail: String,
    pub replay: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LawReport {
    pub instances: usize,
    pub witnesses: Vec<Witness>,
}

impl LawReport {
    pub fn status(&self) -> Status {
        self.witnesses.iter().map(|w| w.status).max().unwrap_or(Status::Pass)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    /// Keyed by law name, so output order does not depend on check order.
    pub laws: BTreeMap<String, LawReport>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn new(suite: &str, seed: u64) -> Self {
        SuiteReport { suite: suite.to_string(), seed, laws: BTreeMap::new(), elapsed: Duration::ZERO }
    }

    /// Records one instance of a law. Instance ids should sort in a
    /// meaningful order (zero-padded trial numbers).
    pub fn record(&mut self, law: &str, instance: impl Into<String>, outcome: Outcome) {
        let entry = self.laws.entry(law.to_string()).or_default();
        entry.instances += 1;
        let status = outcome.status();
        match outcome {
            Outcome::Pass => {}
            Outcome::Fail { detail, replay } | Outcome::NotConverged { detail, replay } => {
                entry.witnesses.push(Witness { instance: instance.into(), status, detail, replay });
            }
        }
    }

    /// Makes sure a law shows up even with no instances.
    pub fn declare(&mut self, law: &str) {
        self.laws.entry(law.to_string()).or_default();
    }

    pub fn status(&self) -> Status {
        self.laws.values().map(LawReport::status).max().unwrap_or(Status::Pass)
    }

    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::NotConverged => 2,
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.laws.values().filter(|l| l.status() == status).count()
    }

    /// One line per law, one per witness, then a summary. No timing, so equal
    /// inputs and seeds give equal bytes.
    pub fn jsonl(&self) -> String {
        let mut out = String::new();
        for (law, r) in &self.laws {
            let line = json!({
                "suite": self.suite,
                "seed": self.seed,
                "law": law,
                "status": r.status().as_str(),
                "instances": r.instances,
                "failures": r.witnesses.len(),
            });
            writeln!(out, "{line}").unwrap();
            let mut ws: Vec<&Witness> = r.witnesses.iter().collect();
            ws.sort_by(|a, b| a.instance.cmp(&b.instance));
            for w in ws {
                let line = json!({
                    "suite": self.suite,
                    "law": law,
                    "instance": w.instance,
                    "status": w.status.as_str(),
                    "witness": w.detail,
                    "replay": w.replay,
                });
                writeln!(out, "{line}").unwrap();
            }
        }
        let line = json!({
            "suite": self.suite,
            "seed": self.seed,
            "status": self.status().as_str(),
            "pass": self.count(Status::Pass),
            "fail": self.count(Status::Fail),
            "not_converged": self.count(Status::NotConverged),
        });
        writeln!(out, "{line}").unwrap();
        out
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "suite {} (seed {})", self.suite, self.seed).unwrap();
        for (law, r) in &self.laws {
            writeln!(out, "  {:<14} {law} ({} checked)", r.status().as_str(), r.instances).unwrap();
            let mut ws: Vec<&Witness> = r.witnesses.iter().collect();
            ws.sort_by(|a, b| a.instance.cmp(&b.instance));
            for w in ws.iter().take(5) {
                writeln!(out, "      {}: {}", w.instance, w.detail).unwrap();
            }
            if ws.len() > 5 {
                writeln!(out, "      ... {} more", ws.len() - 5).unwrap();
            }
        }
        writeln!(
            out,
            "{}: {} pass, {} fail, {} not converged in {:.2?}",
            self.status().as_str(),
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::NotConverged),
            self.elapsed
        )
        .unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_status_wins() {
        let mut r = SuiteReport::new("s", 3);
        r.record("b", "1", Outcome::Pass);
        r.record("a", "2", Outcome::fail("broken"));
        assert_eq!((r.status(), r.exit_code()), (Status::Fail, 1));
        r.record("c", "1", Outcome::NotConverged { detail: "slow".into(), replay: None });
        assert_eq!(r.exit_code(), 2);
        let text = r.jsonl();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].contains("\"law\":\"a\"") && lines[1].contains("\"witness\":\"broken\""));
    }

    #[test]
    fn jsonl_ignores_timing() {
        let mut a = SuiteReport::new("s", 1);
        a.record("x", "1", Outcome::Pass);
        let mut b = a.clone();
        b.elapsed = Duration::from_secs(3);
        assert_eq!(a.jsonl(), b.jsonl());
        a.elapsed = Duration::from_millis(1);
        assert_ne!(a.text(), b.text());
    }
}
