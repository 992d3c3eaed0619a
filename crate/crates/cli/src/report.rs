use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Build,
    Invariance,
    Smoothness,
    FixedLoci,
    Freeness,
    Hodge,
    Quotient,
    Duality,
    Properties,
}

/// Seed and primes a verdict can be reproduced from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reproducibility {
    pub seed: u64,
    pub primes: Vec<u64>,
    pub field: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub stage: Stage,
    pub claim: String,
    pub verdict: Verdict,
    pub expected: Value,
    pub observed: Value,
    pub evidence: Value,
    pub reproducibility: Reproducibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub tool: String,
    pub version: String,
    pub expected_table: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub summary: Summary,
    pub overall: Verdict,
}

impl CertificationReport {
    pub fn new(config: RunConfig, table_version: &str, checks: Vec<Check>) -> Self {
        let mut summary = Summary::default();
        for c in &checks {
            match c.verdict {
                Verdict::Pass => summary.pass += 1,
                Verdict::Fail => summary.fail += 1,
                Verdict::Inconclusive => summary.inconclusive += 1,
            }
        }
        let overall = if summary.fail > 0 {
            Verdict::Fail
        } else if summary.inconclusive > 0 {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        };
        CertificationReport {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            expected_table: table_version.into(),
            config,
            checks,
            summary,
            overall,
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// 0 pass, 1 failed expectation, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.overall {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_markdown(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "# Certification report: {}", c.model.as_str());
        let _ = writeln!(s);
        let _ = writeln!(s, "- tool: {} {}", self.tool, self.version);
        let _ = writeln!(s, "- expected table: {}", self.expected_table);
        let _ = writeln!(s, "- group: {}", c.group);
        let _ = writeln!(s, "- seed: {}", c.seed);
        let _ = writeln!(s, "- census primes: {}", join(&c.census_primes));
        let _ = writeln!(s, "- freeness primes: {}", join(&c.free_primes));
        let _ = writeln!(s, "- overall: **{}**", self.overall.as_str());
        let _ = writeln!(s);
        let _ = writeln!(s, "| check | stage | verdict | expected | observed |");
        let _ = writeln!(s, "|---|---|---|---|---|");
        for ch in &self.checks {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} |",
                ch.id,
                serde_json::to_value(ch.stage)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
                ch.verdict.as_str(),
                cell(&ch.expected),
                cell(&ch.observed)
            );
        }
        let notes: Vec<&Check> = self.checks.iter().filter(|c| c.note.is_some()).collect();
        if !notes.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(s, "## Notes");
            let _ = writeln!(s);
            for ch in notes {
                let _ = writeln!(
                    s,
                    "- `{}`: {}",
                    ch.id,
                    ch.note.as_deref().unwrap_or_default()
                );
            }
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{} passed, {} failed, {} inconclusive",
            self.summary.pass, self.summary.fail, self.summary.inconclusive
        );
        s
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn cell(v: &Value) -> String {
    let s = match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    s.replace('|', "\\|")
}
