//! Machine-readable run reports and their text rendering.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use acm_explorer::{ExplorationReport, LawReport, Scenario};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value as Json};

use crate::stress::StressReport;
use crate::HarnessError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictStatus {
    Pass,
    /// The checked condition never applied.
    Vacuous,
    Fail,
}

impl VerdictStatus {
    fn from_explorer(s: acm_explorer::Status) -> Self {
        match s {
            acm_explorer::Status::Pass => VerdictStatus::Pass,
            acm_explorer::Status::Vacuous => VerdictStatus::Vacuous,
            acm_explorer::Status::Fail => VerdictStatus::Fail,
        }
    }

    fn from_ok(ok: bool) -> Self {
        if ok {
            VerdictStatus::Pass
        } else {
            VerdictStatus::Fail
        }
    }
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            VerdictStatus::Pass => "pass",
            VerdictStatus::Vacuous => "vacuous",
            VerdictStatus::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub paper_anchor: String,
    pub status: VerdictStatus,
    /// A failing trace in the trace text format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub config: BTreeMap<String, Json>,
    pub verdicts: Vec<Verdict>,
    pub counters: BTreeMap<String, u64>,
    /// Run-dependent figures such as wall-clock times.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub measurements: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            config: BTreeMap::new(),
            verdicts: Vec::new(),
            counters: BTreeMap::new(),
            measurements: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status != VerdictStatus::Fail)
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    pub fn from_exploration(sc: &Scenario, r: &ExplorationReport) -> Self {
        let mut out = Report::new("explore");
        out.config.insert("machine".into(), json!(sc.machine.to_string()));
        out.config.insert("writes".into(), json!(sc.writes));
        out.config.insert("reads".into(), json!(sc.reads));
        out.config.insert("mutation".into(), json!(sc.mutation.map(|m| m.to_string())));
        out.config.insert("state_cap".into(), json!(r.state_cap));
        out.verdicts.push(Verdict {
            id: "state-space".into(),
            paper_anchor: "every interleaving visited".into(),
            status: VerdictStatus::from_ok(!r.truncated),
            counterexample: None,
        });
        out.verdicts.extend(r.verdicts.iter().map(|v| Verdict {
            id: v.id.clone(),
            paper_anchor: v.anchor.clone(),
            status: VerdictStatus::from_explorer(v.status),
            counterexample: v.counterexample.as_ref().map(|c| c.trace.to_string()),
        }));
        out.counters.insert("reachable_states".into(), r.reachable_states as u64);
        out.counters.insert("transitions".into(), r.transitions as u64);
        out.counters.insert("complete_states".into(), r.complete_states as u64);
        out.counters.insert("truncated".into(), r.truncated as u64);
        out
    }

    pub fn from_law(r: &LawReport) -> Self {
        let mut out = Report::new("laws");
        out.config.insert("law".into(), json!(r.law.number()));
        out.config.insert("values".into(), json!(r.config.values));
        out.config.insert("env_steps".into(), json!(r.config.env_steps));
        out.config.insert("weakened".into(), json!(r.config.weakened));
        out.verdicts.push(Verdict {
            id: r.law.name().into(),
            paper_anchor: r.law.statement().into(),
            status: VerdictStatus::from_explorer(r.status),
            counterexample: r.counterexample.as_ref().map(|t| t.to_string()),
        });
        out.counters.insert("traces".into(), r.traces);
        out.counters.insert("rejected_env_steps".into(), r.rejected_env_steps);
        out
    }

    pub fn from_stress(r: &StressReport) -> Self {
        let cfg = &r.config;
        let mut out = Report::new("stress");
        out.config.insert("ops".into(), json!(cfg.ops));
        out.config.insert("payload_words".into(), json!(cfg.payload_words));
        out.config.insert("seed".into(), json!(cfg.seed));
        for (side, p) in [("writer", cfg.writer_pacing), ("reader", cfg.reader_pacing)] {
            out.config.insert(
                format!("{side}_pacing"),
                json!({"max_spins": p.max_spins, "yield_one_in": p.yield_one_in}),
            );
        }
        let checks = [
            ("torn-reads", "every read returns a completely written value", r.torn_count),
            (
                "freshness-window",
                "at least as fresh as the last completely written value when the read started",
                r.window_violations,
            ),
            ("monotonic-reads", "sequence of values read is nondecreasing", r.monotonicity_violations),
        ];
        out.verdicts.extend(checks.map(|(id, anchor, n)| Verdict {
            id: id.into(),
            paper_anchor: anchor.into(),
            status: VerdictStatus::from_ok(n == 0),
            counterexample: None,
        }));
        for (name, n) in [
            ("reads", r.reads),
            ("writes", r.writes),
            ("torn_count", r.torn_count),
            ("window_violations", r.window_violations),
            ("monotonicity_violations", r.monotonicity_violations),
        ] {
            out.counters.insert(name.into(), n);
        }
        out.measurements.insert("overlapped_reads".into(), r.overlapped_reads);
        out.measurements.insert("elapsed_ms".into(), r.elapsed.as_millis() as u64);
        out.measurements.insert("write_step_max_ns".into(), r.write_latency.max_ns);
        out.measurements.insert("write_step_mean_ns".into(), r.write_latency.mean_ns.round() as u64);
        out.measurements.insert("read_step_max_ns".into(), r.read_latency.max_ns);
        out.measurements.insert("read_step_mean_ns".into(), r.read_latency.mean_ns.round() as u64);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON")
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        Ok(serde_json::from_str(text)?)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let config: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "{} ({})", self.command, config.join(" "))?;
        for v in &self.verdicts {
            writeln!(f, "  {:<8} {:<22} {}", v.status, v.id, v.paper_anchor)?;
        }
        let counters: Vec<String> = self.counters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(f, "counters: {}", counters.join(" "))?;
        if !self.measurements.is_empty() {
            let measurements: Vec<String> = self.measurements.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(f, "measured: {}", measurements.join(" "))?;
        }
        for v in self.verdicts.iter().filter(|v| v.counterexample.is_some()) {
            writeln!(f, "\ncounterexample for {}:", v.id)?;
            write!(f, "{}", v.counterexample.as_deref().unwrap_or_default())?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Writes the report to `sink` in the given format.
pub fn emit_report(report: &Report, format: Format, sink: &mut dyn Write) -> Result<(), HarnessError> {
    match format {
        Format::Json => writeln!(sink, "{}", report.to_json())?,
        Format::Text => write!(sink, "{report}")?,
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("explore");
        r.config.insert("writes".into(), json!(2));
        r.verdicts.push(Verdict {
            id: "a".into(),
            paper_anchor: "x' in [y]".into(),
            status: VerdictStatus::Pass,
            counterexample: None,
        });
        r.counters.insert("reachable_states".into(), 10);
        r
    }

    #[test]
    fn json_field_names() {
        let v: Json = serde_json::from_str(&sample().to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, ["command", "config", "counters", "tool_version", "verdicts"]);
        assert_eq!(v["verdicts"][0]["status"], "pass");
        assert!(v["verdicts"][0].get("counterexample").is_none());
    }

    #[test]
    fn failing_verdict_sets_exit_code() {
        let mut r = sample();
        assert_eq!(r.exit_code(), 0);
        r.verdicts[0].status = VerdictStatus::Vacuous;
        assert_eq!(r.exit_code(), 0);
        r.verdicts[0].status = VerdictStatus::Fail;
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_string().ends_with("FAIL\n"));
    }

    #[test]
    fn text_includes_counterexample() {
        let mut r = sample();
        r.verdicts[0].counterexample = Some("x=1\nenv: x<-2\nx=2\n".into());
        let text = r.to_string();
        assert!(text.contains("counterexample for a:\nx=1\n"), "{text}");
    }
}
