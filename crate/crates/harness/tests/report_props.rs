//! Properties of the report format over synthetic reports.

use std::collections::BTreeMap;

use acm_harness::{emit_report, Format, Report, Verdict, VerdictStatus};
use proptest::prelude::*;
use serde_json::Value as Json;

fn status() -> impl Strategy<Value = VerdictStatus> {
    prop_oneof![Just(VerdictStatus::Pass), Just(VerdictStatus::Vacuous), Just(VerdictStatus::Fail)]
}

fn verdict() -> impl Strategy<Value = Verdict> {
    ("[a-z-]{1,12}", ".{0,30}", status(), proptest::option::of(".{0,60}")).prop_map(
        |(id, paper_anchor, status, counterexample)| Verdict {
            id,
            paper_anchor,
            status,
            counterexample,
        },
    )
}

fn json_leaf() -> impl Strategy<Value = Json> {
    prop_oneof![
        Just(Json::Null),
        any::<bool>().prop_map(Json::from),
        any::<u64>().prop_map(Json::from),
        any::<i64>().prop_map(Json::from),
        ".{0,16}".prop_map(Json::from),
    ]
}

fn report() -> impl Strategy<Value = Report> {
    (
        prop_oneof![Just("explore"), Just("laws"), Just("stress")],
        proptest::collection::btree_map("[a-z_]{1,10}", json_leaf(), 0..5),
        proptest::collection::vec(verdict(), 0..6),
        proptest::collection::btree_map("[a-z_]{1,10}", any::<u64>(), 0..6),
        proptest::collection::btree_map("[a-z_]{1,10}", any::<u64>(), 0..3),
    )
        .prop_map(|(command, config, verdicts, counters, measurements)| {
            let mut r = Report::new(command);
            r.config = config;
            r.verdicts = verdicts;
            r.counters = counters;
            r.measurements = measurements;
            r
        })
}

fn emit(r: &Report, format: Format) -> Vec<u8> {
    let mut sink = Vec::new();
    emit_report(r, format, &mut sink).unwrap();
    sink
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn exit_code_follows_failures(r in report()) {
        let failing = r.verdicts.iter().any(|v| v.status == VerdictStatus::Fail);
        prop_assert_eq!(r.exit_code(), if failing { 1 } else { 0 });
        let text = String::from_utf8(emit(&r, Format::Text)).unwrap();
        prop_assert_eq!(text.trim_end().ends_with("FAIL"), failing);
    }

    #[test]
    fn json_round_trips(r in report()) {
        let bytes = emit(&r, Format::Json);
        let back = Report::from_json(std::str::from_utf8(&bytes).unwrap()).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.exit_code(), r.exit_code());
        // Same report, same bytes.
        prop_assert_eq!(emit(&back, Format::Json), bytes);
    }

    #[test]
    fn json_has_schema_fields(r in report()) {
        let v: Json = serde_json::from_slice(&emit(&r, Format::Json)).unwrap();
        for key in ["tool_version", "command", "config", "verdicts", "counters"] {
            prop_assert!(v.get(key).is_some(), "missing {}", key);
        }
        for (got, want) in v["verdicts"].as_array().unwrap().iter().zip(&r.verdicts) {
            prop_assert_eq!(got["status"].as_str().unwrap(), want.status.to_string());
            prop_assert_eq!(got.get("counterexample").is_some(), want.counterexample.is_some());
        }
    }
}

#[test]
fn empty_report_passes() {
    let r = Report::new("stress");
    assert_eq!(r.exit_code(), 0);
    assert_eq!(r.counters, BTreeMap::new());
}
