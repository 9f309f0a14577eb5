//! The obligations checked for each shipped machine.

use acm::{PairIndex, SlotIndex};
use acm_machine::{FourSlotMachine, IntermediateMachine, OnePlaceMachine};
use acm_trace::{parse_expr, Builtin, Expr, Value};

use crate::obligation::{Obligation, ObligationKind, PhaseContract, StepScope};

fn e(src: &str) -> Expr {
    parse_expr(src).unwrap_or_else(|err| panic!("built-in formula `{src}`: {err}"))
}

const SHARED: [&str; 6] = ["dsw", "sw", "lpw", "cpw", "cpr", "csr"];

/// Obligations (a) to (g) for the four-slot machine.
pub fn fourslot_obligations(m: &FourSlotMachine) -> Vec<Obligation> {
    use ObligationKind::{IntervalPost, StepGuarantee, StepRely};

    let frame = PairIndex::ALL
        .into_iter()
        .flat_map(|p| SlotIndex::ALL.map(|s| (p, s)))
        .map(|(p, s)| format!("(({p}, {s}) != (cpw, !sw(cpw)) => dsw'({p}, {s}) = dsw({p}, {s}))"))
        .collect::<Vec<_>>()
        .join(" && ");
    let unchanged = SHARED.map(|v| format!("{v}' = {v}")).join(" && ");

    vec![
        Obligation::step(
            "write-frame",
            StepGuarantee,
            "dsw'(i,j) = dsw(i,j) for (i,j) != (cpw,!sw(cpw))",
            "each writer step leaves every slot but the one being filled untouched",
            StepScope::by("writer"),
            e(&frame),
        ),
        Obligation::step(
            "write-guarantee",
            StepGuarantee,
            "guar b' != b => b' = v",
            "through b = dsw(lpw, sw(lpw)), a writer step keeps b or sets it to the value being written",
            StepScope::by("writer"),
            e("b' = b || b' = writer.v"),
        ),
        Obligation::step(
            "read-freshness",
            IntervalPost,
            "post r' in [b]",
            "a read returns a value b held at some state of the read's interval, never a torn one; \
             the interval runs from the state before t <- lpw to the state after the slot read",
            StepScope::step("reader", "read"),
            e("reader.r' != torn && reader.r' in reader.window"),
        ),
        Obligation::step(
            "reader-rely",
            StepRely,
            "lpw' != t => dsw'(t, sw'(t)) = dsw(t, sw(t))",
            "once the reader holds t, a writer step that leaves lpw away from t does not touch slot (t, sw(t))",
            StepScope::by("writer"),
            e("reader.holds_t && lpw' != reader.t => dsw'(reader.t, sw'(reader.t)) = dsw(reader.t, sw(reader.t))"),
        ),
        Obligation::phase(
            "read-phase",
            "rely dsw'(cpr,csr) = dsw(cpr,csr), entered with (cpr,csr) != (cpw,!sw(cpw))",
            "while the reader is about to read slot (cpr, csr) it changes no shared variable and the writer leaves \
             that slot alone; the writer's write phase is taken as the span from choosing cpw up to flipping sw(cpw)",
            PhaseContract::new(
                "reader",
                [m.read_pc()],
                e("(cpr, csr) != (cpw, !sw(cpw))"),
                e(&unchanged),
                e("dsw'(cpr, csr) = dsw(cpr, csr)"),
            ),
        ),
        Obligation::state(
            "slot-disjointness",
            "reading && writing => (cpr,csr) != (cpw,!sw(cpw))",
            "the slot being read is never the slot being written",
            e("reader.reading && writer.writing => (cpr, csr) != (cpw, !sw(cpw))"),
        ),
        Obligation::state(
            "pair-choice",
            "t = cpw => t = lpw",
            "while the reader holds t, the writer only works in pair t if t is also the latest pair",
            e("reader.holds_t && reader.t = cpw => reader.t = lpw"),
        ),
    ]
}

/// Successive reads return nondecreasing commit indices.
pub fn monotonic_reads() -> Obligation {
    Obligation::step(
        "monotonic-reads",
        ObligationKind::IntervalPost,
        "sequence of values read is nondecreasing",
        "each read returns a value written no earlier than the previous read's",
        StepScope::step("reader", "read"),
        e("reader.done = 0 || reader.r = torn || reader.r' = torn || reader.r <= reader.r'"),
    )
}

/// Obligations for the index-based intermediate machine.
pub fn intermediate_obligations(m: &IntermediateMachine) -> Vec<Obligation> {
    let domain = Expr::Call(Builtin::Dom, Box::new(Expr::var("dw"))).equals(Expr::val(Value::set(m.indices())));
    vec![
        Obligation::state(
            "index-domain",
            "dom dw = X",
            "the slot map is always defined on exactly the index set",
            domain,
        ),
        Obligation::step(
            "write-choice",
            ObligationKind::StepGuarantee,
            "cw not in {lw} union pr",
            "the writer never picks the last written index or one the reader has claimed",
            StepScope::step("writer", "ch:"),
            e("!(cw' = lw) && !(cw' in pr)"),
        ),
        Obligation::step(
            "write-guarantee",
            ObligationKind::StepGuarantee,
            "guar b' != b => b' = v",
            "through b = dw(lw), a writer step keeps b or sets it to the value being written",
            StepScope::by("writer"),
            e("b' = b || b' = writer.v"),
        ),
        Obligation::step(
            "read-freshness",
            ObligationKind::IntervalPost,
            "post r' in [b]",
            "the access returns a value b held during the read",
            StepScope::step("reader", "acc"),
            e("reader.r' != torn && reader.r' in reader.window"),
        ),
    ]
}

/// The producer and consumer guarantees of the one-place buffer, and in-order delivery.
pub fn oneplace_obligations(_m: &OnePlaceMachine) -> Vec<Obligation> {
    use ObligationKind::StepGuarantee;
    vec![
        Obligation::step(
            "producer-buffer",
            StepGuarantee,
            "guar f = rd => b' = b",
            "the producer leaves the buffer alone while the consumer owns it",
            StepScope::by("producer"),
            e("f = rd => b' = b"),
        ),
        Obligation::step(
            "producer-flag",
            StepGuarantee,
            "guar f = rd => f' = rd",
            "the producer never lowers the flag",
            StepScope::by("producer"),
            e("f = rd => f' = rd"),
        ),
        Obligation::step(
            "consumer-buffer",
            StepGuarantee,
            "guar b' = b",
            "the consumer never writes the buffer",
            StepScope::by("consumer"),
            e("b' = b"),
        ),
        Obligation::step(
            "consumer-flag",
            StepGuarantee,
            "guar f = wr => f' = wr",
            "the consumer never raises the flag",
            StepScope::by("consumer"),
            e("f = wr => f' = wr"),
        ),
        Obligation::step(
            "delivery-order",
            ObligationKind::IntervalPost,
            "consumer output = producer input",
            "each take returns the next value in the producer's sequence",
            StepScope::step("consumer", "take"),
            e("consumer.r' = consumer.expected"),
        ),
    ]
}
