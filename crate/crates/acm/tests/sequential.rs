use acm::{four_slot, PairIndex, Payload, SlotIndex};
use proptest::prelude::*;

/// Straight-line interpreter of the four-slot code over plain values, used as
/// an oracle for sequential schedules.
struct Interp {
    data: [[u64; 2]; 2],
    latest_slot: [SlotIndex; 2],
    latest_pair: PairIndex,
    write_pair: PairIndex,
    read_pair: PairIndex,
    read_slot: SlotIndex,
}

impl Interp {
    fn new(v0: u64) -> Self {
        Interp {
            data: [[v0; 2]; 2],
            latest_slot: [SlotIndex::S0; 2],
            latest_pair: PairIndex::P0,
            write_pair: PairIndex::P0,
            read_pair: PairIndex::P0,
            read_slot: SlotIndex::S0,
        }
    }

    fn write(&mut self, v: u64) {
        self.write_pair = !self.read_pair;
        let p = self.write_pair.index();
        let s = !self.latest_slot[p];
        self.data[p][s.index()] = v;
        self.latest_slot[p] = s;
        self.latest_pair = self.write_pair;
    }

    fn read(&mut self) -> u64 {
        let t = self.latest_pair;
        self.read_pair = t;
        self.read_slot = self.latest_slot[self.read_pair.index()];
        self.data[self.read_pair.index()][self.read_slot.index()]
    }
}

#[test]
fn four_sequential_writes_then_read() {
    let mut oracle = Interp::new(0);
    for v in 1..=4 {
        oracle.write(v);
    }
    let expected = oracle.read();
    assert_eq!(expected, 4);

    let (mut w, mut r) = four_slot(&Payload::filled(1, 0).unwrap());
    for v in 1..=4u64 {
        w.write(&[v]).unwrap();
    }
    assert_eq!(r.read().words(), &[expected]);
}

#[test]
fn read_before_any_write_sees_initial() {
    let initial = Payload::new(vec![3, 1, 4, 1, 5, 9, 2, 6]).unwrap();
    let (_w, mut r) = four_slot(&initial);
    assert_eq!(r.read(), initial);
    assert_eq!(r.read(), initial);
}

#[derive(Debug, Clone)]
enum Op {
    Write(u64),
    Read,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![any::<u64>().prop_map(Op::Write), Just(Op::Read)]
}

proptest! {
    #[test]
    fn sequential_schedules_match_interpreter(
        words in 1usize..6,
        ops in proptest::collection::vec(op(), 0..40),
    ) {
        let mut oracle = Interp::new(0);
        let (mut w, mut r) = four_slot(&Payload::filled(words, 0).unwrap());
        let mut last = 0;
        for op in ops {
            match op {
                Op::Write(v) => {
                    oracle.write(v);
                    w.write(&vec![v; words]).unwrap();
                    last = v;
                }
                Op::Read => {
                    let got = r.read();
                    prop_assert_eq!(got.uniform(), Some(oracle.read()));
                    prop_assert_eq!(got.uniform(), Some(last));
                }
            }
        }
    }
}
