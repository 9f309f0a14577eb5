use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;

use acm::{four_slot, one_place, read_steps, write_steps, Payload};
use rand::{Rng, SeedableRng};

/// Both operations run a statically fixed number of steps, whatever the
/// interleaving with the other side.
#[test]
fn step_counts_are_constant_under_contention() {
    const RUNS: u64 = 100_000;
    const K: usize = 4;
    let (mut w, mut r) = four_slot(&Payload::filled(K, 0).unwrap());

    let writer = thread::spawn(move || {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let mut counts = std::collections::BTreeSet::new();
        for seq in 1..=RUNS {
            let mut n = 0usize;
            w.write_observed(&[seq; K], |_| {
                n += 1;
                if rng.gen_ratio(1, 8) {
                    std::hint::spin_loop();
                }
            })
            .unwrap();
            counts.insert(n);
        }
        counts
    });
    let reader = thread::spawn(move || {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let mut counts = std::collections::BTreeSet::new();
        let mut out = [0u64; K];
        for _ in 0..RUNS {
            let mut n = 0usize;
            r.read_observed(&mut out, |_| {
                n += 1;
                if rng.gen_ratio(1, 8) {
                    std::hint::spin_loop();
                }
            })
            .unwrap();
            counts.insert(n);
        }
        counts
    });

    let wc = writer.join().unwrap();
    let rc = reader.join().unwrap();
    assert_eq!(wc.into_iter().collect::<Vec<_>>(), vec![write_steps(K)]);
    assert_eq!(rc.into_iter().collect::<Vec<_>>(), vec![read_steps(K)]);
}

#[test]
fn concurrent_reads_are_whole_fresh_and_monotone() {
    const WRITES: u64 = 200_000;
    const K: usize = 8;
    let (mut w, mut r) = four_slot(&Payload::filled(K, 0).unwrap());
    let committed = Arc::new(AtomicU64::new(0));
    let done = Arc::new(std::sync::atomic::AtomicBool::new(false));

    let writer = {
        let committed = Arc::clone(&committed);
        let done = Arc::clone(&done);
        thread::spawn(move || {
            for seq in 1..=WRITES {
                w.write(&[seq; K]).unwrap();
                committed.store(seq, Ordering::SeqCst);
            }
            done.store(true, Ordering::SeqCst);
        })
    };

    let mut prev = 0;
    let mut out = [0u64; K];
    loop {
        let finished = done.load(Ordering::SeqCst);
        let lo = committed.load(Ordering::SeqCst);
        r.read_into(&mut out).unwrap();
        let hi = committed.load(Ordering::SeqCst);
        let seq = out[0];
        assert!(out.iter().all(|&x| x == seq), "torn read {out:?}");
        assert!(seq >= lo, "stale read: {seq} < {lo}");
        // At most one write is in flight beyond the published counter.
        assert!(seq <= hi + 1, "read from the future: {seq} > {hi} + 1");
        assert!(seq >= prev, "non-monotone: {seq} after {prev}");
        prev = seq;
        if finished {
            break;
        }
    }
    writer.join().unwrap();
    assert_eq!(prev, WRITES);
}

#[test]
fn one_place_transfers_in_order() {
    const N: u64 = 20_000;
    let (mut p, mut c) = one_place(3).unwrap();
    let producer = thread::spawn(move || {
        for i in 1..=N {
            p.produce(&[i, i, i]).unwrap();
        }
    });
    for i in 1..=N {
        assert_eq!(c.consume().words(), &[i, i, i]);
    }
    producer.join().unwrap();
}
