//! Real-thread stress test of the four-slot library.
//!
//! One writer thread writes payloads whose words all equal the write's
//! sequence number `1, 2, ...`; one reader thread reads continuously. After
//! each write returns, the writer stores its sequence number in a side
//! counter, so the counter never runs ahead of the buffer's latest value.
//! Each read samples the counter before and after, and the results are
//! checked once both threads have joined.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::thread;
use std::time::{Duration, Instant};

use acm::FourSlotBuffer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::HarnessError;

/// Random delays injected before primitive steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pacing {
    /// Upper bound on the busy-wait spins before a step; 0 disables it.
    pub max_spins: u32,
    /// Yield the thread before one step in this many on average; 0 never.
    pub yield_one_in: u32,
}

impl Pacing {
    pub const NONE: Pacing = Pacing {
        max_spins: 0,
        yield_one_in: 0,
    };
}

impl Default for Pacing {
    fn default() -> Self {
        Pacing {
            max_spins: 16,
            yield_one_in: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StressConfig {
    /// Writes performed, and reads performed.
    pub ops: u64,
    pub payload_words: usize,
    pub writer_pacing: Pacing,
    pub reader_pacing: Pacing,
    pub seed: u64,
}

impl StressConfig {
    pub fn new(ops: u64, payload_words: usize, seed: u64) -> Self {
        StressConfig {
            ops,
            payload_words,
            writer_pacing: Pacing::default(),
            reader_pacing: Pacing::default(),
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadObservation {
    /// The common word value, or `None` if the words differed.
    pub seq_read: Option<u64>,
    pub commit_at_start: u64,
    pub commit_at_end: u64,
}

impl ReadObservation {
    pub fn torn(&self) -> bool {
        self.seq_read.is_none()
    }

    /// Whether the value is no older than the last write committed before
    /// the read began and no newer than one write past the counter at its
    /// end (the counter trails the publishing step by one store).
    pub fn in_window(&self) -> bool {
        self.seq_read
            .is_none_or(|s| self.commit_at_start <= s && s <= self.commit_at_end + 1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Latency {
    pub max_ns: u64,
    pub mean_ns: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StressReport {
    pub config: StressConfig,
    pub reads: u64,
    pub writes: u64,
    pub torn_count: u64,
    pub window_violations: u64,
    pub monotonicity_violations: u64,
    /// Reads during which the commit counter moved.
    pub overlapped_reads: u64,
    pub write_latency: Latency,
    pub read_latency: Latency,
    pub elapsed: Duration,
}

impl StressReport {
    pub fn passed(&self) -> bool {
        self.torn_count == 0 && self.window_violations == 0 && self.monotonicity_violations == 0
    }

    /// Counts of the given reads against the given number of writes.
    pub fn tally(config: StressConfig, writes: u64, observations: &[ReadObservation]) -> Self {
        let mut r = StressReport {
            config,
            reads: observations.len() as u64,
            writes,
            torn_count: 0,
            window_violations: 0,
            monotonicity_violations: 0,
            overlapped_reads: 0,
            write_latency: Latency::default(),
            read_latency: Latency::default(),
            elapsed: Duration::ZERO,
        };
        let mut last = None;
        for o in observations {
            match o.seq_read {
                None => r.torn_count += 1,
                Some(s) => {
                    if last.is_some_and(|l| s < l) {
                        r.monotonicity_violations += 1;
                    }
                    last = Some(s);
                }
            }
            if o.commit_at_start != o.commit_at_end {
                r.overlapped_reads += 1;
            }
            if !o.in_window() {
                r.window_violations += 1;
            }
        }
        r
    }
}

struct Jitter {
    rng: StdRng,
    pacing: Pacing,
}

impl Jitter {
    fn pause(&mut self) {
        if self.pacing.yield_one_in > 0 && self.rng.gen_ratio(1, self.pacing.yield_one_in) {
            thread::yield_now();
        }
        if self.pacing.max_spins > 0 {
            for _ in 0..self.rng.gen_range(0..=self.pacing.max_spins) {
                std::hint::spin_loop();
            }
        }
    }
}

#[derive(Default)]
struct Timing {
    max_ns: u64,
    total_ns: u128,
    count: u64,
}

impl Timing {
    fn record(&mut self, d: Duration) {
        let ns = d.as_nanos();
        self.max_ns = self.max_ns.max(ns as u64);
        self.total_ns += ns;
        self.count += 1;
    }

    fn latency(&self, steps: usize) -> Latency {
        if self.count == 0 {
            return Latency::default();
        }
        Latency {
            max_ns: self.max_ns / steps as u64,
            mean_ns: self.total_ns as f64 / self.count as f64 / steps as f64,
        }
    }
}

/// Runs one writer and one reader thread for `cfg.ops` operations each.
pub fn run_stress(cfg: StressConfig) -> Result<StressReport, HarnessError> {
    let k = cfg.payload_words;
    if k == 0 {
        return Err(HarnessError::Config("payload must have at least one word".into()));
    }
    let (mut writer, mut reader) = FourSlotBuffer::new(k, &vec![0; k])?.split();
    let committed = Arc::new(AtomicU64::new(0));
    let started = Instant::now();

    let writer_side = {
        let committed = Arc::clone(&committed);
        let mut jitter = Jitter {
            rng: StdRng::seed_from_u64(cfg.seed),
            pacing: cfg.writer_pacing,
        };
        thread::Builder::new().name("stress-writer".into()).spawn(move || {
            let mut buf = vec![0u64; k];
            let mut timing = Timing::default();
            for seq in 1..=cfg.ops {
                buf.fill(seq);
                let t = Instant::now();
                writer.write_observed(&buf, |_| jitter.pause()).expect("payload width");
                timing.record(t.elapsed());
                committed.store(seq, Ordering::SeqCst);
            }
            timing
        })?
    };
    let reader_side = {
        let committed = Arc::clone(&committed);
        let mut jitter = Jitter {
            rng: StdRng::seed_from_u64(cfg.seed.wrapping_add(0x9e37_79b9_7f4a_7c15)),
            pacing: cfg.reader_pacing,
        };
        thread::Builder::new().name("stress-reader".into()).spawn(move || {
            let mut out = vec![0u64; k];
            let mut seen = Vec::with_capacity(cfg.ops as usize);
            let mut timing = Timing::default();
            for _ in 0..cfg.ops {
                let commit_at_start = committed.load(Ordering::SeqCst);
                let t = Instant::now();
                reader.read_observed(&mut out, |_| jitter.pause()).expect("payload width");
                timing.record(t.elapsed());
                let commit_at_end = committed.load(Ordering::SeqCst);
                let first = out[0];
                seen.push(ReadObservation {
                    seq_read: out.iter().all(|w| *w == first).then_some(first),
                    commit_at_start,
                    commit_at_end,
                });
            }
            (seen, timing)
        })?
    };

    let wt = writer_side.join().map_err(|_| HarnessError::AgentPanic("writer"))?;
    let (seen, rt) = reader_side.join().map_err(|_| HarnessError::AgentPanic("reader"))?;
    let mut report = StressReport::tally(cfg, wt.count, &seen);
    report.write_latency = wt.latency(acm::write_steps(k));
    report.read_latency = rt.latency(acm::read_steps(k));
    report.elapsed = started.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obs(seq: Option<u64>, start: u64, end: u64) -> ReadObservation {
        ReadObservation {
            seq_read: seq,
            commit_at_start: start,
            commit_at_end: end,
        }
    }

    #[test]
    fn tally_counts_each_kind() {
        let seen = [
            obs(Some(0), 0, 0),
            obs(Some(3), 2, 2),
            obs(None, 3, 3),
            obs(Some(1), 4, 4),
            obs(Some(9), 4, 5),
        ];
        let r = StressReport::tally(StressConfig::new(5, 1, 0), 5, &seen);
        assert_eq!(r.reads, 5);
        assert_eq!(r.torn_count, 1);
        // 1 is older than the commit at its start, 9 is too new.
        assert_eq!(r.window_violations, 2);
        // 3 then 1.
        assert_eq!(r.monotonicity_violations, 1);
        assert!(!r.passed());
    }

    #[test]
    fn window_allows_one_write_past_the_counter() {
        assert!(obs(Some(5), 4, 4).in_window());
        assert!(!obs(Some(6), 4, 4).in_window());
        assert!(!obs(Some(3), 4, 4).in_window());
    }

    #[test]
    fn zero_ops_is_empty() {
        let r = run_stress(StressConfig::new(0, 4, 1)).unwrap();
        assert_eq!((r.reads, r.writes, r.torn_count), (0, 0, 0));
        assert!(r.passed());
    }

    #[test]
    fn zero_words_rejected() {
        assert!(run_stress(StressConfig::new(10, 0, 1)).is_err());
    }

    #[test]
    fn small_run_is_clean() {
        for k in [1, 3, 8] {
            let r = run_stress(StressConfig::new(20_000, k, 7)).unwrap();
            assert!(r.passed(), "{r:?}");
            assert_eq!(r.writes, 20_000);
            assert_eq!(r.reads, 20_000);
            assert!(r.overlapped_reads > 0, "{r:?}");
        }
    }
}
