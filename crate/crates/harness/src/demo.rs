//! Scripted single-threaded walk through the four-slot buffer.

use std::io::Write;

use acm::FourSlotBuffer;

use crate::HarnessError;

const WORDS: usize = 4;

fn uniform(words: &[u64]) -> Option<u64> {
    words.iter().all(|w| *w == words[0]).then_some(words[0])
}

/// Narrates a fixed sequence of reads and writes to `out`, checking each
/// result as it goes. Returns whether every check held.
pub fn run_demo(out: &mut dyn Write) -> Result<bool, HarnessError> {
    let (mut writer, mut reader) = FourSlotBuffer::new(WORDS, &[0; WORDS])?.split();
    let mut ok = true;
    let mut check = |out: &mut dyn Write, what: &str, got: Option<u64>, want: &[u64]| -> std::io::Result<()> {
        let good = got.is_some_and(|g| want.contains(&g));
        ok &= good;
        let shown = got.map_or("a torn payload".to_string(), |g| g.to_string());
        writeln!(out, "  {what}: got {shown}, expected one of {want:?} [{}]", if good { "ok" } else { "WRONG" })
    };
    let mut buf = [0u64; WORDS];

    writeln!(out, "buffer of {WORDS}-word payloads, initial value 0")?;
    writeln!(out, "reader reads before any write:")?;
    reader.read_observed(&mut buf, |step| {
        let _ = writeln!(out, "    reader step {step:?}");
    })?;
    check(out, "read", uniform(&buf), &[0])?;

    for v in 1..=3u64 {
        writeln!(out, "writer writes {v}:")?;
        writer.write_observed(&[v; WORDS], |step| {
            if v == 1 {
                let _ = writeln!(out, "    writer step {step:?}");
            }
        })?;
    }
    writeln!(out, "reader reads after three writes:")?;
    reader.read_observed(&mut buf, |_| ())?;
    check(out, "read", uniform(&buf), &[3])?;

    // The reader runs a whole read before each of the writer's steps.
    writeln!(out, "writer writes 4 while the reader reads between its steps:")?;
    let mut during = Vec::new();
    writer.write_observed(&[4; WORDS], |step| {
        let mut snapshot = [0u64; WORDS];
        reader.read_into(&mut snapshot).expect("payload width");
        during.push((step, uniform(&snapshot)));
    })?;
    for (step, got) in during {
        check(out, &format!("read before {step:?}"), got, &[3, 4])?;
    }
    reader.read_observed(&mut buf, |_| ())?;
    check(out, "read after the write returned", uniform(&buf), &[4])?;

    // And the writer runs whole writes between the reader's steps.
    writeln!(out, "reader reads while the writer writes 5, 6, ... between its steps:")?;
    let mut next = 5u64;
    reader.read_observed(&mut buf, |_| {
        writer.write(&[next; WORDS]).expect("payload width");
        next += 1;
    })?;
    let last = next - 1;
    check(out, "read", uniform(&buf), &(4..=last).collect::<Vec<_>>())?;
    reader.read_observed(&mut buf, |_| ())?;
    check(out, "next read", uniform(&buf), &[last])?;

    writeln!(out, "{}", if ok { "all checks held" } else { "a check FAILED" })?;
    Ok(ok)
}
