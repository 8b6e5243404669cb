//! Chunked fold over a sample-index range. With the `parallel` feature the
//! chunks run on the rayon pool; otherwise a single fold covers the range.
//! Accumulators are integer counters merged by an associative, commutative
//! operation, so both modes (and any reduction order) produce identical
//! results.

use std::ops::Range;

pub(crate) fn fold_chunks<A, I, F, M>(total: u64, chunk: u64, init: I, fold: F, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, Range<u64>) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    debug_assert!(chunk > 0);
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunks = total.div_ceil(chunk).max(1);
        (0..chunks)
            .into_par_iter()
            .map(|c| fold(init(), c * chunk..((c + 1) * chunk).min(total)))
            .reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = chunk;
        let _ = &merge;
        fold(init(), 0..total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_the_whole_range_exactly_once() {
        for total in [0u64, 1, 100, 65_536, 65_537, 1_000_000] {
            let (count, sum) = fold_chunks(
                total,
                4096,
                || (0u64, 0u64),
                |(c, s), range| {
                    let mut c = c;
                    let mut s = s;
                    for i in range {
                        c += 1;
                        s = s.wrapping_add(i);
                    }
                    (c, s)
                },
                |a, b| (a.0 + b.0, a.1.wrapping_add(b.1)),
            );
            assert_eq!(count, total);
            let expected: u64 = (0..total).fold(0u64, |s, i| s.wrapping_add(i));
            assert_eq!(sum, expected);
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn thread_count_does_not_change_the_result() {
        let run = || {
            fold_chunks(
                250_000,
                1 << 12,
                || vec![0u64; 16],
                |mut hist, range| {
                    for i in range {
                        hist[(crate::mixers::mix64(i) & 0xF) as usize] += 1;
                    }
                    hist
                },
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(run);
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(run);
        assert_eq!(single, multi);
    }
}
