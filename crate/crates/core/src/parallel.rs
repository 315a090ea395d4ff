//! Deterministic partitioned counting.
//!
//! The outermost loop variable is split into contiguous ranges. Workers pull
//! ranges from a shared cursor and keep private accumulators; the totals are
//! merged by integer addition, so results do not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Worker and partition configuration for a census run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parallelism {
    /// Worker threads; 0 means one per available core.
    pub jobs: usize,
    /// Number of contiguous ranges the outer loop is cut into; 0 means
    /// `4 * workers`, capped by the outer range length.
    pub partitions: usize,
}

impl Default for Parallelism {
    fn default() -> Self {
        Parallelism { jobs: 0, partitions: 0 }
    }
}

impl Parallelism {
    pub fn with_jobs(jobs: usize) -> Self {
        Parallelism { jobs, partitions: 0 }
    }

    pub fn workers(&self) -> usize {
        if self.jobs == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.jobs
        }
    }

    /// Effective partition count for an outer range of length `len`.
    pub fn partitions_for(&self, len: usize) -> usize {
        let want = if self.partitions == 0 { 4 * self.workers() } else { self.partitions };
        want.clamp(1, len.max(1))
    }
}

/// Contiguous split of `0..len` into `parts` ranges, sizes differing by at most one.
pub fn split_ranges(len: usize, parts: usize) -> Vec<std::ops::Range<usize>> {
    let parts = parts.clamp(1, len.max(1));
    let base = len / parts;
    let extra = len % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for p in 0..parts {
        let size = base + usize::from(p < extra);
        out.push(start..start + size);
        start += size;
    }
    out
}

/// Sum `per_item(i)` for `i` in `0..len`, partitioned as configured.
/// Returns the total and the number of partitions used.
pub fn partitioned_sum<A, F>(len: usize, par: Parallelism, per_item: F) -> (A, usize)
where
    A: Default + Send + std::ops::AddAssign,
    F: Fn(usize) -> A + Sync,
{
    let ranges = split_ranges(len, par.partitions_for(len));
    let nparts = ranges.len();
    let workers = par.workers().min(nparts).max(1);
    let run_range = |r: &std::ops::Range<usize>| {
        let mut acc = A::default();
        for i in r.clone() {
            acc += per_item(i);
        }
        acc
    };

    if workers == 1 {
        let mut total = A::default();
        for r in &ranges {
            total += run_range(r);
        }
        return (total, nparts);
    }

    let cursor = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<A>>> = Mutex::new((0..nparts).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let k = cursor.fetch_add(1, Ordering::Relaxed);
                if k >= nparts {
                    break;
                }
                let v = run_range(&ranges[k]);
                results.lock().expect("no worker panicked")[k] = Some(v);
            });
        }
    });
    let mut total = A::default();
    for v in results.into_inner().expect("no worker panicked") {
        total += v.expect("every partition ran");
    }
    (total, nparts)
}
