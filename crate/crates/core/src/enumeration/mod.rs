//! Exhaustive searches over rule pairs, statically sharded.
//!
//! A search space of `N` pair indices is cut into contiguous ranges by
//! [`partition_work`]. Shards run independently (optionally checkpointing to
//! disk) and their partial reports are merged in range order, so the final
//! report does not depend on the shard or thread count.

mod linear;
mod search;

use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use linear::{
    enumerate_linear_pairs, enumerate_maximal_linear, enumerate_maximal_linear_with,
    rule_polys, LinearEnumReport, PolyPair,
};
pub use search::{
    search_bipermutive, search_bipermutive_with, MaximalRulePair, SearchReport,
};

/// Contiguous, disjoint ranges covering `0..space_size`; earlier ranges take
/// the remainder, so sizes differ by at most one.
pub fn partition_work(space_size: u64, shards: usize) -> Vec<Range<u64>> {
    let shards = shards.max(1) as u64;
    let base = space_size / shards;
    let extra = space_size % shards;
    let mut start = 0;
    (0..shards)
        .map(|i| {
            let len = base + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// How a sharded enumeration is executed. None of these settings affect the
/// resulting report.
#[derive(Debug, Clone)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub shards: usize,
    /// Directory for per-shard checkpoint files; `None` disables checkpointing.
    pub checkpoint_dir: Option<PathBuf>,
    /// Pair indices processed between checkpoint writes.
    pub checkpoint_interval: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: None,
            shards: 64,
            checkpoint_dir: None,
            checkpoint_interval: 1 << 22,
        }
    }
}

impl RunOptions {
    pub fn single_threaded() -> Self {
        RunOptions {
            threads: Some(1),
            shards: 1,
            ..Self::default()
        }
    }
}

/// A partial result that can absorb the result of the following range.
pub trait ShardReport: Serialize + DeserializeOwned + Send {
    fn merge(&mut self, next: Self);
}

#[derive(Serialize, Deserialize)]
struct Checkpoint<R> {
    kind: String,
    diameter: u32,
    start: u64,
    end: u64,
    /// First index not yet processed.
    next: u64,
    partial: R,
}

fn checkpoint_path(dir: &Path, kind: &str, diameter: u32, range: &Range<u64>) -> PathBuf {
    dir.join(format!("{kind}-d{diameter}-{}-{}.json", range.start, range.end))
}

fn load_checkpoint<R: ShardReport>(
    path: &Path,
    kind: &str,
    diameter: u32,
    range: &Range<u64>,
) -> Result<Option<Checkpoint<R>>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let fail = |reason: String| Error::Checkpoint {
        path: path.to_path_buf(),
        reason,
    };
    let ckpt: Checkpoint<R> = serde_json::from_str(&text).map_err(|e| fail(e.to_string()))?;
    if ckpt.kind != kind
        || ckpt.diameter != diameter
        || ckpt.start != range.start
        || ckpt.end != range.end
        || !(range.start..=range.end).contains(&ckpt.next)
    {
        return Err(fail("does not match this shard".into()));
    }
    Ok(Some(ckpt))
}

fn save_checkpoint<R: ShardReport>(path: &Path, ckpt: &Checkpoint<R>) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    let text = serde_json::to_string(ckpt).map_err(|e| Error::Checkpoint {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Runs `work` over every index of `0..space`, one call per chunk, and merges
/// the shard reports in index order.
pub(crate) fn run_sharded<R, I, W>(
    kind: &str,
    diameter: u32,
    space: u64,
    opts: &RunOptions,
    init: I,
    work: W,
) -> Result<R>
where
    R: ShardReport,
    I: Fn() -> R + Sync,
    W: Fn(Range<u64>, &mut R) + Sync,
{
    if let Some(dir) = &opts.checkpoint_dir {
        fs::create_dir_all(dir)?;
    }
    let ranges = partition_work(space, opts.shards);
    let run_shard = |range: &Range<u64>| -> Result<R> {
        let path = opts
            .checkpoint_dir
            .as_deref()
            .map(|dir| checkpoint_path(dir, kind, diameter, range));
        let (mut next, mut partial) = match &path {
            Some(p) => match load_checkpoint::<R>(p, kind, diameter, range)? {
                Some(c) => (c.next, c.partial),
                None => (range.start, init()),
            },
            None => (range.start, init()),
        };
        let interval = opts.checkpoint_interval.max(1);
        while next < range.end {
            let stop = if path.is_some() {
                range.end.min(next.saturating_add(interval))
            } else {
                range.end
            };
            work(next..stop, &mut partial);
            next = stop;
            if let Some(p) = &path {
                let ckpt = Checkpoint {
                    kind: kind.to_string(),
                    diameter,
                    start: range.start,
                    end: range.end,
                    next,
                    partial,
                };
                save_checkpoint(p, &ckpt)?;
                partial = ckpt.partial;
            }
        }
        Ok(partial)
    };
    let parts: Vec<R> = match opts.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(|| ranges.par_iter().map(run_shard).collect::<Result<_>>())?,
        None => ranges.par_iter().map(run_shard).collect::<Result<_>>()?,
    };
    let mut parts = parts.into_iter();
    let mut merged = parts.next().unwrap_or_else(&init);
    for p in parts {
        merged.merge(p);
    }
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_examples() {
        assert_eq!(partition_work(16, 4), [0..4, 4..8, 8..12, 12..16]);
        assert_eq!(partition_work(10, 3), [0..4, 4..7, 7..10]);
        assert_eq!(partition_work(2, 4), [0..1, 1..2, 2..2, 2..2]);
        assert_eq!(partition_work(5, 0), [0..5]);
    }

    #[test]
    fn partitions_cover_space() {
        for space in [0u64, 1, 7, 100, 1023] {
            for shards in 1..20 {
                let ranges = partition_work(space, shards);
                assert_eq!(ranges.len(), shards);
                assert_eq!(ranges[0].start, 0);
                assert_eq!(ranges.last().unwrap().end, space);
                assert!(ranges.windows(2).all(|w| w[0].end == w[1].start));
            }
        }
    }

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct Sum(u64, Vec<u64>);

    impl ShardReport for Sum {
        fn merge(&mut self, next: Self) {
            self.0 += next.0;
            self.1.extend(next.1);
        }
    }

    fn sum_work(r: Range<u64>, acc: &mut Sum) {
        for i in r {
            acc.0 += i;
            if i % 7 == 0 {
                acc.1.push(i);
            }
        }
    }

    #[test]
    fn sharded_run_is_shard_independent() {
        let reference = run_sharded("sum", 0, 1000, &RunOptions::single_threaded(), || Sum(0, vec![]), sum_work).unwrap();
        assert_eq!(reference.0, 499_500);
        for shards in [2, 8, 33] {
            let opts = RunOptions {
                threads: Some(4),
                shards,
                ..RunOptions::default()
            };
            let r = run_sharded("sum", 0, 1000, &opts, || Sum(0, vec![]), sum_work).unwrap();
            assert_eq!(r, reference);
        }
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let opts = RunOptions {
            threads: Some(2),
            shards: 3,
            checkpoint_dir: Some(dir.path().to_path_buf()),
            checkpoint_interval: 50,
        };
        let first = run_sharded("sum", 1, 300, &opts, || Sum(0, vec![]), sum_work).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
        // Completed shards are not recomputed.
        let again = run_sharded("sum", 1, 300, &opts, || Sum(0, vec![]), |_, _| panic!("recomputed")).unwrap();
        assert_eq!(again, first);

        // A half-finished shard resumes from its recorded index.
        let range = 0..100;
        let path = checkpoint_path(dir.path(), "sum", 1, &range);
        let mut partial = Sum(0, vec![]);
        sum_work(0..40, &mut partial);
        let ckpt = Checkpoint { kind: "sum".into(), diameter: 1, start: 0, end: 100, next: 40, partial };
        save_checkpoint(&path, &ckpt).unwrap();
        let resumed = run_sharded("sum", 1, 300, &opts, || Sum(0, vec![]), |r, acc| {
            assert!(r.start >= 40);
            sum_work(r, acc)
        })
        .unwrap();
        assert_eq!(resumed, first);
    }

    #[test]
    fn mismatched_checkpoint_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = checkpoint_path(dir.path(), "sum", 2, &(0..10));
        fs::write(&path, r#"{"kind":"other","diameter":2,"start":0,"end":10,"next":3,"partial":[0,[]]}"#).unwrap();
        let opts = RunOptions {
            threads: Some(1),
            shards: 1,
            checkpoint_dir: Some(dir.path().to_path_buf()),
            checkpoint_interval: 4,
        };
        let err = run_sharded("sum", 2, 10, &opts, || Sum(0, vec![]), sum_work).unwrap_err();
        assert!(matches!(err, Error::Checkpoint { .. }));
    }
}
