//! Multi-threaded exhaustive search over independent shards.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use dilset_core::search::{finish_search, search_shard, SearchConfig, SearchResult, ShardResult};
use dilset_core::Result;

/// Runs the search on up to `jobs` threads.
///
/// Workers pull shard indices from a shared counter; results are merged in
/// shard order afterwards, so the outcome does not depend on `jobs` or on
/// scheduling.
pub fn search_parallel(cfg: &SearchConfig, jobs: usize) -> Result<SearchResult> {
    cfg.validate()?;
    let keys = cfg.shard_keys();
    let workers = jobs.clamp(1, keys.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();

    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (keys, next) = (&keys, &next);
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&key) = keys.get(k) else { break };
                if tx.send((k, search_shard(cfg, key))).is_err() {
                    break;
                }
            });
        }
    });
    drop(tx);

    let mut slots: Vec<Option<Result<ShardResult>>> = (0..keys.len()).map(|_| None).collect();
    for (k, res) in rx {
        slots[k] = Some(res);
    }
    let mut merged = ShardResult::default();
    for slot in slots {
        let shard = slot.expect("every shard reports exactly once")?;
        merged = merged.merge(shard, cfg.witness_cap);
    }
    finish_search(cfg, merged)
}
