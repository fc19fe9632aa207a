//! Seeded backend benchmark.
//!
//! Workloads, all drawn from a ChaCha8 stream seeded by `seed`:
//! * `uniform`: `size` distinct integers sampled uniformly from `[0, span)`;
//! * `interval`: `{1, ..., size}`;
//! * `strided`: the strided block with `q = 3`, `d = 1` and `size / 2` strides;
//! * `digits`: the base-16 digit set with `a = 4` and the largest `t` keeping
//!   `|A| <= size`.
//!
//! The crossover sweep fixes `crossover_size` uniform elements and widens the
//! span by factors of ten, timing merge against bitset at each step.

use std::time::Instant;

use dilset_core::constructions::{digit_set, interval, strided_block};
use dilset_core::set::dilated_sumset;
use dilset_core::{Backend, DilationPair, IntSet, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub seed: u64,
    pub pair: DilationPair,
    pub size: usize,
    pub span: u64,
    pub repeats: usize,
    pub crossover_size: usize,
    pub crossover_spans: Vec<u64>,
}

impl BenchConfig {
    pub fn new(pair: DilationPair) -> Self {
        BenchConfig {
            seed: 1,
            pair,
            size: 2000,
            span: 1_000_000,
            repeats: 3,
            crossover_size: 1000,
            crossover_spans: (3..=8).map(|k| 10u64.pow(k)).collect(),
        }
    }
}

/// `size` distinct values from `[0, span)`.
pub fn uniform_set(rng: &mut ChaCha8Rng, size: usize, span: u64) -> IntSet {
    let size = size.min(span as usize).max(1);
    let values = sample(rng, span as usize, size).into_iter().map(|v| v as i64);
    IntSet::from_unsorted(values).0
}

#[derive(Debug, Serialize)]
pub struct WorkloadRow {
    pub workload: String,
    pub size: usize,
    pub span: u64,
    pub sumset_size: usize,
    pub backends_agree: bool,
}

#[derive(Debug, Serialize)]
pub struct TimingRow {
    pub workload: String,
    pub merge_ms: f64,
    pub hash_ms: f64,
    pub bitset_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct CrossoverRow {
    pub span: u64,
    pub merge_ms: f64,
    pub bitset_ms: f64,
    pub faster: &'static str,
}

/// Wall-clock measurements; the only part of a bench report that varies between runs.
#[derive(Debug, Serialize)]
pub struct TimingSection {
    pub nondeterministic: bool,
    pub rows: Vec<TimingRow>,
    pub crossover: Vec<CrossoverRow>,
    /// Smallest span at which merge beat bitset, if any.
    pub crossover_span: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct BenchReport {
    pub workloads: Vec<WorkloadRow>,
    pub crossover_size: usize,
    pub timing: TimingSection,
}

fn median_ms(repeats: usize, mut f: impl FnMut() -> Result<IntSet>) -> Result<(f64, IntSet)> {
    let mut times = Vec::with_capacity(repeats);
    let mut last = None;
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let out = f()?;
        times.push(start.elapsed().as_secs_f64() * 1e3);
        last = Some(out);
    }
    times.sort_by(f64::total_cmp);
    Ok((times[times.len() / 2], last.expect("at least one repeat")))
}

fn workloads(cfg: &BenchConfig, rng: &mut ChaCha8Rng) -> Result<Vec<(String, IntSet)>> {
    let mut t = 0;
    while 4u64.pow(t + 2) <= cfg.size as u64 {
        t += 1;
    }
    Ok(vec![
        ("uniform".into(), uniform_set(rng, cfg.size, cfg.span)),
        ("interval".into(), interval(cfg.size as u64)?),
        ("strided".into(), strided_block(3, 1, (cfg.size as i64 / 2).max(3))?.0),
        ("digits".into(), digit_set(16, 4, t)?.set),
    ])
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for (name, set) in workloads(cfg, &mut rng)? {
        let (merge_ms, merged) = median_ms(cfg.repeats, || dilated_sumset(&set, cfg.pair, Backend::Merge))?;
        let (hash_ms, hashed) = median_ms(cfg.repeats, || dilated_sumset(&set, cfg.pair, Backend::Hash))?;
        let (bitset_ms, bits) = median_ms(cfg.repeats, || dilated_sumset(&set, cfg.pair, Backend::Bitset))?;
        rows.push(WorkloadRow {
            workload: name.clone(),
            size: set.len(),
            span: set.span(),
            sumset_size: merged.len(),
            backends_agree: merged == hashed && merged == bits,
        });
        timings.push(TimingRow {
            workload: name,
            merge_ms,
            hash_ms,
            bitset_ms,
        });
    }

    let mut crossover = Vec::new();
    for &span in &cfg.crossover_spans {
        let set = uniform_set(&mut rng, cfg.crossover_size, span);
        let (merge_ms, _) = median_ms(cfg.repeats, || dilated_sumset(&set, cfg.pair, Backend::Merge))?;
        let (bitset_ms, _) = median_ms(cfg.repeats, || dilated_sumset(&set, cfg.pair, Backend::Bitset))?;
        crossover.push(CrossoverRow {
            span,
            merge_ms,
            bitset_ms,
            faster: if merge_ms < bitset_ms { "merge" } else { "bitset" },
        });
    }
    let crossover_span = crossover.iter().find(|r| r.faster == "merge").map(|r| r.span);

    Ok(BenchReport {
        workloads: rows,
        crossover_size: cfg.crossover_size,
        timing: TimingSection {
            nondeterministic: true,
            rows: timings,
            crossover,
            crossover_span,
        },
    })
}
