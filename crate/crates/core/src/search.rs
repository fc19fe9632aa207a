//! Exhaustive minimisation of `|p·A + q·A|` over canonical `n`-element sets.
//!
//! Canonical sets have minimum 0 and element gcd 1, so every affine class is
//! visited once. Sets are generated as gap vectors `(g_1, ..., g_{n-1})` with
//! `g_i >= 1`, `Σ g_i <= max_elem` and `gcd(g) = 1`, in lexicographic order
//! (which is also the lexicographic order of the sets). The first gap is the
//! shard key: shards are independent and merge deterministically.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::bounds::best_lower_bound;
use crate::{DilationPair, Error, IntSet, Result};

/// Default number of minimising sets kept per search.
pub const DEFAULT_WITNESS_CAP: usize = 32;

fn check_span(n: usize, max_elem: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameters("set size must be at least 1"));
    }
    if max_elem < (n - 1) as u64 {
        return Err(Error::InvalidParameters("max_elem < n - 1: no canonical sets exist"));
    }
    Ok(())
}

/// Whether `gaps` is no larger than its reversal, i.e. the set is not beaten by
/// its reflection `max - A`.
fn reflection_minimal(gaps: &[u64]) -> bool {
    gaps.iter().le(gaps.iter().rev())
}

fn set_from_gaps(gaps: &[u64]) -> IntSet {
    let mut v = Vec::with_capacity(gaps.len() + 1);
    let mut x = 0i64;
    v.push(0);
    for &g in gaps {
        x += g as i64;
        v.push(x);
    }
    IntSet::new(v).expect("positive gaps")
}

/// Lexicographic stream of canonical sets; see [`enumerate_canonical`].
#[derive(Clone, Debug)]
pub struct CanonicalSets {
    gaps: Vec<u64>,
    max_elem: u64,
    use_reflection: bool,
    /// Restricts the stream to one first-gap shard.
    shard: Option<u64>,
    started: bool,
    done: bool,
}

impl CanonicalSets {
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            if let Some(first) = self.shard {
                let len = self.gaps.len();
                if len == 0 || first + (len as u64 - 1) > self.max_elem || first == 0 {
                    return false;
                }
                self.gaps[0] = first;
            }
            return true;
        }
        let len = self.gaps.len();
        let floor = if self.shard.is_some() { 1 } else { 0 };
        let mut prefix: u64 = self.gaps.iter().sum();
        for k in (floor..len).rev() {
            prefix -= self.gaps[k];
            // Bump g_k, reset everything after it to 1.
            if prefix + self.gaps[k] + 1 + (len - k - 1) as u64 <= self.max_elem {
                self.gaps[k] += 1;
                for g in &mut self.gaps[k + 1..] {
                    *g = 1;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for CanonicalSets {
    type Item = IntSet;

    fn next(&mut self) -> Option<IntSet> {
        while !self.done {
            if !self.advance() {
                self.done = true;
                break;
            }
            if self.gaps.iter().fold(0u64, |g, &x| g.gcd(&x)) > 1 {
                continue;
            }
            if self.use_reflection && !reflection_minimal(&self.gaps) {
                continue;
            }
            let set = set_from_gaps(&self.gaps);
            if self.gaps.is_empty() {
                self.done = true;
            }
            return Some(set);
        }
        None
    }
}

/// One representative per affine class of `n`-element sets with span at most
/// `max_elem`; with `use_reflection`, also one per reflection pair.
pub fn enumerate_canonical(n: usize, max_elem: u64, use_reflection: bool) -> Result<CanonicalSets> {
    check_span(n, max_elem)?;
    Ok(CanonicalSets {
        gaps: vec![1; n - 1],
        max_elem,
        use_reflection,
        shard: None,
        started: false,
        done: false,
    })
}

/// The canonical sets whose first gap is `first_gap`.
pub fn enumerate_shard(n: usize, max_elem: u64, use_reflection: bool, first_gap: u64) -> Result<CanonicalSets> {
    let mut it = enumerate_canonical(n, max_elem, use_reflection)?;
    it.shard = Some(first_gap);
    Ok(it)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SearchConfig {
    pub pair: DilationPair,
    pub n: usize,
    pub max_elem: u64,
    pub use_reflection: bool,
    /// Cut partial sets that cannot reach the best size seen in the shard.
    pub prune: bool,
    pub witness_cap: usize,
}

impl SearchConfig {
    pub fn new(pair: DilationPair, n: usize, max_elem: u64) -> Self {
        SearchConfig {
            pair,
            n,
            max_elem,
            use_reflection: false,
            prune: true,
            witness_cap: DEFAULT_WITNESS_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_span(self.n, self.max_elem)?;
        (self.pair.sum() as u64)
            .checked_mul(self.max_elem)
            .filter(|&s| s < i64::MAX as u64)
            .ok_or(Error::Overflow)?;
        Ok(())
    }

    /// First-gap shard keys in merge order. A single key `0` stands for the
    /// lone set `{0}` when `n = 1`.
    pub fn shard_keys(&self) -> Vec<u64> {
        if self.n <= 1 {
            return vec![0];
        }
        (1..=self.max_elem + 2 - self.n as u64).collect()
    }
}

/// Partial result of one shard.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShardResult {
    pub minimum: Option<u64>,
    pub witnesses: Vec<IntSet>,
    /// Number of sets attaining `minimum` (not capped).
    pub witness_count: u64,
    /// Canonical sets whose sumset was fully evaluated.
    pub examined: u64,
}

impl ShardResult {
    /// Min-reduction; `self` is the earlier shard.
    pub fn merge(mut self, other: ShardResult, cap: usize) -> ShardResult {
        let examined = self.examined + other.examined;
        match (self.minimum, other.minimum) {
            (None, Some(_)) => self = other,
            (Some(a), Some(b)) if b < a => self = other,
            (Some(a), Some(b)) if a == b => {
                self.witness_count += other.witness_count;
                let room = cap.saturating_sub(self.witnesses.len());
                self.witnesses.extend(other.witnesses.into_iter().take(room));
            }
            _ => {}
        }
        self.examined = examined;
        self
    }
}

/// Incremental bitset of `p·A + q·A` for sets inside `[0, max_elem]`.
struct SumBits {
    words: Vec<u64>,
    count: u64,
}

impl SumBits {
    fn set(&mut self, idx: u64) {
        let w = &mut self.words[(idx >> 6) as usize];
        let bit = 1u64 << (idx & 63);
        if *w & bit == 0 {
            *w |= bit;
            self.count += 1;
        }
    }
}

struct ShardSearch<'a> {
    cfg: &'a SearchConfig,
    elements: Vec<u64>,
    gaps: Vec<u64>,
    levels: Vec<SumBits>,
    result: ShardResult,
}

impl ShardSearch<'_> {
    fn push(&mut self, x: u64) {
        let (p, q) = (self.cfg.pair.p() as u64, self.cfg.pair.q() as u64);
        let depth = self.elements.len();
        let (done, rest) = self.levels.split_at_mut(depth);
        let next = &mut rest[0];
        match done.last() {
            Some(prev) => {
                next.words.copy_from_slice(&prev.words);
                next.count = prev.count;
            }
            None => {
                next.words.fill(0);
                next.count = 0;
            }
        }
        for &a in &self.elements {
            next.set(p * a + q * x);
            next.set(p * x + q * a);
        }
        next.set((p + q) * x);
        self.elements.push(x);
    }

    fn pop(&mut self) {
        self.elements.pop();
    }

    fn current_count(&self) -> u64 {
        self.levels[self.elements.len() - 1].count
    }

    fn best(&self) -> u64 {
        self.result.minimum.unwrap_or(u64::MAX)
    }

    fn descend(&mut self, gcd: u64) {
        let n = self.cfg.n;
        let k = self.elements.len();
        let count = self.current_count();
        if k == n {
            if gcd != 1 {
                return;
            }
            if self.cfg.use_reflection && !reflection_minimal(&self.gaps) {
                return;
            }
            self.result.examined += 1;
            let best = self.best();
            if count < best {
                self.result.minimum = Some(count);
                self.result.witnesses.clear();
                self.result.witness_count = 0;
            }
            if count <= best {
                self.result.witness_count += 1;
                if self.result.witnesses.len() < self.cfg.witness_cap {
                    self.result.witnesses.push(set_from_gaps(&self.gaps));
                }
            }
            return;
        }
        // Each new maximum x adds p·x + q·max < p·max + q·x < (p + q)·x above
        // everything present, so n - k more elements add at least 3(n - k).
        if self.cfg.prune && count + 3 * (n - k) as u64 > self.best() {
            return;
        }
        let top = *self.elements.last().unwrap();
        let remaining_after = (n - k - 1) as u64;
        let mut g = 1;
        while top + g + remaining_after <= self.cfg.max_elem {
            self.gaps.push(g);
            self.push(top + g);
            self.descend(gcd.gcd(&g));
            self.pop();
            self.gaps.pop();
            g += 1;
        }
    }
}

/// Searches the shard with first gap `first_gap` (or `{0}` when `n = 1`).
pub fn search_shard(cfg: &SearchConfig, first_gap: u64) -> Result<ShardResult> {
    cfg.validate()?;
    let span = cfg.pair.sum() as u64 * cfg.max_elem + 1;
    let words = span.div_ceil(64) as usize;
    let mut search = ShardSearch {
        cfg,
        elements: Vec::with_capacity(cfg.n),
        gaps: Vec::with_capacity(cfg.n),
        levels: (0..cfg.n)
            .map(|_| SumBits {
                words: vec![0; words],
                count: 0,
            })
            .collect(),
        result: ShardResult::default(),
    };
    search.push(0);
    if cfg.n == 1 {
        search.descend(1);
        return Ok(search.result);
    }
    if first_gap == 0 || first_gap + (cfg.n as u64 - 2) > cfg.max_elem {
        return Ok(search.result);
    }
    search.gaps.push(first_gap);
    search.push(first_gap);
    search.descend(first_gap);
    Ok(search.result)
}

/// Outcome of an exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub pair: DilationPair,
    pub n: usize,
    pub max_elem: u64,
    pub use_reflection: bool,
    pub minimum: u64,
    /// Lexicographically first minimising canonical sets, up to the cap.
    pub witnesses: Vec<IntSet>,
    pub witness_count: u64,
    /// Strongest proved lower bound for all `n`-element sets.
    pub lower_bound: BigInt,
    pub lower_bound_name: String,
    /// `minimum` equals the proved lower bound, so it is the global minimum.
    pub certified: bool,
    /// Name of the matching bound when certified.
    pub certificate: Option<String>,
    /// `minimum` is below a proved lower bound.
    pub violation: bool,
    pub sets_examined: u64,
}

impl SearchResult {
    /// Uncertified minima only hold for sets with span at most `max_elem`.
    pub fn conditional_on_span(&self) -> bool {
        !self.certified
    }
}

/// Turns merged shard data into a certified or conditional result.
pub fn finish_search(cfg: &SearchConfig, merged: ShardResult) -> Result<SearchResult> {
    let minimum = merged
        .minimum
        .ok_or(Error::InvalidParameters("no canonical sets in range"))?;
    let (name, bound) = best_lower_bound(cfg.pair, cfg.n as u64)?;
    let min_big = BigInt::from(minimum);
    let certified = min_big == bound;
    Ok(SearchResult {
        pair: cfg.pair,
        n: cfg.n,
        max_elem: cfg.max_elem,
        use_reflection: cfg.use_reflection,
        minimum,
        witnesses: merged.witnesses,
        witness_count: merged.witness_count,
        violation: min_big < bound,
        certificate: certified.then(|| name.clone()),
        lower_bound: bound,
        lower_bound_name: name,
        certified,
        sets_examined: merged.examined,
    })
}

/// Runs every shard in order on the current thread.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let mut merged = ShardResult::default();
    for key in cfg.shard_keys() {
        merged = merged.merge(search_shard(cfg, key)?, cfg.witness_cap);
    }
    finish_search(cfg, merged)
}

/// Minimum of `|p·A + q·A|` over canonical `n`-sets with span at most `max_elem`.
pub fn min_dilated_sumset(n: usize, pair: DilationPair, max_elem: u64) -> Result<SearchResult> {
    run_search(&SearchConfig::new(pair, n, max_elem))
}

/// One search per `n` in the range.
pub fn tightness_table(
    pair: DilationPair,
    n_range: core::ops::RangeInclusive<usize>,
    max_elem: u64,
    use_reflection: bool,
) -> Result<Vec<SearchResult>> {
    n_range
        .map(|n| {
            let mut cfg = SearchConfig::new(pair, n, max_elem);
            cfg.use_reflection = use_reflection;
            run_search(&cfg)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{dilated_sumset_size_with, Backend};

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.to_vec()).unwrap()
    }

    fn pair(p: i64, q: i64) -> DilationPair {
        DilationPair::new(p, q).unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let all: Vec<_> = enumerate_canonical(2, 5, false).unwrap().collect();
        assert_eq!(all, [set(&[0, 1])]);

        let refl: Vec<_> = enumerate_canonical(3, 3, true).unwrap().collect();
        assert_eq!(refl, [set(&[0, 1, 2]), set(&[0, 1, 3])]);
        let plain: Vec<_> = enumerate_canonical(3, 3, false).unwrap().collect();
        assert_eq!(plain, [set(&[0, 1, 2]), set(&[0, 1, 3]), set(&[0, 2, 3])]);

        let one: Vec<_> = enumerate_canonical(1, 7, true).unwrap().collect();
        assert_eq!(one, [set(&[0])]);

        assert!(enumerate_canonical(4, 2, false).is_err());
        assert!(enumerate_canonical(0, 2, false).is_err());
    }

    #[test]
    fn shards_partition_the_stream() {
        for refl in [false, true] {
            let all: Vec<_> = enumerate_canonical(4, 9, refl).unwrap().collect();
            let cfg = SearchConfig::new(pair(1, 2), 4, 9);
            let sharded: Vec<_> = cfg
                .shard_keys()
                .into_iter()
                .flat_map(|k| enumerate_shard(4, 9, refl, k).unwrap())
                .collect();
            assert_eq!(all, sharded);
        }
    }

    #[test]
    fn search_examples() {
        let r = min_dilated_sumset(3, pair(1, 2), 8).unwrap();
        assert_eq!(r.minimum, 7);
        assert_eq!(r.witnesses[0], set(&[0, 1, 2]));
        assert!(r.certified);
        assert_eq!(r.certificate.as_deref(), Some("base"));

        let r = min_dilated_sumset(4, pair(1, 3), 12).unwrap();
        assert_eq!(r.minimum, 12);
        assert!(r.witnesses.contains(&set(&[0, 1, 3, 4])));
        assert!(r.certified);
        assert_eq!(r.certificate.as_deref(), Some("q3"));

        let r = min_dilated_sumset(2, pair(2, 3), 6).unwrap();
        assert_eq!(r.minimum, 4);
        assert_eq!(r.witnesses, [set(&[0, 1])]);
        assert!(r.certified);

        let r = min_dilated_sumset(1, pair(2, 5), 0).unwrap();
        assert_eq!(r.minimum, 1);
        assert_eq!(r.witnesses, [set(&[0])]);
    }

    #[test]
    fn witnesses_recompute_with_hash_backend() {
        let r = min_dilated_sumset(4, pair(2, 3), 10).unwrap();
        assert!(!r.violation);
        for w in &r.witnesses {
            let size = dilated_sumset_size_with(w, pair(2, 3), Backend::Hash, 0).unwrap();
            assert_eq!(size as u64, r.minimum);
        }
    }

    #[test]
    fn pruning_is_correctness_neutral() {
        for pq in [pair(1, 2), pair(1, 3), pair(2, 3), pair(1, 4)] {
            for n in 1..=4 {
                for refl in [false, true] {
                    let mut cfg = SearchConfig::new(pq, n, 10);
                    cfg.use_reflection = refl;
                    cfg.witness_cap = usize::MAX;
                    let pruned = run_search(&cfg).unwrap();
                    cfg.prune = false;
                    let full = run_search(&cfg).unwrap();
                    assert_eq!(pruned.minimum, full.minimum);
                    assert_eq!(pruned.witnesses, full.witnesses);
                    assert_eq!(pruned.witness_count, full.witness_count);
                    let count = enumerate_canonical(n, 10, refl).unwrap().count() as u64;
                    assert_eq!(full.sets_examined, count);
                }
            }
        }
    }

    #[test]
    fn brute_force_agrees() {
        let pq = pair(2, 5);
        let mut best = u64::MAX;
        let mut winners = Vec::new();
        for s in enumerate_canonical(4, 9, false).unwrap() {
            let size = dilated_sumset_size_with(&s, pq, Backend::Merge, 0).unwrap() as u64;
            if size < best {
                best = size;
                winners.clear();
            }
            if size == best {
                winners.push(s);
            }
        }
        let r = min_dilated_sumset(4, pq, 9).unwrap();
        assert_eq!(r.minimum, best);
        assert_eq!(r.witness_count, winners.len() as u64);
        assert_eq!(
            r.witnesses,
            winners.into_iter().take(DEFAULT_WITNESS_CAP).collect::<Vec<_>>()
        );
    }

    #[test]
    fn witness_cap_is_respected() {
        let mut cfg = SearchConfig::new(pair(1, 5), 3, 12);
        cfg.witness_cap = 1;
        let r = run_search(&cfg).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.witness_count >= 1);
    }

    #[test]
    fn table_rows() {
        let rows = tightness_table(pair(1, 2), 2..=6, 12, true).unwrap();
        for r in &rows {
            assert_eq!(r.minimum, 3 * r.n as u64 - 2);
            assert!(r.certified);
        }
        for w in rows.windows(2) {
            assert!(w[1].minimum > w[0].minimum);
        }
    }

    #[test]
    fn rejects_bad_config() {
        assert!(min_dilated_sumset(0, pair(1, 2), 3).is_err());
        assert!(min_dilated_sumset(5, pair(1, 2), 3).is_err());
    }
}
