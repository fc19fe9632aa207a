//! Finite integer sets, dilations and sumsets.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::{Error, Result};

/// Default span (in bits) below which [`Backend::Auto`] picks the bitset kernel.
pub const DEFAULT_BITSET_THRESHOLD: u64 = 1 << 26;

/// `Auto` leaves the bitset once the span exceeds this many bits per pair of
/// summands; beyond that, clearing and scanning the span costs more than merging.
pub const SPARSE_SPAN_FACTOR: u64 = 64;

/// A finite set of integers stored in strictly increasing order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntSet(Vec<i64>);

impl IntSet {
    /// Wraps a strictly increasing vector.
    pub fn new(elements: Vec<i64>) -> Result<Self> {
        if let Some(index) = elements.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing { index: index + 1 });
        }
        Ok(IntSet(elements))
    }

    /// Sorts and deduplicates, returning the set and the number of dropped duplicates.
    pub fn from_unsorted<I: IntoIterator<Item = i64>>(elements: I) -> (Self, usize) {
        let mut v: Vec<i64> = elements.into_iter().collect();
        v.sort_unstable();
        let before = v.len();
        v.dedup();
        let dups = before - v.len();
        (IntSet(v), dups)
    }

    pub fn singleton(x: i64) -> Self {
        IntSet(vec![x])
    }

    /// `{start, start + 1, ..., start + len - 1}`.
    pub fn range(start: i64, len: usize) -> Result<Self> {
        let end = start.checked_add(len as i64).ok_or(Error::Overflow)?;
        Ok(IntSet((start..end).collect()))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.last().copied()
    }

    /// `max - min`, or 0 for the empty set.
    pub fn span(&self) -> u64 {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => hi.abs_diff(lo),
            _ => 0,
        }
    }

    pub fn contains(&self, x: i64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> core::iter::Copied<core::slice::Iter<'_, i64>> {
        self.0.iter().copied()
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }

    /// `{-a : a in A}`.
    pub fn negated(&self) -> Result<Self> {
        let v = self
            .0
            .iter()
            .rev()
            .map(|&a| a.checked_neg().ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntSet(v))
    }

    /// Elements of `self` that are not in `other`.
    pub fn difference(&self, other: &IntSet) -> IntSet {
        IntSet(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    /// Whether `self` and `other` share no element.
    pub fn is_disjoint(&self, other: &IntSet) -> bool {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.0, &other.0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => i += 1,
                core::cmp::Ordering::Greater => j += 1,
                core::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// gcd of `a - min(A)` over the set; 1 for singletons.
    pub fn difference_gcd(&self) -> Result<u64> {
        let lo = self.min().ok_or(Error::EmptySet)?;
        let g = self.iter().fold(0u64, |g, a| g.gcd(&a.abs_diff(lo)));
        Ok(if g == 0 { 1 } else { g })
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Comma-separated literal form, e.g. `0,1,3,4`.
impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = i64;
    type IntoIter = core::iter::Copied<core::slice::Iter<'a, i64>>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Coprime dilation coefficients `1 <= p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DilationPair {
    p: i64,
    q: i64,
}

impl DilationPair {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 1 || q <= p || p.gcd(&q) != 1 {
            return Err(Error::InvalidPair { p, q });
        }
        Ok(DilationPair { p, q })
    }

    pub fn p(self) -> i64 {
        self.p
    }

    pub fn q(self) -> i64 {
        self.q
    }

    pub fn sum(self) -> i64 {
        self.p + self.q
    }

    pub fn product(self) -> i64 {
        self.p * self.q
    }

    /// Every valid pair with `p + q <= max_sum`, ordered by `(p + q, p)`.
    pub fn all_with_sum_at_most(max_sum: i64) -> Vec<DilationPair> {
        let mut out = Vec::new();
        for s in 3..=max_sum {
            for p in 1..s {
                if let Ok(pair) = DilationPair::new(p, s - p) {
                    out.push(pair);
                }
            }
        }
        out
    }
}

impl fmt::Display for DilationPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// The map `x -> (x - shift) / scale`, with inverse `x -> scale * x + shift`.
///
/// A negative scale reverses order, which is how reflections are expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub shift: i64,
    pub scale: i64,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { shift: 0, scale: 1 };

    pub fn new(shift: i64, scale: i64) -> Result<Self> {
        if scale == 0 {
            return Err(Error::NonPositiveScale(0));
        }
        Ok(AffineMap { shift, scale })
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn apply(&self, set: &IntSet) -> Result<IntSet> {
        let v = set
            .iter()
            .map(|x| {
                let shifted = x.checked_sub(self.shift).ok_or(Error::Overflow)?;
                if shifted % self.scale != 0 {
                    return Err(Error::NotDivisible {
                        element: shifted,
                        scale: self.scale,
                    });
                }
                Ok(shifted / self.scale)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ordered(v))
    }

    pub fn invert(&self, set: &IntSet) -> Result<IntSet> {
        let v = set
            .iter()
            .map(|x| {
                x.checked_mul(self.scale)
                    .and_then(|y| y.checked_add(self.shift))
                    .ok_or(Error::Overflow)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.ordered(v))
    }

    fn ordered(&self, mut v: Vec<i64>) -> IntSet {
        if self.scale < 0 {
            v.reverse();
        }
        IntSet(v)
    }
}

/// `d·A + c`.
pub fn affine_image(set: &IntSet, c: i64, d: i64) -> Result<IntSet> {
    set.require_nonempty()?;
    if d <= 0 {
        return Err(Error::NonPositiveScale(d));
    }
    let v = set
        .iter()
        .map(|a| a.checked_mul(d).and_then(|x| x.checked_add(c)).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntSet(v))
}

/// `d·A` for `d >= 1`.
pub fn dilate(set: &IntSet, d: i64) -> Result<IntSet> {
    affine_image(set, 0, d)
}

/// How a sumset is computed. All backends return identical sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    /// Pairwise merging of the sorted rows `x + Y`.
    Merge,
    /// Hash-set accumulation followed by a sort.
    Hash,
    /// One bit per integer of the output span.
    Bitset,
    /// Bitset when the output span is below the threshold and not much
    /// wider than the number of pairs, merge otherwise.
    #[default]
    Auto,
}

impl Backend {
    pub const CONCRETE: [Backend; 3] = [Backend::Merge, Backend::Hash, Backend::Bitset];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Merge => "merge",
            Backend::Hash => "hash",
            Backend::Bitset => "bitset",
            Backend::Auto => "auto",
        }
    }

    fn resolve(self, output_span: u64, pairs: u64, threshold: u64) -> Backend {
        match self {
            Backend::Auto if output_span < threshold && output_span <= pairs.saturating_mul(SPARSE_SPAN_FACTOR) => {
                Backend::Bitset
            }
            Backend::Auto => Backend::Merge,
            b => b,
        }
    }
}

impl core::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "merge" => Ok(Backend::Merge),
            "hash" => Ok(Backend::Hash),
            "bitset" => Ok(Backend::Bitset),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::InvalidParameters("unknown backend")),
        }
    }
}

/// `A + B`.
pub fn sumset(a: &IntSet, b: &IntSet) -> Result<IntSet> {
    sumset_with(a, b, Backend::Auto, DEFAULT_BITSET_THRESHOLD)
}

/// `A + B` with an explicit backend and `Auto` threshold.
pub fn sumset_with(a: &IntSet, b: &IntSet, backend: Backend, threshold: u64) -> Result<IntSet> {
    a.require_nonempty()?;
    b.require_nonempty()?;
    let span = output_span(a, b)?;
    Ok(match backend.resolve(span, (a.len() * b.len()) as u64, threshold) {
        Backend::Merge => merge_kernel(a.as_slice(), b.as_slice()),
        Backend::Hash => hash_kernel(a.as_slice(), b.as_slice()),
        _ => bitset_kernel(a.as_slice(), b.as_slice()).into_set(),
    })
}

/// `|A + B|`; the bitset path counts bits instead of materialising the set.
pub fn sumset_size_with(a: &IntSet, b: &IntSet, backend: Backend, threshold: u64) -> Result<usize> {
    a.require_nonempty()?;
    b.require_nonempty()?;
    let span = output_span(a, b)?;
    Ok(match backend.resolve(span, (a.len() * b.len()) as u64, threshold) {
        Backend::Bitset => bitset_kernel(a.as_slice(), b.as_slice()).count(),
        other => sumset_with(a, b, other, threshold)?.len(),
    })
}

/// `p·A + q·A`.
pub fn dilated_sumset(set: &IntSet, pair: DilationPair, backend: Backend) -> Result<IntSet> {
    dilated_sumset_with(set, pair, backend, DEFAULT_BITSET_THRESHOLD)
}

pub fn dilated_sumset_with(set: &IntSet, pair: DilationPair, backend: Backend, threshold: u64) -> Result<IntSet> {
    let (x, y) = dilates(set, pair.p(), set, pair.q())?;
    sumset_with(&x, &y, backend, threshold)
}

/// `|p·A + q·A|` using the `Auto` backend.
pub fn dilated_sumset_size(set: &IntSet, pair: DilationPair) -> Result<usize> {
    dilated_sumset_size_with(set, pair, Backend::Auto, DEFAULT_BITSET_THRESHOLD)
}

pub fn dilated_sumset_size_with(set: &IntSet, pair: DilationPair, backend: Backend, threshold: u64) -> Result<usize> {
    let (x, y) = dilates(set, pair.p(), set, pair.q())?;
    sumset_size_with(&x, &y, backend, threshold)
}

/// `p·X + q·Y` for two possibly different sets.
pub fn linear_sumset(x: &IntSet, p: i64, y: &IntSet, q: i64) -> Result<IntSet> {
    let (dx, dy) = dilates(x, p, y, q)?;
    sumset(&dx, &dy)
}

fn dilates(x: &IntSet, p: i64, y: &IntSet, q: i64) -> Result<(IntSet, IntSet)> {
    let dx = dilate(x, p)?;
    let dy = dilate(y, q)?;
    output_span(&dx, &dy)?;
    Ok((dx, dy))
}

/// Width of the output interval `[min A + min B, max A + max B]`, checked for overflow.
fn output_span(a: &IntSet, b: &IntSet) -> Result<u64> {
    let (amin, amax) = (a.min().unwrap(), a.max().unwrap());
    let (bmin, bmax) = (b.min().unwrap(), b.max().unwrap());
    amin.checked_add(bmin).ok_or(Error::Overflow)?;
    amax.checked_add(bmax).ok_or(Error::Overflow)?;
    a.span().checked_add(b.span()).ok_or(Error::Overflow)
}

fn merge_kernel(a: &[i64], b: &[i64]) -> IntSet {
    // Rows x + cols are already sorted; merge neighbouring runs pairwise,
    // halving the number of runs per pass and dropping duplicates as we go.
    let (rows, cols) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut cur: Vec<i64> = Vec::with_capacity(rows.len() * cols.len());
    let mut bounds: Vec<usize> = Vec::with_capacity(rows.len() + 1);
    bounds.push(0);
    for &r in rows {
        cur.extend(cols.iter().map(|&c| r + c));
        bounds.push(cur.len());
    }
    let mut next: Vec<i64> = Vec::with_capacity(cur.len());
    let mut next_bounds: Vec<usize> = Vec::with_capacity(bounds.len());
    while bounds.len() > 2 {
        next.clear();
        next_bounds.clear();
        next_bounds.push(0);
        for w in bounds.windows(3).step_by(2) {
            merge_dedup(&cur[w[0]..w[1]], &cur[w[1]..w[2]], &mut next);
            next_bounds.push(next.len());
        }
        if bounds.len() % 2 == 0 {
            // Odd number of runs: the last one is carried over unchanged.
            let last = &cur[bounds[bounds.len() - 2]..];
            next.extend_from_slice(last);
            next_bounds.push(next.len());
        }
        core::mem::swap(&mut cur, &mut next);
        core::mem::swap(&mut bounds, &mut next_bounds);
    }
    cur.truncate(bounds[1]);
    IntSet(cur)
}

/// Appends the union of two strictly increasing runs to `out`.
fn merge_dedup(x: &[i64], y: &[i64], out: &mut Vec<i64>) {
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let (u, v) = (x[i], y[j]);
        out.push(u.min(v));
        i += (u <= v) as usize;
        j += (v <= u) as usize;
    }
    out.extend_from_slice(&x[i..]);
    out.extend_from_slice(&y[j..]);
}

fn hash_kernel(a: &[i64], b: &[i64]) -> IntSet {
    let mut seen: hashbrown::HashSet<i64> = hashbrown::HashSet::with_capacity((a.len() * b.len()).min(1 << 20));
    for &x in a {
        for &y in b {
            seen.insert(x + y);
        }
    }
    let mut v: Vec<i64> = seen.into_iter().collect();
    v.sort_unstable();
    IntSet(v)
}

/// Bits of `A + B` relative to `min A + min B`.
pub(crate) struct SumBits {
    origin: i64,
    words: Vec<u64>,
}

impl SumBits {
    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn into_set(self) -> IntSet {
        let mut out = Vec::with_capacity(self.count());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let bit = w.trailing_zeros() as i64;
                out.push(self.origin + (wi as i64) * 64 + bit);
                w &= w - 1;
            }
        }
        IntSet(out)
    }
}

/// Output tile width; the byte scratch for one tile stays cache resident.
const TILE: u64 = 1 << 15;
/// Rows swept between checks for a saturated tile.
const SATURATION_CHECK: u32 = 64;

fn bitset_kernel(a: &[i64], b: &[i64]) -> SumBits {
    // Cutting runs from the narrower operand keeps them long.
    let (a, b) = if b[b.len() - 1] - b[0] > a[a.len() - 1] - a[0] {
        (b, a)
    } else {
        (a, b)
    };
    let (a0, b0) = (a[0], b[0]);
    let b_span = (b[b.len() - 1] - b0) as u64;
    let span = (a[a.len() - 1] - a0) as u64 + b_span + 1;
    let mut words = vec![0u64; span.div_ceil(64) as usize];
    let ao: Vec<u64> = a.iter().map(|&x| (x - a0) as u64).collect();
    // The inner loop streams B, so narrow offsets halve its memory traffic.
    if b_span <= u32::MAX as u64 {
        let bo: Vec<u32> = b.iter().map(|&y| (y - b0) as u32).collect();
        sweep(&ao, &bo, span, &mut words);
    } else {
        let bo: Vec<u64> = b.iter().map(|&y| (y - b0) as u64).collect();
        sweep(&ao, &bo, span, &mut words);
    }
    SumBits { origin: a0 + b0, words }
}

fn sweep<T: Copy + Into<u64>>(ao: &[u64], bo: &[T], span: u64, words: &mut [u64]) {
    let b_top: u64 = bo[bo.len() - 1].into();

    // Sweep the output in tiles. For each x the sums x + y falling in the tile
    // come from a contiguous run of B, and the runs only move forward, so
    // next[i] remembers where row i stopped. Inside a tile the writes are plain
    // byte stores, packed into the bit vector once the tile is done.
    let mut next = vec![0usize; ao.len()];
    let mut first_live = 0;
    // A fixed-size tile lets the masked index below drop the bounds check.
    let mut tile: Box<[u8; TILE as usize]> = vec![0u8; TILE as usize]
        .into_boxed_slice()
        .try_into()
        .expect("tile has TILE bytes");
    let mut start = 0u64;
    while start < span {
        let end = start + TILE;
        while first_live < ao.len() && ao[first_live] + b_top < start {
            first_live += 1;
        }
        let mut touched = false;
        let live = (span - start).min(TILE) as usize;
        // Dense inputs fill a tile long before the last row; from then on only
        // the row cursors need to advance.
        let mut full = false;
        let mut since_check = 0u32;
        // For a fixed tile the run end only moves down as x grows, so it is
        // found by walking back from the previous row's end.
        let mut stop = bo.len();
        for (i, &x) in ao.iter().enumerate().skip(first_live) {
            if x >= end {
                break;
            }
            let limit = end - x;
            while stop > 0 && bo[stop - 1].into() >= limit {
                stop -= 1;
            }
            let j = next[i];
            if stop <= j {
                continue;
            }
            touched = true;
            next[i] = stop;
            if full {
                continue;
            }
            // x may lie below the tile; x + y never does, so the offset wraps back.
            let base = x.wrapping_sub(start);
            let slot = |y: T| base.wrapping_add(y.into()) as usize & (TILE as usize - 1);
            let mut run = bo[j..stop].chunks_exact(8);
            for c in &mut run {
                for &y in c {
                    tile[slot(y)] = 1;
                }
            }
            for &y in run.remainder() {
                tile[slot(y)] = 1;
            }
            since_check += 1;
            if since_check == SATURATION_CHECK {
                since_check = 0;
                full = !tile[..live].contains(&0);
            }
        }
        if !touched {
            start = end;
            continue;
        }
        let first_word = (start / 64) as usize;
        // Bytes past `live` were never written, so whole 64-byte chunks are safe to pack.
        let chunks = tile[..live.div_ceil(64) * 64].chunks_exact(64);
        for (w, chunk) in words[first_word..].iter_mut().zip(chunks) {
            *w = pack_bytes(chunk);
        }
        tile.fill(0);
        start = end;
    }
}

/// Packs 64 bytes, each 0 or 1, into one word (byte `k` becomes bit `k`).
fn pack_bytes(chunk: &[u8]) -> u64 {
    let mut w = 0u64;
    for (g, group) in chunk.chunks_exact(8).enumerate() {
        let x = u64::from_le_bytes(group.try_into().expect("8-byte group"));
        // Gathers the low bit of every byte into the top byte without carries.
        w |= (x.wrapping_mul(0x0102_0408_1020_4080) >> 56) << (8 * g);
    }
    w
}

/// Normal form of `A` under translation, positive dilation and (optionally) reflection.
///
/// Returns `A'` with `min A' = 0` and element gcd 1, and the map taking `A` to `A'`.
/// With `use_reflection`, `A'` is the lexicographically smaller of the normal form and
/// its reflection `max(A') - A'`; ties keep the unreflected form.
pub fn canonicalize(set: &IntSet, use_reflection: bool) -> Result<(IntSet, AffineMap)> {
    let lo = set.min().ok_or(Error::EmptySet)?;
    let g = set.difference_gcd()?;
    let g = i64::try_from(g).map_err(|_| Error::Overflow)?;
    let map = AffineMap::new(lo, g)?;
    let normal = map.apply(set)?;
    if !use_reflection {
        return Ok((normal, map));
    }
    let top = normal.max().unwrap();
    let reflected: Vec<i64> = normal.iter().rev().map(|x| top - x).collect();
    if reflected.as_slice() < normal.as_slice() {
        let shift = top
            .checked_mul(g)
            .and_then(|t| t.checked_add(lo))
            .ok_or(Error::Overflow)?;
        Ok((IntSet(reflected), AffineMap::new(shift, -g)?))
    } else {
        Ok((normal, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.to_vec()).unwrap()
    }

    fn pair(p: i64, q: i64) -> DilationPair {
        DilationPair::new(p, q).unwrap()
    }

    #[test]
    fn new_rejects_unsorted_and_duplicates() {
        assert_eq!(IntSet::new(vec![0, 2, 1]), Err(Error::NotIncreasing { index: 2 }));
        assert_eq!(IntSet::new(vec![1, 1]), Err(Error::NotIncreasing { index: 1 }));
        let (s, dups) = IntSet::from_unsorted([4, 1, 1, 0, 3]);
        assert_eq!(s, set(&[0, 1, 3, 4]));
        assert_eq!(dups, 1);
    }

    #[test]
    fn pair_validation() {
        assert!(DilationPair::new(1, 2).is_ok());
        assert!(DilationPair::new(2, 3).is_ok());
        assert!(DilationPair::new(0, 3).is_err());
        assert!(DilationPair::new(3, 3).is_err());
        assert!(DilationPair::new(3, 2).is_err());
        assert!(DilationPair::new(2, 4).is_err());
        let pairs = DilationPair::all_with_sum_at_most(8);
        assert_eq!(pairs.len(), 10);
        assert!(pairs.iter().all(|pq| pq.sum() <= 8));
    }

    #[test]
    fn affine_image_examples() {
        assert_eq!(affine_image(&set(&[1, 3]), 2, 1).unwrap(), set(&[3, 5]));
        assert_eq!(affine_image(&set(&[0, 1, 3]), 0, 1).unwrap(), set(&[0, 1, 3]));
        assert_eq!(affine_image(&set(&[0, 1, 2]), 1, 3).unwrap(), set(&[1, 4, 7]));
        assert_eq!(affine_image(&IntSet::default(), 0, 1), Err(Error::EmptySet));
        assert_eq!(affine_image(&set(&[1]), 0, 0), Err(Error::NonPositiveScale(0)));
        assert_eq!(affine_image(&set(&[i64::MAX]), 1, 1), Err(Error::Overflow));
    }

    #[test]
    fn sumset_examples() {
        assert_eq!(sumset(&set(&[0, 1]), &set(&[0, 2])).unwrap(), set(&[0, 1, 2, 3]));
        assert_eq!(sumset(&set(&[7]), &set(&[-3])).unwrap(), set(&[4]));
        let s = sumset(&set(&[0, 1, 2]), &set(&[0, 1, 2])).unwrap();
        assert_eq!(s, set(&[0, 1, 2, 3, 4]));
        assert_eq!(sumset(&IntSet::default(), &set(&[1])), Err(Error::EmptySet));
    }

    #[test]
    fn dilated_sumset_examples() {
        for backend in [Backend::Merge, Backend::Hash, Backend::Bitset, Backend::Auto] {
            let s = dilated_sumset(&set(&[0, 1]), pair(1, 2), backend).unwrap();
            assert_eq!(s, set(&[0, 1, 2, 3]));
            let s = dilated_sumset(&set(&[0, 1]), pair(2, 3), backend).unwrap();
            assert_eq!(s, set(&[0, 2, 3, 5]));
            let s = dilated_sumset(&set(&[0, 1, 3, 4]), pair(1, 3), backend).unwrap();
            assert_eq!(s, set(&[0, 1, 3, 4, 6, 7, 9, 10, 12, 13, 15, 16]));
        }
        assert_eq!(
            dilated_sumset(&IntSet::default(), pair(1, 2), Backend::Auto),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn dilated_sumset_detects_overflow() {
        let big = set(&[0, i64::MAX / 3]);
        assert_eq!(dilated_sumset(&big, pair(1, 3), Backend::Merge), Err(Error::Overflow));
        let fits = set(&[0, i64::MAX / 5]);
        assert!(dilated_sumset(&fits, pair(1, 3), Backend::Merge).is_ok());
    }

    #[test]
    fn auto_threshold_switches_backend() {
        let a = set(&[0, 1, 1000]);
        let via_small = dilated_sumset_with(&a, pair(1, 2), Backend::Auto, 4).unwrap();
        let via_large = dilated_sumset_with(&a, pair(1, 2), Backend::Auto, 1 << 30).unwrap();
        assert_eq!(via_small, via_large);
        assert_eq!(Backend::Auto.resolve(10, 100, 4), Backend::Merge);
        assert_eq!(Backend::Auto.resolve(3, 100, 4), Backend::Bitset);
        // Sparse spans stay on the merge path even under the threshold.
        assert_eq!(Backend::Auto.resolve(1 << 20, 100, 1 << 26), Backend::Merge);
        assert_eq!(Backend::Auto.resolve(6400, 100, 1 << 26), Backend::Bitset);
    }

    #[test]
    fn bitset_handles_multiple_tiles() {
        let t = TILE as i64;
        let a = set(&[0, 3, t / 2 - 1, t - 1, t, 3 * t + 5, 3 * t + 70]);
        for pq in [pair(1, 2), pair(2, 5)] {
            let merge = dilated_sumset(&a, pq, Backend::Merge).unwrap();
            let bits = dilated_sumset(&a, pq, Backend::Bitset).unwrap();
            assert_eq!(merge, bits);
        }
    }

    #[test]
    fn saturated_tiles_keep_exact_edges() {
        // Dense enough that middle tiles fill up early; the sparse tail leaves gaps.
        let t = TILE as i64;
        let a = IntSet::from_unsorted((0..3000).map(|k| k * 7 % 4001).chain([t, 2 * t + 3, 5 * t])).0;
        for pq in [pair(1, 2), pair(2, 3), pair(3, 7)] {
            let merge = dilated_sumset(&a, pq, Backend::Merge).unwrap();
            let bits = dilated_sumset(&a, pq, Backend::Bitset).unwrap();
            assert_eq!(merge, bits);
        }
    }

    #[test]
    fn sweep_is_independent_of_offset_width() {
        let t = TILE;
        let ao = [0, 7, t - 3, 2 * t + 1];
        let narrow: [u32; 5] = [0, 2, 9, t as u32, 3 * t as u32 + 4];
        let wide = narrow.map(u64::from);
        let span = ao[3] + wide[4] + 1;
        let mut x = vec![0u64; span.div_ceil(64) as usize];
        let mut y = x.clone();
        sweep(&ao, &narrow, span, &mut x);
        sweep(&ao, &wide, span, &mut y);
        assert_eq!(x, y);
        let ones: u32 = x.iter().map(|w| w.count_ones()).sum();
        // 20 pairs, with 7 + 2 = 0 + 9 the only coincidence.
        assert_eq!(ones, 19);
    }

    #[test]
    fn canonicalize_examples() {
        let (c, map) = canonicalize(&set(&[5, 7, 11]), false).unwrap();
        assert_eq!(c, set(&[0, 1, 3]));
        assert_eq!(map, AffineMap { shift: 5, scale: 2 });
        assert_eq!(map.invert(&c).unwrap(), set(&[5, 7, 11]));

        let (c, map) = canonicalize(&set(&[0, 1, 3]), false).unwrap();
        assert_eq!(c, set(&[0, 1, 3]));
        assert!(map.is_identity());

        let (c, map) = canonicalize(&set(&[0, 2, 3]), true).unwrap();
        assert_eq!(c, set(&[0, 1, 3]));
        assert_eq!(map.apply(&set(&[0, 2, 3])).unwrap(), c);
        assert_eq!(map.invert(&c).unwrap(), set(&[0, 2, 3]));

        let (c, map) = canonicalize(&set(&[42]), true).unwrap();
        assert_eq!(c, set(&[0]));
        assert_eq!(map, AffineMap { shift: 42, scale: 1 });
        assert_eq!(canonicalize(&IntSet::default(), false), Err(Error::EmptySet));
    }

    #[test]
    fn affine_map_rejects_outside_domain() {
        let map = AffineMap::new(1, 2).unwrap();
        assert_eq!(
            map.apply(&set(&[1, 2])),
            Err(Error::NotDivisible { element: 1, scale: 2 })
        );
        assert!(AffineMap::new(0, 0).is_err());
    }

    #[test]
    fn literal_display() {
        assert_eq!(alloc::format!("{}", set(&[-2, 0, 7])), "-2,0,7");
    }

    #[test]
    fn disjointness_and_difference() {
        let a = set(&[0, 2, 4]);
        assert!(a.is_disjoint(&set(&[1, 3])));
        assert!(!a.is_disjoint(&set(&[3, 4])));
        assert_eq!(a.difference(&set(&[2, 9])), set(&[0, 4]));
    }
}
