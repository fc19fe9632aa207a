//! Counting `|X + Y|` with base-`b` digit automata.
//!
//! Each operand is stored as a minimised trie over its base-`b` digits, least
//! significant digit first. Addition with carry is then a product construction
//! over `(node of X, node of Y, carry)`, and determinising it by output digit
//! gives one path per distinct sum. Counting paths with memoisation never
//! materialises `X + Y`.
//!
//! The method is exact for any finite sets, but its cost depends on how much
//! digit structure the operands share: carry-free digit sets collapse to a
//! handful of states per level, while unstructured sets can be far slower than
//! the direct kernels in [`crate::set`].

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::{Error, IntSet, Result};

type NodeId = u32;

const LEAF: NodeId = 0;

/// Layered digit trie with shared suffixes.
struct DigitDag {
    /// `children[id]` lists `(digit, child)` in increasing digit order.
    children: Vec<Vec<(u64, NodeId)>>,
    root: NodeId,
}

impl DigitDag {
    fn build(values: &[u64], base: u64, depth: usize) -> DigitDag {
        let mut dag = DigitDag {
            children: vec![Vec::new()],
            root: LEAF,
        };
        let mut interned: HashMap<Vec<(u64, NodeId)>, NodeId> = HashMap::new();
        dag.root = dag.insert(values.to_vec(), base, depth, &mut interned);
        dag
    }

    fn insert(
        &mut self,
        mut values: Vec<u64>,
        base: u64,
        remaining: usize,
        interned: &mut HashMap<Vec<(u64, NodeId)>, NodeId>,
    ) -> NodeId {
        if remaining == 0 {
            debug_assert_eq!(values, [0]);
            return LEAF;
        }
        // Stable sort keeps each residue group in increasing order.
        values.sort_by_key(|v| v % base);
        let mut kids = Vec::new();
        let mut start = 0;
        while start < values.len() {
            let digit = values[start] % base;
            let mut end = start + 1;
            while end < values.len() && values[end] % base == digit {
                end += 1;
            }
            let tail: Vec<u64> = values[start..end].iter().map(|v| v / base).collect();
            let child = self.insert(tail, base, remaining - 1, interned);
            kids.push((digit, child));
            start = end;
        }
        if let Some(&id) = interned.get(&kids) {
            return id;
        }
        let id = self.children.len() as NodeId;
        self.children.push(kids.clone());
        interned.insert(kids, id);
        id
    }
}

/// Exact `|X + Y|` via digit automata in the given base.
///
/// Both sets are translated to start at 0 first; the size of a sumset is
/// translation invariant.
pub fn sumset_size_by_digits(x: &IntSet, y: &IntSet, base: u64) -> Result<u128> {
    x.require_nonempty()?;
    y.require_nonempty()?;
    if base < 2 {
        return Err(Error::InvalidParameters("digit base must be at least 2"));
    }
    let xs: Vec<u64> = x.iter().map(|v| v.abs_diff(x.min().unwrap())).collect();
    let ys: Vec<u64> = y.iter().map(|v| v.abs_diff(y.min().unwrap())).collect();
    let top = xs[xs.len() - 1].max(ys[ys.len() - 1]) as u128;
    let mut depth = 0usize;
    let mut reach: u128 = 1;
    while reach <= top {
        reach *= base as u128;
        depth += 1;
    }
    let dx = DigitDag::build(&xs, base, depth);
    let dy = DigitDag::build(&ys, base, depth);
    let mut counter = PathCounter {
        dx: &dx,
        dy: &dy,
        base,
        depth,
        memo: HashMap::new(),
    };
    Ok(counter.count(0, vec![(dx.root, dy.root, 0)]))
}

/// `|p·A + q·A|` via digit automata in base `q`.
pub fn dilated_sumset_size_by_digits(set: &IntSet, p: i64, q: i64) -> Result<u128> {
    let x = crate::set::dilate(set, p)?;
    let y = crate::set::dilate(set, q)?;
    sumset_size_by_digits(&x, &y, q.max(2) as u64)
}

type Triple = (NodeId, NodeId, u8);

struct PathCounter<'a> {
    dx: &'a DigitDag,
    dy: &'a DigitDag,
    base: u64,
    depth: usize,
    memo: HashMap<(usize, Vec<Triple>), u128>,
}

impl PathCounter<'_> {
    fn count(&mut self, level: usize, state: Vec<Triple>) -> u128 {
        if level == self.depth {
            // Every triple sits at the leaves; the final carry is the top digit.
            let has0 = state.iter().any(|t| t.2 == 0);
            let has1 = state.iter().any(|t| t.2 == 1);
            return has0 as u128 + has1 as u128;
        }
        let key = (level, state);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let mut next: Vec<Vec<Triple>> = vec![Vec::new(); self.base as usize];
        for &(nx, ny, carry) in &key.1 {
            for &(digit_x, cx) in &self.dx.children[nx as usize] {
                for &(digit_y, cy) in &self.dy.children[ny as usize] {
                    let s = digit_x + digit_y + carry as u64;
                    next[(s % self.base) as usize].push((cx, cy, (s / self.base) as u8));
                }
            }
        }
        let mut total = 0u128;
        for mut bucket in next {
            if bucket.is_empty() {
                continue;
            }
            bucket.sort_unstable();
            bucket.dedup();
            total += self.count(level + 1, bucket);
        }
        self.memo.insert(key, total);
        total
    }
}
