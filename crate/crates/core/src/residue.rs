//! Residue-class structure of a set relative to a dilation pair `(p, q)`.
//!
//! A set splits into classes `P_i = p_i + p·P_i'` modulo `p`, classes
//! `Q_j = q_j + q·Q_j'` modulo `q`, and cells `A_ij = P_i ∩ Q_j`, each of which
//! is a single class `a_ij + pq·A_ij'` modulo `pq`. Because `p` and `q` are
//! coprime the images `p·Q_j + q·P_i` are pairwise disjoint and tile
//! `p·A + q·A`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::set::{linear_sumset, AffineMap};
use crate::{DilationPair, Error, IntSet, Result};

/// Which modulus of the pair a class or reduction step refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    P,
    Q,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::P => "p",
            Side::Q => "q",
        }
    }
}

/// One residue class: `set = residue + modulus·quotient`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub residue: i64,
    pub set: IntSet,
    pub quotient: IntSet,
}

/// `A_ij = offset + pq·quotient`; `set` and `quotient` may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub offset: i64,
    pub set: IntSet,
    pub quotient: IntSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePartition {
    pub pair: DilationPair,
    pub p_classes: Vec<ResidueClass>,
    pub q_classes: Vec<ResidueClass>,
    /// `cells[i][j] = P_i ∩ Q_j`, an `r × s` grid.
    pub cells: Vec<Vec<Cell>>,
}

impl ResiduePartition {
    /// Number of occupied classes modulo `p`.
    pub fn r(&self) -> usize {
        self.p_classes.len()
    }

    /// Number of occupied classes modulo `q`.
    pub fn s(&self) -> usize {
        self.q_classes.len()
    }

    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i][j]
    }

    /// `p·Q_j + q·P_i`.
    pub fn cell_image(&self, i: usize, j: usize) -> Result<IntSet> {
        linear_sumset(
            &self.q_classes[j].set,
            self.pair.p(),
            &self.p_classes[i].set,
            self.pair.q(),
        )
    }
}

fn classes(set: &IntSet, modulus: i64) -> Vec<ResidueClass> {
    let mut groups: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for a in set {
        groups.entry(a.rem_euclid(modulus)).or_default().push(a);
    }
    groups
        .into_iter()
        .map(|(residue, members)| {
            let quotient = members.iter().map(|a| (a - residue) / modulus).collect();
            ResidueClass {
                residue,
                set: IntSet::new(members).expect("subsequence of a sorted set"),
                quotient: IntSet::new(quotient).expect("monotone image"),
            }
        })
        .collect()
}

/// The unique `x` in `[0, p·q)` with `x ≡ rp (mod p)` and `x ≡ rq (mod q)`.
pub fn crt(rp: i64, p: i64, rq: i64, q: i64) -> i64 {
    let ext = p.extended_gcd(&q);
    debug_assert_eq!(ext.gcd, 1);
    let m = p * q;
    // x = rp + p·k with p·k ≡ rq - rp (mod q), k = (rq - rp)·p⁻¹.
    let inv = ext.x.rem_euclid(q) as i128;
    let k = ((rq - rp) as i128 * inv).rem_euclid(q as i128);
    (rp as i128 + p as i128 * k).rem_euclid(m as i128) as i64
}

/// Splits `A` into classes modulo `p`, `q` and cells modulo `pq`.
pub fn partition(set: &IntSet, pair: DilationPair) -> Result<ResiduePartition> {
    set.require_nonempty()?;
    let (p, q) = (pair.p(), pair.q());
    let pq = pair.product();
    let p_classes = classes(set, p);
    let q_classes = classes(set, q);
    let cells = p_classes
        .iter()
        .map(|pc| {
            q_classes
                .iter()
                .map(|qc| {
                    let offset = crt(pc.residue, p, qc.residue, q);
                    let members: Vec<i64> = pc.set.iter().filter(|a| a.rem_euclid(q) == qc.residue).collect();
                    let quotient = members.iter().map(|a| (a - offset) / pq).collect();
                    Cell {
                        offset,
                        set: IntSet::new(members).expect("subsequence of a sorted set"),
                        quotient: IntSet::new(quotient).expect("monotone image"),
                    }
                })
                .collect()
        })
        .collect();
    Ok(ResiduePartition {
        pair,
        p_classes,
        q_classes,
        cells,
    })
}

/// Whether `A` meets every residue class modulo `m`.
///
/// # Panics
/// If `m < 1`.
pub fn is_fully_distributed(set: &IntSet, m: i64) -> bool {
    assert!(m >= 1, "modulus must be positive");
    if (set.len() as u64) < m as u64 {
        return false;
    }
    let mut seen = alloc::vec![false; m as usize];
    let mut hits = 0;
    for a in set {
        let r = a.rem_euclid(m) as usize;
        if !seen[r] {
            seen[r] = true;
            hits += 1;
        }
    }
    hits == m
}

/// `(residue, d)` per occupied class, where `d` is the gcd of the modulus and
/// all differences between occupied residues and this one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionDivisors {
    pub p_side: Vec<(i64, i64)>,
    pub q_side: Vec<(i64, i64)>,
}

impl ReductionDivisors {
    pub fn all_one(&self) -> bool {
        self.p_side.iter().chain(&self.q_side).all(|&(_, d)| d == 1)
    }
}

fn side_divisors(set: &IntSet, modulus: i64) -> Vec<(i64, i64)> {
    let mut residues: Vec<i64> = set.iter().map(|a| a.rem_euclid(modulus)).collect();
    residues.sort_unstable();
    residues.dedup();
    residues
        .iter()
        .map(|&ri| {
            let d = residues.iter().fold(modulus, |g, &rk| g.gcd(&(rk - ri)));
            (ri, d)
        })
        .collect()
}

pub fn reduction_divisors(set: &IntSet, pair: DilationPair) -> Result<ReductionDivisors> {
    set.require_nonempty()?;
    Ok(ReductionDivisors {
        p_side: side_divisors(set, pair.p()),
        q_side: side_divisors(set, pair.q()),
    })
}

/// A set is reduced when every divisor is 1. Singletons count as reduced.
pub fn is_reduced(set: &IntSet, pair: DilationPair) -> bool {
    if set.len() <= 1 {
        return true;
    }
    reduction_divisors(set, pair).map(|d| d.all_one()).unwrap_or(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub side: Side,
    pub residue: i64,
    pub divisor: i64,
    /// `max - min` of the set this step was applied to.
    pub span_before: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub final_set: IntSet,
}

/// Repeatedly replaces `A` by `(A - c)/d` while some class divisor `d` exceeds 1.
///
/// The `q` side is tried before the `p` side, and within a side the smallest
/// residue goes first. Each step is an affine map, so `|p·A + q·A|` is
/// unchanged, and each strictly shrinks `max - min`.
pub fn reduce(set: &IntSet, pair: DilationPair) -> Result<(IntSet, ReductionTrace)> {
    set.require_nonempty()?;
    if set.len() == 1 {
        let zero = IntSet::singleton(0);
        return Ok((
            zero.clone(),
            ReductionTrace {
                steps: Vec::new(),
                final_set: zero,
            },
        ));
    }
    let mut current = set.clone();
    let mut steps = Vec::new();
    loop {
        let divisors = reduction_divisors(&current, pair)?;
        let pick = divisors
            .q_side
            .iter()
            .find(|&&(_, d)| d > 1)
            .map(|&(r, d)| (Side::Q, r, d))
            .or_else(|| {
                divisors
                    .p_side
                    .iter()
                    .find(|&&(_, d)| d > 1)
                    .map(|&(r, d)| (Side::P, r, d))
            });
        let Some((side, residue, divisor)) = pick else {
            break;
        };
        steps.push(ReductionStep {
            side,
            residue,
            divisor,
            span_before: current.span(),
        });
        current = AffineMap::new(residue, divisor)?.apply(&current)?;
    }
    Ok((
        current.clone(),
        ReductionTrace {
            steps,
            final_set: current,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    /// Class form: either `Q_j'` is FD mod `q` or
    /// `|p·Q_j + q·A| >= |p·Q_j + q·Q_j| + min_m |Q_m|` (and the `P` mirror).
    ClassGrowth,
    /// Cell form: under `P_i'` FD mod `p`, either `A_ij'` is FD mod `p` or
    /// `|p·Q_j + q·P_i| >= |p·A_ij + q·A_ij| + |A_ij|` (and the `Q` mirror).
    CellGrowth,
}

impl Lemma {
    pub fn name(self) -> &'static str {
        match self {
            Lemma::ClassGrowth => "class_growth",
            Lemma::CellGrowth => "cell_growth",
        }
    }
}

/// One evaluated instance of a dichotomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyRecord {
    /// Which modulus the FD branch is taken over.
    pub side: Side,
    /// Class index for [`Lemma::ClassGrowth`]; `P` index for cells.
    pub i: usize,
    /// `Q` index for cells, `None` for class records.
    pub j: Option<usize>,
    pub hypothesis_holds: bool,
    pub trivially_satisfied: bool,
    pub fd_holds: bool,
    pub inequality_holds: bool,
    pub lhs: usize,
    pub rhs: usize,
}

impl DichotomyRecord {
    /// At least one branch holds, or the record is vacuous.
    pub fn satisfied(&self) -> bool {
        self.trivially_satisfied || !self.hypothesis_holds || self.fd_holds || self.inequality_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DichotomyReport {
    pub lemma: Lemma,
    /// False when the input was not reduced, so the lemma does not apply.
    pub reliable: bool,
    pub records: Vec<DichotomyRecord>,
}

impl DichotomyReport {
    pub fn failures(&self) -> impl Iterator<Item = &DichotomyRecord> {
        self.records.iter().filter(|r| !r.satisfied())
    }

    pub fn all_satisfied(&self) -> bool {
        self.failures().next().is_none()
    }
}

fn require_two(set: &IntSet) -> Result<()> {
    match set.len() {
        0 => Err(Error::EmptySet),
        1 => Err(Error::InvalidParameters("dichotomy checks need at least two elements")),
        _ => Ok(()),
    }
}

/// Evaluates both branches of the class-growth dichotomy for every class on
/// both sides.
pub fn check_dichotomy_dist1(set: &IntSet, pair: DilationPair) -> Result<DichotomyReport> {
    require_two(set)?;
    let (p, q) = (pair.p(), pair.q());
    let part = partition(set, pair)?;
    let mut records = Vec::new();

    let min_q = part.q_classes.iter().map(|c| c.set.len()).min().unwrap();
    for (j, qc) in part.q_classes.iter().enumerate() {
        let lhs = linear_sumset(&qc.set, p, set, q)?.len();
        let rhs = linear_sumset(&qc.set, p, &qc.set, q)?.len() + min_q;
        records.push(DichotomyRecord {
            side: Side::Q,
            i: j,
            j: None,
            hypothesis_holds: true,
            trivially_satisfied: false,
            fd_holds: is_fully_distributed(&qc.quotient, q),
            inequality_holds: lhs >= rhs,
            lhs,
            rhs,
        });
    }

    let min_p = part.p_classes.iter().map(|c| c.set.len()).min().unwrap();
    for (i, pc) in part.p_classes.iter().enumerate() {
        let lhs = linear_sumset(set, p, &pc.set, q)?.len();
        let rhs = linear_sumset(&pc.set, p, &pc.set, q)?.len() + min_p;
        records.push(DichotomyRecord {
            side: Side::P,
            i,
            j: None,
            hypothesis_holds: true,
            trivially_satisfied: false,
            fd_holds: is_fully_distributed(&pc.quotient, p),
            inequality_holds: lhs >= rhs,
            lhs,
            rhs,
        });
    }

    Ok(DichotomyReport {
        lemma: Lemma::ClassGrowth,
        reliable: is_reduced(set, pair),
        records,
    })
}

/// Evaluates both forms of the cell-growth dichotomy for every cell.
///
/// Records for empty cells are marked trivially satisfied; records whose
/// hypothesis fails are still evaluated but carry `hypothesis_holds = false`.
pub fn check_dichotomy_dist2(set: &IntSet, pair: DilationPair) -> Result<DichotomyReport> {
    require_two(set)?;
    let (p, q) = (pair.p(), pair.q());
    let part = partition(set, pair)?;
    let mut records = Vec::new();
    for (i, pc) in part.p_classes.iter().enumerate() {
        let p_fd = is_fully_distributed(&pc.quotient, p);
        for (j, qc) in part.q_classes.iter().enumerate() {
            let q_fd = is_fully_distributed(&qc.quotient, q);
            let cell = part.cell(i, j);
            for (side, hypothesis, modulus) in [(Side::P, p_fd, p), (Side::Q, q_fd, q)] {
                let record = if cell.set.is_empty() {
                    DichotomyRecord {
                        side,
                        i,
                        j: Some(j),
                        hypothesis_holds: hypothesis,
                        trivially_satisfied: true,
                        fd_holds: false,
                        inequality_holds: true,
                        lhs: 0,
                        rhs: 0,
                    }
                } else {
                    let lhs = part.cell_image(i, j)?.len();
                    let rhs = linear_sumset(&cell.set, p, &cell.set, q)?.len() + cell.set.len();
                    DichotomyRecord {
                        side,
                        i,
                        j: Some(j),
                        hypothesis_holds: hypothesis,
                        trivially_satisfied: false,
                        fd_holds: is_fully_distributed(&cell.quotient, modulus),
                        inequality_holds: lhs >= rhs,
                        lhs,
                        rhs,
                    }
                };
                records.push(record);
            }
        }
    }
    Ok(DichotomyReport {
        lemma: Lemma::CellGrowth,
        reliable: is_reduced(set, pair),
        records,
    })
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
    fn partition_mod_three() {
        let part = partition(&set(&[0, 1, 3, 4]), pair(1, 3)).unwrap();
        assert_eq!((part.r(), part.s()), (1, 2));
        assert_eq!(part.q_classes[0].residue, 0);
        assert_eq!(part.q_classes[0].set, set(&[0, 3]));
        assert_eq!(part.q_classes[0].quotient, set(&[0, 1]));
        assert_eq!(part.q_classes[1].residue, 1);
        assert_eq!(part.q_classes[1].set, set(&[1, 4]));
        assert_eq!(part.q_classes[1].quotient, set(&[0, 1]));
    }

    #[test]
    fn partition_two_three() {
        let part = partition(&set(&[0, 1, 2, 3]), pair(2, 3)).unwrap();
        assert_eq!(part.r(), 2);
        assert_eq!(part.p_classes[0].set, set(&[0, 2]));
        assert_eq!(part.p_classes[1].set, set(&[1, 3]));
        assert_eq!(part.s(), 3);
        assert_eq!(part.q_classes[0].set, set(&[0, 3]));
        assert_eq!(part.q_classes[1].set, set(&[1]));
        assert_eq!(part.q_classes[2].set, set(&[2]));
        assert_eq!(part.cell(0, 0).set, set(&[0]));
        assert_eq!(part.cell(0, 0).offset, 0);
        // P_0 ∩ Q_1 = {0, 2} ∩ {1} is empty but still has its CRT offset 4.
        assert!(part.cell(0, 1).set.is_empty());
        assert_eq!(part.cell(0, 1).offset, 4);
        let total: usize = part.cells.iter().flatten().map(|c| c.set.len()).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn partition_singleton_and_negative() {
        let part = partition(&set(&[0]), pair(2, 5)).unwrap();
        assert_eq!((part.r(), part.s()), (1, 1));
        assert_eq!(part.cell(0, 0).set, set(&[0]));

        let part = partition(&set(&[-7, -1, 4]), pair(2, 3)).unwrap();
        for row in &part.cells {
            for c in row {
                for a in &c.set {
                    assert_eq!(a, c.offset + 6 * ((a - c.offset) / 6));
                    assert_eq!((a - c.offset).rem_euclid(6), 0);
                }
            }
        }
        assert!(partition(&IntSet::default(), pair(1, 2)).is_err());
    }

    #[test]
    fn crt_offsets() {
        for p in 1..6 {
            for q in (p + 1)..9 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                for rp in 0..p {
                    for rq in 0..q {
                        let x = crt(rp, p, rq, q);
                        assert!((0..p * q).contains(&x));
                        assert_eq!(x % p, rp);
                        assert_eq!(x % q, rq);
                    }
                }
            }
        }
    }

    #[test]
    fn fully_distributed() {
        assert!(is_fully_distributed(&set(&[0, 1, 2]), 3));
        assert!(!is_fully_distributed(&set(&[0, 1, 3, 4]), 3));
        assert!(is_fully_distributed(&set(&[17]), 1));
        assert!(is_fully_distributed(&set(&[-1, 0, 4]), 3));
    }

    #[test]
    fn divisors() {
        let d = reduction_divisors(&set(&[0, 3, 6]), pair(1, 3)).unwrap();
        assert_eq!(d.q_side, [(0, 3)]);
        assert_eq!(d.p_side, [(0, 1)]);
        let d = reduction_divisors(&set(&[0, 1]), pair(1, 3)).unwrap();
        assert!(d.q_side.iter().all(|&(_, d)| d == 1));
        let d = reduction_divisors(&set(&[0, 2, 4, 6]), pair(3, 4)).unwrap();
        // residues mod 4 are {0, 2}: gcd(2, 4) = 2 for both classes.
        assert_eq!(d.q_side, [(0, 2), (2, 2)]);
    }

    #[test]
    fn reduce_examples() {
        let (r, trace) = reduce(&set(&[0, 3, 6]), pair(1, 3)).unwrap();
        assert_eq!(r, set(&[0, 1, 2]));
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(
            trace.steps[0],
            ReductionStep {
                side: Side::Q,
                residue: 0,
                divisor: 3,
                span_before: 6
            }
        );

        let (r, trace) = reduce(&set(&[0, 2, 4]), pair(1, 2)).unwrap();
        assert_eq!(r, set(&[0, 1, 2]));
        assert_eq!((trace.steps[0].side, trace.steps[0].divisor), (Side::Q, 2));

        let (r, trace) = reduce(&set(&[0, 1]), pair(1, 3)).unwrap();
        assert_eq!(r, set(&[0, 1]));
        assert!(trace.steps.is_empty());

        let (r, trace) = reduce(&set(&[9]), pair(1, 3)).unwrap();
        assert_eq!(r, set(&[0]));
        assert!(trace.steps.is_empty());
        assert!(reduce(&IntSet::default(), pair(1, 3)).is_err());
    }

    #[test]
    fn reduce_uses_p_side() {
        // All even, but spread over every class mod 3: only the p side divides.
        let (r, trace) = reduce(&set(&[0, 2, 4]), pair(2, 3)).unwrap();
        assert_eq!(r, set(&[0, 1, 2]));
        assert_eq!(
            trace.steps,
            [ReductionStep {
                side: Side::P,
                residue: 0,
                divisor: 2,
                span_before: 4
            }]
        );
    }

    #[test]
    fn reduced_predicate() {
        assert!(is_reduced(&set(&[0, 1]), pair(1, 3)));
        assert!(!is_reduced(&set(&[0, 3, 6]), pair(1, 3)));
        assert!(is_reduced(&set(&[0]), pair(1, 2)));
    }

    #[test]
    fn class_growth_examples() {
        let report = check_dichotomy_dist1(&set(&[0, 1, 3, 4]), pair(1, 3)).unwrap();
        let q0 = &report.records[0];
        assert_eq!((q0.side, q0.i), (Side::Q, 0));
        assert!(!q0.fd_holds);
        assert_eq!((q0.lhs, q0.rhs), (6, 6));
        assert!(q0.inequality_holds);
        assert!(report.all_satisfied());

        let report = check_dichotomy_dist1(&set(&[0, 1, 2]), pair(1, 3)).unwrap();
        let q0 = &report.records[0];
        assert!(!q0.fd_holds);
        assert_eq!((q0.lhs, q0.rhs), (3, 2));

        let a = IntSet::range(0, 9).unwrap();
        let report = check_dichotomy_dist1(&a, pair(1, 3)).unwrap();
        assert!(report.records.iter().filter(|r| r.side == Side::Q).all(|r| r.fd_holds));
        assert!(report.reliable);
    }

    #[test]
    fn cell_growth_examples() {
        let a = IntSet::range(0, 6).unwrap();
        let report = check_dichotomy_dist2(&a, pair(2, 3)).unwrap();
        let r = report
            .records
            .iter()
            .find(|r| r.side == Side::P && r.i == 0 && r.j == Some(0))
            .unwrap();
        assert!(r.hypothesis_holds);
        assert!(!r.fd_holds);
        assert_eq!((r.lhs, r.rhs), (4, 2));
        assert!(r.inequality_holds);

        let report = check_dichotomy_dist2(&set(&[0, 1, 5, 11]), pair(1, 4)).unwrap();
        assert!(report
            .records
            .iter()
            .filter(|r| r.side == Side::P && !r.trivially_satisfied)
            .all(|r| r.fd_holds));

        let report = check_dichotomy_dist2(&set(&[0, 1, 2, 3]), pair(2, 3)).unwrap();
        let empty = report.records.iter().find(|r| r.i == 0 && r.j == Some(1)).unwrap();
        assert!(empty.trivially_satisfied && empty.satisfied());
    }

    #[test]
    fn dichotomies_need_two_elements() {
        assert!(check_dichotomy_dist1(&set(&[3]), pair(1, 2)).is_err());
        assert!(check_dichotomy_dist2(&IntSet::default(), pair(1, 2)).is_err());
    }

    #[test]
    fn unreduced_input_is_flagged() {
        let report = check_dichotomy_dist1(&set(&[0, 3, 6]), pair(1, 3)).unwrap();
        assert!(!report.reliable);
    }
}
