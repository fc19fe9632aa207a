//! Exact lower and upper bounds on `|p·A + q·A|`.
//!
//! Constants grow like `(pq)^{(p+q)^2}`, so everything here is evaluated with
//! arbitrary-precision integers and compared as exact rationals.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;

use crate::residue::{partition, ResiduePartition};
use crate::set::dilated_sumset_size;
use crate::{DilationPair, Error, IntSet, Result};

/// `(pq)^{(p+q-3)(p+q)+1}`, the additive constant of the main bound.
pub fn main_constant(pair: DilationPair) -> BigUint {
    let s = pair.sum() as u32;
    BigUint::from(pair.product() as u64).pow((s - 3) * s + 1)
}

/// `C_m = (pq)^{m + 1 - 3(p+q)}` for `3(p+q) <= m`.
pub fn family_constant(pair: DilationPair, m: u64) -> Result<BigUint> {
    let floor = 3 * pair.sum() as u64;
    if m < floor {
        return Err(Error::InvalidParameters("family index below 3(p+q)"));
    }
    Ok(BigUint::from(pair.product() as u64).pow((m + 1 - floor) as u32))
}

/// Range of family indices `3(p+q) ..= (p+q)^2`.
pub fn family_range(pair: DilationPair) -> core::ops::RangeInclusive<u64> {
    let s = pair.sum() as u64;
    3 * s..=s * s
}

/// One member `m·n/(p+q) - C_m` of the interpolating family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyBound {
    pub m: u64,
    pub constant: BigUint,
    pub value: BigRational,
}

/// Every bound that applies to sets of a given size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub pair: DilationPair,
    pub n: u64,
    /// `3n - 2`.
    pub base: i64,
    /// `4n - 4`, only for `(p, q) = (1, 3)`.
    pub q3: Option<i64>,
    /// `(r + s)n - rs`, only when the residue class counts are known.
    pub fd: Option<i64>,
    pub prop: Vec<FamilyBound>,
    pub main_constant: BigUint,
    /// `(p + q)n - main_constant`.
    pub main: BigInt,
    /// `(p + q)n - (p + q - 1)`, an upper bound for arithmetic progressions.
    pub interval_upper: i64,
}

impl BoundSet {
    /// All lower bounds as `(name, value)` pairs, in a fixed order.
    pub fn lower_bounds(&self) -> Vec<(String, BigRational)> {
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mut out = Vec::with_capacity(self.prop.len() + 4);
        out.push((String::from("base"), int(self.base)));
        if let Some(v) = self.q3 {
            out.push((String::from("q3"), int(v)));
        }
        if let Some(v) = self.fd {
            out.push((String::from("fd"), int(v)));
        }
        for f in &self.prop {
            out.push((format!("prop[m={}]", f.m), f.value.clone()));
        }
        out.push((String::from("main"), BigRational::from_integer(self.main.clone())));
        out
    }
}

/// Evaluates every bound for `n`-element sets; `fd` needs a partition.
pub fn theoretical_bounds(pair: DilationPair, n: u64, partition: Option<&ResiduePartition>) -> Result<BoundSet> {
    if n == 0 {
        return Err(Error::InvalidParameters("bounds need n >= 1"));
    }
    let ni = i64::try_from(n).map_err(|_| Error::Overflow)?;
    let s = pair.sum();
    let checked = |v: Option<i64>| v.ok_or(Error::Overflow);

    let base = checked(ni.checked_mul(3).and_then(|v| v.checked_sub(2)))?;
    let q3 = if (pair.p(), pair.q()) == (1, 3) {
        Some(checked(ni.checked_mul(4).and_then(|v| v.checked_sub(4)))?)
    } else {
        None
    };
    let fd = match partition {
        Some(part) => {
            let (r, s) = (part.r() as i64, part.s() as i64);
            Some(checked((r + s).checked_mul(ni).and_then(|v| v.checked_sub(r * s)))?)
        }
        None => None,
    };
    let interval_upper = checked(s.checked_mul(ni).map(|v| v - (s - 1)))?;

    let denom = BigInt::from(s);
    let prop = family_range(pair)
        .map(|m| {
            let constant = family_constant(pair, m)?;
            let numer = BigInt::from(m) * BigInt::from(n) - &denom * BigInt::from(constant.clone());
            Ok(FamilyBound {
                m,
                constant,
                value: BigRational::new(numer, denom.clone()),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let main_constant = main_constant(pair);
    let main = BigInt::from(s) * BigInt::from(n) - BigInt::from(main_constant.clone());

    Ok(BoundSet {
        pair,
        n,
        base,
        q3,
        fd,
        prop,
        main_constant,
        main,
        interval_upper,
    })
}

/// The strongest lower bound valid for every `n`-element set, as an integer
/// (rational bounds are rounded up, since sumset sizes are integers).
///
/// Ties go to the earliest bound in [`BoundSet::lower_bounds`] order.
pub fn best_lower_bound(pair: DilationPair, n: u64) -> Result<(String, BigInt)> {
    let bounds = theoretical_bounds(pair, n, None)?;
    let mut best: Option<(String, BigInt)> = None;
    for (name, value) in bounds.lower_bounds() {
        let ceil = value.ceil().to_integer();
        if best.as_ref().map_or(true, |(_, b)| ceil > *b) {
            best = Some((name, ceil));
        }
    }
    Ok(best.expect("base bound is always present"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub name: String,
    pub bound: BigRational,
    /// `actual - bound` for lower bounds, `bound - actual` for the upper bound.
    pub slack: BigRational,
    pub upper: bool,
}

impl BoundCheck {
    pub fn violated(&self) -> bool {
        self.slack < BigRational::zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub pair: DilationPair,
    pub n: u64,
    pub actual: u64,
    pub bounds: BoundSet,
    /// Whether `A` is an arithmetic progression, the only case where the
    /// interval upper bound is checked.
    pub arithmetic_progression: bool,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| c.violated())
    }

    pub fn has_violations(&self) -> bool {
        self.violations().next().is_some()
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Equal gaps throughout; sets of size one or two qualify.
pub fn is_arithmetic_progression(set: &IntSet) -> bool {
    let v = set.as_slice();
    v.len() <= 2 || v.windows(2).all(|w| w[1] - w[0] == v[1] - v[0])
}

/// Computes `|p·A + q·A|` and compares it against every applicable bound.
pub fn verify_bounds(set: &IntSet, pair: DilationPair) -> Result<BoundReport> {
    set.require_nonempty()?;
    let actual = dilated_sumset_size(set, pair)? as u64;
    let part = partition(set, pair)?;
    let bounds = theoretical_bounds(pair, set.len() as u64, Some(&part))?;
    let actual_q = BigRational::from_integer(BigInt::from(actual));

    let mut checks: Vec<BoundCheck> = bounds
        .lower_bounds()
        .into_iter()
        .map(|(name, bound)| BoundCheck {
            slack: &actual_q - &bound,
            name,
            bound,
            upper: false,
        })
        .collect();
    let arithmetic_progression = is_arithmetic_progression(set);
    if arithmetic_progression {
        let bound = BigRational::from_integer(BigInt::from(bounds.interval_upper));
        checks.push(BoundCheck {
            name: String::from("interval_upper"),
            slack: &bound - &actual_q,
            bound,
            upper: true,
        });
    }
    Ok(BoundReport {
        pair,
        n: set.len() as u64,
        actual,
        bounds,
        arithmetic_progression,
        checks,
    })
}

/// `C_{m+1} / C_m` across the family; always `pq`.
pub fn family_ratios(pair: DilationPair) -> Result<Vec<BigRational>> {
    let consts = family_range(pair)
        .map(|m| family_constant(pair, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(consts
        .windows(2)
        .map(|w| BigRational::new(BigInt::from(w[1].clone()), BigInt::from(w[0].clone())))
        .collect())
}

/// `true` iff `value` is an integer.
pub fn is_integral(value: &BigRational) -> bool {
    value.is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(p: i64, q: i64) -> DilationPair {
        DilationPair::new(p, q).unwrap()
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn main_constant_examples() {
        assert_eq!(main_constant(pair(1, 2)), BigUint::from(2u32));
        assert_eq!(main_constant(pair(1, 3)), BigUint::from(243u32));
        assert_eq!(main_constant(pair(2, 3)), BigUint::from(362_797_056u64));
        // 10^29 does not fit in 64 bits.
        assert_eq!(main_constant(pair(2, 5)), BigUint::from(10u32).pow(29));
    }

    #[test]
    fn bounds_for_one_two() {
        let b = theoretical_bounds(pair(1, 2), 10, None).unwrap();
        assert_eq!(b.base, 28);
        assert_eq!(b.main, BigInt::from(28));
        assert_eq!(b.interval_upper, 28);
        assert_eq!(b.q3, None);
        assert_eq!(b.fd, None);
        // 3(p+q) = (p+q)^2 = 9: a single family member equal to main.
        assert_eq!(b.prop.len(), 1);
        assert_eq!(b.prop[0].value, rat(28));
    }

    #[test]
    fn bounds_for_one_three() {
        let b = theoretical_bounds(pair(1, 3), 4, None).unwrap();
        assert_eq!(b.base, 10);
        assert_eq!(b.q3, Some(12));
        assert_eq!(b.main, BigInt::from(-227));
        let ms: Vec<u64> = b.prop.iter().map(|f| f.m).collect();
        assert_eq!(ms, [12, 13, 14, 15, 16]);
        assert_eq!(b.prop[0].value, rat(9));
        assert_eq!(b.prop[0].constant, BigUint::from(3u32));
        assert_eq!(b.prop.last().unwrap().value, rat(-227));
    }

    #[test]
    fn family_end_matches_main() {
        for pq in DilationPair::all_with_sum_at_most(12) {
            for n in [1, 7, 1000] {
                let b = theoretical_bounds(pq, n, None).unwrap();
                let last = b.prop.last().unwrap();
                assert_eq!(last.m, (pq.sum() * pq.sum()) as u64);
                assert_eq!(last.value, BigRational::from_integer(b.main.clone()));
                assert_eq!(last.constant, b.main_constant);
            }
            let pqv = BigRational::from_integer(BigInt::from(pq.product()));
            assert!(family_ratios(pq).unwrap().iter().all(|r| *r == pqv));
        }
    }

    #[test]
    fn family_constant_domain() {
        assert!(family_constant(pair(1, 3), 11).is_err());
        assert_eq!(family_constant(pair(1, 3), 12).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn fd_bound_from_partition() {
        let a = IntSet::new(alloc::vec![0, 1, 2, 3]).unwrap();
        let part = partition(&a, pair(2, 3)).unwrap();
        let b = theoretical_bounds(pair(2, 3), 4, Some(&part)).unwrap();
        // r = 2, s = 3.
        assert_eq!(b.fd, Some(5 * 4 - 6));
    }

    #[test]
    fn verify_examples() {
        let r = verify_bounds(&IntSet::new(alloc::vec![0, 1]).unwrap(), pair(1, 2)).unwrap();
        assert_eq!(r.actual, 4);
        assert_eq!(r.check("base").unwrap().slack, rat(0));
        assert!(!r.has_violations());

        let r = verify_bounds(&IntSet::new(alloc::vec![0, 1, 3, 4]).unwrap(), pair(1, 3)).unwrap();
        assert_eq!(r.actual, 12);
        assert_eq!(r.check("q3").unwrap().bound, rat(12));
        assert_eq!(r.check("q3").unwrap().slack, rat(0));
        assert!(!r.arithmetic_progression);
        assert!(r.check("interval_upper").is_none());
        assert!(!r.has_violations());
    }

    #[test]
    fn intervals_attain_upper_for_one_two() {
        for k in 1..=50usize {
            let a = IntSet::range(0, k).unwrap();
            let r = verify_bounds(&a, pair(1, 2)).unwrap();
            assert_eq!(r.actual, 3 * k as u64 - 2);
            assert_eq!(r.bounds.interval_upper, 3 * k as i64 - 2);
            assert_eq!(r.check("interval_upper").unwrap().slack, rat(0));
        }
    }

    #[test]
    fn best_bound_names() {
        assert_eq!(
            best_lower_bound(pair(1, 2), 3).unwrap(),
            (String::from("base"), BigInt::from(7))
        );
        assert_eq!(
            best_lower_bound(pair(1, 3), 4).unwrap(),
            (String::from("q3"), BigInt::from(12))
        );
        assert_eq!(
            best_lower_bound(pair(2, 3), 2).unwrap(),
            (String::from("base"), BigInt::from(4))
        );
    }

    #[test]
    fn rational_family_is_not_floored() {
        // (1, 4), n = 3, m = 15: 15·3/5 - 4 = 5, m = 16: 48/5 - 16 = -32/5.
        let b = theoretical_bounds(pair(1, 4), 3, None).unwrap();
        assert_eq!(b.prop[0].value, rat(5));
        assert_eq!(b.prop[1].value, BigRational::new(BigInt::from(-32), BigInt::from(5)));
        assert!(!is_integral(&b.prop[1].value));
    }
}
