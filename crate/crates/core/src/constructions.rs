//! Explicit families with known sumset sizes: intervals, strided blocks and
//! carry-free base-`q` digit sets.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Roots;

use crate::{Error, IntSet, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructionSpec {
    Interval { n: u64 },
    StridedBlock { q: i64, d: i64, n: i64 },
    DigitSet { q: i64, a: i64, t: u32 },
}

/// A generated set together with the sizes its formula predicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub set: IntSet,
    /// Predicted `|A|`.
    pub predicted_size: u128,
    /// Predicted `|A + q·A|`; `None` for intervals, which only have an upper bound.
    pub predicted_sumset: Option<u128>,
}

impl ConstructionSpec {
    pub fn build(self) -> Result<Construction> {
        match self {
            ConstructionSpec::Interval { n } => {
                let set = interval(n)?;
                Ok(Construction {
                    spec: self,
                    predicted_size: n as u128,
                    predicted_sumset: None,
                    set,
                })
            }
            ConstructionSpec::StridedBlock { q, d, n } => {
                let (set, predicted) = strided_block(q, d, n)?;
                Ok(Construction {
                    spec: self,
                    predicted_size: set.len() as u128,
                    predicted_sumset: Some(predicted as u128),
                    set,
                })
            }
            ConstructionSpec::DigitSet { q, a, t } => {
                let d = digit_set(q, a, t)?;
                Ok(Construction {
                    spec: self,
                    set: d.set,
                    predicted_size: d.predicted_size,
                    predicted_sumset: Some(d.predicted_sumset),
                })
            }
        }
    }
}

/// `{1, 2, ..., n}`.
pub fn interval(n: u64) -> Result<IntSet> {
    if n == 0 {
        return Err(Error::InvalidParameters("interval needs n >= 1"));
    }
    IntSet::range(1, n as usize)
}

/// `X = {i + x·q : 0 <= i <= d, 0 <= x < n}` and the predicted
/// `|X + q·X| = (q + 1)|X| - (d + 1)(q - d)`.
pub fn strided_block(q: i64, d: i64, n: i64) -> Result<(IntSet, i64)> {
    if !(0 <= d && d < q && q <= n) {
        return Err(Error::InvalidParameters("strided block needs 0 <= d < q <= n"));
    }
    let size = (d + 1).checked_mul(n).ok_or(Error::Overflow)?;
    let mut elements = Vec::with_capacity(size as usize);
    for x in 0..n {
        let base = x.checked_mul(q).ok_or(Error::Overflow)?;
        elements.extend((0..=d).map(|i| base + i));
    }
    let predicted = (q + 1)
        .checked_mul(size)
        .and_then(|v| v.checked_sub((d + 1) * (q - d)))
        .ok_or(Error::Overflow)?;
    Ok((IntSet::new(elements)?, predicted))
}

/// The block width minimising `|X + q·X| - (q + 1)|X|`.
pub fn optimal_stride_width(q: i64) -> i64 {
    (q - 1) / 2
}

/// `(q + 1)|X| - ⌊(q+1)/2⌋⌈(q+1)/2⌉`, the optimal strided-block sumset size.
pub fn optimal_strided_sumset(q: i64, size: i64) -> i64 {
    (q + 1) * size - ((q + 1) / 2) * ((q + 2) / 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSet {
    pub set: IntSet,
    /// `a^{t+1}`.
    pub predicted_size: u128,
    /// `a²(2a - 1)^t`.
    pub predicted_sumset: u128,
}

/// `{a_0 + a_1 q + ... + a_t q^t : 0 <= a_i < a}`, requiring `1 <= a` and `2a < q`
/// so that `A + q·A` has no carries.
pub fn digit_set(q: i64, a: i64, t: u32) -> Result<DigitSet> {
    if a < 1 {
        return Err(Error::InvalidParameters("digit set needs a >= 1"));
    }
    if 2 * a >= q {
        return Err(Error::InvalidParameters("digit set needs 2a < q"));
    }
    let mut elements = vec![0i64];
    let mut place: i64 = 1;
    for level in 0..=t {
        let mut next = Vec::with_capacity(elements.len() * a as usize);
        for digit in 0..a {
            let shift = digit.checked_mul(place).ok_or(Error::Overflow)?;
            for &e in &elements {
                next.push(e.checked_add(shift).ok_or(Error::Overflow)?);
            }
        }
        elements = next;
        if level < t {
            place = place.checked_mul(q).ok_or(Error::Overflow)?;
        }
    }
    elements.sort_unstable();
    let au = a as u128;
    let predicted_size = au.checked_pow(t + 1).ok_or(Error::Overflow)?;
    let predicted_sumset = (2 * au - 1)
        .checked_pow(t)
        .and_then(|v| v.checked_mul(au * au))
        .ok_or(Error::Overflow)?;
    Ok(DigitSet {
        set: IntSet::new(elements)?,
        predicted_size,
        predicted_sumset,
    })
}

/// `a = ⌊√q⌋` and `t = ⌊log₂ √q⌋`, the parameters that make the additive
/// deficit of a digit set grow faster than any polynomial in `q`.
pub fn digit_params(q: i64) -> Result<(i64, u32)> {
    if q < 2 {
        return Err(Error::InvalidParameters("digit parameters need q >= 2"));
    }
    let a = q.sqrt();
    // ⌊log₂ √q⌋ = ⌊⌊log₂ q⌋ / 2⌋.
    let t = q.ilog2() / 2;
    if 2 * a >= q {
        return Err(Error::InvalidParameters("q too small: ⌊√q⌋ is not below q/2"));
    }
    Ok((a, t))
}

/// One row of the digit-set deficit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitDeficit {
    pub q: i64,
    pub a: i64,
    pub t: u32,
    pub size: u128,
    pub sumset: u128,
    /// `(q + 1)|A| - |A + q·A|` from the exact formulas.
    pub deficit: i128,
}

pub fn digit_deficit(q: i64) -> Result<DigitDeficit> {
    let (a, t) = digit_params(q)?;
    let au = a as u128;
    let size = au.checked_pow(t + 1).ok_or(Error::Overflow)?;
    let sumset = (2 * au - 1)
        .checked_pow(t)
        .and_then(|v| v.checked_mul(au * au))
        .ok_or(Error::Overflow)?;
    let deficit = (q as i128 + 1) * size as i128 - sumset as i128;
    Ok(DigitDeficit {
        q,
        a,
        t,
        size,
        sumset,
        deficit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{dilated_sumset_size, linear_sumset};
    use crate::DilationPair;

    fn set(v: &[i64]) -> IntSet {
        IntSet::new(v.to_vec()).unwrap()
    }

    fn plus_q(x: &IntSet, q: i64) -> usize {
        linear_sumset(x, 1, x, q).unwrap().len()
    }

    #[test]
    fn interval_examples() {
        let x = interval(3).unwrap();
        assert_eq!(x, set(&[1, 2, 3]));
        assert_eq!(dilated_sumset_size(&x, DilationPair::new(1, 2).unwrap()).unwrap(), 7);
        let x = interval(2).unwrap();
        assert_eq!(dilated_sumset_size(&x, DilationPair::new(2, 3).unwrap()).unwrap(), 4);
        assert_eq!(interval(1).unwrap(), set(&[1]));
        assert!(interval(0).is_err());
    }

    #[test]
    fn strided_examples() {
        // n = 2 < q = 3 is outside the formula's range, even though
        // {0, 1, 3, 4} happens to satisfy it.
        assert!(strided_block(3, 1, 2).is_err());
        assert_eq!(plus_q(&set(&[0, 1, 3, 4]), 3), 12);
        // Where n < q the formula can fail: {0, 3} + 3·{0, 3} has 4 elements, not 5.
        assert_eq!(plus_q(&set(&[0, 3]), 3), 4);

        let (x, pred) = strided_block(3, 1, 3).unwrap();
        assert_eq!(x.len(), 6);
        assert_eq!(pred, 20);

        let (x, pred) = strided_block(3, 1, 3).unwrap();
        assert_eq!(x, set(&[0, 1, 3, 4, 6, 7]));
        assert_eq!(pred, 20);
        assert_eq!(plus_q(&x, 3), 20);

        let (x, pred) = strided_block(2, 0, 2).unwrap();
        assert_eq!(x, set(&[0, 2]));
        assert_eq!(pred, 4);
        assert_eq!(plus_q(&x, 2), 4);
    }

    #[test]
    fn strided_rejects_bad_ranges() {
        assert!(strided_block(3, 3, 5).is_err());
        assert!(strided_block(3, -1, 5).is_err());
        assert!(strided_block(4, 1, 3).is_err());
    }

    #[test]
    fn optimal_width_matches_closed_form() {
        for q in 1..=12 {
            let d = optimal_stride_width(q);
            let (x, pred) = strided_block(q, d, 12).unwrap();
            assert_eq!(pred, optimal_strided_sumset(q, x.len() as i64));
            for other in 0..q {
                let (_, p2) = strided_block(q, other, 12).unwrap();
                let size = (other + 1) * 12;
                assert!((q + 1) * size - p2 <= (q + 1) * x.len() as i64 - pred);
            }
        }
    }

    #[test]
    fn digit_examples() {
        let d = digit_set(10, 2, 1).unwrap();
        assert_eq!(d.set, set(&[0, 1, 10, 11]));
        assert_eq!((d.predicted_size, d.predicted_sumset), (4, 12));
        assert_eq!(plus_q(&d.set, 10), 12);

        let d = digit_set(5, 1, 3).unwrap();
        assert_eq!(d.set, set(&[0]));
        assert_eq!((d.predicted_size, d.predicted_sumset), (1, 1));

        let d = digit_set(16, 4, 2).unwrap();
        assert_eq!(d.set.len(), 64);
        assert_eq!((d.predicted_size, d.predicted_sumset), (64, 784));
        assert_eq!(plus_q(&d.set, 16), 784);
    }

    #[test]
    fn digit_rejects_carries() {
        assert!(digit_set(8, 4, 1).is_err());
        assert!(digit_set(8, 0, 1).is_err());
        assert!(digit_set(9, 4, 1).is_ok());
    }

    #[test]
    fn digit_params_follow_sqrt_and_log() {
        assert_eq!(digit_params(16).unwrap(), (4, 2));
        assert_eq!(digit_params(15).unwrap(), (3, 1));
        assert_eq!(digit_params(100).unwrap(), (10, 3));
        assert!(digit_params(4).is_err());
        let row = digit_deficit(16).unwrap();
        assert_eq!(row.deficit, 17 * 64 - 784);
    }
}
