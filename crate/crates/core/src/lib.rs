//! Exact arithmetic for dilated sumsets `p·A + q·A` of finite integer sets.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! * [`set`]: the [`IntSet`] carrier, dilations, translations, sumsets with
//!   interchangeable backends and affine canonical forms.
//! * [`digits`]: a base-`b` digit automaton that counts `|X + Y|` without
//!   materialising the sumset, for large structured sets.
//! * [`residue`]: residue-class partitions modulo `p`, `q` and `pq`, the gcd
//!   reduction to reduced form and checkers for the two class/cell dichotomies.
//! * [`bounds`]: exact evaluation of every lower and upper bound on
//!   `|p·A + q·A|` and verification of a concrete set against them.
//! * [`constructions`]: intervals, strided blocks and base-`q` digit sets with
//!   their predicted sumset sizes.
//! * [`search`]: canonical enumeration of `n`-element sets and exhaustive,
//!   shardable minimisation of `|p·A + q·A|` with certification.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod bounds;
pub mod constructions;
pub mod digits;
mod error;
pub mod residue;
pub mod search;
pub mod set;

pub use error::{Error, Result};
pub use set::{AffineMap, Backend, DilationPair, IntSet};
