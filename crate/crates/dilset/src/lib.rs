//! Standard-library front end for `dilset-core`: set input formats, JSON and
//! CSV reports, multi-threaded search, benchmarks and the `dilset` command.

pub mod bench;
pub mod cli;
pub mod input;
pub mod parallel;
pub mod report;
