//! File formats, fuzzing, benchmarking and the `linematch` command line on
//! top of [`linematch_core`].

pub mod bench;
pub mod cli;
pub mod format;
pub mod fuzz;
