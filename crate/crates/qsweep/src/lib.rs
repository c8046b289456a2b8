//! Library behind the `qsweep` binary: config parsing, sweep runners and
//! output rendering, exposed separately so they can be driven by tests and
//! fuzzing.

pub mod config;
pub mod record;
pub mod run;
