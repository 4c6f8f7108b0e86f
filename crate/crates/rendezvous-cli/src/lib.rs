//! Harness library behind the `rendezvous` binary: instance file I/O, the
//! seeded verification suites with their acceptance criteria, and the
//! deterministic benchmark table.

pub mod bench;
pub mod io;
pub mod suite;
