//! Library surface of the CLI crate: the matrix file format, shared with the
//! binary and its tests.

pub mod io;
