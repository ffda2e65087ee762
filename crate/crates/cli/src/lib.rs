//! File formats, text parsers, reports and bundled fixtures for the
//! `eqzeta` command line tool. The algebra itself lives in
//! `eqzeta-core`; this crate only moves data in and out of it.

pub mod fixtures;
pub mod io;
pub mod report;
pub mod text;
