//! File formats and batch sweeps on top of `hypermatch-core`.

pub mod io;
pub mod sweep;
