//! Command-line front end for `totalpos`: matrix checks, LCP solving,
//! generators, cross-method comparison and Pólya frequency windows.

pub mod commands;
pub mod report;
