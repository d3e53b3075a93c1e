//! Command-line front end for `nonstd-core`: argument handling, JSON and
//! text reports, CSV export and the cross-checking suite.

pub mod cli;
pub mod corpus;
pub mod export;
pub mod report;
pub mod xcheck;
