//! Command-line front end: cone files, certificate reports, the example
//! reproduction harness and the randomized search.

pub mod commands;
pub mod error;
pub mod format;
pub mod model;
pub mod paper;
pub mod report;
pub mod search;
