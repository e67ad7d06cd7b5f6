//! Command-line front end: argument definitions, input loading and reports.

pub mod args;
pub mod error;
pub mod load;
pub mod report;
