//! Text formats, law suites and reports for `sketchy-core`.

pub mod doc;
pub mod syntax;
pub mod gen;
pub mod report;
pub mod suites;
