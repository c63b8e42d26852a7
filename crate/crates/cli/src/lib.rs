//! Network documents, analysis dispatch and report emission for `netchain-core`.

pub mod document;
pub mod error;
pub mod report;
pub mod run;

pub use document::{parse, Command, NetworkDocument, Options};
pub use error::{CliError, Result};
pub use report::{emit, AnalysisReport, Format, Verdict};
pub use run::{report_all, run, run_document};
