//! Staged reproduction of the computer searches behind the nonexistence of
//! `[[13,5,4]]` stabilizer codes, with JSON certificates.

pub mod certificate;
pub mod check;
pub mod completion;
pub mod error;
pub mod fixtures;
pub mod lines;
pub mod points;
pub mod progress;
pub mod run;
pub mod sampling;
pub mod stages;

pub use certificate::{Certificate, MasterCertificate};
pub use error::{PipelineError, Result};
pub use stages::{run_stage, RunOptions, StageId};
