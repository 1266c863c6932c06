//! Command-line front end: problem files in, JSON reports out.

pub mod problem;
pub mod report;
pub mod run;

pub use problem::{Problem, ProblemFile};
pub use report::{Report, Status};
pub use run::run;
