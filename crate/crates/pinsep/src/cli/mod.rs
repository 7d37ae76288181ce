//! Command-line surface: input documents, reports, commands, the bundled
//! corpus and the self-test runner.

pub mod commands;
pub mod corpus;
pub mod document;
pub mod report;
pub mod selftest;

pub use commands::{run, Command, Options, HOM_DIM_LIMIT};
pub use document::{DiffOp, InputDocument, Leg, Loaded};
pub use report::{render_text, Payload, Report};
pub use selftest::{selftest, GROUPS};
