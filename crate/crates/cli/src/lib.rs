//! Deterministic command-line front end over the workspace crates.
//!
//! Exit codes: 0 the property holds (or the construction succeeded in its
//! claimed mode), 1 it fails and a certificate with a witness is printed,
//! 2 invalid input, 3 a cap was exceeded.

pub mod cert;
pub mod checks;
mod commands;
pub mod format;
mod replay;

pub use cert::{parse_certificate, CertError, Certificate, Verdict};
pub use commands::{run_command, run_command_with_inputs, Outcome, DEFAULT_MAX_VERTICES, DEFAULT_NODE_CAP};
pub use format::{
    parse_structure_file, serialize_structure, serialize_structure_file, structure_to_file, ParseError, Section,
    StructureFile,
};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAP: i32 = 3;
