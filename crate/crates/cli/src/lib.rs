//! Library side of the `traceform` command-line tool: polynomial expression
//! parsing, field-table ingestion, the batch scan with its cache, and the
//! built-in reference fixtures.

pub mod cache;
pub mod parse;
pub mod scan;
pub mod table;
pub mod verify;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 2;
    pub const IRREDUCIBILITY_UNDETERMINED: i32 = 3;
    pub const UNDETERMINED: i32 = 4;
    pub const PRECONDITION: i32 = 5;
    pub const FIXTURE_MISMATCH: i32 = 6;
}
