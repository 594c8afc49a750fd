//! Library surface of the `polylip` command-line tool: instance-file
//! parsing, query execution, report emission, and 2-D plotting. The
//! binary in `main.rs` is a thin argument-handling shell over these.

pub mod instance;
pub mod plot;
pub mod queries;
pub mod report;
