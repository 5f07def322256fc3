//! The `qpw` command-line tool and its HTTP service.
//!
//! Commands produce JSON documents through one serializer, so the CLI and
//! the service emit byte-identical output for the same input.

pub mod commands;
pub mod server;
pub mod session;

pub const DEFAULT_JACOBIAN_TRUNCATION: usize = 10;
