//! Library surface of the CLI crate: the output envelope types, exposed so
//! integration tests (and downstream tooling) can parse command output.

pub mod envelope;
