//! Exit-code classes.

use std::fmt::Display;

pub const IO: u8 = 2;
pub const DOMAIN: u8 = 3;
pub const USAGE: u8 = 64;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    /// Unreadable or malformed input.
    pub fn io(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: IO,
            error: error.into(),
        }
    }

    /// Valid input on which the request cannot be carried out.
    pub fn domain(error: impl Into<anyhow::Error>) -> Self {
        Failure {
            code: DOMAIN,
            error: error.into(),
        }
    }

    pub fn usage(message: impl Display) -> Self {
        Failure {
            code: USAGE,
            error: anyhow::anyhow!("{message}"),
        }
    }
}
