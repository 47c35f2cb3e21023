//! Library side of the `weyl-certify` command line tool: subcommand
//! implementations, the independent brute-force oracle used for
//! cross-checking, and the acceptance campaign that exercises the whole
//! stack end to end.

pub mod acceptance;
pub mod commands;
pub mod oracle;

/// Process exit codes shared by every subcommand: success/certified, a
/// refuted claim or violated invariant, and inconclusive results or bad
/// input respectively.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    Violated,
    Inconclusive,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Violated => 1,
            Outcome::Inconclusive => 2,
        }
    }
}
