//! Medvedev's logic of finite problems: formulas, an intuitionistic prover,
//! Kripke semantics over Medvedev frames, Kreisel-Putnam normal forms, and
//! the substitutions and p-morphisms behind its structural results.

pub mod alpha;
pub mod formula;
pub mod gen;
pub mod ipc;
pub mod kpform;
pub mod medvedev;
mod program;
pub mod structural;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] formula::ParseError),
    #[error(transparent)]
    Ipc(#[from] ipc::IpcError),
    #[error(transparent)]
    Classical(#[from] ipc::ClassicalError),
    #[error(transparent)]
    Frame(#[from] medvedev::FrameError),
    #[error(transparent)]
    Kp(#[from] kpform::KpError),
    #[error(transparent)]
    Alpha(#[from] alpha::AlphaError),
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),
}
