use thiserror::Error;

/// Errors raised by the library. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index:?} is not in the index set of degree {n} for d = {d}")]
    Index { d: usize, n: u32, index: Vec<i32> },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature rule exact to degree {have} but degree {need} is required")]
    Exactness { have: u32, need: u32 },

    #[error("grid of {nodes} nodes exceeds the capacity cap of {cap}")]
    Capacity { nodes: u64, cap: u64 },

    #[error("not a frame: sigma vanishes at degree {n} on the support")]
    NotAFrame { n: u32 },

    #[error("degenerate signal: {0}")]
    Degenerate(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("shape error: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
