use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Pipeline stage of [`crate::solver::ebos_solve`], attached to errors so a
/// failure can be traced to the step that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    ReduceRows,
    SolveY,
    ReduceCols,
    SolveX,
    Residual,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::ReduceRows => "row reduction of C",
            Stage::SolveY => "solution of Y CC* = AC*",
            Stage::ReduceCols => "column reduction of B",
            Stage::SolveX => "solution of B*B X = B*Y",
            Stage::Residual => "residual evaluation",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {got}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        got: String,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("empty block list passed to {0}")]
    EmptyBlocks(&'static str),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("SVD did not converge for a {rows}x{cols} matrix")]
    SvdFailure { rows: usize, cols: usize },

    #[error(
        "blocks {first} and {second} of {which} are not orthogonal (cross-Grammian norm {norm:.3e} > {threshold:.3e})"
    )]
    NotOrthogonal {
        which: &'static str,
        first: usize,
        second: usize,
        norm: f64,
        threshold: f64,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn dims(
        op: &'static str,
        expected: impl Into<String>,
        got: impl Into<String>,
    ) -> Self {
        Error::DimensionMismatch {
            op,
            expected: expected.into(),
            got: got.into(),
        }
    }

    pub(crate) fn at(stage: Stage) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage {
            stage,
            source: Box::new(source),
        }
    }

    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::SvdFailure { .. } => true,
            Error::Stage { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    /// Process exit code used by the command-line front end:
    /// 2 for validation errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        if self.is_numerical() {
            3
        } else {
            2
        }
    }

    /// Innermost error once stage wrappers are peeled off.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }
}
