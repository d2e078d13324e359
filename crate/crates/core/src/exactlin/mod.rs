//! Exact scalars over `Q` and `F_p`, dense matrices over them, and the
//! elimination routines (rank, reduced echelon form, kernels, solving) the
//! rest of the crate is built on.

mod elim;
mod matrix;
mod scalar;
mod subspace;

pub use matrix::{solve_right, AffineSolution, DenseMatrix, Rref};
pub use scalar::{Field, Scalar, DEFAULT_PRIME};
pub use subspace::{subspace_ops, Subspace};

pub(crate) use scalar::inv_mod;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("scalar domain mismatch: {0} vs {1}")]
    DomainMismatch(Field, Field),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("malformed subspace: {rows} basis rows but rank {rank}")]
    MalformedSubspace { rows: usize, rank: usize },
    #[error("{0} is not a supported prime modulus")]
    BadModulus(u32),
    #[error("cannot parse {0:?}")]
    Parse(String),
}

#[cfg(test)]
mod tests;
