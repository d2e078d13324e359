use super::{DenseMatrix, Field, LinAlgError};

/// A linear subspace of `k^N` given by independent basis rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: DenseMatrix,
}

impl Subspace {
    /// Wraps `basis` after checking that its rows are independent.
    pub fn new(basis: DenseMatrix) -> Result<Self, LinAlgError> {
        let rank = basis.rank();
        if rank != basis.rows() {
            return Err(LinAlgError::MalformedSubspace {
                rows: basis.rows(),
                rank,
            });
        }
        Ok(Subspace { basis })
    }

    /// Span of arbitrary rows (dependent rows are allowed; the basis is the
    /// reduced echelon form).
    pub fn span(rows: &DenseMatrix) -> Self {
        Subspace {
            basis: rows.rref().matrix,
        }
    }

    pub fn zero(field: Field, ambient: usize) -> Self {
        Subspace {
            basis: DenseMatrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Self {
        Subspace {
            basis: DenseMatrix::identity(field, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> DenseMatrix {
        self.basis
    }

    /// Whether `v` (a `1 x N` row) lies in the subspace.
    pub fn contains(&self, v: &DenseMatrix) -> Result<bool, LinAlgError> {
        let stacked = DenseMatrix::vstack(self.field(), &[&self.basis, v])?;
        Ok(stacked.rank() == self.dim())
    }
}

/// Returns `(dim(L1 + L2), dim(L1 ∩ L2))`.
pub fn subspace_ops(a: &Subspace, b: &Subspace) -> Result<(usize, usize), LinAlgError> {
    if a.field() != b.field() {
        return Err(LinAlgError::DomainMismatch(a.field(), b.field()));
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(LinAlgError::Shape(format!(
            "ambient dimensions {} and {} differ",
            a.ambient_dim(),
            b.ambient_dim()
        )));
    }
    let sum = DenseMatrix::vstack(a.field(), &[a.basis(), b.basis()])?.rank();
    Ok((sum, a.dim() + b.dim() - sum))
}
