//! Graded modules over the exterior algebra, presented by their graded pieces
//! `P_0, …, P_c` and the action matrices `A_j^{(i)} : P_i → P_{i+1}` of the
//! generators `e_j`.

use crate::exactlin::{DenseMatrix, Field, LinAlgError, Subspace};
use crate::extalg::{binomial, generator_action, ExtAlgError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("top degree l = {l} exceeds n = {n}")]
    DegreeTooLarge { l: usize, n: usize },
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("module must start in degree 0 with P_0 ≠ 0")]
    EmptyBottom,
    #[error("action matrix for e_{j} in degree {i} has shape {got:?}, expected {expected:?}")]
    ActionShape {
        i: usize,
        j: usize,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("exterior relation fails: e_{j} e_{k} + e_{k} e_{j} ≠ 0 from degree {i}")]
    Anticommutation { i: usize, j: usize, k: usize },
    #[error("exterior relation fails: e_{j}^2 ≠ 0 from degree {i}")]
    SquareNonzero { i: usize, j: usize },
    #[error("subspace lives in dimension {got}, top piece has dimension {expected}")]
    AmbientMismatch { got: usize, expected: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    ExtAlg(#[from] ExtAlgError),
}

/// A finitely generated graded `E`-module concentrated in degrees `0..=c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedEModule {
    field: Field,
    n: usize,
    piece_dims: Vec<usize>,
    /// `actions[i][j]` is the matrix of `e_j : P_i → P_{i+1}`.
    actions: Vec<Vec<DenseMatrix>>,
}

/// Alternating partial sums `χ_i = dim P_i − χ_{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiVector(pub Vec<i64>);

impl ChiVector {
    pub fn top(&self) -> i64 {
        *self.0.last().expect("chi vector is never empty")
    }
}

impl GradedEModule {
    /// Assembles a module from explicit data and checks the exterior
    /// relations.
    pub fn from_parts(
        field: Field,
        n: usize,
        piece_dims: Vec<usize>,
        actions: Vec<Vec<DenseMatrix>>,
    ) -> Result<Self, ModuleError> {
        let m = GradedEModule {
            field,
            n,
            piece_dims,
            actions,
        };
        m.check_shapes()?;
        m.check_relations()?;
        Ok(m)
    }

    /// Same as [`from_parts`](Self::from_parts) without the relation check;
    /// for reports that are verified later.
    pub fn from_parts_unchecked(
        field: Field,
        n: usize,
        piece_dims: Vec<usize>,
        actions: Vec<Vec<DenseMatrix>>,
    ) -> Result<Self, ModuleError> {
        let m = GradedEModule {
            field,
            n,
            piece_dims,
            actions,
        };
        m.check_shapes()?;
        Ok(m)
    }

    fn check_shapes(&self) -> Result<(), ModuleError> {
        if self.piece_dims.first().copied().unwrap_or(0) == 0 {
            return Err(ModuleError::EmptyBottom);
        }
        let c = self.top_degree();
        if self.actions.len() != c {
            return Err(LinAlgError::Shape(format!(
                "expected {c} action degrees, got {}",
                self.actions.len()
            ))
            .into());
        }
        for (i, row) in self.actions.iter().enumerate() {
            if row.len() != self.n + 1 {
                return Err(LinAlgError::Shape(format!(
                    "degree {i}: expected {} generator matrices, got {}",
                    self.n + 1,
                    row.len()
                ))
                .into());
            }
            let expected = (self.piece_dims[i + 1], self.piece_dims[i]);
            for (j, a) in row.iter().enumerate() {
                if a.shape() != expected {
                    return Err(ModuleError::ActionShape {
                        i,
                        j,
                        got: a.shape(),
                        expected,
                    });
                }
                if a.field() != self.field {
                    return Err(LinAlgError::DomainMismatch(self.field, a.field()).into());
                }
            }
        }
        Ok(())
    }

    /// Checks `A_j A_k + A_k A_j = 0` and `A_j A_j = 0` in every degree.
    pub fn check_relations(&self) -> Result<(), ModuleError> {
        for i in 0..self.actions.len().saturating_sub(1) {
            for j in 0..=self.n {
                let prod = self.actions[i + 1][j].try_mul(&self.actions[i][j])?;
                if !prod.is_zero() {
                    return Err(ModuleError::SquareNonzero { i, j });
                }
                for k in j + 1..=self.n {
                    let s = self.actions[i + 1][j]
                        .try_mul(&self.actions[i][k])?
                        .try_add(&self.actions[i + 1][k].try_mul(&self.actions[i][j])?)?;
                    if !s.is_zero() {
                        return Err(ModuleError::Anticommutation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `c = max { i : P_i ≠ 0 }`.
    pub fn top_degree(&self) -> usize {
        self.piece_dims.len() - 1
    }

    pub fn piece_dims(&self) -> &[usize] {
        &self.piece_dims
    }

    pub fn action(&self, i: usize, j: usize) -> &DenseMatrix {
        &self.actions[i][j]
    }

    pub fn actions(&self) -> &[Vec<DenseMatrix>] {
        &self.actions
    }
}

/// `P = k^p ⊗ (⊕_{i=0}^{l} ⋀^i V)`. Basis of `P_i` is `(a, S) ↦ a·C(n+1, i) + pos(S)`.
pub fn free_truncated(
    field: Field,
    p: usize,
    l: usize,
    n: usize,
) -> Result<GradedEModule, ModuleError> {
    if p == 0 {
        return Err(ModuleError::ZeroMultiplicity);
    }
    if l > n {
        return Err(ModuleError::DegreeTooLarge { l, n });
    }
    let id = DenseMatrix::identity(field, p);
    let piece_dims = (0..=l).map(|i| p * binomial(n + 1, i)).collect();
    let mut actions = Vec::with_capacity(l);
    for i in 0..l {
        let row = (0..=n)
            .map(|j| {
                id.kron(&generator_action(field, j, i, n)?)
                    .map_err(ModuleError::from)
            })
            .collect::<Result<Vec<_>, _>>()?;
        actions.push(row);
    }
    Ok(GradedEModule {
        field,
        n,
        piece_dims,
        actions,
    })
}

/// Result of [`quotient_top`]: the quotient module and the coordinates of
/// `P_c` kept as the basis of `P_c / L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopQuotient {
    pub module: GradedEModule,
    pub complement: Vec<usize>,
}

/// `P / L` for `L ⊆ P_c`.
///
/// `P_c / L` is identified with the coordinates that are not pivots of the
/// reduced echelon basis of `L`; the projection sends `y` to
/// `y − Σ_k y_{piv_k} ℓ_k` restricted to those coordinates. If `L = P_c` the
/// top piece disappears and the module ends in degree `c − 1`.
pub fn quotient_top(p: &GradedEModule, l: &Subspace) -> Result<TopQuotient, ModuleError> {
    let c = p.top_degree();
    let top = p.piece_dims[c];
    if l.ambient_dim() != top {
        return Err(ModuleError::AmbientMismatch {
            got: l.ambient_dim(),
            expected: top,
        });
    }
    if l.field() != p.field {
        return Err(LinAlgError::DomainMismatch(p.field, l.field()).into());
    }
    // re-validate independence; Subspace guarantees it but reports may not
    let l = Subspace::new(l.basis().clone())?;
    if l.dim() == 0 {
        return Ok(TopQuotient {
            module: p.clone(),
            complement: (0..top).collect(),
        });
    }
    if l.dim() == top {
        let mut piece_dims = p.piece_dims.clone();
        piece_dims.pop();
        let mut actions = p.actions.clone();
        actions.pop();
        if piece_dims.is_empty() {
            return Err(ModuleError::EmptyBottom);
        }
        return Ok(TopQuotient {
            module: GradedEModule {
                field: p.field,
                n: p.n,
                piece_dims,
                actions,
            },
            complement: Vec::new(),
        });
    }
    let rref = l.basis().rref();
    let mut is_pivot = vec![false; top];
    for &k in &rref.pivots {
        is_pivot[k] = true;
    }
    let complement: Vec<usize> = (0..top).filter(|&q| !is_pivot[q]).collect();
    // projection matrix (top - dim L) x top
    let mut proj = DenseMatrix::zeros(p.field, complement.len(), top);
    for (row, &q) in complement.iter().enumerate() {
        proj.set_i64(row, q, 1);
        for (k, &piv) in rref.pivots.iter().enumerate() {
            let x = rref.matrix.get(k, q);
            if !x.is_zero() {
                proj.set(row, piv, &x.neg())?;
            }
        }
    }
    let mut actions = p.actions.clone();
    if let Some(last) = actions.last_mut() {
        for a in last.iter_mut() {
            *a = proj.try_mul(a)?;
        }
    }
    let mut piece_dims = p.piece_dims.clone();
    piece_dims[c] = complement.len();
    let module = GradedEModule {
        field: p.field,
        n: p.n,
        piece_dims,
        actions,
    };
    module.check_relations()?;
    Ok(TopQuotient { module, complement })
}

pub fn chi(p: &GradedEModule) -> ChiVector {
    let mut out: Vec<i64> = Vec::with_capacity(p.piece_dims.len());
    for &d in &p.piece_dims {
        let prev = out.last().copied().unwrap_or(0);
        out.push(d as i64 - prev);
    }
    ChiVector(out)
}

/// Dimension of the space of graded endomorphisms `(φ_i : P_i → P_i)` with
/// `φ_{i+1} A_j^{(i)} = A_j^{(i)} φ_i`, as the nullity of one stacked system
/// in the entries of all `φ_i`.
pub fn hom_space_dim(p: &GradedEModule) -> usize {
    let dims = &p.piece_dims;
    let mut offsets = Vec::with_capacity(dims.len());
    let mut unknowns = 0;
    for &d in dims {
        offsets.push(unknowns);
        unknowns += d * d;
    }
    let equations: usize = (0..p.top_degree())
        .map(|i| (p.n + 1) * dims[i + 1] * dims[i])
        .sum();
    if equations == 0 {
        return unknowns;
    }
    let mut sys = DenseMatrix::zeros(p.field, equations, unknowns);
    let mut eq = 0;
    for i in 0..p.top_degree() {
        let (lo, hi) = (dims[i], dims[i + 1]);
        for a in &p.actions[i] {
            // equation (r, s): Σ_t φ_{i+1}[r][t] a[t][s] − Σ_t a[r][t] φ_i[t][s]
            for r in 0..hi {
                for s in 0..lo {
                    for t in 0..hi {
                        let x = a.get(t, s);
                        if !x.is_zero() {
                            let col = offsets[i + 1] + r * hi + t;
                            let cur = sys.get(eq, col);
                            sys.set(eq, col, &cur.try_add(&x).unwrap()).unwrap();
                        }
                    }
                    for t in 0..lo {
                        let x = a.get(r, t);
                        if !x.is_zero() {
                            let col = offsets[i] + t * lo + s;
                            let cur = sys.get(eq, col);
                            sys.set(eq, col, &cur.try_sub(&x).unwrap()).unwrap();
                        }
                    }
                    eq += 1;
                }
            }
        }
    }
    unknowns - sys.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::DEFAULT_PRIME;
    use rand::SeedableRng;

    fn fp() -> Field {
        Field::Fp(DEFAULT_PRIME)
    }

    #[test]
    fn free_truncated_dims() {
        let p = free_truncated(fp(), 2, 2, 3).unwrap();
        assert_eq!(p.piece_dims(), &[2, 8, 12]);
        assert_eq!(free_truncated(fp(), 1, 1, 1).unwrap().piece_dims(), &[1, 2]);
        assert!(p.check_relations().is_ok());
        assert!(matches!(
            free_truncated(fp(), 1, 4, 3),
            Err(ModuleError::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn chi_examples() {
        let p = free_truncated(fp(), 2, 2, 3).unwrap();
        assert_eq!(chi(&p).0, vec![2, 6, 6]);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let l = Subspace::new(DenseMatrix::random(fp(), 1, 12, &mut rng)).unwrap();
        let q = quotient_top(&p, &l).unwrap().module;
        assert_eq!(q.piece_dims(), &[2, 8, 11]);
        assert_eq!(chi(&q).top(), 5);
        let single = GradedEModule::from_parts(fp(), 3, vec![4], vec![]).unwrap();
        assert_eq!(chi(&single).0, vec![4]);
    }

    #[test]
    fn chi_top_matches_binomial_identity() {
        for p in 1..=3 {
            for n in 1..=5 {
                for l in 0..n {
                    let m = free_truncated(fp(), p, l, n).unwrap();
                    assert_eq!(chi(&m).top(), (p * binomial(n, l)) as i64);
                }
            }
        }
    }

    #[test]
    fn quotient_by_zero_is_identity() {
        let p = free_truncated(fp(), 2, 2, 3).unwrap();
        let q = quotient_top(&p, &Subspace::zero(fp(), 12)).unwrap();
        assert_eq!(q.module, p);
    }

    #[test]
    fn quotient_by_everything_truncates() {
        let p = free_truncated(fp(), 1, 2, 3).unwrap();
        let q = quotient_top(&p, &Subspace::full(fp(), 6)).unwrap().module;
        assert_eq!(q.top_degree(), 1);
        assert_eq!(q.piece_dims(), &[1, 4]);
    }

    #[test]
    fn quotient_rejects_dependent_rows() {
        let p = free_truncated(fp(), 1, 1, 2).unwrap();
        let rows = DenseMatrix::from_rows_i64(fp(), &[vec![1, 0, 0], vec![2, 0, 0]]).unwrap();
        assert!(Subspace::new(rows).is_err());
        let ok =
            Subspace::new(DenseMatrix::from_rows_i64(fp(), &[vec![1, 1, 0]]).unwrap()).unwrap();
        let q = quotient_top(&p, &ok).unwrap();
        assert_eq!(q.complement, vec![1, 2]);
    }

    #[test]
    fn hom_dims_of_free_modules() {
        for p in 1..=3 {
            for l in 0..=2 {
                for n in 1..=3 {
                    if l > n {
                        continue;
                    }
                    let m = free_truncated(fp(), p, l, n).unwrap();
                    assert_eq!(hom_space_dim(&m), p * p, "p={p} l={l} n={n}");
                }
            }
        }
        let single = GradedEModule::from_parts(fp(), 3, vec![1], vec![]).unwrap();
        assert_eq!(hom_space_dim(&single), 1);
    }

    #[test]
    fn relations_survive_quotients_over_q() {
        let p = free_truncated(Field::Q, 2, 2, 3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let l = Subspace::new(DenseMatrix::random(Field::Q, 2, 12, &mut rng)).unwrap();
        let q = quotient_top(&p, &l).unwrap().module;
        assert!(q.check_relations().is_ok());
        assert_eq!(q.piece_dims(), &[2, 8, 10]);
    }

    #[test]
    fn broken_relations_are_reported() {
        let f = fp();
        let mut m = free_truncated(f, 1, 2, 2).unwrap();
        let mut a = m.actions[1][0].clone();
        let v = a.get(0, 1);
        a.set(0, 1, &v.try_add(&f.one()).unwrap()).unwrap();
        m.actions[1][0] = a;
        assert!(m.check_relations().is_err());
    }
}
