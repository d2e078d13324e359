//! Anchoring subspaces `L ⊆ U ⊗ W`.
//!
//! `L` anchors `U` when the only endomorphisms `φ` of `U` with
//! `(φ ⊗ 1)(L) ⊆ L` are scalars. Vectors of `U ⊗ W` are flattened with
//! `(i, a) ↦ i·w + a`.
//!
//! Writing the basis vectors of `L` as a tensor `v_{iμa}` and slicing along
//! `a` gives `w` matrices `V_a` of shape `u × d`; `(φ ⊗ 1) l_μ = Σ_ν C_{νμ} l_ν`
//! becomes `φ V_a = V_a C` for every slice.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{DenseMatrix, Field, LinAlgError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnchorError {
    #[error("subspace lives in dimension {got}, expected u·w = {expected}")]
    AmbientMismatch { got: usize, expected: usize },
    #[error("slices must share one shape and field")]
    SliceShape,
    #[error("field {field} has fewer than {needed} distinct nonzero values")]
    FieldTooSmall { field: Field, needed: usize },
    #[error("no verified Burnside pair of size {size} after {attempts} attempts")]
    BurnsideExhausted { size: usize, attempts: usize },
    #[error("m = {m} is too small for u = {u}, d = {d}; the minimum is {min_m}")]
    TooFewSlices {
        u: usize,
        d: usize,
        m: usize,
        min_m: usize,
    },
    #[error("sizes must be positive (u = {u}, d = {d})")]
    ZeroSize { u: usize, d: usize },
    #[error("tensor admits {0} independent solutions (A, C); expected exactly 1")]
    NotRigid(usize),
    #[error("tensor vectors are dependent although the tensor is rigid")]
    DependentVectors,
    #[error("d = {d} is outside the open interval (2u/w, uw − 2u/w) for u = {u}, w = {w}")]
    OutsideRange { u: usize, w: usize, d: usize },
    #[error("w = {0} is below 4")]
    SmallW(usize),
    #[error("no anchoring subspace found: {0}")]
    Exhausted(SampleStats),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A subspace `L ⊆ U ⊗ W` with `dim U = u`, `dim W = w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchorProblem {
    u: usize,
    w: usize,
    l: Subspace,
}

impl AnchorProblem {
    /// Checks the ambient dimension and the independence of the basis rows.
    pub fn new(u: usize, w: usize, basis: DenseMatrix) -> Result<Self, AnchorError> {
        if basis.cols() != u * w {
            return Err(AnchorError::AmbientMismatch {
                got: basis.cols(),
                expected: u * w,
            });
        }
        Ok(AnchorProblem {
            u,
            w,
            l: Subspace::new(basis)?,
        })
    }

    pub fn from_subspace(u: usize, w: usize, l: Subspace) -> Result<Self, AnchorError> {
        if l.ambient_dim() != u * w {
            return Err(AnchorError::AmbientMismatch {
                got: l.ambient_dim(),
                expected: u * w,
            });
        }
        Ok(AnchorProblem { u, w, l })
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn d(&self) -> usize {
        self.l.dim()
    }

    pub fn field(&self) -> Field {
        self.l.field()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.l
    }

    /// The basis as slices `V_a[i][μ] = l_μ[i·w + a]`.
    pub fn slices(&self) -> SliceTensor {
        let (u, w, d) = (self.u, self.w, self.d());
        let basis = self.l.basis();
        let slices = (0..w)
            .map(|a| {
                let mut v = DenseMatrix::zeros(self.field(), u, d);
                for i in 0..u {
                    for mu in 0..d {
                        let x = basis.get(mu, i * w + a);
                        if !x.is_zero() {
                            v.set(i, mu, &x).expect("same field");
                        }
                    }
                }
                v
            })
            .collect();
        SliceTensor {
            field: self.field(),
            u,
            d,
            slices,
        }
    }
}

/// A tensor `v_{iμa}` stored as `m` slices of shape `u × d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceTensor {
    field: Field,
    u: usize,
    d: usize,
    slices: Vec<DenseMatrix>,
}

impl SliceTensor {
    pub fn new(
        field: Field,
        u: usize,
        d: usize,
        slices: Vec<DenseMatrix>,
    ) -> Result<Self, AnchorError> {
        if slices
            .iter()
            .any(|s| s.shape() != (u, d) || s.field() != field)
        {
            return Err(AnchorError::SliceShape);
        }
        Ok(SliceTensor {
            field,
            u,
            d,
            slices,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn m(&self) -> usize {
        self.slices.len()
    }

    pub fn slices(&self) -> &[DenseMatrix] {
        &self.slices
    }

    /// Appends one more slice.
    pub fn push(&mut self, slice: DenseMatrix) -> Result<(), AnchorError> {
        if slice.shape() != (self.u, self.d) || slice.field() != self.field {
            return Err(AnchorError::SliceShape);
        }
        self.slices.push(slice);
        Ok(())
    }

    /// Every slice transposed: a solution `(A, C)` becomes `(Cᵀ, Aᵀ)`.
    pub fn transposed(&self) -> SliceTensor {
        SliceTensor {
            field: self.field,
            u: self.d,
            d: self.u,
            slices: self.slices.iter().map(DenseMatrix::transpose).collect(),
        }
    }
}

/// Dimension of `{(A, C) : A V_a = V_a C for all a}`.
///
/// Unknowns are `A[i][j] ↦ i·u + j` followed by `C[ν][μ] ↦ u² + ν·d + μ`;
/// equation `(a, i, μ)` reads `Σ_j A[i][j] V_a[j][μ] − Σ_ν V_a[i][ν] C[ν][μ]`.
pub fn pair_solution_dim(t: &SliceTensor) -> usize {
    let (u, d) = (t.u, t.d);
    let unknowns = u * u + d * d;
    let live: Vec<&DenseMatrix> = t.slices.iter().filter(|s| !s.is_zero()).collect();
    if live.is_empty() {
        return unknowns;
    }
    let mut sys = DenseMatrix::zeros(t.field, live.len() * u * d, unknowns);
    for (a, v) in live.iter().enumerate() {
        for i in 0..u {
            for mu in 0..d {
                let eq = (a * u + i) * d + mu;
                for j in 0..u {
                    let x = v.get(j, mu);
                    if !x.is_zero() {
                        sys.set(eq, i * u + j, &x).expect("same field");
                    }
                }
                for nu in 0..d {
                    let x = v.get(i, nu);
                    if !x.is_zero() {
                        sys.set(eq, u * u + nu * d + mu, &x.neg())
                            .expect("same field");
                    }
                }
            }
        }
    }
    unknowns - sys.rank()
}

/// Outcome of [`is_anchoring`] together with the dimension of admissible `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AnchorVerdict {
    pub anchoring: bool,
    pub dimension: usize,
}

/// Since the basis of `L` is independent, `C` is determined by `φ`, so the
/// pair-solution dimension equals the dimension of admissible `φ`. For
/// `d = 0` every `φ` is admissible (dimension `u²`), so the zero subspace
/// anchors only when `u = 1`.
pub fn is_anchoring(p: &AnchorProblem) -> AnchorVerdict {
    let dimension = pair_solution_dim(&p.slices());
    AnchorVerdict {
        anchoring: dimension == 1,
        dimension,
    }
}

/// Dimension of `{C : C B_i = B_i C}`.
pub fn commutant_dim(mats: &[&DenseMatrix]) -> usize {
    let Some(first) = mats.first() else {
        return 0;
    };
    let s = first.rows();
    let field = first.field();
    let mut sys = DenseMatrix::zeros(field, mats.len() * s * s, s * s);
    for (k, b) in mats.iter().enumerate() {
        // entry (r, c) of C B − B C
        for r in 0..s {
            for c in 0..s {
                let eq = (k * s + r) * s + c;
                for t in 0..s {
                    let x = b.get(t, c);
                    if !x.is_zero() {
                        let col = r * s + t;
                        let cur = sys.get(eq, col);
                        sys.set(eq, col, &cur.try_add(&x).unwrap()).unwrap();
                    }
                    let y = b.get(r, t);
                    if !y.is_zero() {
                        let col = t * s + c;
                        let cur = sys.get(eq, col);
                        sys.set(eq, col, &cur.try_sub(&y).unwrap()).unwrap();
                    }
                }
            }
        }
    }
    s * s - sys.rank()
}

const BURNSIDE_ATTEMPTS: usize = 64;

/// `(diag(1, …, s), X diag(1, …, s) X⁻¹)` for a given invertible `X`.
///
/// Returns `None` when `X` is singular.
pub fn burnside_pair_from(
    x: &DenseMatrix,
) -> Result<Option<(DenseMatrix, DenseMatrix)>, AnchorError> {
    let s = x.rows();
    let field = x.field();
    if x.cols() != s {
        return Err(AnchorError::SliceShape);
    }
    check_distinct(field, s)?;
    let diag = DenseMatrix::from_fn(field, s, s, |i, j| if i == j { i as i64 + 1 } else { 0 });
    let Some(inv) = crate::exactlin::solve_right(x, &DenseMatrix::identity(field, s))? else {
        return Ok(None);
    };
    if inv.kernel.rows() > 0 {
        return Ok(None);
    }
    let b2 = x.try_mul(&diag)?.try_mul(&inv.particular)?;
    Ok(Some((diag, b2)))
}

/// A pair of `s × s` matrices whose common commutant is the scalars, with
/// `X` drawn from `seed` and retried until the commutant check passes.
pub fn burnside_pair(
    field: Field,
    s: usize,
    seed: u64,
) -> Result<(DenseMatrix, DenseMatrix), AnchorError> {
    check_distinct(field, s)?;
    if s == 1 {
        let one = DenseMatrix::identity(field, 1);
        return Ok((one.clone(), one));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..BURNSIDE_ATTEMPTS {
        let x = DenseMatrix::random(field, s, s, &mut rng);
        if let Some((b1, b2)) = burnside_pair_from(&x)? {
            if commutant_dim(&[&b1, &b2]) == 1 {
                return Ok((b1, b2));
            }
        }
    }
    Err(AnchorError::BurnsideExhausted {
        size: s,
        attempts: BURNSIDE_ATTEMPTS,
    })
}

fn check_distinct(field: Field, s: usize) -> Result<(), AnchorError> {
    match field.order() {
        Some(q) if (s as u64) > q - 1 && s > 1 => {
            Err(AnchorError::FieldTooSmall { field, needed: s })
        }
        _ => Ok(()),
    }
}

/// Smallest `m` accepted by [`anchoring_tensor`].
pub fn min_slices(u: usize, d: usize) -> usize {
    u.div_ceil(d).max(d.div_ceil(u)) + 2
}

/// Seed used for the Burnside pair inside [`anchoring_tensor`].
pub const TENSOR_BURNSIDE_SEED: u64 = 0;

/// The explicit rigid tensor: for `u ≥ d`, slices `0..⌈u/d⌉` carry shifted
/// identity blocks (`V_a[a·d + k][k] = 1`, the last block truncated),
/// slices `m − 2` and `m − 1` carry a Burnside pair of size `d` in the
/// top-left corner and all other slices are zero. For `u < d` the
/// construction for `(d, u)` is transposed.
pub fn anchoring_tensor(
    field: Field,
    u: usize,
    d: usize,
    m: usize,
) -> Result<SliceTensor, AnchorError> {
    if u == 0 || d == 0 {
        return Err(AnchorError::ZeroSize { u, d });
    }
    let min_m = min_slices(u, d);
    if m < min_m {
        return Err(AnchorError::TooFewSlices { u, d, m, min_m });
    }
    if u < d {
        return Ok(anchoring_tensor(field, d, u, m)?.transposed());
    }
    let (b1, b2) = burnside_pair(field, d, TENSOR_BURNSIDE_SEED)?;
    let mut slices = vec![DenseMatrix::zeros(field, u, d); m];
    for (a, slice) in slices.iter_mut().enumerate().take(u.div_ceil(d)) {
        for k in 0..d {
            if a * d + k < u {
                slice.set_i64(a * d + k, k, 1);
            }
        }
    }
    for (slot, b) in [(m - 2, &b1), (m - 1, &b2)] {
        for i in 0..d {
            for j in 0..d {
                slices[slot].set(i, j, &b.get(i, j))?;
            }
        }
    }
    SliceTensor::new(field, u, d, slices)
}

/// The vectors `v_μ = Σ_{i,a} (V_a)_{iμ} u^i ⊗ w^a` as a subspace of
/// `k^u ⊗ k^m`.
pub fn tensor_to_subspace(t: &SliceTensor) -> Result<AnchorProblem, AnchorError> {
    let dim = pair_solution_dim(t);
    if dim != 1 {
        return Err(AnchorError::NotRigid(dim));
    }
    let (u, d, w) = (t.u, t.d, t.m());
    let mut basis = DenseMatrix::zeros(t.field, d, u * w);
    for (a, v) in t.slices.iter().enumerate() {
        for i in 0..u {
            for mu in 0..d {
                let x = v.get(i, mu);
                if !x.is_zero() {
                    basis.set(mu, i * w + a, &x)?;
                }
            }
        }
    }
    AnchorProblem::new(u, w, basis).map_err(|e| match e {
        AnchorError::LinAlg(LinAlgError::MalformedSubspace { .. }) => AnchorError::DependentVectors,
        other => other,
    })
}

/// The forms vanishing on `L`, under the standard pairing of `U ⊗ W` with
/// `U* ⊗ W*` in the same coordinates.
pub fn annihilator(p: &AnchorProblem) -> AnchorProblem {
    let field = p.field();
    let n = p.u * p.w;
    let l = if p.d() == 0 {
        Subspace::full(field, n)
    } else {
        Subspace::new(p.l.basis().kernel_basis()).expect("kernel basis is independent")
    };
    AnchorProblem { u: p.u, w: p.w, l }
}

/// Whether `d` lies strictly inside `(2u/w, uw − 2u/w)`.
pub fn in_general_range(u: usize, w: usize, d: usize) -> bool {
    d * w > 2 * u && d * w + 2 * u < u * w * w
}

/// Attempt counts from [`sample_anchoring`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SampleStats {
    pub attempts: usize,
    pub dependent: usize,
    pub not_anchoring: usize,
    /// Admissible-`φ` dimension of every rejected candidate, in order.
    pub rejected_dims: Vec<usize>,
}

impl std::fmt::Display for SampleStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} attempts, {} with dependent rows, {} not anchoring",
            self.attempts, self.dependent, self.not_anchoring
        )
    }
}

/// Default retry bound for [`sample_anchoring`].
pub const DEFAULT_SAMPLE_ATTEMPTS: usize = 32;

/// A seeded random `d`-dimensional subspace of `k^u ⊗ k^w`, verified to
/// anchor `U`. Returns the subspace and the statistics of the search.
pub fn sample_anchoring(
    field: Field,
    u: usize,
    w: usize,
    d: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<(AnchorProblem, SampleStats), AnchorError> {
    if u == 0 {
        return Err(AnchorError::ZeroSize { u, d });
    }
    if d > u * w {
        return Err(AnchorError::OutsideRange { u, w, d });
    }
    if u > 1 {
        if w < 4 {
            return Err(AnchorError::SmallW(w));
        }
        if !in_general_range(u, w, d) {
            return Err(AnchorError::OutsideRange { u, w, d });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SampleStats::default();
    while stats.attempts < max_attempts {
        stats.attempts += 1;
        let basis = DenseMatrix::random(field, d, u * w, &mut rng);
        let Ok(problem) = AnchorProblem::new(u, w, basis) else {
            stats.dependent += 1;
            continue;
        };
        let verdict = is_anchoring(&problem);
        if verdict.anchoring {
            return Ok((problem, stats));
        }
        stats.not_anchoring += 1;
        stats.rejected_dims.push(verdict.dimension);
    }
    Err(AnchorError::Exhausted(stats))
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::exactlin::DEFAULT_PRIME;

    const P: Field = Field::Fp(DEFAULT_PRIME);

    fn unit(u: usize, w: usize, i: usize, a: usize) -> Vec<i64> {
        let mut v = vec![0; u * w];
        v[i * w + a] = 1;
        v
    }

    #[test]
    fn diagonal_subspace_is_not_anchoring() {
        let basis = DenseMatrix::from_rows_i64(P, &[unit(2, 4, 0, 0), unit(2, 4, 1, 1)]).unwrap();
        let p = AnchorProblem::new(2, 4, basis).unwrap();
        assert_eq!(
            is_anchoring(&p),
            AnchorVerdict {
                anchoring: false,
                dimension: 2
            }
        );
    }

    #[test]
    fn trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 0..=5 {
            let p = AnchorProblem::new(1, 5, DenseMatrix::random(P, d, 5, &mut rng)).unwrap();
            assert!(is_anchoring(&p).anchoring, "u = 1, d = {d}");
        }
        let zero = AnchorProblem::new(3, 4, DenseMatrix::zeros(P, 0, 12)).unwrap();
        assert_eq!(is_anchoring(&zero).dimension, 9);
        assert!(!is_anchoring(&zero).anchoring);
    }

    #[test]
    fn malformed_subspace_is_rejected() {
        let basis = DenseMatrix::from_rows_i64(P, &[unit(2, 4, 0, 0), unit(2, 4, 0, 0)]).unwrap();
        assert!(AnchorProblem::new(2, 4, basis).is_err());
        assert!(matches!(
            AnchorProblem::new(2, 4, DenseMatrix::zeros(P, 1, 7)),
            Err(AnchorError::AmbientMismatch { .. })
        ));
    }

    #[test]
    fn random_anchor_seed_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = AnchorProblem::new(2, 4, DenseMatrix::random(P, 2, 8, &mut rng)).unwrap();
        assert!(is_anchoring(&p).anchoring);
    }

    #[test]
    fn pair_solution_trivial_cases() {
        let zero = SliceTensor::new(P, 3, 2, vec![DenseMatrix::zeros(P, 3, 2); 4]).unwrap();
        assert_eq!(pair_solution_dim(&zero), 9 + 4);
        for u in 1..=4 {
            let id = SliceTensor::new(P, u, u, vec![DenseMatrix::identity(P, u)]).unwrap();
            assert_eq!(pair_solution_dim(&id), u * u);
        }
    }

    #[test]
    fn burnside_examples() {
        let (b1, b2) = burnside_pair(Field::Q, 1, 0).unwrap();
        assert_eq!(b1, DenseMatrix::identity(Field::Q, 1));
        assert_eq!(b2, b1);

        let x = DenseMatrix::from_rows_i64(Field::Q, &[vec![1, 1], vec![1, -1]]).unwrap();
        let (b1, b2) = burnside_pair_from(&x).unwrap().unwrap();
        let expected = DenseMatrix::from_strings(
            Field::Q,
            2,
            2,
            &["3/2", "-1/2", "-1/2", "3/2"].map(String::from),
        )
        .unwrap();
        assert_eq!(b2, expected);
        assert_eq!(commutant_dim(&[&b1, &b2]), 1);
        assert_eq!(commutant_dim(&[&b1]), 2);

        let (b1, b2) = burnside_pair(P, 8, 99).unwrap();
        assert_eq!(commutant_dim(&[&b1, &b2]), 1);

        assert!(matches!(
            burnside_pair(Field::Fp(3), 5, 0),
            Err(AnchorError::FieldTooSmall { .. })
        ));
        let singular = DenseMatrix::from_rows_i64(Field::Q, &[vec![1, 1], vec![1, 1]]).unwrap();
        assert!(burnside_pair_from(&singular).unwrap().is_none());
    }

    #[test]
    fn explicit_tensor_examples() {
        let t = anchoring_tensor(Field::Q, 2, 2, 3).unwrap();
        assert_eq!(t.slices()[0], DenseMatrix::identity(Field::Q, 2));
        assert_eq!(pair_solution_dim(&t), 1);
        let l = tensor_to_subspace(&t).unwrap();
        assert_eq!((l.u(), l.w(), l.d()), (2, 3, 2));
        assert!(is_anchoring(&l).anchoring);

        let t = anchoring_tensor(P, 5, 2, 5).unwrap();
        let blocks = [(0, 0, 0), (0, 1, 1), (1, 2, 0), (1, 3, 1), (2, 4, 0)];
        for (a, i, mu) in blocks {
            assert!(t.slices()[a].get(i, mu).is_one());
        }
        assert!(t.slices()[2].get(4, 1).is_zero());
        assert_eq!(pair_solution_dim(&t), 1);
        assert!(is_anchoring(&tensor_to_subspace(&t).unwrap()).anchoring);

        let t = anchoring_tensor(P, 2, 5, 5).unwrap();
        assert_eq!(t, anchoring_tensor(P, 5, 2, 5).unwrap().transposed());
        assert_eq!(pair_solution_dim(&t), 1);

        assert!(matches!(
            anchoring_tensor(P, 5, 2, 4),
            Err(AnchorError::TooFewSlices { min_m: 5, .. })
        ));
        let zero = SliceTensor::new(P, 2, 2, vec![DenseMatrix::zeros(P, 2, 2); 3]).unwrap();
        assert!(matches!(
            tensor_to_subspace(&zero),
            Err(AnchorError::NotRigid(8))
        ));
    }

    #[test]
    fn annihilator_extremes() {
        let zero = AnchorProblem::new(2, 3, DenseMatrix::zeros(P, 0, 6)).unwrap();
        assert_eq!(annihilator(&zero).d(), 6);
        let full = AnchorProblem::new(2, 3, DenseMatrix::identity(P, 6)).unwrap();
        assert_eq!(annihilator(&full).d(), 0);

        let (l, _) = sample_anchoring(P, 2, 4, 2, 5, 32).unwrap();
        let n = annihilator(&l);
        assert_eq!(n.d(), 6);
        assert!(is_anchoring(&n).anchoring);
        // pairing vanishes
        let pairing = l
            .subspace()
            .basis()
            .try_mul(&n.subspace().basis().transpose())
            .unwrap();
        assert!(pairing.is_zero());
    }

    #[test]
    fn sampling_examples() {
        let (l, stats) = sample_anchoring(P, 2, 4, 2, 7, 32).unwrap();
        assert!(is_anchoring(&l).anchoring);
        assert!(stats.attempts >= 1);
        assert!(matches!(
            sample_anchoring(P, 2, 4, 1, 7, 32),
            Err(AnchorError::OutsideRange { .. })
        ));
        let (l, stats) = sample_anchoring(P, 1, 6, 3, 0, 32).unwrap();
        assert_eq!((l.d(), stats.attempts), (3, 1));
        assert!(matches!(
            sample_anchoring(P, 2, 3, 2, 0, 32),
            Err(AnchorError::SmallW(3))
        ));
    }

    #[test]
    fn exhausted_sampling_reports_statistics() {
        // over F_2 small random subspaces usually have a nontrivial stabilizer
        match sample_anchoring(Field::Fp(2), 2, 4, 2, 0, 3) {
            Ok((l, _)) => assert!(is_anchoring(&l).anchoring),
            Err(AnchorError::Exhausted(stats)) => {
                assert_eq!(stats.attempts, 3);
                assert_eq!(stats.dependent + stats.not_anchoring, 3);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn identity_pair_always_solves(u in 1usize..4, d in 1usize..4, m in 0usize..4, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let slices = (0..m).map(|_| DenseMatrix::random(P, u, d, &mut rng)).collect();
            let t = SliceTensor::new(P, u, d, slices).unwrap();
            prop_assert!(pair_solution_dim(&t) >= 1);
        }

        #[test]
        fn appending_slices(u in 1usize..4, d in 1usize..4, m in 1usize..4, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let slices = (0..m).map(|_| DenseMatrix::random(Field::Fp(3), u, d, &mut rng)).collect();
            let mut t = SliceTensor::new(Field::Fp(3), u, d, slices).unwrap();
            let base = pair_solution_dim(&t);
            let mut z = t.clone();
            z.push(DenseMatrix::zeros(Field::Fp(3), u, d)).unwrap();
            prop_assert_eq!(pair_solution_dim(&z), base);
            t.push(DenseMatrix::random(Field::Fp(3), u, d, &mut rng)).unwrap();
            prop_assert!(pair_solution_dim(&t) <= base);
        }

        #[test]
        fn recombination_invariance(d in 1usize..7, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = Field::Fp(5);
            let Ok(p) = AnchorProblem::new(2, 4, DenseMatrix::random(f, d, 8, &mut rng)) else {
                return Ok(());
            };
            let g = DenseMatrix::random(f, d, d, &mut rng);
            prop_assume!(g.rank() == d);
            let q = AnchorProblem::new(2, 4, g.try_mul(p.subspace().basis()).unwrap()).unwrap();
            prop_assert_eq!(is_anchoring(&p), is_anchoring(&q));
        }

        #[test]
        fn duality(u in 2usize..4, w in 4usize..6, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = rand::Rng::gen_range(&mut rng, 0..=u * w);
            let Ok(p) = AnchorProblem::new(u, w, DenseMatrix::random(P, d, u * w, &mut rng)) else {
                return Ok(());
            };
            prop_assert_eq!(is_anchoring(&p).anchoring, is_anchoring(&annihilator(&p)).anchoring);
        }

        #[test]
        fn burnside_any_seed(seed in any::<u64>()) {
            let (b1, b2) = burnside_pair(P, 8, seed).unwrap();
            prop_assert_eq!(commutant_dim(&[&b1, &b2]), 1);
        }
    }
}
