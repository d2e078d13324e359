//! Exterior algebra `E = ⋀V` with `dim V = n + 1`.
//!
//! Degree-`i` basis elements are the strictly increasing index subsets of
//! `{0, …, n}` of size `i`, enumerated in lexicographic order of the sorted
//! tuple. Subsets are stored as bitmasks.

use crate::exactlin::{DenseMatrix, Field, LinAlgError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtAlgError {
    #[error("index {index} out of range for dim V = {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("subset {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("degree {degree} has no target: ⋀^{} V = 0 for dim V = {dim}", degree + 1)]
    ZeroTarget { degree: usize, dim: usize },
    #[error("vector has {got} coordinates, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// The lexicographically ordered basis of `⋀^degree V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtBasis {
    n: usize,
    degree: usize,
    subsets: Vec<u32>,
}

impl ExtBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        assert!(n < 31, "dim V must fit a bitmask");
        let dim = n + 1;
        let mut subsets = Vec::with_capacity(binomial(dim, degree));
        if degree <= dim {
            let mut idx: Vec<usize> = (0..degree).collect();
            loop {
                subsets.push(idx.iter().fold(0u32, |m, &i| m | 1 << i));
                // next combination in lex order
                let mut k = degree;
                while k > 0 && idx[k - 1] == dim - degree + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                idx[k - 1] += 1;
                for t in k..degree {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
        ExtBasis { n, degree, subsets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset_mask(&self, pos: usize) -> u32 {
        self.subsets[pos]
    }

    pub fn subset(&self, pos: usize) -> Vec<usize> {
        mask_to_vec(self.subsets[pos])
    }

    /// Position of a subset given as a bitmask, via the combinatorial number
    /// system for lexicographic order.
    pub fn position_of_mask(&self, mask: u32) -> Option<usize> {
        if mask.count_ones() as usize != self.degree || mask >> (self.n + 1) != 0 {
            return None;
        }
        let dim = self.n + 1;
        let k = self.degree;
        let elems = mask_to_vec(mask);
        // Number of k-subsets lexicographically before `elems`.
        let mut pos = 0usize;
        let mut prev: isize = -1;
        for (t, &e) in elems.iter().enumerate() {
            for skipped in (prev + 1) as usize..e {
                pos += binomial(dim - skipped - 1, k - t - 1);
            }
            prev = e as isize;
        }
        Some(pos)
    }

    pub fn position(&self, subset: &[usize]) -> Result<usize, ExtAlgError> {
        let mask = vec_to_mask(subset, self.n)?;
        self.position_of_mask(mask)
            .ok_or_else(|| ExtAlgError::NotIncreasing(subset.to_vec()))
    }
}

fn mask_to_vec(mask: u32) -> Vec<usize> {
    (0..32).filter(|&i| mask >> i & 1 == 1).collect()
}

fn vec_to_mask(subset: &[usize], n: usize) -> Result<u32, ExtAlgError> {
    let mut mask = 0u32;
    for (t, &s) in subset.iter().enumerate() {
        if s > n {
            return Err(ExtAlgError::IndexOutOfRange {
                index: s,
                dim: n + 1,
            });
        }
        if t > 0 && subset[t - 1] >= s {
            return Err(ExtAlgError::NotIncreasing(subset.to_vec()));
        }
        mask |= 1 << s;
    }
    Ok(mask)
}

/// `e_j ∧ e_S` for a bitmask subset: `None` if `j ∈ S`, otherwise the sign
/// `(-1)^{#{s ∈ S : s < j}}` and `S ∪ {j}`.
pub fn wedge_mask(j: usize, mask: u32) -> Option<(i64, u32)> {
    if mask >> j & 1 == 1 {
        return None;
    }
    let smaller = (mask & ((1u32 << j) - 1)).count_ones();
    let sign = if smaller.is_multiple_of(2) { 1 } else { -1 };
    Some((sign, mask | 1 << j))
}

/// Left multiplication by the generator `e_j` on the basis element `e_S`.
pub fn left_mult_sign(
    n: usize,
    j: usize,
    subset: &[usize],
) -> Result<Option<(i64, Vec<usize>)>, ExtAlgError> {
    if j > n {
        return Err(ExtAlgError::IndexOutOfRange {
            index: j,
            dim: n + 1,
        });
    }
    let mask = vec_to_mask(subset, n)?;
    Ok(wedge_mask(j, mask).map(|(s, m)| (s, mask_to_vec(m))))
}

/// Matrix of `e_j ∧ - : ⋀^i V → ⋀^{i+1} V` in the lexicographic bases, shape
/// `C(n+1, i+1) x C(n+1, i)`.
pub fn generator_action(
    field: Field,
    j: usize,
    i: usize,
    n: usize,
) -> Result<DenseMatrix, ExtAlgError> {
    if j > n {
        return Err(ExtAlgError::IndexOutOfRange {
            index: j,
            dim: n + 1,
        });
    }
    if i > n {
        return Err(ExtAlgError::ZeroTarget {
            degree: i,
            dim: n + 1,
        });
    }
    let src = ExtBasis::new(n, i);
    let dst = ExtBasis::new(n, i + 1);
    let mut m = DenseMatrix::zeros(field, dst.len(), src.len());
    for col in 0..src.len() {
        if let Some((sign, target)) = wedge_mask(j, src.subset_mask(col)) {
            let row = dst
                .position_of_mask(target)
                .expect("wedge stays in degree i+1");
            m.set_i64(row, col, sign);
        }
    }
    Ok(m)
}

/// Matrix of left multiplication by `v = Σ v_j e_j` on `⋀^i V`.
pub fn vector_action(v: &[Scalar], i: usize, n: usize) -> Result<DenseMatrix, ExtAlgError> {
    if v.len() != n + 1 {
        return Err(ExtAlgError::LengthMismatch {
            got: v.len(),
            expected: n + 1,
        });
    }
    let field = v[0].field();
    let mut acc = DenseMatrix::zeros(field, binomial(n + 1, i + 1), binomial(n + 1, i));
    for (j, vj) in v.iter().enumerate() {
        if !vj.is_zero() {
            acc.add_scaled(vj, &generator_action(field, j, i, n)?)?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Q;

    #[test]
    fn basis_order_is_lexicographic() {
        let b = ExtBasis::new(3, 2);
        let subsets: Vec<Vec<usize>> = (0..b.len()).map(|k| b.subset(k)).collect();
        assert_eq!(
            subsets,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        for k in 0..b.len() {
            assert_eq!(b.position(&b.subset(k)).unwrap(), k);
        }
        assert_eq!(ExtBasis::new(3, 0).len(), 1);
        assert_eq!(ExtBasis::new(3, 4).len(), 1);
        assert_eq!(ExtBasis::new(3, 5).len(), 0);
    }

    #[test]
    fn sign_rule_examples() {
        assert_eq!(left_mult_sign(1, 1, &[0]).unwrap(), Some((-1, vec![0, 1])));
        assert_eq!(left_mult_sign(1, 0, &[1]).unwrap(), Some((1, vec![0, 1])));
        assert_eq!(left_mult_sign(1, 0, &[0]).unwrap(), None);
        assert!(left_mult_sign(1, 2, &[0]).is_err());
        assert!(left_mult_sign(2, 0, &[2, 1]).is_err());
    }

    #[test]
    fn generator_action_examples() {
        let m = generator_action(Q, 0, 0, 1).unwrap();
        assert_eq!(
            m,
            DenseMatrix::from_rows_i64(Q, &[vec![1], vec![0]]).unwrap()
        );

        // e_2 ∧ e_0 = −e_0 ∧ e_2: {0} ↦ −{0,2}, {1} ↦ −{1,2}, {2} ↦ 0;
        // rows ({0,1},{0,2},{1,2})
        let m = generator_action(Q, 2, 1, 2).unwrap();
        let expected =
            DenseMatrix::from_rows_i64(Q, &[vec![0, 0, 0], vec![-1, 0, 0], vec![0, -1, 0]])
                .unwrap();
        assert_eq!(m, expected);

        assert!(matches!(
            generator_action(Q, 0, 3, 2),
            Err(ExtAlgError::ZeroTarget { .. })
        ));
    }

    #[test]
    fn vector_action_examples() {
        let one = Q.one();
        let zero = Q.zero();
        let v = vec![one.clone(), one.clone(), zero.clone()];
        let m = vector_action(&v, 0, 2).unwrap();
        assert_eq!(
            m,
            DenseMatrix::from_rows_i64(Q, &[vec![1], vec![1], vec![0]]).unwrap()
        );

        let e0 = vec![one, zero.clone(), zero.clone(), zero];
        for i in 0..=3 {
            assert_eq!(
                vector_action(&e0, i, 3).unwrap(),
                generator_action(Q, 0, i, 3).unwrap()
            );
        }
        assert!(vector_action(&[Q.one()], 0, 2).is_err());
    }

    #[test]
    fn relations_and_shapes() {
        let f = Field::Fp(7);
        for n in 1..=4 {
            for i in 0..n {
                for j in 0..=n {
                    let a = generator_action(f, j, i, n).unwrap();
                    assert_eq!(a.shape(), (binomial(n + 1, i + 1), binomial(n + 1, i)));
                    let up = generator_action(f, j, i + 1, n).unwrap();
                    assert!(up.try_mul(&a).unwrap().is_zero());
                    for k in 0..=n {
                        if k == j {
                            continue;
                        }
                        let b = generator_action(f, k, i, n).unwrap();
                        let up_k = generator_action(f, k, i + 1, n).unwrap();
                        let s = up
                            .try_mul(&b)
                            .unwrap()
                            .try_add(&up_k.try_mul(&a).unwrap())
                            .unwrap();
                        assert!(
                            s.is_zero(),
                            "anticommutation failed n={n} i={i} j={j} k={k}"
                        );
                    }
                }
            }
        }
    }

    /// Exhaustive Koszul exactness over F_3 for n ≤ 2.
    #[test]
    fn koszul_exact_for_all_nonzero_vectors_over_f3() {
        let f = Field::Fp(3);
        for n in 1..=2usize {
            let total = 3usize.pow(n as u32 + 1);
            for code in 1..total {
                let v: Vec<Scalar> = (0..=n)
                    .map(|j| f.from_i64(((code / 3usize.pow(j as u32)) % 3) as i64))
                    .collect();
                for i in 0..=n {
                    let out = vector_action(&v, i, n).unwrap().rank();
                    let inn = if i == 0 {
                        0
                    } else {
                        vector_action(&v, i - 1, n).unwrap().rank()
                    };
                    assert_eq!(inn + out, binomial(n + 1, i), "n={n} v={code} i={i}");
                }
            }
        }
    }
}
