//! Elimination kernels behind [`DenseMatrix`](super::DenseMatrix).
//!
//! Prime fields use plain elimination on `u64` accumulators with lazy
//! reduction: a row only gets reduced mod `p` when one of its entries is
//! inspected or the accumulated bound would overflow. Rationals use
//! fraction-free (Bareiss) elimination on integer rows, converting to
//! rationals only for the final back-substitution.
//!
//! Pivoting is always "first nonzero in column order", so echelon forms are
//! reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::inv_mod;

/// Incremental echelon basis over `F_p`.
///
/// Basis vectors are stored as tails starting at their pivot column, with a
/// leading 1.
pub(crate) struct FpEchelon {
    p: u32,
    len: usize,
    pivot_of: Vec<u32>,
    rows: Vec<(usize, Vec<u32>)>,
    buf: Vec<u64>,
    lazy_limit: u64,
}

const NO_PIVOT: u32 = u32::MAX;

impl FpEchelon {
    pub(crate) fn new(p: u32, len: usize) -> Self {
        let pm1 = (p - 1) as u64;
        let lazy_limit = if pm1 == 0 {
            u64::MAX
        } else {
            ((u64::MAX - p as u64) / (pm1 * pm1)).max(1)
        };
        FpEchelon {
            p,
            len,
            pivot_of: vec![NO_PIVOT; len],
            rows: Vec::new(),
            buf: vec![0; len],
            lazy_limit,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    /// Reduces `v` (entries already in `[0, p)`) against the basis; keeps it
    /// if it is independent. Returns whether it was kept.
    pub(crate) fn insert(&mut self, v: &[u32]) -> bool {
        debug_assert_eq!(v.len(), self.len);
        for (b, &x) in self.buf.iter_mut().zip(v) {
            *b = x as u64;
        }
        self.insert_buf()
    }

    /// Same as [`insert`](Self::insert) but reads a column of a row-major
    /// matrix.
    pub(crate) fn insert_strided(&mut self, data: &[u32], start: usize, stride: usize) {
        for (k, b) in self.buf.iter_mut().enumerate() {
            *b = data[start + k * stride] as u64;
        }
        self.insert_buf();
    }

    fn insert_buf(&mut self) -> bool {
        let p = self.p as u64;
        let len = self.len;
        let mut pending = 0u64;
        for k in 0..len {
            if self.buf[k] == 0 {
                continue;
            }
            let x = self.buf[k] % p;
            self.buf[k] = x;
            if x == 0 {
                continue;
            }
            let piv = self.pivot_of[k];
            if piv == NO_PIVOT {
                let inv = inv_mod(x as u32, self.p) as u64;
                let tail: Vec<u32> = self.buf[k..]
                    .iter()
                    .map(|&b| ((b % p) * inv % p) as u32)
                    .collect();
                self.pivot_of[k] = self.rows.len() as u32;
                self.rows.push((k, tail));
                return true;
            }
            let f = p - x;
            let tail = &self.rows[piv as usize].1;
            self.buf[k] = 0;
            for (b, &t) in self.buf[k + 1..].iter_mut().zip(&tail[1..]) {
                *b += f * t as u64;
            }
            pending += 1;
            if pending >= self.lazy_limit {
                for b in &mut self.buf[k + 1..] {
                    *b %= p;
                }
                pending = 0;
            }
        }
        false
    }

    /// Fully reduced row echelon form: rows sorted by pivot, each pivot
    /// column zero outside its row. Returns full-length rows and pivots.
    pub(crate) fn into_rref(self) -> (Vec<Vec<u32>>, Vec<usize>) {
        let p = self.p as u64;
        let len = self.len;
        let mut rows: Vec<(usize, Vec<u32>)> = self
            .rows
            .into_iter()
            .map(|(k, tail)| {
                let mut full = vec![0u32; len];
                full[k..].copy_from_slice(&tail);
                (k, full)
            })
            .collect();
        rows.sort_by_key(|(k, _)| *k);
        for i in (0..rows.len()).rev() {
            let (ki, row_i) = {
                let (k, r) = &rows[i];
                (*k, r.clone())
            };
            for (_, row_r) in rows[..i].iter_mut() {
                let x = row_r[ki] as u64;
                if x == 0 {
                    continue;
                }
                let f = p - x;
                for (a, &b) in row_r[ki..].iter_mut().zip(&row_i[ki..]) {
                    *a = ((*a as u64 + f * b as u64) % p) as u32;
                }
            }
        }
        let pivots = rows.iter().map(|(k, _)| *k).collect();
        (rows.into_iter().map(|(_, r)| r).collect(), pivots)
    }
}

/// Rank of a row-major `rows x cols` matrix over `F_p`. Streams along the
/// longer side so the stored basis is as short as possible.
pub(crate) fn fp_rank(p: u32, rows: usize, cols: usize, data: &[u32]) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    if cols <= rows {
        let mut ech = FpEchelon::new(p, cols);
        for r in 0..rows {
            ech.insert(&data[r * cols..(r + 1) * cols]);
            if ech.is_full() {
                break;
            }
        }
        ech.rank()
    } else {
        let mut ech = FpEchelon::new(p, rows);
        for c in 0..cols {
            ech.insert_strided(data, c, cols);
            if ech.is_full() {
                break;
            }
        }
        ech.rank()
    }
}

/// Reduced row echelon form over `F_p`: nonzero rows and pivot columns.
pub(crate) fn fp_rref(
    p: u32,
    rows: usize,
    cols: usize,
    data: &[u32],
) -> (Vec<Vec<u32>>, Vec<usize>) {
    let mut ech = FpEchelon::new(p, cols);
    if cols > 0 {
        for r in 0..rows {
            ech.insert(&data[r * cols..(r + 1) * cols]);
            if ech.is_full() {
                break;
            }
        }
    }
    ech.into_rref()
}

/// Scales each rational row by the lcm of its denominators.
fn integer_rows(rows: usize, cols: usize, data: &[BigRational]) -> Vec<Vec<BigInt>> {
    (0..rows)
        .map(|r| {
            let row = &data[r * cols..(r + 1) * cols];
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect()
}

/// Fraction-free forward elimination. Returns the echelon rows (in pivot
/// order) and their pivot columns.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let (head, tail) = a.split_at_mut(r + 1);
        let prow = &head[r];
        let pval = prow[col].clone();
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..cols {
                let v = &pval * &row[j] - &lead * &prow[j];
                row[j] = v / &prev;
            }
        }
        prev = pval;
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub(crate) fn q_rank(rows: usize, cols: usize, data: &[BigRational]) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    bareiss(integer_rows(rows, cols, data), cols).1.len()
}

pub(crate) fn q_rref(
    rows: usize,
    cols: usize,
    data: &[BigRational],
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    if rows == 0 || cols == 0 {
        return (Vec::new(), Vec::new());
    }
    let (ech, pivots) = bareiss(integer_rows(rows, cols, data), cols);
    let mut out: Vec<Vec<BigRational>> = ech
        .into_iter()
        .zip(&pivots)
        .map(|(row, &k)| {
            let lead = row[k].clone();
            row.into_iter()
                .map(|x| BigRational::new(x, lead.clone()))
                .collect()
        })
        .collect();
    for i in (0..out.len()).rev() {
        let ki = pivots[i];
        let row_i = out[i].clone();
        for row_r in out[..i].iter_mut() {
            if row_r[ki].is_zero() {
                continue;
            }
            let f = row_r[ki].clone();
            for j in ki..cols {
                if !row_i[j].is_zero() {
                    row_r[j] -= &f * &row_i[j];
                }
            }
        }
    }
    (out, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lazy_limit_small_and_large_primes() {
        let e = FpEchelon::new(2, 3);
        assert!(e.lazy_limit > 1 << 40);
        let e = FpEchelon::new(2147483647, 3);
        assert!(e.lazy_limit >= 1 && e.lazy_limit < 8);
    }

    #[test]
    fn large_prime_reduction_is_exact() {
        // Forces frequent reductions: rows of the Vandermonde type over a
        // prime close to 2^31 have full rank.
        let p = 2147483647u32;
        let n = 12;
        let data: Vec<u32> = (0..n)
            .flat_map(|i| {
                (0..n).map(move |j| super::super::scalar::pow_mod(i as u32 + 2, j as u32, p))
            })
            .collect();
        assert_eq!(fp_rank(p, n, n, &data), n);
    }

    #[test]
    fn bareiss_rank_deficient() {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let data: Vec<BigRational> = [1, 2, 3, 2, 4, 6, 1, 0, 1].iter().map(|&x| q(x)).collect();
        assert_eq!(q_rank(3, 3, &data), 2);
        let (rref, piv) = q_rref(3, 3, &data);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(rref[0], vec![q(1), q(0), q(1)]);
        assert_eq!(rref[1], vec![q(0), q(1), q(1)]);
    }
}
