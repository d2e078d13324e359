//! The linear complex `L̃(P)`: `P_i ⊗ O(i) → P_{i+1} ⊗ O(i+1)` with
//! differential `Σ_j x_j ⊗ A_j^{(i)}`, its fibers at points of `P^n`, and
//! faithfulness scans.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::emod::{chi, GradedEModule};
use crate::exactlin::{inv_mod, DenseMatrix, Field, LinAlgError, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BggError {
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { got: usize, expected: usize },
    #[error("slices must share one shape and field")]
    SliceShape,
    #[error("differential {i} has shape {got:?}, expected {expected:?}")]
    DiffShape {
        i: usize,
        got: (usize, usize),
        expected: (usize, usize),
    },
    #[error("D_{} ∘ D_{i} is not zero", i + 1)]
    CompositeNonzero { i: usize },
    #[error("exhaustive scans need a prime field, got {0}")]
    NotFinite(Field),
    #[error("exhaustive scan of {points} points exceeds the budget of {budget}")]
    BudgetExceeded { points: u64, budget: u64 },
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// `Σ_j x_j M_j` stored as its `n + 1` coefficient slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixOfLinearForms {
    rows: usize,
    cols: usize,
    slices: Vec<DenseMatrix>,
}

impl MatrixOfLinearForms {
    pub fn new(slices: Vec<DenseMatrix>) -> Result<Self, BggError> {
        let Some(first) = slices.first() else {
            return Err(BggError::SliceShape);
        };
        let (rows, cols) = first.shape();
        let field = first.field();
        if slices
            .iter()
            .any(|s| s.shape() != (rows, cols) || s.field() != field)
        {
            return Err(BggError::SliceShape);
        }
        Ok(MatrixOfLinearForms { rows, cols, slices })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.slices[0].field()
    }

    pub fn slices(&self) -> &[DenseMatrix] {
        &self.slices
    }

    pub fn slice(&self, j: usize) -> &DenseMatrix {
        &self.slices[j]
    }
}

/// A complex of twisted free sheaves with linear differentials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplex {
    field: Field,
    n: usize,
    /// `(twist, rank)` of each term.
    terms: Vec<(i64, usize)>,
    diffs: Vec<MatrixOfLinearForms>,
}

impl LinearComplex {
    /// Checks shapes and that consecutive differentials compose to zero as
    /// quadratic forms: `N_j M_k + N_k M_j = 0` for all `j ≤ k`.
    pub fn new(
        field: Field,
        n: usize,
        terms: Vec<(i64, usize)>,
        diffs: Vec<MatrixOfLinearForms>,
    ) -> Result<Self, BggError> {
        assert_eq!(
            diffs.len() + 1,
            terms.len(),
            "one differential between consecutive terms"
        );
        for (i, d) in diffs.iter().enumerate() {
            let expected = (terms[i + 1].1, terms[i].1);
            if d.field() != field {
                return Err(LinAlgError::DomainMismatch(field, d.field()).into());
            }
            if (d.rows, d.cols) != expected || d.slices.len() != n + 1 {
                return Err(BggError::DiffShape {
                    i,
                    got: (d.rows, d.cols),
                    expected,
                });
            }
        }
        for i in 0..diffs.len().saturating_sub(1) {
            let (m, nn) = (&diffs[i], &diffs[i + 1]);
            for j in 0..=n {
                for k in j..=n {
                    let mut s = nn.slices[j].try_mul(&m.slices[k])?;
                    if k != j {
                        s = s.try_add(&nn.slices[k].try_mul(&m.slices[j])?)?;
                    }
                    if !s.is_zero() {
                        return Err(BggError::CompositeNonzero { i });
                    }
                }
            }
        }
        Ok(LinearComplex {
            field,
            n,
            terms,
            diffs,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Index of the last term.
    pub fn c(&self) -> usize {
        self.diffs.len()
    }

    pub fn terms(&self) -> &[(i64, usize)] {
        &self.terms
    }

    pub fn diffs(&self) -> &[MatrixOfLinearForms] {
        &self.diffs
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Term `i` is `P_i ⊗ O(i)`, and slice `j` of `D_i` is `A_j^{(i)}`.
pub fn bgg_complex(p: &GradedEModule) -> LinearComplex {
    let terms = p
        .piece_dims()
        .iter()
        .enumerate()
        .map(|(i, &d)| (i as i64, d))
        .collect();
    let diffs = p
        .actions()
        .iter()
        .map(|row| MatrixOfLinearForms::new(row.clone()).expect("module actions share a shape"))
        .collect();
    LinearComplex::new(p.field(), p.n(), terms, diffs)
        .expect("exterior relations make the composite vanish")
}

fn check_point(v: &[Scalar], n: usize) -> Result<(), BggError> {
    if v.len() != n + 1 {
        return Err(BggError::PointLength {
            got: v.len(),
            expected: n + 1,
        });
    }
    if v.iter().all(Scalar::is_zero) {
        return Err(BggError::ZeroPoint);
    }
    Ok(())
}

/// `Σ_j v_j M_j`.
pub fn evaluate_fiber(d: &MatrixOfLinearForms, v: &[Scalar]) -> Result<DenseMatrix, BggError> {
    check_point(v, d.slices.len() - 1)?;
    let mut acc = DenseMatrix::zeros(d.field(), d.rows, d.cols);
    for (m, x) in d.slices.iter().zip(v) {
        if !x.is_zero() {
            acc.add_scaled(x, m)?;
        }
    }
    Ok(acc)
}

/// Smallest `i < c` with `rank D_{i−1}(v) + rank D_i(v) ≠ dim term_i`.
pub fn first_inexact_degree(c: &LinearComplex, v: &[Scalar]) -> Result<Option<usize>, BggError> {
    check_point(v, c.n)?;
    let mut prev = 0;
    for (i, d) in c.diffs.iter().enumerate() {
        let r = evaluate_fiber(d, v)?.rank();
        if prev + r != c.terms[i].1 {
            return Ok(Some(i));
        }
        prev = r;
    }
    Ok(None)
}

/// The fiber complex at `[v]` is exact below `c` (so its cokernel has the
/// expected rank at `[v]`).
pub fn exact_at_point(c: &LinearComplex, v: &[Scalar]) -> Result<bool, BggError> {
    Ok(first_inexact_degree(c, v)?.is_none())
}

/// How points are chosen in [`faithfulness_scan`].
#[serde_as]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ScanMode {
    /// Every point of `P^n(F_q)`, refused above `budget` points.
    Exhaustive { budget: u64 },
    /// `samples` distinct seeded points.
    Random {
        samples: u64,
        #[serde_as(as = "DisplayFromStr")]
        seed: u64,
    },
}

/// Default cap on exhaustive scans.
pub const DEFAULT_EXHAUSTIVE_BUDGET: u64 = 2_000_000;

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointFailure {
    /// Position in enumeration (or sampling) order.
    pub index: u64,
    /// Coordinates; canonical representatives over `F_p`, integers over `Q`.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub point: Vec<i64>,
    pub degree: usize,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    #[serde(flatten)]
    pub mode: ScanMode,
    #[serde_as(as = "DisplayFromStr")]
    pub field: Field,
    /// Degree of the extension of the scalar field the points live in.
    pub extension_degree: u32,
    pub points_checked: u64,
    pub failures: Vec<PointFailure>,
}

impl FaithfulnessReport {
    pub fn faithful(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `(q^{n+1} − 1)/(q − 1)`, saturating.
pub fn projective_point_count(q: u64, n: usize) -> u64 {
    let mut total: u64 = 0;
    let mut pow: u64 = 1;
    for _ in 0..=n {
        total = total.saturating_add(pow);
        pow = pow.saturating_mul(q);
    }
    total
}

/// The point of `P^n(F_q)` at position `index` in lexicographic order of
/// normalized representatives (first nonzero coordinate equal to 1): the
/// block with leading 1 in position `k` comes before the block with leading
/// 1 in position `k − 1`, and within a block the trailing coordinates count
/// up in base `q`.
pub fn projective_point(q: u64, n: usize, mut index: u64, out: &mut [u32]) {
    for k in (0..=n).rev() {
        let block = q.pow((n - k) as u32);
        if index < block {
            out[..k].fill(0);
            out[k] = 1;
            let mut rest = index;
            for slot in out[k + 1..].iter_mut().rev() {
                *slot = (rest % q) as u32;
                rest /= q;
            }
            return;
        }
        index -= block;
    }
    panic!("point index out of range");
}

/// Allocation-free evaluation of a complex over `F_p`.
struct FpScanner {
    p: u32,
    n: usize,
    dims: Vec<usize>,
    /// `slices[i][j]`: row-major data of slice `j` of `D_i`.
    slices: Vec<Vec<Vec<u32>>>,
    buf: Vec<u64>,
    mat: Vec<u32>,
}

impl FpScanner {
    fn new(c: &LinearComplex, p: u32) -> Self {
        let slices: Vec<Vec<Vec<u32>>> = c
            .diffs
            .iter()
            .map(|d| {
                d.slices
                    .iter()
                    .map(|m| m.fp_data().expect("prime field").1.to_vec())
                    .collect()
            })
            .collect();
        let largest = c.diffs.iter().map(|d| d.rows * d.cols).max().unwrap_or(0);
        FpScanner {
            p,
            n: c.n,
            dims: c.terms.iter().map(|t| t.1).collect(),
            slices,
            buf: vec![0; largest],
            mat: vec![0; largest],
        }
    }

    fn first_failure(&mut self, v: &[u32]) -> Option<usize> {
        let mut prev = 0;
        for i in 0..self.slices.len() {
            let (rows, cols) = (self.dims[i + 1], self.dims[i]);
            let len = rows * cols;
            let p = self.p as u64;
            let buf = &mut self.buf[..len];
            buf.fill(0);
            // entries < p < 2^31 and n + 1 ≤ 31 summands fit in u64
            for (j, &x) in v.iter().enumerate().take(self.n + 1) {
                if x == 0 {
                    continue;
                }
                for (b, &m) in buf.iter_mut().zip(&self.slices[i][j]) {
                    *b += x as u64 * m as u64;
                }
            }
            for (m, b) in self.mat[..len].iter_mut().zip(buf.iter()) {
                *m = (b % p) as u32;
            }
            let r = small_rank(&mut self.mat[..len], rows, cols, self.p);
            if prev + r != cols {
                return Some(i);
            }
            prev = r;
        }
        None
    }
}

/// In-place rank of a small row-major matrix over `F_p`.
fn small_rank(m: &mut [u32], rows: usize, cols: usize, p: u32) -> usize {
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| m[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for k in col..cols {
                m.swap(piv * cols + k, rank * cols + k);
            }
        }
        let inv = inv_mod(m[rank * cols + col], p) as u64;
        for r in rank + 1..rows {
            let x = m[r * cols + col] as u64;
            if x == 0 {
                continue;
            }
            let f = p64 - x * inv % p64;
            for k in col..cols {
                let t = (m[r * cols + k] as u64 + f * m[rank * cols + k] as u64) % p64;
                m[r * cols + k] = t as u32;
            }
        }
        rank += 1;
    }
    rank
}

const CHUNK: u64 = 1 << 14;

fn scan_range(c: &LinearComplex, p: u32, start: u64, end: u64) -> Vec<PointFailure> {
    let mut scanner = FpScanner::new(c, p);
    let mut point = vec![0u32; c.n + 1];
    let mut out = Vec::new();
    for index in start..end {
        projective_point(p as u64, c.n, index, &mut point);
        if let Some(degree) = scanner.first_failure(&point) {
            out.push(PointFailure {
                index,
                point: point.iter().map(|&x| x as i64).collect(),
                degree,
            });
        }
    }
    out
}

fn exhaustive(c: &LinearComplex, p: u32, total: u64) -> Vec<PointFailure> {
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|k| (k * CHUNK, ((k + 1) * CHUNK).min(total)))
        .collect();
    #[cfg(feature = "parallel")]
    let parts: Vec<Vec<PointFailure>> = {
        use rayon::prelude::*;
        chunks
            .par_iter()
            .map(|&(s, e)| scan_range(c, p, s, e))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<Vec<PointFailure>> = chunks
        .iter()
        .map(|&(s, e)| scan_range(c, p, s, e))
        .collect();
    // chunks are in index order, so concatenation is sorted
    parts.into_iter().flatten().collect()
}

/// Normalizes so the first nonzero coordinate is 1 (over `F_p`).
fn normalize_fp(v: &mut [u32], p: u32) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        let inv = inv_mod(lead, p) as u64;
        for x in v.iter_mut() {
            *x = (*x as u64 * inv % p as u64) as u32;
        }
    }
}

/// Bound on random integer coordinates over `Q`.
const Q_SAMPLE_BOUND: i64 = 50;

/// Checks exactness below `c` at a set of points of `P^n`.
///
/// Failures are reported in enumeration order whatever the number of
/// workers.
pub fn faithfulness_scan(
    c: &LinearComplex,
    mode: ScanMode,
) -> Result<FaithfulnessReport, BggError> {
    let field = c.field;
    let (points_checked, failures) = match mode {
        ScanMode::Exhaustive { budget } => {
            let Some(p) = field.modulus() else {
                return Err(BggError::NotFinite(field));
            };
            let total = projective_point_count(p as u64, c.n);
            if total > budget {
                return Err(BggError::BudgetExceeded {
                    points: total,
                    budget,
                });
            }
            (total, exhaustive(c, p, total))
        }
        ScanMode::Random { samples, seed } => random_scan(c, field, samples, seed)?,
    };
    Ok(FaithfulnessReport {
        mode,
        field,
        extension_degree: 1,
        points_checked,
        failures,
    })
}

fn random_scan(
    c: &LinearComplex,
    field: Field,
    samples: u64,
    seed: u64,
) -> Result<(u64, Vec<PointFailure>), BggError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut failures = Vec::new();
    let n = c.n;
    match field {
        Field::Fp(p) => {
            let target = samples.min(projective_point_count(p as u64, n));
            let mut scanner = FpScanner::new(c, p);
            let mut v = vec![0u32; n + 1];
            while (seen.len() as u64) < target {
                v.iter_mut().for_each(|x| *x = rng.gen_range(0..p));
                if v.iter().all(|&x| x == 0) {
                    continue;
                }
                normalize_fp(&mut v, p);
                let key: Vec<i64> = v.iter().map(|&x| x as i64).collect();
                if !seen.insert(key.clone()) {
                    continue;
                }
                if let Some(degree) = scanner.first_failure(&v) {
                    failures.push(PointFailure {
                        index: seen.len() as u64 - 1,
                        point: key,
                        degree,
                    });
                }
            }
            Ok((target, failures))
        }
        Field::Q => {
            while (seen.len() as u64) < samples {
                let mut key: Vec<i64> = (0..=n)
                    .map(|_| rng.gen_range(-Q_SAMPLE_BOUND..=Q_SAMPLE_BOUND))
                    .collect();
                let g = key.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
                if g == 0 {
                    continue;
                }
                let lead = *key.iter().find(|&&x| x != 0).unwrap();
                let g = if lead < 0 { -g } else { g };
                key.iter_mut().for_each(|x| *x /= g);
                if !seen.insert(key.clone()) {
                    continue;
                }
                let v: Vec<Scalar> = key.iter().map(|&x| field.from_i64(x)).collect();
                if let Some(degree) = first_inexact_degree(c, &v)? {
                    failures.push(PointFailure {
                        index: seen.len() as u64 - 1,
                        point: key,
                        degree,
                    });
                }
            }
            Ok((samples, failures))
        }
    }
}

/// `χ_c`, the rank of the cokernel sheaf of a faithful module.
pub fn bundle_rank(p: &GradedEModule) -> i64 {
    chi(p).top()
}
