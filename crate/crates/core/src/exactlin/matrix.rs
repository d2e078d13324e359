use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

use super::elim;
use super::scalar::{reduce_i64, Field, Scalar};
use super::LinAlgError;

/// Dense row-major matrix over a single exact scalar domain.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    store: Store,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Store {
    Fp { p: u32, data: Vec<u32> },
    Q(Vec<BigRational>),
}

/// Reduced row echelon form of a matrix: the nonzero rows and their pivot
/// columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

impl DenseMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let store = match field {
            Field::Fp(p) => Store::Fp {
                p,
                data: vec![0; rows * cols],
            },
            Field::Q => Store::Q(vec![BigRational::zero(); rows * cols]),
        };
        DenseMatrix { rows, cols, store }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set_i64(i, i, 1);
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> i64,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                if v != 0 {
                    m.set_i64(i, j, v);
                }
            }
        }
        m
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_rows_i64(field: Field, rows: &[Vec<i64>]) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::Shape("ragged rows".into()));
        }
        Ok(Self::from_fn(field, rows.len(), cols, |i, j| rows[i][j]))
    }

    pub fn from_scalars(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[Scalar],
    ) -> Result<Self, LinAlgError> {
        if entries.len() != rows * cols {
            return Err(LinAlgError::Shape(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let mut m = Self::zeros(field, rows, cols);
        for (k, s) in entries.iter().enumerate() {
            m.set(k / cols.max(1), k % cols.max(1), s)?;
        }
        Ok(m)
    }

    /// Parses row-major decimal entries (`"num/den"` for rationals).
    pub fn from_strings(
        field: Field,
        rows: usize,
        cols: usize,
        entries: &[String],
    ) -> Result<Self, LinAlgError> {
        let scalars = entries
            .iter()
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_scalars(field, rows, cols, &scalars)
    }

    pub fn random<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        match field {
            Field::Fp(p) => DenseMatrix {
                rows,
                cols,
                store: Store::Fp {
                    p,
                    data: (0..rows * cols).map(|_| rng.gen_range(0..p)).collect(),
                },
            },
            Field::Q => Self::from_fn(field, rows, cols, |_, _| rng.gen_range(-9..=9)),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        match &self.store {
            Store::Fp { p, .. } => Field::Fp(*p),
            Store::Q(_) => Field::Q,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match &self.store {
            Store::Fp { p, data } => Scalar::Fp {
                value: data[k],
                modulus: *p,
            },
            Store::Q(data) => Scalar::Q(data[k].clone()),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: &Scalar) -> Result<(), LinAlgError> {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if value.field() != self.field() {
            return Err(LinAlgError::DomainMismatch(self.field(), value.field()));
        }
        let k = i * self.cols + j;
        match (&mut self.store, value) {
            (Store::Fp { data, .. }, Scalar::Fp { value, .. }) => data[k] = *value,
            (Store::Q(data), Scalar::Q(q)) => data[k] = q.clone(),
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn set_i64(&mut self, i: usize, j: usize, value: i64) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let k = i * self.cols + j;
        match &mut self.store {
            Store::Fp { p, data } => data[k] = reduce_i64(value, *p),
            Store::Q(data) => data[k] = BigRational::from_integer(BigInt::from(value)),
        }
    }

    /// `self[i][j] += value`.
    pub fn add_entry(&mut self, i: usize, j: usize, value: &Scalar) -> Result<(), LinAlgError> {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        if value.field() != self.field() {
            return Err(LinAlgError::DomainMismatch(self.field(), value.field()));
        }
        let k = i * self.cols + j;
        match (&mut self.store, value) {
            (Store::Fp { p, data }, Scalar::Fp { value, .. }) => {
                data[k] = ((data[k] as u64 + *value as u64) % *p as u64) as u32;
            }
            (Store::Q(data), Scalar::Q(q)) => data[k] += q,
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        match &self.store {
            Store::Fp { data, .. } => data.iter().all(|&x| x == 0),
            Store::Q(data) => data.iter().all(Zero::is_zero),
        }
    }

    /// Row-major entries rendered as decimal strings.
    pub fn entry_strings(&self) -> Vec<String> {
        match &self.store {
            Store::Fp { data, .. } => data.iter().map(u32::to_string).collect(),
            Store::Q(_) => (0..self.rows * self.cols)
                .map(|k| self.get(k / self.cols, k % self.cols).to_string())
                .collect(),
        }
    }

    /// Raw prime-field view: modulus and row-major canonical representatives.
    pub fn fp_data(&self) -> Option<(u32, &[u32])> {
        match &self.store {
            Store::Fp { p, data } => Some((*p, data)),
            Store::Q(_) => None,
        }
    }

    fn check_field(&self, other: &DenseMatrix) -> Result<(), LinAlgError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(LinAlgError::DomainMismatch(self.field(), other.field()))
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let (r, c) = (self.rows, self.cols);
        let store = match &self.store {
            Store::Fp { p, data } => {
                let mut out = vec![0u32; r * c];
                for i in 0..r {
                    for j in 0..c {
                        out[j * r + i] = data[i * c + j];
                    }
                }
                Store::Fp { p: *p, data: out }
            }
            Store::Q(data) => {
                let mut out = vec![BigRational::zero(); r * c];
                for i in 0..r {
                    for j in 0..c {
                        out[j * r + i] = data[i * c + j].clone();
                    }
                }
                Store::Q(out)
            }
        };
        DenseMatrix {
            rows: c,
            cols: r,
            store,
        }
    }

    pub fn try_mul(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinAlgError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(LinAlgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let store = match (&self.store, &other.store) {
            (Store::Fp { p, data: a }, Store::Fp { data: b, .. }) => {
                let p64 = *p as u64;
                let mut out = vec![0u32; n * m];
                let mut acc = vec![0u64; m];
                for i in 0..n {
                    acc.iter_mut().for_each(|x| *x = 0);
                    for t in 0..k {
                        let x = a[i * k + t] as u64;
                        if x == 0 {
                            continue;
                        }
                        for (s, &y) in acc.iter_mut().zip(&b[t * m..(t + 1) * m]) {
                            *s += x * y as u64;
                            if *s >= 1 << 63 {
                                *s %= p64;
                            }
                        }
                    }
                    for (o, s) in out[i * m..(i + 1) * m].iter_mut().zip(&acc) {
                        *o = (s % p64) as u32;
                    }
                }
                Store::Fp { p: *p, data: out }
            }
            (Store::Q(a), Store::Q(b)) => {
                let mut out = vec![BigRational::zero(); n * m];
                for i in 0..n {
                    for t in 0..k {
                        let x = &a[i * k + t];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..m {
                            let y = &b[t * m + j];
                            if !y.is_zero() {
                                out[i * m + j] += x * y;
                            }
                        }
                    }
                }
                Store::Q(out)
            }
            _ => unreachable!(),
        };
        Ok(DenseMatrix {
            rows: n,
            cols: m,
            store,
        })
    }

    fn zip_with(&self, other: &DenseMatrix, sub: bool) -> Result<DenseMatrix, LinAlgError> {
        self.check_field(other)?;
        if self.shape() != other.shape() {
            return Err(LinAlgError::Shape(format!(
                "shape mismatch {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let store = match (&self.store, &other.store) {
            (Store::Fp { p, data: a }, Store::Fp { data: b, .. }) => {
                let p64 = *p as u64;
                let data = a
                    .iter()
                    .zip(b)
                    .map(|(&x, &y)| {
                        let y = if sub {
                            (p64 - y as u64) % p64
                        } else {
                            y as u64
                        };
                        ((x as u64 + y) % p64) as u32
                    })
                    .collect();
                Store::Fp { p: *p, data }
            }
            (Store::Q(a), Store::Q(b)) => Store::Q(
                a.iter()
                    .zip(b)
                    .map(|(x, y)| if sub { x - y } else { x + y })
                    .collect(),
            ),
            _ => unreachable!(),
        };
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            store,
        })
    }

    pub fn try_add(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinAlgError> {
        self.zip_with(other, false)
    }

    pub fn try_sub(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinAlgError> {
        self.zip_with(other, true)
    }

    pub fn scale(&self, s: &Scalar) -> Result<DenseMatrix, LinAlgError> {
        if s.field() != self.field() {
            return Err(LinAlgError::DomainMismatch(self.field(), s.field()));
        }
        let store = match (&self.store, s) {
            (Store::Fp { p, data }, Scalar::Fp { value, .. }) => Store::Fp {
                p: *p,
                data: data
                    .iter()
                    .map(|&x| (x as u64 * *value as u64 % *p as u64) as u32)
                    .collect(),
            },
            (Store::Q(data), Scalar::Q(q)) => Store::Q(data.iter().map(|x| x * q).collect()),
            _ => unreachable!(),
        };
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            store,
        })
    }

    /// `self += s * other`, in place.
    pub fn add_scaled(&mut self, s: &Scalar, other: &DenseMatrix) -> Result<(), LinAlgError> {
        self.check_field(other)?;
        if s.field() != self.field() {
            return Err(LinAlgError::DomainMismatch(self.field(), s.field()));
        }
        if self.shape() != other.shape() {
            return Err(LinAlgError::Shape("add_scaled shape mismatch".into()));
        }
        match (&mut self.store, &other.store, s) {
            (Store::Fp { p, data }, Store::Fp { data: b, .. }, Scalar::Fp { value, .. }) => {
                let p64 = *p as u64;
                let v = *value as u64;
                if v != 0 {
                    for (a, &y) in data.iter_mut().zip(b) {
                        *a = ((*a as u64 + v * y as u64) % p64) as u32;
                    }
                }
            }
            (Store::Q(data), Store::Q(b), Scalar::Q(q)) => {
                if !q.is_zero() {
                    for (a, y) in data.iter_mut().zip(b) {
                        if !y.is_zero() {
                            *a += q * y;
                        }
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }

    /// Kronecker product `self ⊗ other`: entry `((i, k), (j, l))` sits at row
    /// `i * other.rows + k`, column `j * other.cols + l`.
    pub fn kron(&self, other: &DenseMatrix) -> Result<DenseMatrix, LinAlgError> {
        self.check_field(other)?;
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = DenseMatrix::zeros(self.field(), r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * r2 + k, j * c2 + l, &a.try_mul(&b)?)?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn vstack(field: Field, parts: &[&DenseMatrix]) -> Result<DenseMatrix, LinAlgError> {
        let cols = parts.first().map_or(0, |m| m.cols);
        let rows = parts.iter().map(|m| m.rows).sum();
        if parts.iter().any(|m| m.cols != cols) {
            return Err(LinAlgError::Shape("vstack column mismatch".into()));
        }
        if let Some(m) = parts.iter().find(|m| m.field() != field) {
            return Err(LinAlgError::DomainMismatch(field, m.field()));
        }
        let store = match field {
            Field::Fp(p) => Store::Fp {
                p,
                data: parts
                    .iter()
                    .flat_map(|m| m.fp_data().unwrap().1.iter().copied())
                    .collect(),
            },
            Field::Q => Store::Q(
                parts
                    .iter()
                    .flat_map(|m| match &m.store {
                        Store::Q(d) => d.iter().cloned(),
                        Store::Fp { .. } => unreachable!(),
                    })
                    .collect(),
            ),
        };
        Ok(DenseMatrix { rows, cols, store })
    }

    pub fn hstack(field: Field, parts: &[&DenseMatrix]) -> Result<DenseMatrix, LinAlgError> {
        let ts: Vec<DenseMatrix> = parts.iter().map(|m| m.transpose()).collect();
        let refs: Vec<&DenseMatrix> = ts.iter().collect();
        Ok(Self::vstack(field, &refs)?.transpose())
    }

    /// Matrix made of the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.field(), idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                // same field by construction
                out.set(r, j, &self.get(i, j)).unwrap();
            }
        }
        out
    }

    /// Matrix made of the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> DenseMatrix {
        self.transpose().select_rows(idx).transpose()
    }

    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Fp { p, data } => elim::fp_rank(*p, self.rows, self.cols, data),
            Store::Q(data) => elim::q_rank(self.rows, self.cols, data),
        }
    }

    pub fn rref(&self) -> Rref {
        let cols = self.cols;
        match &self.store {
            Store::Fp { p, data } => {
                let (rows, pivots) = elim::fp_rref(*p, self.rows, cols, data);
                let r = rows.len();
                Rref {
                    matrix: DenseMatrix {
                        rows: r,
                        cols,
                        store: Store::Fp {
                            p: *p,
                            data: rows.into_iter().flatten().collect(),
                        },
                    },
                    pivots,
                }
            }
            Store::Q(data) => {
                let (rows, pivots) = elim::q_rref(self.rows, cols, data);
                let r = rows.len();
                Rref {
                    matrix: DenseMatrix {
                        rows: r,
                        cols,
                        store: Store::Q(rows.into_iter().flatten().collect()),
                    },
                    pivots,
                }
            }
        }
    }

    /// Right kernel: rows form a basis of `{x : M x = 0}`, normalized to
    /// reduced echelon form. Asserts rank–nullity.
    pub fn kernel_basis(&self) -> DenseMatrix {
        let field = self.field();
        let Rref { matrix: r, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &k in &pivots {
            is_pivot[k] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&j| !is_pivot[j]).collect();
        let mut basis = DenseMatrix::zeros(field, free.len(), self.cols);
        for (b, &f) in free.iter().enumerate() {
            basis.set_i64(b, f, 1);
            for (row, &k) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if !v.is_zero() {
                    basis.set(b, k, &v.neg()).unwrap();
                }
            }
        }
        let out = if basis.rows > 0 {
            basis.rref().matrix
        } else {
            basis
        };
        assert_eq!(
            out.rows + pivots.len(),
            self.cols,
            "rank-nullity violated in kernel computation"
        );
        out
    }

    /// Row `i` as a standalone `1 x cols` matrix.
    pub fn row(&self, i: usize) -> DenseMatrix {
        self.select_rows(&[i])
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "DenseMatrix<{}> {}x{} [",
            self.field(),
            self.rows,
            self.cols
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A particular solution of `A X = B` together with a kernel basis of `A`.
/// Every solution is `X + K^T Y` for an arbitrary `Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: DenseMatrix,
    pub kernel: DenseMatrix,
}

/// Solves `A X = B`. Returns `Ok(None)` when the system is inconsistent.
pub fn solve_right(
    a: &DenseMatrix,
    b: &DenseMatrix,
) -> Result<Option<AffineSolution>, LinAlgError> {
    a.check_field(b)?;
    if a.rows != b.rows {
        return Err(LinAlgError::Shape(format!(
            "solve_right needs equal row counts, got {} and {}",
            a.rows, b.rows
        )));
    }
    let field = a.field();
    let aug = DenseMatrix::hstack(field, &[a, b])?;
    let Rref { matrix: r, pivots } = aug.rref();
    if pivots.iter().any(|&k| k >= a.cols) {
        return Ok(None);
    }
    let mut x = DenseMatrix::zeros(field, a.cols, b.cols);
    for (row, &k) in pivots.iter().enumerate() {
        for j in 0..b.cols {
            x.set(k, j, &r.get(row, a.cols + j))?;
        }
    }
    Ok(Some(AffineSolution {
        particular: x,
        kernel: a.kernel_basis(),
    }))
}
