//! Cohomology of twists of the cokernel sheaf of a linear complex on `P^n`.
//!
//! For a resolution `0 → T_0 → … → T_c → F → 0` with `T_i = O(i)^{r_i}` and
//! `c < n`, the hypercohomology spectral sequence has only the rows `q = 0`
//! and `q = n`, and no differential can connect them. Hence
//!
//! ```text
//! dim H^q(F(t)) = E₂^{c+q,0} + E₂^{c+q−n,n}
//! ```
//!
//! where row 0 is the complex of strands `S_{t+i} ⊗ P_i` and row `n` is the
//! complex `H^n(O(t+i)) ⊗ P_i`, whose maps are dual to strands of the
//! transposed differentials in degree `−(t+i) − n − 2`. Only ranks are ever
//! needed.
//!
//! Monomials of a fixed degree are ordered graded-lexicographically with
//! `x_0` largest (`x_0^d` first); strand coordinates are
//! `monomial_position · dim P + basis_index`.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::bgg::{LinearComplex, MatrixOfLinearForms};
use crate::exactlin::{DenseMatrix, Field, Scalar};
use crate::extalg::{binomial, wedge_mask, ExtBasis};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CohError {
    #[error("cohomological degree {q} is outside [0, {n}]")]
    DegreeOutOfRange { q: usize, n: usize },
    #[error("complex of length {c} is not supported on P^{n} (need c < n)")]
    TooLong { c: usize, n: usize },
    #[error("empty twist window [{lo}, {hi}]")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("Euler characteristic mismatch at t = {t}: table gives {table}, resolution gives {expected}")]
    EulerMismatch { t: i64, table: i64, expected: i64 },
    #[error("negative homology dimension at (q = {q}, t = {t})")]
    NegativeDimension { q: usize, t: i64 },
    #[error("structural vanishing violated: H^{q}(F({t})) = {value}")]
    StructuralVanishing { q: usize, t: i64, value: u64 },
    #[error("hd certification expects length c = l = {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("certification failed at (q = {q}, t = {t}): found {found}, expected {expected}")]
    CertificationFailed {
        q: usize,
        t: i64,
        found: u64,
        expected: u64,
    },
    #[error("subspace has dimension {got}, expected at most {max} in an ambient of the same size")]
    BadSubspace { got: usize, max: usize },
}

/// `C(n + d, n)` as a polynomial in `d` (zero at `d = −1, …, −n`, signed
/// below).
pub fn euler_line(n: usize, d: i64) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for k in 1..=n as i128 {
        num *= d as i128 + k;
        den *= k;
    }
    num / den
}

/// Number of monomials of degree `d` in `n + 1` variables.
pub fn num_monomials(n: usize, d: i64) -> usize {
    if d < 0 {
        0
    } else {
        binomial(n + d as usize, n)
    }
}

/// `dim H^q(P^n, O(d))`.
pub fn line_coh(n: usize, d: i64, q: usize) -> Result<u64, CohError> {
    if q > n {
        return Err(CohError::DegreeOutOfRange { q, n });
    }
    Ok(if q == 0 {
        num_monomials(n, d) as u64
    } else if q == n {
        num_monomials(n, -d - n as i64 - 1) as u64
    } else {
        0
    })
}

/// Exponent vectors of degree `d` in graded-lex order.
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u32>> {
    fn rec(prefix: &mut Vec<u32>, left: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(num_monomials(n, d as i64));
    rec(&mut Vec::with_capacity(n + 1), d as u32, n + 1, &mut out);
    out
}

/// Position of an exponent vector among the monomials of its degree.
pub fn monomial_position(m: &[u32]) -> usize {
    let vars = m.len();
    let mut left: u32 = m.iter().sum();
    let mut pos = 0;
    for (k, &e) in m.iter().enumerate().take(vars - 1) {
        let rest = vars - k - 1;
        for bigger in e + 1..=left {
            pos += binomial((left - bigger) as usize + rest - 1, rest - 1);
        }
        left -= e;
    }
    pos
}

/// Degree-`d` strand `S_d ⊗ k^cols → S_{d+1} ⊗ k^rows` of `Σ_j x_j M_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrandMap {
    pub degree: i64,
    pub matrix: DenseMatrix,
}

/// Entry `(m' ⊗ f, m ⊗ e)` is `Σ_j [m' = x_j m] (M_j)_{f,e}`.
pub fn strand_map(d: &MatrixOfLinearForms, degree: i64) -> StrandMap {
    let n = d.slices().len() - 1;
    let (r, c) = (d.rows(), d.cols());
    let field = d.field();
    let mut matrix = DenseMatrix::zeros(
        field,
        num_monomials(n, degree + 1) * r,
        num_monomials(n, degree) * c,
    );
    if degree >= 0 {
        for (mi, m) in monomials(n, degree as usize).iter().enumerate() {
            let mut up = m.clone();
            for (j, slice) in d.slices().iter().enumerate() {
                up[j] += 1;
                let ti = monomial_position(&up);
                up[j] -= 1;
                for f in 0..r {
                    for e in 0..c {
                        let x = slice.get(f, e);
                        if !x.is_zero() {
                            matrix.set(ti * r + f, mi * c + e, &x).expect("same field");
                        }
                    }
                }
            }
        }
    }
    StrandMap { degree, matrix }
}

/// Strand ranks of a linear complex, the only input of [`cohomology_table`].
pub trait StrandRanks: Sync {
    fn n(&self) -> usize;
    /// `r_i = dim P_i`, one per term.
    fn term_ranks(&self) -> &[usize];
    /// Rank of the degree-`d` strand of `D_i`.
    fn forward_rank(&self, i: usize, d: i64) -> usize;
    /// Rank of the degree-`delta` strand of `D_iᵀ : P_{i+1}^* → P_i^*`.
    fn dual_rank(&self, i: usize, delta: i64) -> usize;
}

/// Strand ranks from explicit dense strand matrices.
pub struct DenseStrands<'a> {
    complex: &'a LinearComplex,
    ranks: Vec<usize>,
    transposed: Vec<MatrixOfLinearForms>,
}

impl<'a> DenseStrands<'a> {
    pub fn new(complex: &'a LinearComplex) -> Self {
        let transposed = complex
            .diffs()
            .iter()
            .map(|d| {
                MatrixOfLinearForms::new(d.slices().iter().map(DenseMatrix::transpose).collect())
                    .unwrap()
            })
            .collect();
        DenseStrands {
            complex,
            ranks: complex.terms().iter().map(|t| t.1).collect(),
            transposed,
        }
    }
}

impl StrandRanks for DenseStrands<'_> {
    fn n(&self) -> usize {
        self.complex.n()
    }

    fn term_ranks(&self) -> &[usize] {
        &self.ranks
    }

    fn forward_rank(&self, i: usize, d: i64) -> usize {
        if d < 0 {
            return 0;
        }
        strand_map(&self.complex.diffs()[i], d).matrix.rank()
    }

    fn dual_rank(&self, i: usize, delta: i64) -> usize {
        if delta < 0 {
            return 0;
        }
        strand_map(&self.transposed[i], delta).matrix.rank()
    }
}

/// Sparse vectors keyed by subset mask.
type SparseRows = HashMap<u32, Vec<(usize, Scalar)>>;

/// Strand ranks of `k^p ⊗ ⋀^{≤c} V` modulo a subspace `L` of its top piece,
/// computed through the torus action.
///
/// Giving `x^m ⊗ e_S` the weight `m − 1_S` makes every free strand block
/// diagonal, and the block of weight `γ` depends only on the set `N` of
/// coordinates where `γ = −1`. Dually `x^m ⊗ e_S^*` gets weight `m + 1_S`
/// and blocks depend on the support `T`. The top map is not homogeneous
/// (L is arbitrary) and is handled by a correction:
/// `rank(π X) = rank X + rank(S ⊗ L mod im X) − dim(S ⊗ L)` forwards and
/// `rank(Y|_{S ⊗ L^⊥}) = dim(S ⊗ L^⊥) − dim ker Y + rank(λ(ker Y))` for the
/// dual, where `λ` evaluates on `L`.
pub struct QuotientStrands {
    field: Field,
    n: usize,
    p: usize,
    c: usize,
    l_dim: usize,
    ranks: Vec<usize>,
    /// `fwd[i][N]`: rank of the forward block of `D_i` for `N`.
    fwd: Vec<HashMap<u32, usize>>,
    /// `dual[i][T]`: rank of the dual block of `D_i` for support `T`.
    dual: Vec<HashMap<u32, usize>>,
    /// Top reduction per `N`: target mask ↦ coordinates in the block's
    /// cokernel, plus the cokernel width.
    reduce: HashMap<u32, (SparseRows, usize)>,
    /// Kernel of the top dual block per support `T`, as sparse vectors.
    kernels: HashMap<u32, Vec<Vec<(u32, Scalar)>>>,
    /// Nonzero entries of `L`: per top coordinate, `(μ, value)`.
    l_by_coord: Vec<Vec<(usize, Scalar)>>,
    /// Nonzero entries of `L`: per basis vector, `(coordinate, value)`.
    l_by_row: Vec<Vec<(usize, Scalar)>>,
    top_basis: ExtBasis,
}

fn masks_of_size(n: usize, k: usize) -> Vec<u32> {
    let b = ExtBasis::new(n, k);
    (0..b.len()).map(|i| b.subset_mask(i)).collect()
}

/// `Σ_j e_j ∧ −` restricted to the given source and target subsets.
fn koszul_block(field: Field, src: &[u32], dst: &[u32]) -> DenseMatrix {
    let index: HashMap<u32, usize> = dst.iter().enumerate().map(|(k, &m)| (m, k)).collect();
    let mut m = DenseMatrix::zeros(field, dst.len(), src.len());
    for (col, &s) in src.iter().enumerate() {
        for j in 0..32 {
            if let Some((sign, t)) = wedge_mask(j, s) {
                if let Some(&row) = index.get(&t) {
                    m.set_i64(row, col, sign);
                }
            }
        }
    }
    m
}

impl QuotientStrands {
    /// `l` is a basis of `L ⊆ k^p ⊗ ⋀^c V` in the coordinates
    /// `(a, S) ↦ a·C(n+1, c) + pos(S)`.
    pub fn new(n: usize, p: usize, c: usize, l: &DenseMatrix) -> Result<Self, CohError> {
        let field = l.field();
        let top_dim = p * binomial(n + 1, c);
        if c == 0 || c >= n {
            return Err(CohError::TooLong { c, n });
        }
        if l.cols() != top_dim || l.rows() >= top_dim {
            return Err(CohError::BadSubspace {
                got: l.rows(),
                max: top_dim.saturating_sub(1),
            });
        }
        let all_masks: Vec<u32> = (0..1u32 << (n + 1)).collect();
        let mut fwd = Vec::with_capacity(c);
        let mut dual = Vec::with_capacity(c);
        for i in 0..c {
            let srcs = masks_of_size(n, i);
            let dsts = masks_of_size(n, i + 1);
            let mut f = HashMap::new();
            let mut d = HashMap::new();
            for &set in &all_masks {
                if set.count_ones() as usize <= i {
                    let s: Vec<u32> = srcs.iter().copied().filter(|&x| x & set == set).collect();
                    let t: Vec<u32> = dsts.iter().copied().filter(|&x| x & set == set).collect();
                    f.insert(set, koszul_block(field, &s, &t).rank());
                }
                let s: Vec<u32> = srcs.iter().copied().filter(|&x| x & !set == 0).collect();
                let t: Vec<u32> = dsts.iter().copied().filter(|&x| x & !set == 0).collect();
                d.insert(set, koszul_block(field, &s, &t).rank());
            }
            fwd.push(f);
            dual.push(d);
        }

        let top_srcs = masks_of_size(n, c - 1);
        let top_dsts = masks_of_size(n, c);
        let mut reduce = HashMap::new();
        let mut kernels = HashMap::new();
        for &set in &all_masks {
            if set.count_ones() as usize <= c {
                let s: Vec<u32> = top_srcs
                    .iter()
                    .copied()
                    .filter(|&x| x & set == set)
                    .collect();
                let t: Vec<u32> = top_dsts
                    .iter()
                    .copied()
                    .filter(|&x| x & set == set)
                    .collect();
                let image = koszul_block(field, &s, &t).transpose().rref();
                let mut pivot_row = HashMap::new();
                for (k, &col) in image.pivots.iter().enumerate() {
                    pivot_row.insert(col, k);
                }
                let free: Vec<usize> = (0..t.len())
                    .filter(|q| !pivot_row.contains_key(q))
                    .collect();
                let free_pos: HashMap<usize, usize> =
                    free.iter().enumerate().map(|(k, &q)| (q, k)).collect();
                let mut red = HashMap::new();
                for (q, &mask) in t.iter().enumerate() {
                    let v = match pivot_row.get(&q) {
                        None => vec![(free_pos[&q], field.one())],
                        Some(&k) => free
                            .iter()
                            .enumerate()
                            .filter_map(|(fi, &fq)| {
                                let x = image.matrix.get(k, fq);
                                (!x.is_zero()).then(|| (fi, x.neg()))
                            })
                            .collect(),
                    };
                    red.insert(mask, v);
                }
                reduce.insert(set, (red, free.len()));
            }
            let s: Vec<u32> = top_srcs
                .iter()
                .copied()
                .filter(|&x| x & !set == 0)
                .collect();
            let t: Vec<u32> = top_dsts
                .iter()
                .copied()
                .filter(|&x| x & !set == 0)
                .collect();
            // dual block: sources are the size-c subsets, targets size c − 1
            let y = koszul_block(field, &s, &t).transpose();
            let ker = y.kernel_basis();
            let vecs = (0..ker.rows())
                .map(|r| {
                    t.iter()
                        .enumerate()
                        .filter_map(|(k, &mask)| {
                            let x = ker.get(r, k);
                            (!x.is_zero()).then_some((mask, x))
                        })
                        .collect()
                })
                .collect();
            kernels.insert(set, vecs);
        }

        let mut l_by_coord = vec![Vec::new(); top_dim];
        let mut l_by_row = vec![Vec::new(); l.rows()];
        for (mu, row) in l_by_row.iter_mut().enumerate() {
            for (f, slot) in l_by_coord.iter_mut().enumerate() {
                let x = l.get(mu, f);
                if !x.is_zero() {
                    slot.push((mu, x.clone()));
                    row.push((f, x));
                }
            }
        }
        let mut ranks: Vec<usize> = (0..=c).map(|i| p * binomial(n + 1, i)).collect();
        ranks[c] -= l.rows();
        Ok(QuotientStrands {
            field,
            n,
            p,
            c,
            l_dim: l.rows(),
            ranks,
            fwd,
            dual,
            reduce,
            kernels,
            l_by_coord,
            l_by_row,
            top_basis: ExtBasis::new(n, c),
        })
    }

    fn free_forward_rank(&self, i: usize, d: i64) -> usize {
        let vars = self.n + 1;
        let mut total = 0;
        for (&set, &r) in &self.fwd[i] {
            if r == 0 {
                continue;
            }
            let k = set.count_ones() as usize;
            let sum = d - i as i64 + k as i64;
            let rest = vars - k;
            let count = if sum < 0 {
                0
            } else if rest == 0 {
                usize::from(sum == 0)
            } else {
                binomial(sum as usize + rest - 1, rest - 1)
            };
            total += count * r;
        }
        self.p * total
    }

    fn free_dual_rank(&self, i: usize, delta: i64) -> usize {
        let total_deg = delta + i as i64 + 1;
        let mut total = 0;
        for (&set, &r) in &self.dual[i] {
            if r == 0 {
                continue;
            }
            let k = set.count_ones() as i64;
            let count = if k == 0 {
                usize::from(total_deg == 0)
            } else if total_deg < k {
                0
            } else {
                binomial(total_deg as usize - 1, k as usize - 1)
            };
            total += count * r;
        }
        self.p * total
    }

    fn top_forward_rank(&self, d: i64) -> usize {
        let rank_x = self.free_forward_rank(self.c - 1, d);
        let k = self.l_dim;
        if k == 0 {
            return rank_x;
        }
        let per_copy = binomial(self.n + 1, self.c);
        let monos = monomials(self.n, d as usize + 1);
        let mut columns: HashMap<(Vec<i64>, usize), usize> = HashMap::new();
        let mut width = 0;
        let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
        for (mi, m) in monos.iter().enumerate() {
            let zero_mask =
                m.iter()
                    .enumerate()
                    .fold(0u32, |acc, (t, &e)| if e == 0 { acc | 1 << t } else { acc });
            for mu in 0..k {
                let row = mi * k + mu;
                for (f, val) in &self.l_by_row[mu] {
                    let (a, pos) = (f / per_copy, f % per_copy);
                    let s = self.top_basis.subset_mask(pos);
                    let set = s & zero_mask;
                    let (red, w) = &self.reduce[&set];
                    if *w == 0 {
                        continue;
                    }
                    let gamma: Vec<i64> = (0..=self.n)
                        .map(|t| m[t] as i64 - (s >> t & 1) as i64)
                        .collect();
                    let off = *columns.entry((gamma, a)).or_insert_with(|| {
                        width += w;
                        width - w
                    });
                    for (local, x) in &red[&s] {
                        entries.push((row, off + local, val.try_mul(x).unwrap()));
                    }
                }
            }
        }
        let mut res = DenseMatrix::zeros(self.field, monos.len() * k, width);
        for (r, c, x) in &entries {
            res.add_entry(*r, *c, x).unwrap();
        }
        rank_x + res.rank() - monos.len() * k
    }

    fn top_dual_rank(&self, delta: i64) -> usize {
        let rank_y = self.free_dual_rank(self.c - 1, delta);
        let k = self.l_dim;
        if k == 0 {
            return rank_y;
        }
        let top_dim = self.p * binomial(self.n + 1, self.c);
        let src_monos = num_monomials(self.n, delta);
        let dim_k = src_monos * top_dim - rank_y;
        let per_copy = binomial(self.n + 1, self.c);
        let mut lam = DenseMatrix::zeros(self.field, dim_k, src_monos * k);
        let mut row = 0;
        for beta in monomials(self.n, delta as usize + self.c) {
            let support =
                beta.iter()
                    .enumerate()
                    .fold(0u32, |acc, (t, &e)| if e > 0 { acc | 1 << t } else { acc });
            let ker = &self.kernels[&support];
            for a in 0..self.p {
                for kappa in ker {
                    for (s, x) in kappa {
                        let m: Vec<u32> = (0..=self.n).map(|t| beta[t] - (s >> t & 1)).collect();
                        let mi = monomial_position(&m);
                        let f = a * per_copy + self.top_basis.position_of_mask(*s).unwrap();
                        for (mu, val) in &self.l_by_coord[f] {
                            lam.add_entry(row, mi * k + mu, &x.try_mul(val).unwrap())
                                .unwrap();
                        }
                    }
                    row += 1;
                }
            }
        }
        assert_eq!(
            row, dim_k,
            "kernel blocks must account for the whole kernel"
        );
        src_monos * (top_dim - k) + lam.rank() - dim_k
    }
}

impl StrandRanks for QuotientStrands {
    fn n(&self) -> usize {
        self.n
    }

    fn term_ranks(&self) -> &[usize] {
        &self.ranks
    }

    fn forward_rank(&self, i: usize, d: i64) -> usize {
        if d < 0 {
            0
        } else if i + 1 == self.c {
            self.top_forward_rank(d)
        } else {
            self.free_forward_rank(i, d)
        }
    }

    fn dual_rank(&self, i: usize, delta: i64) -> usize {
        if delta < 0 {
            0
        } else if i + 1 == self.c {
            self.top_dual_rank(delta)
        } else {
            self.free_dual_rank(i, delta)
        }
    }
}

/// `dim H^q(F(t))` for `q ∈ [0, n]` and `t ∈ [t_lo, t_hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub n: usize,
    pub t_lo: i64,
    pub t_hi: i64,
    /// `entries[t − t_lo][q]`.
    pub entries: Vec<Vec<u64>>,
}

impl CohomologyTable {
    pub fn get(&self, q: usize, t: i64) -> u64 {
        self.entries[(t - self.t_lo) as usize][q]
    }

    pub fn twists(&self) -> std::ops::RangeInclusive<i64> {
        self.t_lo..=self.t_hi
    }

    /// Rows `q = n, …, 0`, columns `t` ascending; zeros print as `.`.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = (0..=self.n)
            .rev()
            .map(|q| {
                self.twists()
                    .map(|t| match self.get(q, t) {
                        0 => ".".to_string(),
                        v => v.to_string(),
                    })
                    .collect()
            })
            .collect();
        let heads: Vec<String> = self.twists().map(|t| t.to_string()).collect();
        let width = cells
            .iter()
            .flatten()
            .chain(&heads)
            .map(String::len)
            .max()
            .unwrap_or(1);
        let mut out = String::new();
        out.push_str(&format!("{:>5} |", "t"));
        for h in &heads {
            out.push_str(&format!(" {h:>width$}"));
        }
        out.push('\n');
        out.push_str(&format!("{}\n", "-".repeat(7 + heads.len() * (width + 1))));
        for (row, q) in cells.iter().zip((0..=self.n).rev()) {
            out.push_str(&format!("{:>5} |", format!("q={q}")));
            for c in row {
                out.push_str(&format!(" {c:>width$}"));
            }
            out.push('\n');
        }
        out
    }
}

/// `Σ_i (−1)^{c−i} r_i χ(O(i + t))`.
pub fn euler_expected(ranks: &[usize], n: usize, t: i64) -> i64 {
    let c = ranks.len() - 1;
    ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let sign = if (c - i).is_multiple_of(2) { 1 } else { -1 };
            sign * r as i128 * euler_line(n, t + i as i64)
        })
        .sum::<i128>() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum RankKey {
    Forward(usize, i64),
    Dual(usize, i64),
}

impl RankKey {
    fn eval<S: StrandRanks + ?Sized>(self, s: &S) -> usize {
        match self {
            RankKey::Forward(i, d) => s.forward_rank(i, d),
            RankKey::Dual(i, d) => s.dual_rank(i, d),
        }
    }
}

/// Outgoing and incoming rank keys of each nonzero position, per column.
fn column_keys(n: usize, ranks: &[usize], t: i64, out: &mut BTreeSet<RankKey>) {
    let c = ranks.len() - 1;
    if c > 0 && num_monomials(n, t + c as i64) > 0 {
        out.insert(RankKey::Forward(c - 1, t + c as i64 - 1));
    }
    for (s, &rank) in ranks.iter().enumerate() {
        if num_monomials(n, -(t + s as i64) - n as i64 - 1) == 0 || rank == 0 {
            continue;
        }
        if s < c {
            out.insert(RankKey::Dual(s, -(t + s as i64) - n as i64 - 2));
        }
        if s > 0 {
            out.insert(RankKey::Dual(s - 1, -(t + s as i64 - 1) - n as i64 - 2));
        }
    }
}

fn compute_ranks<S: StrandRanks + ?Sized>(
    s: &S,
    keys: BTreeSet<RankKey>,
) -> HashMap<RankKey, usize> {
    let keys: Vec<RankKey> = keys.into_iter().collect();
    #[cfg(feature = "parallel")]
    let vals: Vec<usize> = {
        use rayon::prelude::*;
        keys.par_iter().map(|k| k.eval(s)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vals: Vec<usize> = keys.iter().map(|k| k.eval(s)).collect();
    keys.into_iter().zip(vals).collect()
}

/// The cohomology table over `[t_lo, t_hi]`. Every column is checked
/// against the Euler characteristic of the resolution and against the
/// structural vanishing `H^q(F(t)) = 0` for `t ≥ −n`, `0 < q < n`.
pub fn cohomology_table<S: StrandRanks + ?Sized>(
    s: &S,
    t_lo: i64,
    t_hi: i64,
) -> Result<CohomologyTable, CohError> {
    let n = s.n();
    let ranks = s.term_ranks();
    let c = ranks.len() - 1;
    if c >= n && c > 0 {
        return Err(CohError::TooLong { c, n });
    }
    if t_lo > t_hi {
        return Err(CohError::EmptyWindow { lo: t_lo, hi: t_hi });
    }
    let mut keys = BTreeSet::new();
    for t in t_lo..=t_hi {
        column_keys(n, ranks, t, &mut keys);
    }
    let rank = compute_ranks(s, keys);
    let get = |k: RankKey| rank.get(&k).copied().unwrap_or(0) as i64;
    let mut entries = Vec::new();
    for t in t_lo..=t_hi {
        let mut col = vec![0u64; n + 1];
        for (q, slot) in col.iter_mut().enumerate() {
            let mut val: i64 = 0;
            if q == 0 {
                val += (num_monomials(n, t + c as i64) * ranks[c]) as i64;
                if c > 0 && num_monomials(n, t + c as i64) > 0 {
                    val -= get(RankKey::Forward(c - 1, t + c as i64 - 1));
                }
            }
            let pos = c as i64 + q as i64 - n as i64;
            if (0..=c as i64).contains(&pos) {
                let s = pos as usize;
                let dim = num_monomials(n, -(t + pos) - n as i64 - 1) * ranks[s];
                if dim > 0 {
                    val += dim as i64;
                    if s < c {
                        val -= get(RankKey::Dual(s, -(t + pos) - n as i64 - 2));
                    }
                    if s > 0 {
                        val -= get(RankKey::Dual(s - 1, -(t + pos - 1) - n as i64 - 2));
                    }
                }
            }
            if val < 0 {
                return Err(CohError::NegativeDimension { q, t });
            }
            *slot = val as u64;
        }
        let table: i64 = col
            .iter()
            .enumerate()
            .map(|(q, &v)| if q % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        let expected = euler_expected(ranks, n, t);
        if table != expected {
            return Err(CohError::EulerMismatch { t, table, expected });
        }
        if t >= -(n as i64) {
            for (q, &value) in col.iter().enumerate().take(n).skip(1) {
                if value != 0 {
                    return Err(CohError::StructuralVanishing { q, t, value });
                }
            }
        }
        entries.push(col);
    }
    Ok(CohomologyTable {
        n,
        t_lo,
        t_hi,
        entries,
    })
}

/// The default lower end of the certification window: `−c − n − 1 − W`.
pub fn default_window(n: usize, c: usize, margin: i64) -> (i64, i64) {
    (-(c as i64) - n as i64 - 1 - margin, n as i64)
}

/// Outcome of [`certify_hd`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HdCertificate {
    pub hd: usize,
    pub margin: i64,
    /// The window on which vanishing was checked exactly; below `t_lo` the
    /// vanishing is not certified.
    pub t_lo: i64,
    pub t_hi: i64,
    /// `(q, t, dim H^q(F(t)))` witnessing `hd > l − 1`.
    pub nonvanishing: (usize, i64, u64),
    /// The degrees `q` whose vanishing was checked.
    pub vanishing_degrees: Vec<usize>,
    pub table: CohomologyTable,
}

/// Certifies `hd(F) = l` for the cokernel of a length-`l` linear resolution:
/// `dim H^{n−l}(F(−n−1)) = dim P_0 ≠ 0` gives `hd ≥ l`, the resolution
/// gives `hd ≤ l`, and `H^q(F(t)) = 0` for `1 ≤ q ≤ n − l − 1` is checked
/// on the window.
pub fn certify_hd<S: StrandRanks + ?Sized>(
    s: &S,
    l: usize,
    margin: i64,
) -> Result<HdCertificate, CohError> {
    let n = s.n();
    let c = s.term_ranks().len() - 1;
    if c != l || l == 0 {
        return Err(CohError::LengthMismatch {
            expected: l,
            got: c,
        });
    }
    let (t_lo, t_hi) = default_window(n, c, margin);
    let table = cohomology_table(s, t_lo, t_hi)?;
    let q = n - l;
    let t = -(n as i64) - 1;
    let found = table.get(q, t);
    let expected = s.term_ranks()[0] as u64;
    if found != expected || found == 0 {
        return Err(CohError::CertificationFailed {
            q,
            t,
            found,
            expected,
        });
    }
    let vanishing_degrees: Vec<usize> = (1..n - l).collect();
    for &q in &vanishing_degrees {
        for t in table.twists() {
            let v = table.get(q, t);
            if v != 0 {
                return Err(CohError::CertificationFailed {
                    q,
                    t,
                    found: v,
                    expected: 0,
                });
            }
        }
    }
    Ok(HdCertificate {
        hd: l,
        margin,
        t_lo,
        t_hi,
        nonvanishing: (q, t, found),
        vanishing_degrees,
        table,
    })
}
