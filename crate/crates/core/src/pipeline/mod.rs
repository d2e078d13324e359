//! End-to-end construction of a simple bundle of rank `r` and homological
//! dimension `l` on `P^n`, with every claimed property re-checked.
//!
//! The bundle is the cokernel sheaf of `L̃(P/L)` where
//! `P = k^p ⊗ (⊕_{i ≤ l} ⋀^i V)` and `L ⊆ P_l = k^p ⊗ ⋀^l V` anchors `k^p`.

mod cas;
mod report;
mod verify;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

pub use cas::cas_script;
pub use report::{
    BundleReport, Conventions, ExhaustiveRecord, MatrixRecord, ModuleRecord, ResolutionRecord,
    TermRecord, Timings, Verification, Versions, REPORT_FORMAT, REPORT_VERSION,
};
pub use verify::{verify, CheckResult, Verdict};

use crate::anchor::{
    anchoring_tensor, annihilator, in_general_range, is_anchoring, min_slices, sample_anchoring,
    tensor_to_subspace, AnchorError, AnchorProblem, AnchorVerdict, DEFAULT_SAMPLE_ATTEMPTS,
};
use crate::bgg::{
    bgg_complex, bundle_rank, faithfulness_scan, FaithfulnessReport, ScanMode,
    DEFAULT_EXHAUSTIVE_BUDGET,
};
use crate::emod::{chi, free_truncated, hom_space_dim, quotient_top};
use crate::exactlin::{DenseMatrix, Field, Subspace, DEFAULT_PRIME};
use crate::extalg::binomial;
use crate::sheafcoh::{certify_hd, cohomology_table, CohomologyTable, QuotientStrands};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("no construction passed all checks after {attempts} attempts:\n{}", diagnostics.join("\n"))]
    RetriesExhausted {
        attempts: usize,
        diagnostics: Vec<String>,
    },
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("malformed report: {0}")]
    Schema(String),
}

impl PipelineError {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::InvalidParams(_) | PipelineError::Schema(_) => 2,
            PipelineError::RetriesExhausted { .. } => 3,
            PipelineError::Structural(_) => 1,
        }
    }
}

fn structural(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Structural(e.to_string())
}

/// How much checking [`construct`] does.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationPolicy {
    /// Prime `q` for the exhaustive scan of a rebuilt instance over `F_q`;
    /// `None` skips it.
    pub exhaustive_field: Option<u32>,
    pub exhaustive_budget: u64,
    /// Distinct random points checked over the working field.
    pub random_samples: u64,
    /// Margin `W` of the cohomology window `[−c−n−1−W, n]`; `None` means `c + n`.
    pub window_margin: Option<i64>,
    pub retry_budget: usize,
    pub anchor_attempts: usize,
    /// Wall-clock timings make reports non-reproducible, so they are opt-in.
    pub record_timings: bool,
}

impl VerificationPolicy {
    pub fn for_n(n: usize) -> Self {
        VerificationPolicy {
            exhaustive_field: Some(default_exhaustive_field(n)),
            exhaustive_budget: DEFAULT_EXHAUSTIVE_BUDGET,
            random_samples: 10_000,
            window_margin: None,
            retry_budget: 32,
            anchor_attempts: DEFAULT_SAMPLE_ATTEMPTS,
            record_timings: false,
        }
    }
}

/// `F_101` on `P^3`, `F_7` on `P^4`, and the largest of 7, 5, 3, 2 that fits
/// the default budget beyond.
pub fn default_exhaustive_field(n: usize) -> u32 {
    match n {
        0..=3 => 101,
        4 => 7,
        _ => [7u32, 5, 3, 2]
            .into_iter()
            .find(|&q| crate::bgg::projective_point_count(q as u64, n) <= DEFAULT_EXHAUSTIVE_BUDGET)
            .unwrap_or(2),
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionParams {
    pub n: usize,
    pub l: usize,
    pub r: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub field: Field,
    #[serde_as(as = "DisplayFromStr")]
    pub seed: u64,
    /// Overrides the smallest admissible multiplicity.
    pub multiplicity: Option<usize>,
    /// Use the explicit block tensor instead of a random anchoring subspace.
    pub explicit_anchor: bool,
    pub policy: VerificationPolicy,
}

impl ConstructionParams {
    /// Working field `F_32003`, seed 0 and the default policy.
    pub fn new(n: usize, l: usize, r: usize) -> Self {
        ConstructionParams {
            n,
            l,
            r,
            field: Field::Fp(DEFAULT_PRIME),
            seed: 0,
            multiplicity: None,
            explicit_anchor: false,
            policy: VerificationPolicy::for_n(n),
        }
    }

    pub fn window_margin(&self) -> i64 {
        self.policy
            .window_margin
            .unwrap_or((self.l + self.n) as i64)
    }
}

fn check_shape(n: usize, l: usize, r: usize) -> Result<(), PipelineError> {
    if n < 3 {
        return Err(PipelineError::InvalidParams(format!(
            "n = {n} must be at least 3"
        )));
    }
    if l == 0 || l >= n {
        return Err(PipelineError::InvalidParams(format!(
            "l = {l} must lie in [1, {}]",
            n - 1
        )));
    }
    if r < n {
        return Err(PipelineError::InvalidParams(format!(
            "r = {r} must be at least n = {n}"
        )));
    }
    Ok(())
}

/// Whether `r < p (C(n,l) − 2/C(n+1,l))`, in integers.
pub fn multiplicity_admissible(n: usize, l: usize, r: usize, p: usize) -> bool {
    let w = binomial(n + 1, l);
    r * w < p * (binomial(n, l) * w - 2)
}

/// Checks the invariants tying `(n, l, r, p)` to `dim L = p·C(n,l) − r`.
fn check_dim_l(n: usize, l: usize, r: usize, p: usize) -> Result<usize, PipelineError> {
    let chi_top = p * binomial(n, l);
    if chi_top < r {
        return Err(PipelineError::InvalidParams(format!(
            "multiplicity {p} is too small: p·C(n, l) = {chi_top} < r = {r}"
        )));
    }
    let k = chi_top - r;
    if k + n > chi_top {
        return Err(PipelineError::InvalidParams(format!(
            "dim L = {k} exceeds χ_l − n = {}",
            chi_top - n
        )));
    }
    let w = binomial(n + 1, l);
    if p > 1 {
        if k == 0 {
            return Err(PipelineError::InvalidParams(format!(
                "dim L = 0 with p = {p} leaves hom dimension p² > 1"
            )));
        }
        if !in_general_range(p, w, k) {
            return Err(PipelineError::InvalidParams(format!(
                "dim L = {k} is outside the anchoring range (2p/w, pw − 2p/w) for p = {p}, w = {w}"
            )));
        }
    }
    Ok(k)
}

/// The smallest multiplicity `p` with `r < p (C(n,l) − 2/C(n+1,l))`, and
/// `dim L = p·C(n,l) − r`.
pub fn choose_parameters(n: usize, l: usize, r: usize) -> Result<(usize, usize), PipelineError> {
    check_shape(n, l, r)?;
    let p = (1..)
        .find(|&p| multiplicity_admissible(n, l, r, p))
        .unwrap();
    let k = check_dim_l(n, l, r, p)?;
    // the proof's consequence: dim L ∈ (2p/w, pw − 2p/w)
    debug_assert!(in_general_range(p, binomial(n + 1, l), k));
    Ok((p, k))
}

/// `(p, dim L)` for the given params, honoring a multiplicity override.
///
/// An override only has to leave `dim L ≥ 0` (and, for `p > 1`, inside the
/// anchoring range); the strict inequality is not required.
pub fn resolve_parameters(params: &ConstructionParams) -> Result<(usize, usize), PipelineError> {
    let (n, l, r) = (params.n, params.l, params.r);
    match params.multiplicity {
        None => choose_parameters(n, l, r),
        Some(0) => Err(PipelineError::InvalidParams(
            "multiplicity must be positive".into(),
        )),
        Some(p) => {
            check_shape(n, l, r)?;
            Ok((p, check_dim_l(n, l, r, p)?))
        }
    }
}

fn explicit_subspace(
    field: Field,
    p: usize,
    w: usize,
    k: usize,
) -> Result<AnchorProblem, PipelineError> {
    let min_m = min_slices(p, k);
    if w < min_m {
        return Err(PipelineError::InvalidParams(format!(
            "explicit anchoring needs C(n+1, l) = {w} ≥ {min_m} for (p, dim L) = ({p}, {k})"
        )));
    }
    let t = anchoring_tensor(field, p, k, w).map_err(structural)?;
    tensor_to_subspace(&t).map_err(structural)
}

/// Draws `L` for one attempt. `Ok(Err(msg))` is a genericity failure.
fn choose_subspace(
    field: Field,
    p: usize,
    w: usize,
    k: usize,
    explicit: bool,
    seed: u64,
    attempts: usize,
) -> Result<Result<AnchorProblem, String>, PipelineError> {
    if k == 0 {
        return Ok(Ok(AnchorProblem::new(
            p,
            w,
            DenseMatrix::zeros(field, 0, p * w),
        )
        .map_err(structural)?));
    }
    if explicit {
        return explicit_subspace(field, p, w, k).map(Ok);
    }
    match sample_anchoring(field, p, w, k, seed, attempts) {
        Ok((problem, _)) => Ok(Ok(problem)),
        Err(AnchorError::Exhausted(stats)) => {
            Ok(Err(format!("no anchoring subspace over {field}: {stats}")))
        }
        Err(e) => Err(structural(e)),
    }
}

/// Rebuilds the construction over `F_q` and scans all of `P^n(F_q)`.
fn exhaustive_instance(
    params: &ConstructionParams,
    q: u32,
    p: usize,
    k: usize,
    seed: u64,
) -> Result<Result<ExhaustiveRecord, String>, PipelineError> {
    let (n, l) = (params.n, params.l);
    let fq = Field::fp(q).map_err(|e| PipelineError::InvalidParams(e.to_string()))?;
    let w = binomial(n + 1, l);
    let problem = match choose_subspace(
        fq,
        p,
        w,
        k,
        params.explicit_anchor,
        seed,
        params.policy.anchor_attempts,
    )? {
        Ok(pr) => pr,
        Err(msg) => return Ok(Err(msg)),
    };
    let free = free_truncated(fq, p, l, n).map_err(structural)?;
    let module = quotient_top(&free, problem.subspace())
        .map_err(structural)?
        .module;
    let scan = faithfulness_scan(
        &bgg_complex(&module),
        ScanMode::Exhaustive {
            budget: params.policy.exhaustive_budget,
        },
    )
    .map_err(|e| PipelineError::InvalidParams(e.to_string()))?;
    if !scan.faithful() {
        return Ok(Err(format!(
            "rebuilt instance over {fq} is not exact at {} of {} points",
            scan.failures.len(),
            scan.points_checked
        )));
    }
    Ok(Ok(ExhaustiveRecord {
        field: fq,
        subspace: MatrixRecord::from(problem.subspace().basis()),
        anchoring: is_anchoring(&problem),
        scan,
    }))
}

struct Clock(Option<std::time::Instant>);

impl Clock {
    fn start(on: bool) -> Self {
        Clock(on.then(std::time::Instant::now))
    }

    fn lap(&mut self) -> f64 {
        match &mut self.0 {
            Some(t) => {
                let ms = t.elapsed().as_secs_f64() * 1e3;
                *t = std::time::Instant::now();
                ms
            }
            None => 0.0,
        }
    }
}

/// Builds the bundle and verifies faithfulness, simplicity, rank and
/// homological dimension, retrying with fresh random choices when a
/// genericity check fails.
pub fn construct(params: &ConstructionParams) -> Result<BundleReport, PipelineError> {
    let (p, k) = resolve_parameters(params)?;
    let (n, l, r, field) = (params.n, params.l, params.r, params.field);
    let w = binomial(n + 1, l);
    if params.explicit_anchor && k > 0 {
        // fail fast on the deterministic path's precondition
        let min_m = min_slices(p, k);
        if w < min_m {
            return Err(PipelineError::InvalidParams(format!(
                "explicit anchoring needs C(n+1, l) = {w} ≥ {min_m} for (p, dim L) = ({p}, {k})"
            )));
        }
    }
    let budget = if params.explicit_anchor {
        1
    } else {
        params.policy.retry_budget.max(1)
    };
    let mut seeds = ChaCha8Rng::seed_from_u64(params.seed);
    let mut diagnostics = Vec::new();
    for attempt in 0..budget {
        let (anchor_seed, scan_seed, exhaustive_seed) =
            (seeds.next_u64(), seeds.next_u64(), seeds.next_u64());
        let mut clock = Clock::start(params.policy.record_timings);
        let mut timings = Timings::default();
        let fail = |diagnostics: &mut Vec<String>, msg: String| {
            diagnostics.push(format!("attempt {attempt}: {msg}"))
        };

        let problem = match choose_subspace(
            field,
            p,
            w,
            k,
            params.explicit_anchor,
            anchor_seed,
            params.policy.anchor_attempts,
        )? {
            Ok(pr) => pr,
            Err(msg) => {
                fail(&mut diagnostics, msg);
                continue;
            }
        };
        let anchoring = is_anchoring(&problem);
        timings.anchor_ms = clock.lap();

        let free = free_truncated(field, p, l, n).map_err(structural)?;
        let quotient = quotient_top(&free, problem.subspace()).map_err(structural)?;
        let module = quotient.module;
        let complex = bgg_complex(&module);
        timings.module_ms = clock.lap();

        let random_scan = faithfulness_scan(
            &complex,
            ScanMode::Random {
                samples: params.policy.random_samples,
                seed: scan_seed,
            },
        )
        .map_err(structural)?;
        if !random_scan.faithful() {
            fail(
                &mut diagnostics,
                format!("not exact at {} sampled points", random_scan.failures.len()),
            );
            continue;
        }
        let exhaustive = match params.policy.exhaustive_field {
            None => None,
            Some(q) => match exhaustive_instance(params, q, p, k, exhaustive_seed)? {
                Ok(rec) => Some(rec),
                Err(msg) => {
                    fail(&mut diagnostics, msg);
                    continue;
                }
            },
        };
        timings.faithfulness_ms = clock.lap();

        let hom_dim = hom_space_dim(&module);
        timings.hom_ms = clock.lap();
        if hom_dim != 1 {
            fail(
                &mut diagnostics,
                format!("hom dimension {hom_dim}, expected 1"),
            );
            continue;
        }
        let rank = bundle_rank(&module);
        if rank != r as i64 {
            return Err(PipelineError::Structural(format!(
                "bundle rank {rank} differs from r = {r}"
            )));
        }
        let strands =
            QuotientStrands::new(n, p, l, problem.subspace().basis()).map_err(structural)?;
        let hd = match certify_hd(&strands, l, params.window_margin()) {
            Ok(cert) => cert,
            Err(e) => {
                fail(&mut diagnostics, format!("hd certification: {e}"));
                continue;
            }
        };
        timings.cohomology_ms = clock.lap();

        return Ok(BundleReport::assemble(
            params,
            p,
            k,
            attempt,
            diagnostics,
            &module,
            &quotient.complement,
            problem.subspace(),
            &complex,
            Verification {
                random_scan,
                exhaustive,
                hom_dim,
                anchoring,
                rank,
                chi: chi(&module).0,
                hd,
            },
            params.policy.record_timings.then_some(timings),
        ));
    }
    Err(PipelineError::RetriesExhausted {
        attempts: budget,
        diagnostics,
    })
}

/// Rebuilds `P/L` from a report's parameters and subspace.
pub(crate) fn rebuild_module(
    field: Field,
    p: usize,
    l: usize,
    n: usize,
    sub: &Subspace,
) -> Result<crate::emod::TopQuotient, PipelineError> {
    let free = free_truncated(field, p, l, n).map_err(structural)?;
    quotient_top(&free, sub).map_err(structural)
}

/// Faithfulness scan of a report's recorded mode (used by `verify`).
pub(crate) fn rescan(
    c: &crate::bgg::LinearComplex,
    r: &FaithfulnessReport,
) -> Result<FaithfulnessReport, PipelineError> {
    faithfulness_scan(c, r.mode).map_err(structural)
}

/// A verified random subspace from [`anchor_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampledAnchor {
    pub subspace: MatrixRecord,
    pub verdict: AnchorVerdict,
    /// Verdict for the annihilator `L^⊥ ⊆ (k^u)^* ⊗ (k^w)^*`.
    pub dual: AnchorVerdict,
    pub attempts: usize,
    pub dependent: usize,
    pub not_anchoring: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitAnchor {
    pub min_slices: usize,
    pub verdict: Option<AnchorVerdict>,
}

/// Standalone anchoring checks for `d`-dimensional subspaces of `k^u ⊗ k^w`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnchorSummary {
    #[serde_as(as = "DisplayFromStr")]
    pub field: Field,
    pub u: usize,
    pub w: usize,
    pub d: usize,
    pub in_general_range: bool,
    pub sampled: Option<SampledAnchor>,
    pub sample_error: Option<String>,
    /// The block tensor with `m = w` slices, when `w` meets its bound.
    pub explicit: ExplicitAnchor,
}

impl AnchorSummary {
    pub fn anchoring(&self) -> bool {
        self.sampled.as_ref().is_some_and(|s| s.verdict.anchoring)
    }
}

pub fn anchor_check(
    field: Field,
    u: usize,
    w: usize,
    d: usize,
    seed: u64,
) -> Result<AnchorSummary, PipelineError> {
    if u == 0 || w == 0 || d > u * w {
        return Err(PipelineError::InvalidParams(format!(
            "need u, w ≥ 1 and d ≤ uw, got (u, w, d) = ({u}, {w}, {d})"
        )));
    }
    let (sampled, sample_error) =
        match sample_anchoring(field, u, w, d, seed, DEFAULT_SAMPLE_ATTEMPTS) {
            Ok((problem, stats)) => (
                Some(SampledAnchor {
                    subspace: MatrixRecord::from(problem.subspace().basis()),
                    verdict: is_anchoring(&problem),
                    dual: is_anchoring(&annihilator(&problem)),
                    attempts: stats.attempts,
                    dependent: stats.dependent,
                    not_anchoring: stats.not_anchoring,
                }),
                None,
            ),
            Err(e) => (None, Some(e.to_string())),
        };
    let min_m = min_slices(u, d);
    let verdict = if d > 0 && w >= min_m {
        let t = anchoring_tensor(field, u, d, w).map_err(structural)?;
        Some(is_anchoring(&tensor_to_subspace(&t).map_err(structural)?))
    } else {
        None
    };
    Ok(AnchorSummary {
        field,
        u,
        w,
        d,
        in_general_range: in_general_range(u, w, d),
        sampled,
        sample_error,
        explicit: ExplicitAnchor {
            min_slices: min_m,
            verdict,
        },
    })
}

/// `dim H^q(F(t))` on `[t_lo, t_hi]` for the bundle of a report, from its
/// recorded subspace.
pub fn report_cohomology(
    report: &BundleReport,
    t_lo: i64,
    t_hi: i64,
) -> Result<CohomologyTable, PipelineError> {
    let sub = report.subspace()?;
    let strands = QuotientStrands::new(
        report.params.n,
        report.multiplicity,
        report.params.l,
        sub.basis(),
    )
    .map_err(|e| PipelineError::Schema(e.to_string()))?;
    cohomology_table(&strands, t_lo, t_hi).map_err(|e| PipelineError::InvalidParams(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_examples() {
        assert_eq!(choose_parameters(3, 2, 5).unwrap(), (2, 1));
        assert_eq!(choose_parameters(3, 1, 3).unwrap(), (2, 3));
        assert_eq!(choose_parameters(4, 2, 4).unwrap(), (1, 2));
        assert!(choose_parameters(2, 1, 3).is_err());
        assert!(choose_parameters(3, 3, 3).is_err());
        assert!(choose_parameters(3, 1, 2).is_err());
    }

    #[test]
    fn multiplicity_override() {
        let mut params = ConstructionParams::new(4, 3, 4);
        assert_eq!(resolve_parameters(&params).unwrap(), (2, 4));
        params.multiplicity = Some(1);
        assert_eq!(resolve_parameters(&params).unwrap(), (1, 0));
        params.multiplicity = Some(3);
        params.r = 12;
        assert!(matches!(
            resolve_parameters(&params),
            Err(PipelineError::InvalidParams(_))
        ));
    }

    #[test]
    fn grid_parameters_satisfy_invariants() {
        for n in 3..=4 {
            for l in 1..n {
                for r in n..=n + 3 {
                    let (p, k) = choose_parameters(n, l, r).unwrap();
                    assert!(multiplicity_admissible(n, l, r, p));
                    assert!(p == 1 || !multiplicity_admissible(n, l, r, p - 1));
                    assert_eq!(k + r, p * binomial(n, l));
                }
            }
        }
    }

    #[test]
    fn construct_small_case() {
        let mut params = ConstructionParams::new(3, 1, 3);
        params.policy.exhaustive_field = Some(5);
        params.policy.random_samples = 200;
        let rep = construct(&params).unwrap();
        assert_eq!(
            rep.resolution
                .terms
                .iter()
                .map(|t| t.rank)
                .collect::<Vec<_>>(),
            vec![2, 5]
        );
        assert_eq!(rep.verification.rank, 3);
        assert_eq!(rep.verification.hd.hd, 1);
        assert_eq!(rep.verification.hom_dim, 1);
    }

    #[test]
    fn anchor_summary() {
        let s = anchor_check(Field::Fp(DEFAULT_PRIME), 3, 4, 2, 5).unwrap();
        assert!(s.in_general_range && s.anchoring());
        let sampled = s.sampled.unwrap();
        assert!(sampled.dual.anchoring);
        assert_eq!(s.explicit.verdict.map(|v| v.anchoring), Some(true));
        // d·w = 2 ≤ 2u: a single tensor of k^3 ⊗ k^2 cannot anchor
        let s = anchor_check(Field::Fp(DEFAULT_PRIME), 3, 2, 1, 0).unwrap();
        assert!(!s.in_general_range);
        assert!(!s.anchoring());
        assert!(anchor_check(Field::Q, 0, 2, 1, 0).is_err());
    }

    #[test]
    fn explicit_path_precondition() {
        let mut params = ConstructionParams::new(3, 2, 5);
        params.explicit_anchor = true;
        params.policy.exhaustive_field = None;
        params.policy.random_samples = 100;
        // (p, dim L) = (2, 1) needs w ≥ 4 and w = 6
        let rep = construct(&params).unwrap();
        assert_eq!(rep.attempt, 0);
        params.n = 3;
        params.l = 1;
        params.r = 5;
        // (p, dim L) = (3, 4) needs w ≥ 4 and w = 4
        assert!(construct(&params).is_ok());
    }
}
