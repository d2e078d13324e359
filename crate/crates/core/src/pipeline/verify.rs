use serde::{Deserialize, Serialize};

use super::{
    rebuild_module, rescan, resolve_parameters, BundleReport, MatrixRecord, PipelineError,
};
use crate::anchor::{is_anchoring, AnchorProblem};
use crate::bgg::{bgg_complex, bundle_rank, LinearComplex};
use crate::emod::{chi, hom_space_dim, GradedEModule};
use crate::exactlin::Subspace;
use crate::extalg::binomial;
use crate::sheafcoh::{certify_hd, QuotientStrands};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub checks: Vec<CheckResult>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &str, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

fn ensure(cond: bool, ok: impl Into<String>, err: impl Into<String>) -> Result<String, String> {
    if cond {
        Ok(ok.into())
    } else {
        Err(err.into())
    }
}

/// Re-runs every check of a report from its serialized matrices.
///
/// The module, resolution and `L` are parsed independently. Module-level
/// claims (hom dimension, rank, cohomology) are recomputed from `P/L` rebuilt
/// out of the parameters and `L`, and the recorded module and resolution must
/// agree with that rebuild. Malformed data is a schema error.
pub fn verify(report: &BundleReport) -> Result<Verdict, PipelineError> {
    let params = &report.params;
    let (n, l, r) = (params.n, params.l, params.r);
    let field = report.field();
    let mut v = Verdict { checks: Vec::new() };

    let recorded_module = report.module()?;
    let diffs = report.differentials()?;
    let sub = report.subspace()?;
    let (p, k) = (report.multiplicity, report.l_dim);
    let w = binomial(n + 1, l);
    if sub.ambient_dim() != p * w {
        return Err(PipelineError::Schema(format!(
            "subspace lives in dimension {}, expected {}",
            sub.ambient_dim(),
            p * w
        )));
    }

    v.record(
        "parameters",
        match resolve_parameters(params) {
            Ok((p0, k0)) => ensure(
                (p0, k0) == (p, k) && sub.dim() == k,
                format!("p = {p}, dim L = {k}"),
                format!("report claims (p, dim L) = ({p}, {k}) with a {}-dimensional L; parameters give ({p0}, {k0})", sub.dim()),
            ),
            Err(e) => Err(e.to_string()),
        },
    );

    v.record(
        "module_relations",
        recorded_module
            .check_relations()
            .map(|_| "exterior relations hold".to_string())
            .map_err(|e| e.to_string()),
    );

    let rebuilt = rebuild_module(field, p, l, n, &sub)?;
    let module = rebuilt.module;
    v.record(
        "module_matches_subspace",
        ensure(
            module == recorded_module && rebuilt.complement == report.complement,
            "module equals P/L",
            "recorded module or complement differs from P/L rebuilt from L",
        ),
    );

    let terms: Vec<(i64, usize)> = report
        .resolution
        .terms
        .iter()
        .map(|t| (t.twist, t.rank))
        .collect();
    let recorded_complex = if terms.len() == diffs.len() + 1 && report.resolution.field == field {
        Some(LinearComplex::new(field, n, terms.clone(), diffs.clone()))
    } else {
        None
    };
    v.record(
        "composite_zero",
        match &recorded_complex {
            Some(Ok(_)) => Ok("consecutive differentials compose to zero".into()),
            Some(Err(e)) => Err(e.to_string()),
            None => Err("resolution terms and differentials do not fit together".into()),
        },
    );
    let complex = bgg_complex(&module);
    v.record(
        "resolution_matches_module",
        ensure(
            complex.terms() == terms.as_slice() && complex.diffs() == diffs.as_slice(),
            "resolution equals the complex of P/L",
            "recorded resolution differs from the complex of P/L",
        ),
    );
    let dims: Vec<usize> = module.piece_dims().to_vec();
    v.record(
        "terms_match_pieces",
        ensure(
            terms.iter().map(|t| t.1).eq(dims.iter().copied())
                && terms.iter().enumerate().all(|(i, t)| t.0 == i as i64),
            format!("term ranks {dims:?}"),
            format!(
                "term ranks {:?} differ from piece dims {dims:?}",
                terms.iter().map(|t| t.1).collect::<Vec<_>>()
            ),
        ),
    );

    let problem = AnchorProblem::new(p, w, sub.basis().clone())
        .map_err(|e| PipelineError::Schema(e.to_string()))?;
    let verdict = is_anchoring(&problem);
    v.record(
        "anchoring",
        ensure(
            verdict.anchoring && verdict == report.verification.anchoring,
            format!("L anchors k^{p}"),
            format!(
                "admissible φ form a {}-dimensional space (recorded {})",
                verdict.dimension, report.verification.anchoring.dimension
            ),
        ),
    );

    let hom = hom_space_dim(&module);
    v.record(
        "hom_dimension",
        ensure(
            hom == 1 && hom == report.verification.hom_dim,
            "Hom(P/L, P/L) = k",
            format!(
                "hom dimension {hom} (recorded {}), expected 1",
                report.verification.hom_dim
            ),
        ),
    );

    let rank = bundle_rank(&module);
    let chi_v = chi(&module).0;
    v.record(
        "rank",
        ensure(
            rank == r as i64
                && rank == report.verification.rank
                && chi_v == report.verification.chi,
            format!("rank {rank}"),
            format!(
                "rank {rank} (recorded {}), expected r = {r}",
                report.verification.rank
            ),
        ),
    );

    let scan_complex = match recorded_complex {
        Some(Ok(c)) => c,
        _ => complex,
    };
    let scan = rescan(&scan_complex, &report.verification.random_scan)?;
    v.record(
        "random_scan",
        ensure(
            scan.faithful() && scan == report.verification.random_scan,
            format!("{} points, no failures", scan.points_checked),
            format!(
                "{} failures in {} points; recorded scan {}",
                scan.failures.len(),
                scan.points_checked,
                if scan == report.verification.random_scan {
                    "agrees"
                } else {
                    "differs"
                }
            ),
        ),
    );

    if let Some(ex) = &report.verification.exhaustive {
        v.record("exhaustive_scan", check_exhaustive(report, ex, p, l, n, w)?);
    }

    let strands = QuotientStrands::new(n, p, l, sub.basis())
        .map_err(|e| PipelineError::Schema(e.to_string()))?;
    let recorded = &report.verification.hd;
    v.record(
        "cohomology",
        match certify_hd(&strands, l, recorded.margin) {
            Ok(cert) => ensure(
                cert == *recorded,
                format!("table on [{}, {}] reproduced", cert.t_lo, cert.t_hi),
                "recomputed cohomology table differs from the recorded one",
            ),
            Err(e) => Err(e.to_string()),
        },
    );
    v.record(
        "hd",
        ensure(
            recorded.hd == l,
            format!("hd = {l}"),
            format!("recorded hd {} differs from l = {l}", recorded.hd),
        ),
    );
    Ok(v)
}

fn check_exhaustive(
    report: &BundleReport,
    ex: &super::ExhaustiveRecord,
    p: usize,
    l: usize,
    n: usize,
    w: usize,
) -> Result<Result<String, String>, PipelineError> {
    let fq = ex.field;
    let basis = ex.subspace.to_matrix(fq)?;
    let sub = Subspace::new(basis.clone())
        .map_err(|e| PipelineError::Schema(format!("exhaustive subspace: {e}")))?;
    if sub.ambient_dim() != p * w || sub.dim() != report.l_dim {
        return Ok(Err(format!(
            "exhaustive subspace has shape {:?}",
            basis.shape()
        )));
    }
    let problem =
        AnchorProblem::new(p, w, basis).map_err(|e| PipelineError::Schema(e.to_string()))?;
    let verdict = is_anchoring(&problem);
    let module: GradedEModule = rebuild_module(fq, p, l, n, &sub)?.module;
    let scan = rescan(&bgg_complex(&module), &ex.scan)?;
    let same = scan == ex.scan
        && verdict == ex.anchoring
        && MatrixRecord::from(sub.basis()) == ex.subspace;
    Ok(ensure(
        scan.faithful() && same,
        format!("{} points over {fq}, no failures", scan.points_checked),
        format!(
            "{} failures in {} points over {fq}; recorded data {}",
            scan.failures.len(),
            scan.points_checked,
            if same { "agrees" } else { "differs" }
        ),
    ))
}
