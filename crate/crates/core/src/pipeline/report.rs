use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::{ConstructionParams, PipelineError};
use crate::anchor::AnchorVerdict;
use crate::bgg::{FaithfulnessReport, LinearComplex, MatrixOfLinearForms};
use crate::emod::GradedEModule;
use crate::exactlin::{DenseMatrix, Field, Subspace};
use crate::sheafcoh::HdCertificate;

pub const REPORT_FORMAT: &str = "bgg-bundle-report";
pub const REPORT_VERSION: u32 = 1;

/// A dense matrix with entries as decimal strings (`"num/den"` over `Q`),
/// row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl From<&DenseMatrix> for MatrixRecord {
    fn from(m: &DenseMatrix) -> Self {
        MatrixRecord {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entry_strings(),
        }
    }
}

impl MatrixRecord {
    pub fn to_matrix(&self, field: Field) -> Result<DenseMatrix, PipelineError> {
        DenseMatrix::from_strings(field, self.rows, self.cols, &self.entries)
            .map_err(|e| PipelineError::Schema(format!("matrix {}×{}: {e}", self.rows, self.cols)))
    }
}

/// The index conventions every matrix in a report is written in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conventions {
    pub exterior_basis: String,
    pub module_basis: String,
    pub actions: String,
    pub quotient_basis: String,
    pub anchor_flattening: String,
    pub monomial_order: String,
    pub matrices: String,
    pub projective_points: String,
    pub differentials: String,
    pub cohomology_table: String,
}

impl Conventions {
    pub fn current() -> Self {
        let s = |x: &str| x.to_string();
        Conventions {
            exterior_basis: s("wedge^i V has basis e_S for i-subsets S of {0..n}, sorted ascending, ordered lexicographically"),
            module_basis: s("P_i = k^p ⊗ wedge^i V with (a, S) at index a·C(n+1, i) + pos(S), copy a in 0..p"),
            actions: s("actions[i][j] is the matrix of e_j : P_i → P_{i+1}, e_j·e_S = (−1)^{#{s ∈ S : s < j}} e_{S ∪ {j}}"),
            quotient_basis: s("P_c / L has basis the coordinates `complement` of P_c that are not pivots of the reduced echelon basis of L"),
            anchor_flattening: s("a vector of P_c = k^p ⊗ wedge^c V at index i·C(n+1, c) + a is slice entry (copy i, subset a)"),
            monomial_order: s("monomials of degree d in x_0..x_n are ordered graded-lexicographically with x_0^d first"),
            matrices: s("row-major; entries are decimal strings, canonical representatives in [0, p) over F_p, \"num/den\" over Q"),
            projective_points: s("normalized representatives with first nonzero coordinate 1, enumerated lexicographically"),
            differentials: s("differentials[i][j] is the coefficient of x_j in D_i : P_i ⊗ O(i) → P_{i+1} ⊗ O(i+1)"),
            cohomology_table: s("entries[t − t_lo][q] = dim H^q(F(t))"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub piece_dims: Vec<usize>,
    pub actions: Vec<Vec<MatrixRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub twist: i64,
    pub rank: usize,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionRecord {
    #[serde_as(as = "DisplayFromStr")]
    pub field: Field,
    pub terms: Vec<TermRecord>,
    pub differentials: Vec<Vec<MatrixRecord>>,
}

/// The exhaustive scan runs on the construction rebuilt over a small prime
/// field with its own subspace.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveRecord {
    #[serde_as(as = "DisplayFromStr")]
    pub field: Field,
    pub subspace: MatrixRecord,
    pub anchoring: AnchorVerdict,
    pub scan: FaithfulnessReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub random_scan: FaithfulnessReport,
    pub exhaustive: Option<ExhaustiveRecord>,
    pub hom_dim: usize,
    pub anchoring: AnchorVerdict,
    pub rank: i64,
    pub chi: Vec<i64>,
    pub hd: HdCertificate,
}

/// Milliseconds per stage of the successful attempt.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub anchor_ms: f64,
    pub module_ms: f64,
    pub faithfulness_ms: f64,
    pub hom_ms: f64,
    pub cohomology_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Versions {
    pub library: String,
    pub report: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleReport {
    pub format: String,
    pub version: u32,
    pub conventions: Conventions,
    pub params: ConstructionParams,
    /// The multiplicity `p` actually used.
    pub multiplicity: usize,
    pub l_dim: usize,
    /// Zero-based index of the attempt that passed.
    pub attempt: usize,
    pub failed_attempts: Vec<String>,
    pub module: ModuleRecord,
    /// Basis of `L ⊆ P_c`, one vector per row.
    pub subspace: MatrixRecord,
    pub complement: Vec<usize>,
    pub resolution: ResolutionRecord,
    pub verification: Verification,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub versions: Versions,
}

impl BundleReport {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        params: &ConstructionParams,
        p: usize,
        k: usize,
        attempt: usize,
        failed_attempts: Vec<String>,
        module: &GradedEModule,
        complement: &[usize],
        subspace: &Subspace,
        complex: &LinearComplex,
        verification: Verification,
        timings: Option<Timings>,
    ) -> Self {
        BundleReport {
            format: REPORT_FORMAT.to_string(),
            version: REPORT_VERSION,
            conventions: Conventions::current(),
            params: params.clone(),
            multiplicity: p,
            l_dim: k,
            attempt,
            failed_attempts,
            module: ModuleRecord {
                piece_dims: module.piece_dims().to_vec(),
                actions: module
                    .actions()
                    .iter()
                    .map(|row| row.iter().map(MatrixRecord::from).collect())
                    .collect(),
            },
            subspace: MatrixRecord::from(subspace.basis()),
            complement: complement.to_vec(),
            resolution: ResolutionRecord {
                field: complex.field(),
                terms: complex
                    .terms()
                    .iter()
                    .map(|&(twist, rank)| TermRecord { twist, rank })
                    .collect(),
                differentials: complex
                    .diffs()
                    .iter()
                    .map(|d| d.slices().iter().map(MatrixRecord::from).collect())
                    .collect(),
            },
            verification,
            timings,
            versions: Versions {
                library: env!("CARGO_PKG_VERSION").to_string(),
                report: REPORT_VERSION,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    /// Parses a report, rejecting unknown formats and versions.
    pub fn from_json(s: &str) -> Result<Self, PipelineError> {
        let report: BundleReport =
            serde_json::from_str(s).map_err(|e| PipelineError::Schema(e.to_string()))?;
        if report.format != REPORT_FORMAT {
            return Err(PipelineError::Schema(format!(
                "unknown format {:?}",
                report.format
            )));
        }
        if report.version != REPORT_VERSION {
            return Err(PipelineError::Schema(format!(
                "report version {} is not supported (expected {REPORT_VERSION})",
                report.version
            )));
        }
        Ok(report)
    }

    pub fn field(&self) -> Field {
        self.params.field
    }

    pub fn module(&self) -> Result<GradedEModule, PipelineError> {
        let field = self.field();
        let actions = self
            .module
            .actions
            .iter()
            .map(|row| {
                row.iter()
                    .map(|m| m.to_matrix(field))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        GradedEModule::from_parts_unchecked(
            field,
            self.params.n,
            self.module.piece_dims.clone(),
            actions,
        )
        .map_err(|e| PipelineError::Schema(format!("module: {e}")))
    }

    /// The recorded differentials, without the composite check.
    pub fn differentials(&self) -> Result<Vec<MatrixOfLinearForms>, PipelineError> {
        let field = self.resolution.field;
        self.resolution
            .differentials
            .iter()
            .map(|slices| {
                let s = slices
                    .iter()
                    .map(|m| m.to_matrix(field))
                    .collect::<Result<Vec<_>, _>>()?;
                MatrixOfLinearForms::new(s)
                    .map_err(|e| PipelineError::Schema(format!("differential: {e}")))
            })
            .collect()
    }

    pub fn subspace(&self) -> Result<Subspace, PipelineError> {
        let b = self.subspace.to_matrix(self.field())?;
        Subspace::new(b).map_err(|e| PipelineError::Schema(format!("subspace: {e}")))
    }

    pub fn table_text(&self) -> String {
        self.verification.hd.table.to_text()
    }

    pub fn table_json(&self) -> String {
        serde_json::to_string_pretty(&self.verification.hd.table).expect("tables always serialize")
    }
}
