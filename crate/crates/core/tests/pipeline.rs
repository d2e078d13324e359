use bgg_bundles::exactlin::{DenseMatrix, Field};
use bgg_bundles::pipeline::{
    cas_script, construct, verify, BundleReport, ConstructionParams, MatrixRecord, PipelineError,
};

fn light(n: usize, l: usize, r: usize, seed: u64) -> ConstructionParams {
    let mut p = ConstructionParams::new(n, l, r);
    p.seed = seed;
    p.policy.exhaustive_field = Some(5);
    p.policy.random_samples = 500;
    p
}

fn ranks(rep: &BundleReport) -> Vec<usize> {
    rep.resolution.terms.iter().map(|t| t.rank).collect()
}

#[test]
fn rank_five_example() {
    let rep = construct(&light(3, 2, 5, 42)).unwrap();
    assert_eq!((rep.multiplicity, rep.l_dim), (2, 1));
    assert_eq!(ranks(&rep), vec![2, 8, 11]);
    assert_eq!(rep.verification.rank, 5);
    assert_eq!(rep.verification.hom_dim, 1);
    assert_eq!(rep.verification.hd.hd, 2);
    let table = &rep.verification.hd.table;
    assert_eq!(table.get(1, -4), 2);
    assert_eq!(table.get(0, -2), 11);
    let ex = rep.verification.exhaustive.as_ref().unwrap();
    assert_eq!(ex.scan.points_checked, 156);
    assert!(ex.scan.faithful());
}

#[test]
fn free_module_case() {
    let mut params = light(4, 3, 4, 0);
    params.multiplicity = Some(1);
    let rep = construct(&params).unwrap();
    assert_eq!(rep.l_dim, 0);
    assert_eq!(rep.subspace.rows, 0);
    assert_eq!(ranks(&rep), vec![1, 5, 10, 10]);
    assert_eq!(rep.verification.rank, 4);
    assert_eq!(rep.verification.hd.hd, 3);
    assert!(verify(&rep).unwrap().passed());
}

#[test]
fn deterministic_reports() {
    let a = construct(&light(3, 1, 4, 7)).unwrap().to_json();
    let b = construct(&light(3, 1, 4, 7)).unwrap().to_json();
    assert_eq!(a, b);
    let c = construct(&light(3, 1, 4, 8)).unwrap().to_json();
    assert_ne!(a, c);
}

#[test]
fn json_round_trip_verifies() {
    let rep = construct(&light(3, 2, 5, 42)).unwrap();
    let back = BundleReport::from_json(&rep.to_json()).unwrap();
    assert_eq!(back, rep);
    let verdict = verify(&back).unwrap();
    for c in &verdict.checks {
        assert!(c.passed, "{}: {}", c.name, c.detail);
    }
    assert!(verdict.check("exhaustive_scan").is_some());
}

#[test]
fn corrupted_action_is_caught() {
    let mut rep = construct(&light(3, 2, 5, 42)).unwrap();
    // e_0 on degree 0, copy 0 → (copy 0, {0}); bumping it breaks e_0 e_1 + e_1 e_0 = 0
    let a = &mut rep.module.actions[0][0];
    let v: u32 = a.entries[0].parse().unwrap();
    a.entries[0] = ((v + 1) % 32003).to_string();
    let verdict = verify(&rep).unwrap();
    assert!(!verdict.check("module_relations").unwrap().passed);
    assert!(!verdict.check("module_matches_subspace").unwrap().passed);
    // the resolution and L are untouched
    assert!(verdict.check("composite_zero").unwrap().passed);
    assert!(verdict.check("hom_dimension").unwrap().passed);
}

#[test]
fn corrupted_differential_is_caught() {
    let mut rep = construct(&light(3, 2, 5, 42)).unwrap();
    let d = &mut rep.resolution.differentials[0][1];
    d.entries[3] = "17".into();
    let verdict = verify(&rep).unwrap();
    assert!(!verdict.check("composite_zero").unwrap().passed);
    assert!(!verdict.check("resolution_matches_module").unwrap().passed);
}

#[test]
fn decomposable_subspace_fails_hom_check() {
    let mut rep = construct(&light(3, 2, 5, 42)).unwrap();
    // a vector in copy 0 only: P/L splits as (copy 0)/L ⊕ copy 1
    let f = Field::Fp(32003);
    let mut b = DenseMatrix::zeros(f, 1, 12);
    b.set_i64(0, 0, 1);
    b.set_i64(0, 3, 5);
    rep.subspace = MatrixRecord::from(&b);
    let verdict = verify(&rep).unwrap();
    let hom = verdict.check("hom_dimension").unwrap();
    assert!(!hom.passed);
    let dim: usize = hom
        .detail
        .split_whitespace()
        .nth(2)
        .unwrap()
        .parse()
        .unwrap();
    assert!(dim > 1, "{}", hom.detail);
    assert!(!verdict.check("anchoring").unwrap().passed);
}

#[test]
fn malformed_reports_are_schema_errors() {
    let rep = construct(&light(3, 1, 3, 1)).unwrap();
    assert!(matches!(
        BundleReport::from_json("{}"),
        Err(PipelineError::Schema(_))
    ));
    let mut bad = rep.clone();
    bad.version = 99;
    assert!(matches!(
        BundleReport::from_json(&bad.to_json()),
        Err(PipelineError::Schema(_))
    ));
    let mut bad = rep.clone();
    bad.subspace.entries[0] = "x".into();
    assert!(matches!(verify(&bad), Err(PipelineError::Schema(_))));
    let mut bad = rep;
    bad.module.actions[0].pop();
    assert!(matches!(verify(&bad), Err(PipelineError::Schema(_))));
}

#[test]
fn retry_budget_exhaustion() {
    // over F_2 no 3-dimensional L of k^2 ⊗ V can be drawn often enough to pass
    let mut params = light(3, 1, 3, 0);
    params.field = Field::Fp(2);
    params.policy.exhaustive_field = None;
    params.policy.retry_budget = 2;
    params.policy.anchor_attempts = 1;
    params.policy.random_samples = 15;
    match construct(&params) {
        Err(PipelineError::RetriesExhausted {
            attempts,
            diagnostics,
        }) => {
            assert_eq!(attempts, 2);
            assert_eq!(diagnostics.len(), 2);
        }
        Ok(rep) => assert!(verify(&rep).unwrap().passed()),
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn rational_field() {
    let mut params = light(3, 1, 3, 3);
    params.field = Field::Q;
    params.policy.random_samples = 50;
    let rep = construct(&params).unwrap();
    assert_eq!(ranks(&rep), vec![2, 5]);
    assert!(verify(&rep).unwrap().passed());
}

#[test]
fn cas_script_shape() {
    let rep = construct(&light(3, 2, 5, 42)).unwrap();
    let s = cas_script(&rep);
    assert!(s.contains("kk = ZZ/32003;"));
    assert!(s.contains("S = kk[x_0..x_3];"));
    assert!(s.contains("D0 = map(S^{8:(1)}, S^{2:(0)}, {{"));
    assert!(s.contains("D1 = map(S^{11:(2)}, S^{8:(1)}, {{"));
    assert!(s.contains("assert(D1 * D0 == 0);"));
    assert!(s.contains("M = coker D1;"));
    assert!(s.contains("assert(rank F == 5);"));
    assert!(s.contains("assert(rank HH^1(F(-4)) == 2);"));
}

#[test]
fn table_exports() {
    let rep = construct(&light(3, 1, 3, 0)).unwrap();
    let text = rep.table_text();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].trim_start().starts_with("t |"));
    assert!(lines[2].trim_start().starts_with("q=3"));
    assert!(lines.last().unwrap().trim_start().starts_with("q=0"));
    let t: serde_json::Value = serde_json::from_str(&rep.table_json()).unwrap();
    assert_eq!(t["n"], 3);
}
