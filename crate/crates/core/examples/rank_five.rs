//! Builds the rank 5 bundle on P^3 with homological dimension 2 and prints
//! its cohomology table.

use bgg_bundles::pipeline::{construct, verify, ConstructionParams};

fn main() {
    let mut params = ConstructionParams::new(3, 2, 5);
    params.seed = 42;
    // skip the million-point scan over F_101 here
    params.policy.exhaustive_field = Some(7);
    let report = construct(&params).expect("construction succeeds");
    let v = &report.verification;
    println!(
        "p = {}, dim L = {}, rank {}, hom dim {}, hd {}",
        report.multiplicity, report.l_dim, v.rank, v.hom_dim, v.hd.hd
    );
    print!("{}", report.table_text());
    let verdict = verify(&report).expect("well-formed report");
    println!("verify: {}", if verdict.passed() { "all checks pass" } else { "FAILED" });
}
