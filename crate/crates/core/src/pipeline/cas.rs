use std::fmt::Write;

use super::BundleReport;
use crate::exactlin::Field;

fn linear_form(slices: &[Vec<String>], idx: usize) -> String {
    let mut out = String::new();
    for (j, s) in slices.iter().enumerate() {
        let coef = &s[idx];
        if coef == "0" {
            continue;
        }
        let (neg, mag) = match coef.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, coef.as_str()),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag != "1" {
            let _ = write!(out, "({mag})*");
        }
        let _ = write!(out, "x_{j}");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A Macaulay2 script rebuilding the resolution of a report, its cokernel
/// sheaf, and asserting the recorded rank and cohomology table.
pub fn cas_script(report: &BundleReport) -> String {
    let n = report.params.n;
    let res = &report.resolution;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "-- bundle of rank {} on P^{n} with homological dimension {}",
        report.params.r, report.params.l
    );
    let ring = match res.field {
        Field::Fp(p) => format!("ZZ/{p}"),
        Field::Q => "QQ".to_string(),
    };
    let _ = writeln!(s, "kk = {ring};");
    let _ = writeln!(s, "S = kk[x_0..x_{n}];");
    for (i, slices) in res.differentials.iter().enumerate() {
        let (rows, cols) = (slices[0].rows, slices[0].cols);
        let entries: Vec<Vec<String>> = slices.iter().map(|m| m.entries.clone()).collect();
        let body: Vec<String> = (0..rows)
            .map(|a| {
                let row: Vec<String> = (0..cols)
                    .map(|b| linear_form(&entries, a * cols + b))
                    .collect();
                format!("{{{}}}", row.join(", "))
            })
            .collect();
        let (src, tgt) = (&res.terms[i], &res.terms[i + 1]);
        let matrix = if rows == 0 || cols == 0 {
            format!(
                "map(S^{{{}:({})}}, S^{{{}:({})}}, 0)",
                tgt.rank, tgt.twist, src.rank, src.twist
            )
        } else {
            format!(
                "map(S^{{{}:({})}}, S^{{{}:({})}}, {{{}}})",
                tgt.rank,
                tgt.twist,
                src.rank,
                src.twist,
                body.join(", ")
            )
        };
        let _ = writeln!(s, "D{i} = {matrix};");
        let _ = writeln!(s, "assert isHomogeneous D{i};");
    }
    let c = res.differentials.len();
    for i in 1..c {
        let _ = writeln!(s, "assert(D{i} * D{} == 0);", i - 1);
    }
    if c == 0 {
        let t = &res.terms[0];
        let _ = writeln!(s, "M = S^{{{}:({})}};", t.rank, t.twist);
    } else {
        let _ = writeln!(s, "M = coker D{};", c - 1);
    }
    let _ = writeln!(s, "F = sheaf M;");
    let _ = writeln!(s, "assert(rank F == {});", report.verification.rank);
    let table = &report.verification.hd.table;
    for t in table.twists() {
        for q in 0..=n {
            let _ = writeln!(s, "assert(rank HH^{q}(F({t})) == {});", table.get(q, t));
        }
    }
    s
}
