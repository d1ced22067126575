//! Subcommand bodies. Each returns an [`Outcome`] holding every output format
//! plus the exit code; rendering happens in `main`.

use std::fmt::Write as _;

use anyhow::Context;
use borwein_core::dissection::{
    verify_finite_borwein, verify_fractional_interval, verify_nonnegative, Dissection3, Status, VerificationReport,
};
use borwein_core::qproducts::{borwein_finite_degree, jacobi_triple_product_check};
use borwein_core::ring::{DPolynomial, PolyRing, Rationals, Ring};
use borwein_core::series::TruncatedSeries;
use borwein_core::symbolic::{feasible_region, Domain, GapStatus};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cache::Cache;
use crate::config::{display_elem, display_json, usage, Exponent, Resolved};

pub const OUTPUT_VERSION: u32 = 1;
const PRODUCT: &str = "(q,q^2;q^3)_inf^d";

pub struct Outcome {
    pub json: Value,
    pub text: String,
    /// Header first.
    pub csv: Vec<Vec<String>>,
    pub exit: i32,
}

fn row(cells: &[&str]) -> Vec<String> {
    cells.iter().map(|c| c.to_string()).collect()
}

/// Exponent and ring chosen on the command line.
pub struct ExponentChoice {
    pub exponent: Exponent,
    pub resolved: Resolved,
}

impl ExponentChoice {
    pub fn label(&self) -> String {
        self.exponent.label()
    }
}

fn series_outcome<R: Ring>(s: &TruncatedSeries<R>, choice: &ExponentChoice, order: usize) -> Outcome {
    let ring = s.ring();
    let mut text = format!("{PRODUCT} with d = {}, ring {}, through q^{order}\n", choice.label(), ring.tag());
    let mut csv = vec![row(&["index", "coefficient"])];
    for (k, c) in s.coeffs().iter().enumerate() {
        let shown = display_elem(ring, c);
        let _ = writeln!(text, "q^{k}: {shown}");
        csv.push(vec![k.to_string(), shown]);
    }
    Outcome {
        json: json!({
            "version": OUTPUT_VERSION,
            "product": PRODUCT,
            "d": choice.label(),
            "order": order,
            "ring": ring.tag(),
            "series": s.to_json(),
        }),
        text,
        csv,
        exit: 0,
    }
}

fn dissection_outcome<R: Ring>(s: &TruncatedSeries<R>, choice: &ExponentChoice, order: usize) -> anyhow::Result<Outcome> {
    let d = Dissection3::borwein(s)?;
    let ring = s.ring();
    let mut text = format!(
        "{PRODUCT} = A(q^3) - q B(q^3) - q^2 C(q^3) with d = {}, ring {}, through q^{order}\n",
        choice.label(),
        ring.tag()
    );
    let mut csv = vec![row(&["component", "index", "coefficient"])];
    let mut components = serde_json::Map::new();
    for (name, comp) in d.components() {
        let shown: Vec<String> = comp.coeffs().iter().map(|c| display_elem(ring, c)).collect();
        let _ = writeln!(text, "{name}: [{}]", shown.join(", "));
        csv.extend(shown.into_iter().enumerate().map(|(k, c)| vec![name.to_string(), k.to_string(), c]));
        components.insert(name.to_string(), comp.to_json());
    }
    Ok(Outcome {
        json: json!({
            "version": OUTPUT_VERSION,
            "d": choice.label(),
            "order": order,
            "ring": ring.tag(),
            "signs": ["+", "-", "-"],
            "components": components,
        }),
        text,
        csv,
        exit: 0,
    })
}

pub fn expand(choice: &ExponentChoice, order: usize, cache: &Cache) -> anyhow::Result<Outcome> {
    Ok(match &choice.resolved {
        Resolved::Rational(d) => series_outcome(&cache.fractional(&Rationals, d, order)?, choice, order),
        Resolved::Quadratic(k, d) => series_outcome(&cache.fractional(k, d, order)?, choice, order),
        Resolved::Interval(f, d) => series_outcome(&cache.fractional(f, &f.from_rational(d), order)?, choice, order),
        Resolved::Formal => {
            series_outcome(&cache.fractional(&PolyRing, &DPolynomial::indeterminate(), order)?, choice, order)
        }
    })
}

pub fn dissect(choice: &ExponentChoice, order: usize, cache: &Cache) -> anyhow::Result<Outcome> {
    match &choice.resolved {
        Resolved::Rational(d) => dissection_outcome(&cache.fractional(&Rationals, d, order)?, choice, order),
        Resolved::Quadratic(k, d) => dissection_outcome(&cache.fractional(k, d, order)?, choice, order),
        Resolved::Interval(f, d) => dissection_outcome(&cache.fractional(f, &f.from_rational(d), order)?, choice, order),
        Resolved::Formal => {
            dissection_outcome(&cache.fractional(&PolyRing, &DPolynomial::indeterminate(), order)?, choice, order)
        }
    }
}

fn exact_report<R: Ring>(ring: &R, d: &R::Elem, order: usize, cache: &Cache) -> anyhow::Result<VerificationReport> {
    let s = cache.fractional(ring, d, order)?;
    let report = verify_nonnegative(&Dissection3::borwein(&s)?)?;
    Ok(report.with_params(json!({"product": PRODUCT, "d": ring.to_json(d)})))
}

/// Verification report for one exponent, with the command-line label added
/// to its parameters.
pub fn verification_report(choice: &ExponentChoice, order: usize, cache: &Cache) -> anyhow::Result<VerificationReport> {
    let mut report = match &choice.resolved {
        Resolved::Rational(d) => exact_report(&Rationals, d, order, cache)?,
        Resolved::Quadratic(k, d) => exact_report(k, d, order, cache)?,
        Resolved::Interval(f, d) => verify_fractional_interval(*f, d, order)?,
        Resolved::Formal => {
            return Err(usage(
                "the formal exponent d has no pointwise verdict; use `borwein region` for the d-region instead",
            ))
        }
    };
    report.params["label"] = json!(choice.label());
    Ok(report)
}

fn report_lines(report: &VerificationReport, heading: &str) -> String {
    let mut text = format!(
        "{heading}, ring {}, checked through q^{}: {}\n",
        report.ring,
        report.checked_order,
        report.status.as_str()
    );
    let comps = &report.components;
    for (name, v) in [("A", &comps.A), ("B", &comps.B), ("C", &comps.C)] {
        let line = match (v.first_violation, &v.witness, v.first_unknown) {
            (Some(k), Some(w), _) => format!("first negative coefficient at index {k}: {}", display_json(w)),
            (_, _, Some(k)) => format!("sign undecided from index {k}"),
            _ => "nonnegative".to_string(),
        };
        let _ = writeln!(text, "  {name}: {line}");
    }
    text
}

fn report_csv_rows(report: &VerificationReport, label: &str) -> Vec<Vec<String>> {
    let comps = &report.components;
    [("A", &comps.A), ("B", &comps.B), ("C", &comps.C)]
        .into_iter()
        .map(|(name, v)| {
            let opt = |x: Option<usize>| x.map(|k| k.to_string()).unwrap_or_default();
            vec![
                label.to_string(),
                report.checked_order.to_string(),
                report.ring.clone(),
                report.status.as_str().to_string(),
                name.to_string(),
                opt(v.first_violation),
                v.witness.as_ref().map(display_json).unwrap_or_default(),
                opt(v.first_unknown),
            ]
        })
        .collect()
}

fn report_csv_header() -> Vec<String> {
    row(&["d", "order", "ring", "status", "component", "first_violation", "witness", "first_unknown"])
}

pub fn verify(choice: &ExponentChoice, order: usize, cache: &Cache) -> anyhow::Result<Outcome> {
    let report = verification_report(choice, order, cache)?;
    let mut csv = vec![report_csv_header()];
    csv.extend(report_csv_rows(&report, &choice.label()));
    Ok(Outcome {
        text: report_lines(&report, &format!("{PRODUCT} with d = {}", choice.label())),
        json: report.to_json(),
        csv,
        exit: report.status.exit_code(),
    })
}

pub fn finite(n: usize, squared: bool) -> anyhow::Result<Outcome> {
    let report = verify_finite_borwein(n, squared)?;
    let label = if squared { format!("(q,q^2;q^3)_{n}^2") } else { format!("(q,q^2;q^3)_{n}") };
    let degree = borwein_finite_degree(n) * if squared { 2 } else { 1 };
    let mut text = report_lines(&report, &format!("{label} (degree {degree})"));
    let mut json = report.to_json();
    if squared && report.status == Status::Violation {
        text.push_str(&format!(
            "RESEARCH FINDING: the squared product at n = {n} has a negative dissection coefficient, \
             contradicting the second Borwein conjecture. Re-check the witness above independently.\n"
        ));
        json["research_finding"] = json!(true);
    }
    if !squared && report.status == Status::Violation {
        text.push_str("IMPLEMENTATION BUG: the first Borwein conjecture is a theorem; this violation cannot be genuine.\n");
    }
    let mut csv = vec![report_csv_header()];
    csv.extend(report_csv_rows(&report, &label));
    Ok(Outcome { text, json, csv, exit: report.status.exit_code() })
}

/// Points the conjectured d-set contains; missing any is a potential
/// counterexample.
pub fn conjecture_samples() -> Vec<BigRational> {
    [(23, 100), (1, 2), (1, 1), (2, 1), (5, 2), (3, 1)]
        .into_iter()
        .map(|(n, d)| BigRational::new(n.into(), d.into()))
        .collect()
}

pub fn region(order: usize, domain: &Domain) -> anyhow::Result<Outcome> {
    if order == 0 {
        return Err(usage("region needs --order >= 1"));
    }
    let region = feasible_region(order, domain)?;
    let mut json = region.to_json();
    let summary = region.summary();
    let mut text = format!("{summary}\n");
    json["summary"] = json!(summary);
    for e in region.endpoints() {
        let _ = writeln!(text, "  binding at {e}: {:?}", e.binding);
    }

    let (one, two) = (BigRational::from_integer(1.into()), BigRational::from_integer(2.into()));
    if domain.lo <= one && two <= domain.hi {
        let gap = match region.gap_status(&one, &two) {
            GapStatus::Covered => "covered",
            GapStatus::Partial => "partially excluded",
            GapStatus::Excluded => "excluded",
        };
        let _ = writeln!(text, "  gap (1, 2): {gap}");
        json["gap_1_2"] = json!(gap);
    }

    let samples: Vec<BigRational> =
        conjecture_samples().into_iter().filter(|x| domain.lo <= *x && *x <= domain.hi).collect();
    let missing = region.missing(&samples);
    json["samples"] = json!({
        "checked": samples.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "missing": missing.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    let exit = if missing.is_empty() {
        0
    } else {
        let _ = writeln!(
            text,
            "POTENTIAL COUNTEREXAMPLE: order {order} excludes {}; see the JSON output for exact endpoints",
            missing.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
        );
        1
    };

    let mut csv = vec![row(&["kind", "lo", "hi", "lo_binding", "hi_binding"])];
    let bind = |b: &[usize]| b.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    for iv in &region.intervals {
        csv.push(vec!["interval".into(), iv.lo.label(), iv.hi.label(), bind(&iv.lo.binding), bind(&iv.hi.binding)]);
    }
    for p in &region.isolated_points {
        csv.push(vec!["point".into(), p.label(), p.label(), bind(&p.binding), bind(&p.binding)]);
    }
    Ok(Outcome { json, text, csv, exit })
}

pub fn scan(choices: &[ExponentChoice], order: usize, cache: &Cache, jobs: usize) -> anyhow::Result<Outcome> {
    if choices.is_empty() {
        return Err(usage("scan needs at least one exponent (--d or --grid)"));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().context("starting worker pool")?;
    // collect keeps input order, so output does not depend on scheduling
    let reports: Vec<VerificationReport> =
        pool.install(|| choices.par_iter().map(|c| verification_report(c, order, cache)).collect::<anyhow::Result<_>>())?;
    let worst = reports.iter().map(|r| r.status).max().unwrap_or(Status::VerifiedNonnegative);
    let mut text = String::new();
    let mut csv = vec![report_csv_header()];
    for (c, r) in choices.iter().zip(&reports) {
        text.push_str(&report_lines(r, &format!("d = {}", c.label())));
        csv.extend(report_csv_rows(r, &c.label()));
    }
    let _ = writeln!(text, "worst status over {} exponents: {}", reports.len(), worst.as_str());
    Ok(Outcome {
        json: Value::Array(reports.iter().map(VerificationReport::to_json).collect()),
        text,
        csv,
        exit: worst.exit_code(),
    })
}

pub fn jtp(order: usize, z: Option<i64>, bound: Option<usize>) -> anyhow::Result<Outcome> {
    let bound = bound.unwrap_or_else(|| (order as f64).sqrt() as usize + 1);
    let zs = match z {
        Some(z) => vec![z],
        None => vec![1, -1],
    };
    let reports = zs
        .iter()
        .map(|&z| jacobi_triple_product_check(z, order, bound).map_err(|e| usage(e.to_string())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let passed = reports.iter().all(|r| r.passed);
    let mut text = String::new();
    let mut csv = vec![row(&["z", "order", "terms", "passed", "first_mismatch"])];
    for r in &reports {
        let mismatch = r.first_mismatch.as_ref().map(|(i, a, b)| format!("q^{i}: product {a}, sum {b}"));
        let _ = writeln!(
            text,
            "triple product z = {}, through q^{}: {}{}",
            r.z,
            r.order,
            if r.passed { "passed" } else { "FAILED" },
            mismatch.as_ref().map(|m| format!(" ({m})")).unwrap_or_default()
        );
        csv.push(vec![r.z.to_string(), r.order.to_string(), r.terms.to_string(), r.passed.to_string(), mismatch.unwrap_or_default()]);
    }
    Ok(Outcome {
        json: json!({"version": OUTPUT_VERSION, "passed": passed, "checks": reports}),
        text,
        csv,
        exit: if passed { 0 } else { 1 },
    })
}
