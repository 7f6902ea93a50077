use std::fmt::Write;

use gorecone_core::caselaw::{Comparison, Outcome};
use gorecone_core::pipeline::{coverage, AnalysisReport, StructureReport, SuiteRow};

pub fn report(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let n = r.spec.n();
    let _ = writeln!(s, "S = <{}, {}, {}, {}>", n[0], n[1], n[2], n[3]);
    match &r.structure {
        StructureReport::Rejected { reason, frobenius } => {
            let _ = writeln!(s, "Frobenius number {frobenius}");
            let _ = writeln!(s, "not analyzed: {reason}");
            return s;
        }
        StructureReport::Gorenstein { case, frobenius, a, exponents, generators, .. } => {
            let _ = writeln!(s, "Frobenius number {frobenius}, case {case}");
            let _ = writeln!(s, "a1..a4 = {} {} {} {}", a[0], a[1], a[2], a[3]);
            let ex: Vec<String> = exponents.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "{}", ex.join(" "));
            let _ = writeln!(s, "\nI(C):");
            for (i, g) in generators.iter().enumerate() {
                let _ = writeln!(s, "  f{} = {g}", i + 1);
            }
        }
    }
    if let Some(b) = &r.basis {
        let _ = writeln!(s, "\nstandard basis, {} ({} added):", b.order, b.added);
        for (i, g) in b.elements.iter().enumerate() {
            let _ = writeln!(s, "  f{} = {g}", i + 1);
        }
    }
    if let Some(t) = &r.tangent_cone {
        let t = &t.report;
        let _ = writeln!(s, "\nI(C)* minimally generated by {}:", t.minimal_count);
        for g in &t.minimal_generators {
            let _ = writeln!(s, "  {g}");
        }
        let cm = if t.cm.is_cm { "Cohen-Macaulay" } else { "not Cohen-Macaulay" };
        let _ = write!(s, "tangent cone {cm}");
        if let Some(w) = &t.cm.witness {
            let _ = write!(s, " (x1*{w} in I(C)*, {w} not)");
        }
        let _ = writeln!(s);
        let dims: Vec<String> = t.graded_dims.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "Hilbert function up to degree {}: {}", t.degree_bound, dims.join(" "));
    }
    if let Some(p) = &r.prediction {
        let p = &p.prediction;
        let _ = writeln!(s);
        match &p.source {
            Some(src) => {
                let _ = writeln!(s, "prediction from {src}:");
            }
            None => {
                let _ = writeln!(s, "no statement covers this curve");
            }
        }
        for h in &p.hypotheses {
            let _ = writeln!(s, "  {}  ({} vs {}) {}", h.text, h.lhs, h.rhs, if h.truth { "holds" } else { "fails" });
        }
        if let Some(gs) = &p.predicted_generators {
            for g in gs {
                let _ = writeln!(s, "  {g}");
            }
        }
    }
    if let Some(v) = &r.validation {
        let v = &v.outcome;
        let _ = writeln!(s, "\nvalidation: {}", v.outcome);
        if let Some(c) = &v.comparison {
            diff(&mut s, c);
        }
        if let Some(alt) = &v.alternative {
            let _ = writeln!(s, "with the recorded erratum: {}", alt.outcome);
            diff(&mut s, alt);
        }
        if let Some(note) = &v.note {
            let _ = writeln!(s, "note: {note}");
        }
    }
    if let Some(t) = &r.timings {
        let _ = writeln!(s);
        for (k, v) in t {
            let _ = writeln!(s, "{k}: {v:.3}s");
        }
    }
    s
}

fn diff(s: &mut String, c: &Comparison) {
    for p in &c.predicted_only {
        let _ = writeln!(s, "  - {p}");
    }
    for p in &c.computed_only {
        let _ = writeln!(s, "  + {p}");
    }
}

pub fn suite(rows: &[SuiteRow]) -> String {
    let mut s = String::new();
    for r in rows {
        let n: Vec<String> = r.spec.iter().map(u64::to_string).collect();
        let case = r.case.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        let status = match (&r.outcome, &r.error) {
            (Some(o), _) => o.to_string(),
            (None, Some(e)) => format!("error: {e}"),
            (None, None) => "-".into(),
        };
        let src = r.source.as_deref().unwrap_or("-");
        let count = r.minimal_count.map(|c| c.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "{:<22} {case:<3} {count:>2} {status:<26} {src}", n.join(" "));
    }
    let cov = coverage(rows);
    let cols = [Outcome::Match, Outcome::CountMatchSetMismatch, Outcome::Mismatch, Outcome::Uncovered];
    let _ = writeln!(s, "\n{:<30} {:>6} {:>6} {:>6} {:>6}", "source", "match", "count", "mism", "uncov");
    for (key, m) in &cov {
        let _ = write!(s, "{key:<30}");
        for o in &cols {
            let _ = write!(s, " {:>6}", m.get(o).copied().unwrap_or(0));
        }
        let _ = writeln!(s);
    }
    let errors = rows.iter().filter(|r| r.outcome.is_none()).count();
    let errata = rows.iter().filter(|r| r.erratum_confirmed).count();
    let _ = writeln!(s, "{} curves, {errors} without outcome, {errata} confirm a recorded erratum", rows.len());
    s
}
