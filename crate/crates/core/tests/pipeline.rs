use gorecone_core::caselaw::{self, CaseLaw, Outcome};
use gorecone_core::morasb;
use gorecone_core::pipeline::{self, AnalyzeOptions, SuiteRow};
use gorecone_core::poly::{MonomialOrder, Polynomial};
use gorecone_core::semigroup::CurveSpec;
use gorecone_core::tcone;
use gorecone_core::toricgen::CaseLabel;

fn example() -> CurveSpec {
    CurveSpec::new([416, 577, 646, 744]).unwrap()
}

#[test]
fn report_has_the_documented_shape() {
    let (r, _) = pipeline::analyze(&example(), &AnalyzeOptions::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["spec", "structure", "basis", "tangent_cone", "prediction", "validation", "timings"] {
        assert!(keys.contains(&k), "missing {k}");
    }
    assert!(v["timings"].is_null());
    assert_eq!(v["structure"]["status"], "gorenstein");
    assert_eq!(v["structure"]["case"], "1b");
    assert_eq!(v["tangent_cone"]["minimal_count"], 7);
    assert_eq!(v["prediction"]["source"], "seven-1b#5");
    assert_eq!(v["validation"]["outcome"], "COUNT_MATCH_SET_MISMATCH");
    assert_eq!(v["validation"]["alternative"]["outcome"], "MATCH");
}

#[test]
fn reports_are_reproducible() {
    let opts = AnalyzeOptions::default();
    let a = serde_json::to_string(&pipeline::analyze(&example(), &opts).unwrap().0).unwrap();
    let b = serde_json::to_string(&pipeline::analyze(&example(), &opts).unwrap().0).unwrap();
    assert_eq!(a, b);
    let timed = AnalyzeOptions { timings: true, ..AnalyzeOptions::default() };
    let (r, _) = pipeline::analyze(&example(), &timed).unwrap();
    assert!(r.timings.unwrap().contains_key("basis"));
}

#[test]
fn ideal_does_not_depend_on_the_order() {
    let opts = |o| AnalyzeOptions { order: Some(o), ..AnalyzeOptions::default() };
    let (_, a) = pipeline::analyze(&example(), &opts(MonomialOrder::LOCAL_4231)).unwrap();
    let (_, b) = pipeline::analyze(&example(), &opts(MonomialOrder::LOCAL_4321)).unwrap();
    let (a, b) = (a.unwrap().tangent, b.unwrap().tangent);
    assert_eq!(a.minimal_count, b.minimal_count);
    assert_eq!(a.graded_dims, b.graded_dims);
    for p in &a.minimal_polys {
        assert!(tcone::ideal_contains(&b.generator_polys, p).unwrap());
    }
}

#[test]
fn budget_exhaustion_is_an_error() {
    let opts = AnalyzeOptions { budget: 1, ..AnalyzeOptions::default() };
    let err = pipeline::analyze(&example(), &opts).unwrap_err();
    assert!(matches!(err, gorecone_core::Error::CompletionBudgetExceeded(1)));
    let row = SuiteRow::from_result(&[416, 577, 646, 744], &Err(err));
    assert!(row.bound_exceeded);
    assert_eq!(row.outcome, None);
}

#[test]
fn worked_example_basis_against_the_printed_one() {
    let g: Vec<Polynomial> = [
        "x1^8 - x3^4*x4",
        "x2^10 - x1^3*x3^7",
        "x3^11 - x2^2*x4^8",
        "x4^9 - x1^5*x2^8",
        "x1^3*x4^8 - x2^8*x3^4",
        "x3^15 - x1^8*x2^2*x4^7",
        "x1^11*x4^7 - x2^8*x3^8",
    ]
    .iter()
    .map(|s| s.parse().unwrap())
    .collect();
    assert!(morasb::certify(&MonomialOrder::LOCAL_4231, &g).unwrap().is_certified());
    assert!(!morasb::certify(&MonomialOrder::LOCAL_4231, &g[..5]).unwrap().is_certified());
}

#[test]
fn suite_rows_and_coverage() {
    let (entries, _) = pipeline::gen_corpus(11, 30, None).unwrap();
    let opts = AnalyzeOptions::default();
    let rows: Vec<SuiteRow> =
        entries.iter().map(|e| SuiteRow::from_result(&e.spec.n(), &pipeline::analyze(&e.spec, &opts))).collect();
    let cov = pipeline::coverage(&rows);
    let total: usize = cov.values().flat_map(|m| m.values()).sum();
    assert_eq!(total, rows.iter().filter(|r| r.outcome.is_some()).count());
    assert!(rows.iter().all(|r| r.outcome != Some(Outcome::Mismatch)));
    for r in rows.iter().filter(|r| r.outcome == Some(Outcome::CountMatchSetMismatch)) {
        assert!(r.erratum_confirmed, "{:?}", r.spec);
    }
}

#[test]
fn family_samples_satisfy_their_hypotheses() {
    let law = CaseLaw::builtin();
    let fam = law.family("theorem-3b-a43<=a23-ii").unwrap();
    let sample = pipeline::family_sample(fam, 9, 4, (2, 10), 200_000).unwrap();
    assert_eq!(sample.len(), 4);
    for (spec, d) in &sample {
        assert_eq!(d.case_label, CaseLabel::C3b);
        assert!(law.family_admits(fam, d).unwrap());
        assert_eq!(caselaw::predict_cm(d).unwrap().verdict, Some(true), "{spec}");
    }
}
