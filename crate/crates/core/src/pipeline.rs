//! End-to-end analysis of one curve, seeded corpus generation and suite runs.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::caselaw::{self, CaseLaw, CasePrediction, Family, Outcome, ValidationOutcome};
use crate::error::{Error, Result};
use crate::morasb::{self, StandardBasis};
use crate::poly::MonomialOrder;
use crate::semigroup::CurveSpec;
use crate::tcone::{self, TangentConeReport};
use crate::toricgen::{self, BresinskyData, Case1aParams, CaseLabel, Structure};

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub order: Option<MonomialOrder>,
    pub bound: Option<u32>,
    pub budget: usize,
    pub timings: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { order: None, bound: None, budget: morasb::budget_from_env(), timings: false }
    }
}

fn digest(parts: impl IntoIterator<Item = String>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update(p.as_bytes());
        h.update([0u8]);
    }
    format!("{:x}", h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StructureReport {
    Gorenstein {
        case: CaseLabel,
        frobenius: u64,
        a: [u32; 4],
        exponents: BTreeMap<String, u32>,
        generators: Vec<String>,
        digest: String,
    },
    Rejected {
        reason: String,
        frobenius: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisSummary {
    pub order: String,
    pub elements: Vec<String>,
    pub inputs: usize,
    pub added: usize,
    pub pairs_processed: usize,
    pub certified_pairs: usize,
    pub input_digest: String,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentStage {
    pub input_digest: String,
    #[serde(flatten)]
    pub report: TangentConeReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictionStage {
    pub input_digest: String,
    pub cm_uncovered: bool,
    #[serde(flatten)]
    pub prediction: CasePrediction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationStage {
    pub prediction_digest: String,
    pub tangent_digest: String,
    #[serde(flatten)]
    pub outcome: ValidationOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub spec: CurveSpec,
    pub structure: StructureReport,
    pub basis: Option<BasisSummary>,
    pub tangent_cone: Option<TangentStage>,
    pub prediction: Option<PredictionStage>,
    pub validation: Option<ValidationStage>,
    /// Wall times in milliseconds, only when requested.
    pub timings: Option<BTreeMap<String, f64>>,
}

impl AnalysisReport {
    pub fn outcome(&self) -> Option<Outcome> {
        self.validation.as_ref().map(|v| v.outcome.outcome)
    }

    pub fn source(&self) -> Option<&str> {
        self.prediction.as_ref().and_then(|p| p.prediction.source.as_deref())
    }
}

/// Everything computed for a Gorenstein curve, before reporting.
#[derive(Debug)]
pub struct Computation {
    pub data: BresinskyData,
    pub basis: StandardBasis,
    pub tangent: TangentConeReport,
    pub prediction: CasePrediction,
    pub validation: ValidationOutcome,
}

struct Clock {
    on: bool,
    laps: BTreeMap<String, f64>,
    last: Instant,
}

impl Clock {
    fn new(on: bool) -> Self {
        Clock { on, laps: BTreeMap::new(), last: Instant::now() }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        if self.on {
            self.laps.insert(stage.to_string(), (now - self.last).as_secs_f64() * 1e3);
        }
        self.last = now;
    }
}

fn tangent_digest(t: &TangentConeReport) -> String {
    digest(t.generators.iter().cloned().chain([t.minimal_count.to_string()]))
}

fn prediction_digest(p: &CasePrediction) -> String {
    let gens = p.predicted_generators.iter().flatten().map(|g| g.to_string());
    digest(p.source.iter().cloned().chain(gens))
}

/// Runs every stage on `spec`; a curve that is not Gorenstein of
/// embedding dimension 4 with five generators yields a rejection report.
pub fn analyze(spec: &CurveSpec, opts: &AnalyzeOptions) -> Result<(AnalysisReport, Option<Computation>)> {
    let mut clock = Clock::new(opts.timings);
    let frobenius = spec.symmetry_report()?.frobenius;
    let data = match toricgen::detect_structure(spec)? {
        Structure::Gorenstein(d) => d,
        Structure::NotGorensteinNci(r) => {
            clock.lap("structure");
            let report = AnalysisReport {
                spec: *spec,
                structure: StructureReport::Rejected { reason: r.to_string(), frobenius },
                basis: None,
                tangent_cone: None,
                prediction: None,
                validation: None,
                timings: opts.timings.then_some(clock.laps),
            };
            return Ok((report, None));
        }
    };
    let generators: Vec<String> = data.f.iter().map(|g| g.to_string()).collect();
    let structure_digest = digest(generators.iter().cloned());
    let structure = StructureReport::Gorenstein {
        case: data.case_label,
        frobenius,
        a: data.a,
        exponents: data.symbols().into_iter().filter(|(s, _)| s.len() == 3).collect(),
        generators,
        digest: structure_digest.clone(),
    };
    clock.lap("structure");

    let law = CaseLaw::builtin();
    let order = match opts.order {
        Some(o) => o,
        None => law.preferred_order(&data)?,
    };
    let basis_input = digest(data.f.iter().map(|g| g.to_string()));
    check_link("basis", &structure_digest, &basis_input)?;
    let basis = morasb::complete(&order, &data.f, opts.budget)?;
    let basis_digest = digest(basis.elements.iter().map(|g| g.to_string()));
    let summary = BasisSummary {
        order: order.to_string(),
        elements: basis.elements.iter().map(|g| g.display_in(&order)).collect(),
        inputs: basis.inputs,
        added: basis.added().len(),
        pairs_processed: basis.pairs_processed,
        certified_pairs: basis.certificate.len(),
        input_digest: basis_input,
        digest: basis_digest.clone(),
    };
    clock.lap("basis");

    let tangent_input = digest(basis.elements.iter().map(|g| g.to_string()));
    check_link("tangent_cone", &basis_digest, &tangent_input)?;
    let tangent = tcone::analyze(spec, &basis, opts.bound)?;
    if !tangent.dims_agree {
        return Err(Error::Internal(format!("graded dimensions disagree with the kernel oracle for {spec}")));
    }
    clock.lap("tangent_cone");

    let prediction = law.predict_generators(&data)?;
    let cm_uncovered = prediction.predicted_cm.is_none();
    clock.lap("prediction");

    let validation = caselaw::validate(&prediction, &tangent)?;
    clock.lap("validation");

    let report = AnalysisReport {
        spec: *spec,
        structure,
        basis: Some(summary),
        tangent_cone: Some(TangentStage { input_digest: tangent_input, report: tangent.clone() }),
        prediction: Some(PredictionStage {
            input_digest: structure_digest,
            cm_uncovered,
            prediction: prediction.clone(),
        }),
        validation: Some(ValidationStage {
            prediction_digest: prediction_digest(&prediction),
            tangent_digest: tangent_digest(&tangent),
            outcome: validation.clone(),
        }),
        timings: opts.timings.then_some(clock.laps),
    };
    Ok((report, Some(Computation { data, basis, tangent, prediction, validation })))
}

fn check_link(stage: &str, produced: &str, consumed: &str) -> Result<()> {
    if produced != consumed {
        return Err(Error::Internal(format!("stage {stage} consumed {consumed}, previous stage produced {produced}")));
    }
    Ok(())
}

/// A generated curve with the exponents it was built from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub spec: CurveSpec,
    pub case: CaseLabel,
    pub params: Case1aParams,
    pub perm: [usize; 4],
}

impl CorpusEntry {
    /// One corpus-file line: the multiplicities, then the provenance as a comment.
    pub fn to_line(&self) -> String {
        let [a, b, c, d] = self.spec.n();
        let p = &self.params;
        format!(
            "{a} {b} {c} {d}  # case {} a13={} a14={} a21={} a24={} a31={} a32={} a42={} a43={} perm={:?}",
            self.case, p.a13, p.a14, p.a21, p.a24, p.a31, p.a32, p.a42, p.a43, self.perm
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusLog {
    pub drawn: usize,
    pub rejected: BTreeMap<String, usize>,
    pub filtered: usize,
}

/// Bounds of the sampler: `a_i` in `[2, 6]`, `a_ij` in `[1, a_j - 1]`.
pub const SAMPLE_RANGE: (u32, u32) = (2, 6);

/// Draws case-1a exponents with each `a_j` in `range` split into two positive parts.
pub fn sample_params(rng: &mut ChaCha8Rng, range: (u32, u32)) -> Case1aParams {
    let split = |rng: &mut ChaCha8Rng| {
        let a = rng.gen_range(range.0..=range.1);
        let x = rng.gen_range(1..a);
        (x, a - x)
    };
    let (a21, a31) = split(rng);
    let (a32, a42) = split(rng);
    let (a13, a43) = split(rng);
    let (a14, a24) = split(rng);
    Case1aParams { a13, a14, a21, a24, a31, a32, a42, a43 }
}

/// Seeded corpus of Gorenstein non-complete-intersection curves.
pub fn gen_corpus(seed: u64, count: usize, case: Option<CaseLabel>) -> Result<(Vec<CorpusEntry>, CorpusLog)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut log = CorpusLog::default();
    let max_draws = count.saturating_mul(1000).max(1000);
    while out.len() < count && log.drawn < max_draws {
        log.drawn += 1;
        let params = sample_params(&mut rng, SAMPLE_RANGE);
        let inst = match toricgen::instantiate_case1a(&params) {
            Ok(i) => i,
            Err(r) => {
                *log.rejected.entry(r.to_string()).or_default() += 1;
                continue;
            }
        };
        let data = match toricgen::detect_structure(&inst.spec)? {
            Structure::Gorenstein(d) => d,
            Structure::NotGorensteinNci(r) => {
                *log.rejected.entry(r.to_string()).or_default() += 1;
                continue;
            }
        };
        if case.is_some_and(|c| c != data.case_label) {
            log.filtered += 1;
            continue;
        }
        out.push(CorpusEntry { spec: inst.spec, case: data.case_label, params, perm: inst.perm });
    }
    Ok((out, log))
}

/// Seeded admissible instances of a case-law family: curves whose structure
/// satisfies the family's hypotheses, drawn within `max_draws` tuples.
pub fn family_sample(
    family: &Family,
    seed: u64,
    count: usize,
    range: (u32, u32),
    max_draws: usize,
) -> Result<Vec<(CurveSpec, BresinskyData)>> {
    let law = CaseLaw::builtin();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(CurveSpec, BresinskyData)> = Vec::new();
    for _ in 0..max_draws {
        if out.len() >= count {
            break;
        }
        let params = sample_params(&mut rng, range);
        let Ok(inst) = toricgen::instantiate_case1a(&params) else {
            continue;
        };
        let Some(data) = inst.relabeled(&params) else {
            continue;
        };
        if out.iter().any(|(s, _)| *s == inst.spec) || !law.family_admits(family, &data)? {
            continue;
        }
        if let Structure::Gorenstein(d) = toricgen::detect_structure(&inst.spec)? {
            if law.family_admits(family, &d)? {
                out.push((inst.spec, d));
            }
        }
    }
    Ok(out)
}

/// Parses a corpus file: four integers per line, `#` starts a comment.
pub fn parse_corpus(text: &str) -> std::result::Result<Vec<Vec<u64>>, String> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: std::result::Result<Vec<u64>, _> = body.split_whitespace().map(str::parse).collect();
        match nums {
            Ok(v) if v.len() == 4 => out.push(v),
            Ok(v) => return Err(format!("line {}: expected 4 integers, got {}", no + 1, v.len())),
            Err(e) => return Err(format!("line {}: {e}", no + 1)),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub spec: Vec<u64>,
    pub case: Option<CaseLabel>,
    pub source: Option<String>,
    pub outcome: Option<Outcome>,
    pub minimal_count: Option<usize>,
    pub is_cm: Option<bool>,
    pub erratum_confirmed: bool,
    pub error: Option<String>,
    pub bound_exceeded: bool,
}

impl SuiteRow {
    pub fn from_result(spec: &[u64], r: &Result<(AnalysisReport, Option<Computation>)>) -> SuiteRow {
        let mut row = SuiteRow {
            spec: spec.to_vec(),
            case: None,
            source: None,
            outcome: None,
            minimal_count: None,
            is_cm: None,
            erratum_confirmed: false,
            error: None,
            bound_exceeded: false,
        };
        match r {
            Ok((report, comp)) => {
                if let StructureReport::Gorenstein { case, .. } = &report.structure {
                    row.case = Some(*case);
                }
                row.source = report.source().map(str::to_string);
                row.outcome = report.outcome();
                if let Some(c) = comp {
                    row.minimal_count = Some(c.tangent.minimal_count);
                    row.is_cm = Some(c.tangent.cm.is_cm);
                    row.erratum_confirmed = c.validation.is_recorded_erratum(&c.prediction);
                }
                if let StructureReport::Rejected { reason, .. } = &report.structure {
                    row.error = Some(format!("rejected: {reason}"));
                }
            }
            Err(e) => {
                row.bound_exceeded = matches!(
                    e,
                    Error::SearchBoundExceeded(_)
                        | Error::CompletionBudgetExceeded(_)
                        | Error::ReductionBudgetExceeded(_)
                        | Error::DegreeBoundTooLarge(_)
                );
                row.error = Some(e.to_string());
            }
        }
        row
    }
}

/// Outcome counts per citation key; `none` collects uncovered curves.
pub fn coverage(rows: &[SuiteRow]) -> BTreeMap<String, BTreeMap<Outcome, usize>> {
    let mut m: BTreeMap<String, BTreeMap<Outcome, usize>> = BTreeMap::new();
    for r in rows {
        if let Some(o) = r.outcome {
            let key = r.source.clone().unwrap_or_else(|| "none".into());
            *m.entry(key).or_default().entry(o).or_default() += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_deterministic() {
        let (a, _) = gen_corpus(5, 12, None).unwrap();
        let (b, _) = gen_corpus(5, 12, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        for e in &a {
            assert!(e.spec.symmetry_report().unwrap().is_symmetric);
        }
    }

    #[test]
    fn case_filter() {
        let (c, log) = gen_corpus(1, 4, Some(CaseLabel::C3b)).unwrap();
        assert!(c.iter().all(|e| e.case == CaseLabel::C3b));
        assert!(log.drawn >= 4);
    }

    #[test]
    fn corpus_lines_round_trip() {
        let (c, _) = gen_corpus(2, 3, None).unwrap();
        let text: String = c.iter().map(|e| e.to_line() + "\n").collect();
        let parsed = parse_corpus(&format!("# header\n\n{text}")).unwrap();
        assert_eq!(parsed, c.iter().map(|e| e.spec.n().to_vec()).collect::<Vec<_>>());
        assert!(parse_corpus("1 2 3\n").is_err());
        assert!(parse_corpus("1 2 x 4\n").is_err());
    }

    #[test]
    fn rejected_curve_still_reports() {
        let spec = CurveSpec::new([5, 6, 7, 9]).unwrap();
        let (r, comp) = analyze(&spec, &AnalyzeOptions::default()).unwrap();
        assert!(comp.is_none());
        assert!(matches!(r.structure, StructureReport::Rejected { .. }));
        assert_eq!(r.outcome(), None);
    }

    #[test]
    fn digests_chain() {
        let spec = CurveSpec::new([416, 577, 646, 744]).unwrap();
        let (r, _) = analyze(&spec, &AnalyzeOptions::default()).unwrap();
        let StructureReport::Gorenstein { digest, .. } = &r.structure else { panic!() };
        let b = r.basis.as_ref().unwrap();
        assert_eq!(&b.input_digest, digest);
        assert_eq!(r.tangent_cone.as_ref().unwrap().input_digest, b.digest);
        assert_eq!(&r.prediction.as_ref().unwrap().input_digest, digest);
    }
}
