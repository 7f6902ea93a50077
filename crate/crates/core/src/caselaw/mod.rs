//! The case law: Cohen-Macaulay criteria and printed minimal generating sets
//! of the tangent cone ideal, with a validator against computed results.

pub mod expr;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::error::Result;
use crate::poly::{MonomialOrder, Polynomial};
use crate::tcone::{self, TangentConeReport};
use crate::toricgen::{BresinskyData, CaseLabel};
use expr::{Atom, EvaluatedAtom, Template};

/// The shipped template table.
pub const TEMPLATES: &str = include_str!("templates.txt");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaselawError {
    #[error("template syntax: {0}")]
    Syntax(String),
    #[error("symbol {0} is not housed by this case")]
    Unhoused(String),
    #[error("negative exponent in {0}")]
    NegativeExponent(String),
}

#[derive(Clone, Debug)]
pub struct CmBlock {
    pub case: CaseLabel,
    pub requires: Vec<Atom>,
    pub iff: Vec<Atom>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmRequirement {
    True,
    False,
    Any,
}

#[derive(Clone, Debug)]
pub struct Item {
    /// One-based position within the family.
    pub index: usize,
    pub when: Vec<Atom>,
    pub gstar: Vec<Template>,
    /// Printed elements and their replacements in the second reading.
    pub errata: Vec<(Template, Template)>,
}

#[derive(Clone, Debug)]
pub struct Family {
    pub key: String,
    pub section: u8,
    pub case: CaseLabel,
    pub order: MonomialOrder,
    pub cm: CmRequirement,
    pub when: Vec<Atom>,
    pub basis: Vec<Template>,
    pub items: Vec<Item>,
}

#[derive(Clone, Debug)]
pub struct CaseLaw {
    pub cm: Vec<CmBlock>,
    pub families: Vec<Family>,
}

fn lookup(data: &BresinskyData) -> impl Fn(&str) -> Option<u32> + '_ {
    move |s| data.symbol(s)
}

fn eval_all(atoms: &[Atom], data: &BresinskyData) -> Result<Vec<EvaluatedAtom>> {
    let f = lookup(data);
    Ok(atoms.iter().map(|a| a.eval(&f)).collect::<std::result::Result<_, _>>()?)
}

fn all_true(atoms: &[EvaluatedAtom]) -> bool {
    atoms.iter().all(|a| a.truth)
}

impl CaseLaw {
    pub fn builtin() -> &'static CaseLaw {
        static LAW: OnceLock<CaseLaw> = OnceLock::new();
        LAW.get_or_init(|| TEMPLATES.parse().expect("shipped templates parse"))
    }

    pub fn family(&self, key: &str) -> Option<&Family> {
        self.families.iter().find(|f| f.key == key)
    }

    /// Symbols referenced for `case` that the case does not house.
    pub fn unhoused_symbols(&self, case: CaseLabel) -> BTreeSet<String> {
        let pat = case.pattern();
        let housed = |s: &str| -> bool {
            let d = &s.as_bytes()[1..];
            match d {
                [_] => true,
                [i, j] => {
                    let (i, j) = ((i - b'1') as usize, (j - b'1') as usize);
                    pat.rhs[i].0 == j || pat.rhs[i].1 == j
                }
                _ => false,
            }
        };
        let mut out = BTreeSet::new();
        let mut note = |s: &str| {
            if !housed(s) {
                out.insert(s.to_string());
            }
        };
        for b in self.cm.iter().filter(|b| b.case == case) {
            b.requires.iter().chain(&b.iff).flat_map(Atom::symbols).for_each(&mut note);
        }
        for f in self.families.iter().filter(|f| f.case == case) {
            f.when.iter().flat_map(Atom::symbols).for_each(&mut note);
            f.basis.iter().flat_map(Template::symbols).for_each(&mut note);
            for it in &f.items {
                it.when.iter().flat_map(Atom::symbols).for_each(&mut note);
                it.gstar.iter().flat_map(Template::symbols).for_each(&mut note);
                for (a, b) in &it.errata {
                    a.symbols().chain(b.symbols()).for_each(&mut note);
                }
            }
        }
        out
    }

    pub fn predict_cm(&self, data: &BresinskyData) -> Result<CmPrediction> {
        for b in self.cm.iter().filter(|b| b.case == data.case_label) {
            let requires = eval_all(&b.requires, data)?;
            if all_true(&requires) {
                let conditions = eval_all(&b.iff, data)?;
                let verdict = Some(all_true(&conditions));
                return Ok(CmPrediction { verdict, requires, conditions });
            }
        }
        let mut requires = Vec::new();
        for b in self.cm.iter().filter(|b| b.case == data.case_label) {
            requires.extend(eval_all(&b.requires, data)?);
        }
        Ok(CmPrediction { verdict: None, requires, conditions: Vec::new() })
    }

    /// The section-3 families are tried first.
    fn ordered_families(&self, case: CaseLabel) -> impl Iterator<Item = &Family> {
        let mut v: Vec<&Family> = self.families.iter().filter(|f| f.case == case).collect();
        v.sort_by_key(|f| std::cmp::Reverse(f.section));
        v.into_iter()
    }

    fn admits(&self, f: &Family, cm: &CmPrediction, data: &BresinskyData) -> Result<Option<Vec<EvaluatedAtom>>> {
        let ok = match f.cm {
            CmRequirement::True => cm.verdict == Some(true),
            CmRequirement::False => cm.verdict == Some(false),
            CmRequirement::Any => true,
        };
        let when = eval_all(&f.when, data)?;
        Ok((ok && all_true(&when)).then_some(when))
    }

    /// The family's hypotheses, including its Cohen-Macaulay requirement, hold.
    pub fn family_admits(&self, family: &Family, data: &BresinskyData) -> Result<bool> {
        if family.case != data.case_label {
            return Ok(false);
        }
        let cm = self.predict_cm(data)?;
        Ok(self.admits(family, &cm, data)?.is_some())
    }

    /// Family whose hypotheses hold, ignoring the item splits.
    pub fn admitting_family(&self, data: &BresinskyData) -> Result<Option<&Family>> {
        let cm = self.predict_cm(data)?;
        for f in self.ordered_families(data.case_label) {
            if self.admits(f, &cm, data)?.is_some() {
                return Ok(Some(f));
            }
        }
        Ok(None)
    }

    /// The local order the paper uses for the admitting family.
    pub fn preferred_order(&self, data: &BresinskyData) -> Result<MonomialOrder> {
        Ok(self.admitting_family(data)?.map_or(MonomialOrder::LOCAL_4321, |f| f.order))
    }

    pub fn predict_generators(&self, data: &BresinskyData) -> Result<CasePrediction> {
        let cm = self.predict_cm(data)?;
        let f = lookup(data);
        let mut seen = cm.requires.clone();
        seen.extend(cm.conditions.iter().cloned());
        for fam in self.ordered_families(data.case_label) {
            let Some(when) = self.admits(fam, &cm, data)? else {
                seen.extend(eval_all(&fam.when, data)?);
                continue;
            };
            for item in &fam.items {
                let atoms = eval_all(&item.when, data)?;
                if !all_true(&atoms) {
                    continue;
                }
                let mut hypotheses = when.clone();
                if fam.cm == CmRequirement::True {
                    hypotheses.extend(cm.requires.iter().cloned());
                    hypotheses.extend(cm.conditions.iter().cloned());
                }
                hypotheses.extend(atoms);
                let gens = item.gstar.iter().map(|t| t.instantiate(&f)).collect::<std::result::Result<Vec<_>, _>>()?;
                let erratum = if item.errata.is_empty() {
                    None
                } else {
                    let mut e = Erratum { printed: Vec::new(), corrected: Vec::new(), alternative: Vec::new() };
                    for (p, c) in &item.errata {
                        e.printed.push(p.instantiate(&f)?);
                        e.corrected.push(c.instantiate(&f)?);
                    }
                    for t in &item.gstar {
                        let swap = item.errata.iter().find(|(p, _)| p == t).map(|(_, c)| c);
                        e.alternative.push(swap.unwrap_or(t).instantiate(&f)?);
                    }
                    Some(e)
                };
                return Ok(CasePrediction {
                    source: Some(format!("{}#{}", fam.key, item.index)),
                    section: Some(fam.section),
                    hypotheses,
                    predicted_count: Some(gens.len()),
                    predicted_generators: Some(gens),
                    predicted_cm: cm.verdict,
                    erratum,
                });
            }
        }
        Ok(CasePrediction {
            source: None,
            section: None,
            hypotheses: seen,
            predicted_generators: None,
            predicted_count: None,
            predicted_cm: cm.verdict,
            erratum: None,
        })
    }

    /// The printed standard basis of `family`, instantiated on `data`.
    pub fn candidate_basis(&self, family: &Family, data: &BresinskyData) -> Result<Vec<Polynomial>> {
        let f = lookup(data);
        Ok(family.basis.iter().map(|t| t.instantiate(&f)).collect::<std::result::Result<_, _>>()?)
    }
}

/// Outcome of the Cohen-Macaulay criteria; `verdict` is `None` when no
/// block's requirements hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmPrediction {
    pub verdict: Option<bool>,
    pub requires: Vec<EvaluatedAtom>,
    pub conditions: Vec<EvaluatedAtom>,
}

impl CmPrediction {
    pub fn is_uncovered(&self) -> bool {
        self.verdict.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    pub printed: Vec<Polynomial>,
    pub corrected: Vec<Polynomial>,
    /// The printed list with each printed element replaced by its correction.
    pub alternative: Vec<Polynomial>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CasePrediction {
    /// `family#item` of the statement that fired.
    pub source: Option<String>,
    pub section: Option<u8>,
    pub hypotheses: Vec<EvaluatedAtom>,
    pub predicted_generators: Option<Vec<Polynomial>>,
    pub predicted_count: Option<usize>,
    pub predicted_cm: Option<bool>,
    pub erratum: Option<Erratum>,
}

pub fn predict_cm(data: &BresinskyData) -> Result<CmPrediction> {
    CaseLaw::builtin().predict_cm(data)
}

pub fn predict_generators(data: &BresinskyData) -> Result<CasePrediction> {
    CaseLaw::builtin().predict_generators(data)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Match,
    CountMatchSetMismatch,
    Mismatch,
    Uncovered,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Match => "MATCH",
            Outcome::CountMatchSetMismatch => "COUNT_MATCH_SET_MISMATCH",
            Outcome::Mismatch => "MISMATCH",
            Outcome::Uncovered => "UNCOVERED",
        })
    }
}

/// Comparison of one predicted list with the computed ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub outcome: Outcome,
    /// Predicted elements outside the computed ideal.
    pub predicted_only: Vec<Polynomial>,
    /// Computed minimal generators outside the predicted ideal.
    pub computed_only: Vec<Polynomial>,
    /// The two lists agree element by element up to sign.
    pub same_elements: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationOutcome {
    pub outcome: Outcome,
    pub predicted_count: Option<usize>,
    pub computed_count: usize,
    pub comparison: Option<Comparison>,
    /// The second reading of an item with a recorded erratum.
    pub alternative: Option<Comparison>,
    pub note: Option<String>,
}

fn contains(h: &[Polynomial], p: &Polynomial) -> Result<bool> {
    let homog: Vec<Polynomial> = h.iter().filter(|q| !q.is_zero() && q.is_homogeneous()).cloned().collect();
    tcone::ideal_contains(&homog, p)
}

fn compare(predicted: &[Polynomial], computed: &TangentConeReport) -> Result<Comparison> {
    let mut predicted_only = Vec::new();
    for p in predicted {
        if !contains(&computed.generator_polys, p)? {
            predicted_only.push(p.clone());
        }
    }
    let mut computed_only = Vec::new();
    for c in &computed.minimal_polys {
        if !contains(predicted, c)? {
            computed_only.push(c.clone());
        }
    }
    let same_elements = predicted.len() == computed.minimal_polys.len() && same_set(predicted, &computed.minimal_polys);
    let equal_ideals = predicted_only.is_empty() && computed_only.is_empty();
    let outcome = if equal_ideals && predicted.len() == computed.minimal_count {
        Outcome::Match
    } else if predicted.len() == computed.minimal_count {
        Outcome::CountMatchSetMismatch
    } else {
        Outcome::Mismatch
    };
    Ok(Comparison { outcome, predicted_only, computed_only, same_elements })
}

/// MATCH when the printed list generates the computed ideal with the
/// computed minimal number of elements.
pub fn validate(prediction: &CasePrediction, computed: &TangentConeReport) -> Result<ValidationOutcome> {
    let Some(gens) = &prediction.predicted_generators else {
        return Ok(ValidationOutcome {
            outcome: Outcome::Uncovered,
            predicted_count: None,
            computed_count: computed.minimal_count,
            comparison: None,
            alternative: None,
            note: None,
        });
    };
    let comparison = compare(gens, computed)?;
    let alternative = match &prediction.erratum {
        Some(e) => Some(compare(&e.alternative, computed)?),
        None => None,
    };
    let note = match (&prediction.erratum, &alternative) {
        (Some(e), Some(alt)) if comparison.outcome != Outcome::Match && alt.outcome == Outcome::Match => {
            Some(format!("printed {} not supported by the computation; {} is", join(&e.printed), join(&e.corrected)))
        }
        (Some(e), Some(alt)) if comparison.outcome == Outcome::Match && alt.outcome != Outcome::Match => {
            Some(format!("printed {} supported; the reading with {} is not", join(&e.printed), join(&e.corrected)))
        }
        _ => None,
    };
    Ok(ValidationOutcome {
        outcome: comparison.outcome,
        predicted_count: Some(gens.len()),
        computed_count: computed.minimal_count,
        comparison: Some(comparison),
        alternative,
        note,
    })
}

impl ValidationOutcome {
    /// The mismatch is exactly the recorded erratum: the printed elements
    /// are the predicted elements outside the ideal and the corrections the
    /// computed generators missing from the prediction.
    pub fn is_recorded_erratum(&self, prediction: &CasePrediction) -> bool {
        let (Some(c), Some(e)) = (&self.comparison, &prediction.erratum) else {
            return false;
        };
        self.outcome == Outcome::CountMatchSetMismatch
            && same_set(&c.predicted_only, &e.printed)
            && same_set(&c.computed_only, &e.corrected)
            && self.alternative.as_ref().is_some_and(|a| a.outcome == Outcome::Match)
    }
}

/// Equal as sets up to sign.
pub fn same_set(a: &[Polynomial], b: &[Polynomial]) -> bool {
    let norm =
        |ps: &[Polynomial]| -> BTreeSet<String> { ps.iter().map(|p| tcone::normalized(p).to_string()).collect() };
    norm(a) == norm(b)
}

fn join(ps: &[Polynomial]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
}

fn syntax(line: usize, msg: impl fmt::Display) -> CaselawError {
    CaselawError::Syntax(format!("line {line}: {msg}"))
}

fn templates(s: &str) -> std::result::Result<Vec<Template>, CaselawError> {
    s.split(',').map(Template::parse).collect()
}

impl FromStr for CaseLaw {
    type Err = CaselawError;

    fn from_str(text: &str) -> std::result::Result<Self, CaselawError> {
        let mut cm = Vec::new();
        let mut families: Vec<Family> = Vec::new();
        enum Open {
            None,
            Cm,
            Family,
        }
        let mut open = Open::None;
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let no = no + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest = rest.trim();
            let case = || CaseLabel::from_str(rest).map_err(|e| syntax(no, e));
            match (key, &open) {
                ("cm", _) if !matches!(open, Open::Family) || CaseLabel::from_str(rest).is_ok() => {
                    cm.push(CmBlock { case: case()?, requires: Vec::new(), iff: Vec::new() });
                    open = Open::Cm;
                }
                ("requires", Open::Cm) => cm.last_mut().unwrap().requires = Atom::parse_list(rest)?,
                ("iff", Open::Cm) => cm.last_mut().unwrap().iff = Atom::parse_list(rest)?,
                ("family", _) => {
                    families.push(Family {
                        key: rest.to_string(),
                        section: 2,
                        case: CaseLabel::C1a,
                        order: MonomialOrder::LOCAL_4321,
                        cm: CmRequirement::Any,
                        when: Vec::new(),
                        basis: Vec::new(),
                        items: Vec::new(),
                    });
                    open = Open::Family;
                }
                (_, Open::Family) => {
                    let fam = families.last_mut().unwrap();
                    match key {
                        "section" => fam.section = rest.parse().map_err(|e| syntax(no, e))?,
                        "case" => fam.case = case()?,
                        "order" => fam.order = rest.parse().map_err(|e| syntax(no, e))?,
                        "cm" => {
                            fam.cm = match rest {
                                "true" => CmRequirement::True,
                                "false" => CmRequirement::False,
                                "any" => CmRequirement::Any,
                                other => return Err(syntax(no, format!("bad cm requirement `{other}`"))),
                            }
                        }
                        "when" => fam.when = Atom::parse_list(rest)?,
                        "basis" => fam.basis = templates(rest)?,
                        "item" => {
                            let index = fam.items.len() + 1;
                            fam.items.push(Item {
                                index,
                                when: Atom::parse_list(rest)?,
                                gstar: Vec::new(),
                                errata: Vec::new(),
                            });
                        }
                        "gstar" => {
                            fam.items.last_mut().ok_or_else(|| syntax(no, "gstar before item"))?.gstar =
                                templates(rest)?
                        }
                        "erratum" => {
                            let (a, b) = rest.split_once("->").ok_or_else(|| syntax(no, "expected `->`"))?;
                            let (a, b) = (Template::parse(a)?, Template::parse(b)?);
                            let item = fam.items.last_mut().ok_or_else(|| syntax(no, "erratum before item"))?;
                            if !item.gstar.contains(&a) {
                                return Err(syntax(no, format!("erratum target {a} is not in the list")));
                            }
                            item.errata.push((a, b));
                        }
                        other => return Err(syntax(no, format!("unknown key `{other}`"))),
                    }
                }
                (other, _) => return Err(syntax(no, format!("unexpected `{other}`"))),
            }
        }
        Ok(CaseLaw { cm, families })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::CurveSpec;
    use crate::toricgen::{detect_structure, Structure};

    fn example() -> BresinskyData {
        match detect_structure(&CurveSpec::new([416, 577, 646, 744]).unwrap()).unwrap() {
            Structure::Gorenstein(d) => d,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn shipped_table_parses() {
        let law = CaseLaw::builtin();
        assert_eq!(law.cm.len(), 14);
        assert_eq!(law.families.len(), 19);
        assert_eq!(law.families.iter().map(|f| f.items.len()).sum::<usize>(), 112);
        for c in CaseLabel::ALL {
            assert!(law.unhoused_symbols(c).is_empty(), "{c}: {:?}", law.unhoused_symbols(c));
        }
    }

    #[test]
    fn worked_example_is_not_cm() {
        let cm = predict_cm(&example()).unwrap();
        assert_eq!(cm.verdict, Some(false));
        let failing: Vec<&str> = cm.conditions.iter().filter(|a| !a.truth).map(|a| a.text.as_str()).collect();
        assert_eq!(failing, ["a42+a13<=a21+a34"]);
    }

    #[test]
    fn worked_example_prediction() {
        let p = predict_generators(&example()).unwrap();
        assert_eq!(p.source.as_deref(), Some("seven-1b#5"));
        assert_eq!(p.predicted_count, Some(7));
        assert!(p.hypotheses.iter().all(|a| a.truth));
        let e = p.erratum.unwrap();
        assert_eq!(e.printed[0].to_string(), "x2^8*x3^4");
        assert_eq!(e.corrected[0].to_string(), "x1^3*x4^8");
    }

    #[test]
    fn case_1a_boundary_is_cm() {
        // a2 = a21 + a24
        let p = crate::toricgen::Case1aParams { a13: 1, a14: 2, a21: 1, a24: 2, a31: 2, a32: 1, a42: 2, a43: 3 };
        let d = p.data();
        assert_eq!(d.a[1], d.aij[1][0] + d.aij[1][3]);
        assert_eq!(predict_cm(&d).unwrap().verdict, Some(true));
    }

    #[test]
    fn atoms_re_evaluate() {
        let p = predict_generators(&example()).unwrap();
        for a in &p.hypotheses {
            let rel = if a.text.contains("<=") {
                a.lhs <= a.rhs
            } else if a.text.contains('<') {
                a.lhs < a.rhs
            } else {
                a.lhs == a.rhs
            };
            assert_eq!(rel, a.truth, "{}", a.text);
        }
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!("cm 9z\n".parse::<CaseLaw>().is_err());
        assert!("family f\ngstar x1\n".parse::<CaseLaw>().is_err());
        assert!("family f\nitem a1<a2\ngstar x1\nerratum x2 -> x3\n".parse::<CaseLaw>().is_err());
        assert!("requires a1<a2\n".parse::<CaseLaw>().is_err());
    }
}
