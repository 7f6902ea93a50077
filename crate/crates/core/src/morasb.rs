//! Mora's weak normal form and standard bases for local orders.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, PolyError, Result};
use crate::poly::{spoly, Coeff, ExponentVector, MonomialOrder, Polynomial};

pub const DEFAULT_BUDGET: usize = 10_000;
pub const BUDGET_ENV: &str = "GORECONE_BUDGET";
/// Reduction steps allowed in one weak normal form.
pub const MAX_REDUCTION_STEPS: usize = 20_000;
/// Terms allowed across the recorded states of one weak normal form.
pub const MAX_TRACE_TERMS: usize = 2_000_000;

/// Pair budget from the environment, falling back to [`DEFAULT_BUDGET`].
pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum ReducerRef {
    /// An element of the input list.
    Basis(usize),
    /// The work polynomial adjoined before the given step.
    Intermediate(usize),
}

impl fmt::Display for ReducerRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReducerRef::Basis(i) => write!(f, "g{}", i + 1),
            ReducerRef::Intermediate(k) => write!(f, "h{k}"),
        }
    }
}

/// One step `h <- h - coeff * multiplier * reducer`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub reducer: ReducerRef,
    pub coeff: Coeff,
    pub multiplier: ExponentVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub input: Polynomial,
    /// Work polynomials `h_0 = input, h_1, ...`; `h_k` is the state before step `k`.
    pub states: Vec<Polynomial>,
    pub steps: Vec<Step>,
    /// Indices into `states` of the work polynomials adjoined to the pool.
    pub adjoined: Vec<usize>,
}

impl Trace {
    pub fn result(&self) -> &Polynomial {
        self.states.last().expect("trace starts with the input")
    }

    /// One line per step: reducer, coefficient, multiplier.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!("{k}\t{}\t{}\t{}\n", s.reducer, s.coeff, s.multiplier));
        }
        out
    }
}

struct PoolEntry {
    poly: Polynomial,
    lm: ExponentVector,
    lc: Coeff,
    ecart: u32,
    origin: ReducerRef,
}

impl PoolEntry {
    fn new(poly: Polynomial, order: &MonomialOrder, origin: ReducerRef) -> Result<Self> {
        let (lm, lc) = poly.leading_term(order)?;
        let ecart = poly.ecart(order)?;
        Ok(PoolEntry { poly, lm, lc, ecart, origin })
    }
}

/// Mora's weak normal form of `f` with respect to `g`, with the reduction trace.
pub fn normal_form_traced(order: &MonomialOrder, f: &Polynomial, g: &[Polynomial]) -> Result<Trace> {
    let mut pool = Vec::with_capacity(g.len());
    for (i, p) in g.iter().enumerate() {
        pool.push(PoolEntry::new(p.clone(), order, ReducerRef::Basis(i))?);
    }
    let mut trace = Trace { input: f.clone(), states: vec![f.clone()], steps: Vec::new(), adjoined: Vec::new() };
    let mut h = f.clone();
    let mut stored = h.len();
    while !h.is_zero() {
        if trace.steps.len() >= MAX_REDUCTION_STEPS || stored > MAX_TRACE_TERMS {
            return Err(Error::ReductionBudgetExceeded(trace.steps.len()));
        }
        let (lm, lc) = h.leading_term(order)?;
        let Some(best) = pool
            .iter()
            .enumerate()
            .filter(|(_, t)| t.lm.divides(&lm))
            .min_by_key(|(i, t)| (t.ecart, *i))
            .map(|(i, _)| i)
        else {
            break;
        };
        let ecart_h = h.ecart(order)?;
        if pool[best].ecart > ecart_h {
            let k = trace.states.len() - 1;
            pool.push(PoolEntry::new(h.clone(), order, ReducerRef::Intermediate(k))?);
            trace.adjoined.push(k);
        }
        let t = &pool[best];
        let m = lm.checked_div(&t.lm).expect("divisibility was checked");
        let c = &lc / &t.lc;
        h = &h - &t.poly.mul_term(&m, &c);
        trace.steps.push(Step { reducer: t.origin, coeff: c, multiplier: m });
        stored += h.len();
        trace.states.push(h.clone());
    }
    Ok(trace)
}

pub fn normal_form(order: &MonomialOrder, f: &Polynomial, g: &[Polynomial]) -> Result<Polynomial> {
    Ok(normal_form_traced(order, f, g)?.result().clone())
}

/// Replays a trace, returning `(u, q)` with `result = u * input + sum q_i g_i`,
/// or an explanation of the first inconsistency.
pub fn replay(order: &MonomialOrder, trace: &Trace, g: &[Polynomial]) -> std::result::Result<Replay, String> {
    let mut u = Polynomial::one();
    let mut q = vec![Polynomial::zero(); g.len()];
    // cofactors of every state, so adjoined states can be re-expanded
    let mut history: Vec<(Polynomial, Vec<Polynomial>)> = vec![(u.clone(), q.clone())];
    let mut descent = true;
    for (k, step) in trace.steps.iter().enumerate() {
        let mono = Polynomial::monomial(step.multiplier, step.coeff.clone());
        match step.reducer {
            ReducerRef::Basis(i) => {
                if i >= g.len() {
                    return Err(format!("step {k}: no basis element {i}"));
                }
                q[i] = &q[i] + &mono;
            }
            ReducerRef::Intermediate(j) => {
                if !trace.adjoined.contains(&j) || j > k {
                    return Err(format!("step {k}: state {j} was not in the pool"));
                }
                let (uj, qj) = &history[j];
                u = &u - &(&mono * uj);
                for (qi, qji) in q.iter_mut().zip(qj) {
                    *qi = &*qi - &(&mono * qji);
                }
            }
        }
        history.push((u.clone(), q.clone()));
        let (before, after) = (&trace.states[k], &trace.states[k + 1]);
        let lm_before = before.leading_monomial(order).map_err(|e| e.to_string())?;
        if let Ok(lm_after) = after.leading_monomial(order) {
            if order.compare(&lm_after, &lm_before) != std::cmp::Ordering::Less {
                descent = false;
            }
        }
    }
    // q accumulates with the opposite sign: h = u f - sum q_i g_i
    let mut rebuilt = &u * &trace.input;
    for (qi, gi) in q.iter().zip(g) {
        rebuilt = &rebuilt - &(qi * gi);
    }
    if &rebuilt != trace.result() {
        return Err("recorded steps do not reproduce the result".into());
    }
    let q: Vec<Polynomial> = q.iter().map(|p| -p).collect();
    let unit = !u.coefficient(&ExponentVector::ONE).is_zero();
    Ok(Replay { u, q, unit, descent })
}

/// Cofactors recovered from a trace.
#[derive(Clone, Debug)]
pub struct Replay {
    pub u: Polynomial,
    pub q: Vec<Polynomial>,
    /// `u` has a non-zero constant term, so it is a unit in the local ring.
    pub unit: bool,
    /// Every step strictly lowered the leading monomial.
    pub descent: bool,
}

#[derive(Clone, Debug)]
pub struct PairCertificate {
    pub i: usize,
    pub j: usize,
    pub trace: Trace,
}

#[derive(Clone, Debug)]
pub struct StandardBasis {
    pub order: MonomialOrder,
    pub elements: Vec<Polynomial>,
    /// Number of input polynomials at the front of `elements`.
    pub inputs: usize,
    pub certificate: Vec<PairCertificate>,
    pub pairs_processed: usize,
}

impl StandardBasis {
    pub fn added(&self) -> &[Polynomial] {
        &self.elements[self.inputs..]
    }
}

#[derive(Clone, Debug)]
pub enum Certification {
    Certified(Vec<PairCertificate>),
    Failed { i: usize, j: usize, remainder: Polynomial },
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certification::Certified(_))
    }
}

/// Checks that every pairwise s-polynomial has weak normal form zero.
pub fn certify(order: &MonomialOrder, g: &[Polynomial]) -> Result<Certification> {
    if g.iter().any(Polynomial::is_zero) {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let mut certs = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let s = spoly(order, &g[i], &g[j])?;
            let trace = normal_form_traced(order, &s, g)?;
            if !trace.result().is_zero() {
                return Ok(Certification::Failed { i, j, remainder: trace.result().clone() });
            }
            certs.push(PairCertificate { i, j, trace });
        }
    }
    Ok(Certification::Certified(certs))
}

/// Standard basis of the ideal generated by `f`, by the normal strategy.
pub fn complete(order: &MonomialOrder, f: &[Polynomial], budget: usize) -> Result<StandardBasis> {
    if f.is_empty() || f.iter().any(Polynomial::is_zero) {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let mut elems: Vec<Polynomial> = f.to_vec();
    let mut lms: Vec<ExponentVector> =
        elems.iter().map(|p| p.leading_monomial(order)).collect::<std::result::Result<_, _>>()?;
    let mut pairs: Vec<(u32, usize, usize)> = Vec::new();
    for j in 0..elems.len() {
        for i in 0..j {
            pairs.push((lms[i].lcm(&lms[j]).total_degree(), i, j));
        }
    }
    let mut processed = 0;
    while !pairs.is_empty() {
        let pos = (0..pairs.len()).min_by_key(|&k| pairs[k]).expect("non-empty");
        let (_, i, j) = pairs.swap_remove(pos);
        processed += 1;
        if processed > budget {
            return Err(Error::CompletionBudgetExceeded(budget));
        }
        let s = spoly(order, &elems[i], &elems[j])?;
        let h = normal_form(order, &s, &elems)?;
        if h.is_zero() {
            continue;
        }
        let h = h.monic(order)?;
        let lm = h.leading_monomial(order)?;
        let k = elems.len();
        for (i, m) in lms.iter().enumerate() {
            pairs.push((m.lcm(&lm).total_degree(), i, k));
        }
        elems.push(h);
        lms.push(lm);
    }
    let certificate = match certify(order, &elems)? {
        Certification::Certified(c) => c,
        Certification::Failed { i, j, .. } => {
            return Err(Error::Internal(format!("completed basis fails on pair ({}, {})", i + 1, j + 1)))
        }
    };
    Ok(StandardBasis { order: *order, elements: elems, inputs: f.len(), certificate, pairs_processed: processed })
}

/// `g` and `f` agree up to a non-zero scalar.
pub fn proportional(f: &Polynomial, g: &Polynomial) -> bool {
    f.canonical_scaling() == g.canonical_scaling()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn example_generators() -> Vec<Polynomial> {
        ["x1^8 - x3^4*x4", "x2^10 - x1^3*x3^7", "x3^11 - x2^2*x4^8", "x4^9 - x1^5*x2^8", "x1^3*x4^8 - x2^8*x3^4"]
            .iter()
            .map(|s| p(s))
            .collect()
    }

    #[test]
    fn reduces_itself_to_zero() {
        let f = p("x1^8 - x3^4*x4");
        assert!(normal_form(&MonomialOrder::LOCAL_4321, &f, std::slice::from_ref(&f)).unwrap().is_zero());
    }

    #[test]
    fn worked_example_completion() {
        let o = MonomialOrder::LOCAL_4231;
        let sb = complete(&o, &example_generators(), DEFAULT_BUDGET).unwrap();
        let added = sb.added();
        assert_eq!(added.len(), 2);
        assert!(added.iter().any(|g| proportional(g, &p("x3^15 - x1^8*x2^2*x4^7"))));
        assert!(added.iter().any(|g| proportional(g, &p("x1^11*x4^7 - x2^8*x3^8"))));
    }

    #[test]
    fn incomplete_set_fails_certification() {
        let o = MonomialOrder::LOCAL_4231;
        match certify(&o, &example_generators()).unwrap() {
            Certification::Failed { remainder, .. } => assert!(!remainder.is_zero()),
            Certification::Certified(_) => panic!("f1..f5 alone is not a standard basis"),
        }
    }

    #[test]
    fn traces_replay() {
        let o = MonomialOrder::LOCAL_4231;
        let g = example_generators();
        let sb = complete(&o, &g, DEFAULT_BUDGET).unwrap();
        for c in &sb.certificate {
            let r = replay(&o, &c.trace, &sb.elements).unwrap();
            assert!(r.unit && r.descent);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let o = MonomialOrder::LOCAL_4231;
        assert_eq!(complete(&o, &example_generators(), 1).unwrap_err(), Error::CompletionBudgetExceeded(1));
    }
}
