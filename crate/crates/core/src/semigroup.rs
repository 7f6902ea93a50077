//! The numerical semigroup generated by four multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, SpecError};
use crate::poly::ExponentVector;

/// Four strictly increasing, coprime multiplicities of embedding dimension 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CurveSpec {
    n: [u64; 4],
}

impl CurveSpec {
    pub fn new(n: [u64; 4]) -> std::result::Result<Self, SpecError> {
        if n.contains(&0) {
            return Err(SpecError::NonPositive);
        }
        if n.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpecError::NotIncreasing);
        }
        let g = n.iter().fold(0u64, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(SpecError::GcdNotOne(g));
        }
        for i in 0..4 {
            let others: Vec<u64> = (0..4).filter(|&j| j != i).map(|j| n[j]).collect();
            if membership_table(&others, n[i])[n[i] as usize] {
                return Err(SpecError::Redundant(i));
            }
        }
        Ok(CurveSpec { n })
    }

    pub fn from_slice(n: &[u64]) -> std::result::Result<Self, SpecError> {
        let arr: [u64; 4] = n.try_into().map_err(|_| SpecError::Arity(n.len()))?;
        Self::new(arr)
    }

    pub fn n(&self) -> [u64; 4] {
        self.n
    }

    pub fn contains(&self, s: u64) -> bool {
        membership_table(&self.n, s)[s as usize]
    }

    /// Membership flags for `0..=limit`.
    pub fn membership(&self, limit: u64) -> Vec<bool> {
        membership_table(&self.n, limit)
    }

    pub fn symmetry_report(&self) -> Result<SymmetryReport> {
        let ceiling = 2 * self.n[2] * self.n[3];
        let table = self.membership(ceiling);
        let n1 = self.n[0] as usize;
        // n1 consecutive members means every larger integer is a member
        let mut run = 0usize;
        let mut end = None;
        for (s, &m) in table.iter().enumerate() {
            run = if m { run + 1 } else { 0 };
            if run == n1 {
                end = Some(s + 1 - n1);
                break;
            }
        }
        let end = end.ok_or(Error::SearchBoundExceeded(ceiling))?;
        let gaps: Vec<u64> = (0..end).filter(|&s| !table[s]).map(|s| s as u64).collect();
        let frobenius = *gaps.last().expect("n1 > 1 forces a gap");
        let is_symmetric = (0..=frobenius).all(|x| table[x as usize] != table[(frobenius - x) as usize]);
        Ok(SymmetryReport { frobenius, gaps, is_symmetric })
    }

    /// Apéry set with respect to `n_{i+1}`: the least member of each residue class.
    pub fn apery_set(&self, i: usize) -> Result<Vec<u64>> {
        let f = self.symmetry_report()?.frobenius;
        let m = self.n[i];
        let table = self.membership(f + m);
        Ok((0..=f + m).filter(|&s| table[s as usize] && (s < m || !table[(s - m) as usize])).collect())
    }

    /// All `u` with `u . n = s`, in increasing lexicographic order.
    pub fn factorizations(&self, s: u64) -> Vec<ExponentVector> {
        let [n1, n2, n3, n4] = self.n;
        let mut out = Vec::new();
        for u1 in 0..=s / n1 {
            let r1 = s - u1 * n1;
            for u2 in 0..=r1 / n2 {
                let r2 = r1 - u2 * n2;
                for u3 in 0..=r2 / n3 {
                    let r3 = r2 - u3 * n3;
                    if r3.is_multiple_of(n4) {
                        out.push(ExponentVector::new([u1 as u32, u2 as u32, u3 as u32, (r3 / n4) as u32]));
                    }
                }
            }
        }
        out
    }

    /// Upper bound on the degree of a minimal binomial generator: every Betti
    /// element has the form `w + n_i` with `w` in the Apéry set of `n1`, whose
    /// largest member is `F + n1`.
    pub fn betti_search_bound(&self) -> Result<u64> {
        Ok(self.symmetry_report()?.frobenius + self.n[0] + self.n[3])
    }

    /// Semigroup elements with a disconnected factorization graph, with the
    /// connected components of that graph.
    pub fn betti_elements(&self) -> Result<Vec<BettiElement>> {
        let bound = self.betti_search_bound()?;
        let cap = 4 * self.n[3] * self.n[3];
        if bound > cap {
            return Err(Error::SearchBoundExceeded(cap));
        }
        let mut by_degree: BTreeMap<u64, Vec<ExponentVector>> = BTreeMap::new();
        for_each_vector_up_to(&self.n, bound, |u, s| by_degree.entry(s).or_default().push(u));
        let mut out = Vec::new();
        for (degree, mut facts) in by_degree {
            if facts.len() < 2 {
                continue;
            }
            facts.sort();
            let components = support_components(&facts);
            if components.len() > 1 {
                out.push(BettiElement { degree, components });
            }
        }
        Ok(out)
    }

    /// A minimal binomial generating set of the toric ideal, one pair per
    /// extra component of each Betti element.
    pub fn betti_generators(&self) -> Result<Vec<(ExponentVector, ExponentVector)>> {
        Ok(self.betti_elements()?.iter().flat_map(BettiElement::binomials).collect())
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.n;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl TryFrom<Vec<u64>> for CurveSpec {
    type Error = SpecError;
    fn try_from(v: Vec<u64>) -> std::result::Result<Self, SpecError> {
        CurveSpec::from_slice(&v)
    }
}

impl From<CurveSpec> for Vec<u64> {
    fn from(s: CurveSpec) -> Self {
        s.n.to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub frobenius: u64,
    pub gaps: Vec<u64>,
    pub is_symmetric: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiElement {
    pub degree: u64,
    /// Components in order of their least factorization; each sorted.
    pub components: Vec<Vec<ExponentVector>>,
}

impl BettiElement {
    /// Preferred representative: fewest variables, then lexicographically largest.
    pub fn representative(component: &[ExponentVector]) -> ExponentVector {
        *component
            .iter()
            .min_by(|a, b| a.support().count_ones().cmp(&b.support().count_ones()).then(b.cmp(a)))
            .expect("components are non-empty")
    }

    pub fn binomials(&self) -> Vec<(ExponentVector, ExponentVector)> {
        let reps: Vec<ExponentVector> = self.components.iter().map(|c| Self::representative(c)).collect();
        reps[1..].iter().map(|v| (reps[0], *v)).collect()
    }
}

pub(crate) fn membership_table(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut t = vec![false; limit as usize + 1];
    t[0] = true;
    for s in 1..=limit as usize {
        t[s] = gens.iter().any(|&g| s >= g as usize && t[s - g as usize]);
    }
    t
}

/// Calls `f(u, u . n)` for every `u` with `u . n <= bound`.
pub(crate) fn for_each_vector_up_to<F: FnMut(ExponentVector, u64)>(n: &[u64; 4], bound: u64, mut f: F) {
    let [n1, n2, n3, n4] = *n;
    for u1 in 0..=bound / n1 {
        let s1 = u1 * n1;
        for u2 in 0..=(bound - s1) / n2 {
            let s2 = s1 + u2 * n2;
            for u3 in 0..=(bound - s2) / n3 {
                let s3 = s2 + u3 * n3;
                for u4 in 0..=(bound - s3) / n4 {
                    f(ExponentVector::new([u1 as u32, u2 as u32, u3 as u32, u4 as u32]), s3 + u4 * n4);
                }
            }
        }
    }
}

/// Connected components of the graph joining factorizations with a common
/// variable in their supports.
pub(crate) fn support_components(facts: &[ExponentVector]) -> Vec<Vec<ExponentVector>> {
    let mut parent: Vec<usize> = (0..facts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..facts.len() {
        for j in i + 1..facts.len() {
            if facts[i].support() & facts[j].support() != 0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<ExponentVector>> = BTreeMap::new();
    for (i, u) in facts.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(*u);
    }
    groups.into_values().collect()
}
