//! Bresinsky structure of Gorenstein non-complete-intersection curves.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{ExponentVector, Polynomial};
use crate::semigroup::{membership_table, CurveSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1a")]
    C1a,
    #[serde(rename = "1b")]
    C1b,
    #[serde(rename = "2a")]
    C2a,
    #[serde(rename = "2b")]
    C2b,
    #[serde(rename = "3a")]
    C3a,
    #[serde(rename = "3b")]
    C3b,
}

/// Right-hand sides of `f1..f4` and the mixed binomial `((i,j),(k,l))`,
/// zero-based.
pub struct CasePattern {
    pub label: CaseLabel,
    pub rhs: [(usize, usize); 4],
    pub mixed: ((usize, usize), (usize, usize)),
}

pub const CASE_TABLE: [CasePattern; 6] = [
    CasePattern { label: CaseLabel::C1a, rhs: [(2, 3), (0, 3), (0, 1), (1, 2)], mixed: ((0, 2), (1, 3)) },
    CasePattern { label: CaseLabel::C1b, rhs: [(2, 3), (0, 2), (1, 3), (0, 1)], mixed: ((0, 3), (1, 2)) },
    CasePattern { label: CaseLabel::C2a, rhs: [(1, 2), (2, 3), (0, 3), (0, 1)], mixed: ((1, 3), (0, 2)) },
    CasePattern { label: CaseLabel::C2b, rhs: [(1, 2), (0, 3), (1, 3), (0, 2)], mixed: ((0, 1), (3, 2)) },
    CasePattern { label: CaseLabel::C3a, rhs: [(1, 3), (0, 2), (0, 3), (1, 2)], mixed: ((0, 1), (2, 3)) },
    CasePattern { label: CaseLabel::C3b, rhs: [(1, 3), (2, 3), (0, 1), (0, 2)], mixed: ((1, 2), (0, 3)) },
];

impl CaseLabel {
    pub const ALL: [CaseLabel; 6] =
        [CaseLabel::C1a, CaseLabel::C1b, CaseLabel::C2a, CaseLabel::C2b, CaseLabel::C3a, CaseLabel::C3b];

    pub fn pattern(self) -> &'static CasePattern {
        CASE_TABLE.iter().find(|p| p.label == self).expect("every label has a pattern")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::C1a => "1a",
            CaseLabel::C1b => "1b",
            CaseLabel::C2a => "2a",
            CaseLabel::C2b => "2b",
            CaseLabel::C3a => "3a",
            CaseLabel::C3b => "3b",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        CaseLabel::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown case `{s}`"))
    }
}

/// The exponents `a_i`, `a_ij` and the five generators `f1..f5`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BresinskyData {
    pub case_label: CaseLabel,
    pub a: [u32; 4],
    /// `aij[i][j]` is the exponent of `x_{j+1}` on the right-hand side of
    /// `f_{i+1}`; zero where the case stores no such exponent.
    pub aij: [[u32; 4]; 4],
    pub f: [Polynomial; 5],
}

impl BresinskyData {
    /// Assembles the generators from the exponents of a given case.
    pub fn from_exponents(case_label: CaseLabel, a: [u32; 4], aij: [[u32; 4]; 4]) -> Self {
        let pat = case_label.pattern();
        let mut f: Vec<Polynomial> = (0..4)
            .map(|i| {
                let (j, k) = pat.rhs[i];
                let mut v = [0; 4];
                v[j] = aij[i][j];
                v[k] = aij[i][k];
                Polynomial::binomial(ExponentVector::var_power(i, a[i]), ExponentVector::new(v))
            })
            .collect();
        let ((i, j), (k, l)) = pat.mixed;
        let mut u = [0; 4];
        u[i] = aij[k][i];
        u[j] = aij[l][j];
        let mut v = [0; 4];
        v[k] = aij[j][k];
        v[l] = aij[i][l];
        f.push(Polynomial::binomial(ExponentVector::new(u), ExponentVector::new(v)));
        BresinskyData { case_label, a, aij, f: f.try_into().expect("five generators") }
    }

    /// Value of a symbol `a1..a4` or `aIJ`; `None` if the case does not house it.
    pub fn symbol(&self, name: &str) -> Option<u32> {
        let digits = name.strip_prefix('a')?.as_bytes();
        let idx = |b: u8| (b'1'..=b'4').contains(&b).then(|| (b - b'1') as usize);
        match digits {
            [i] => Some(self.a[idx(*i)?]),
            [i, j] => {
                let v = self.aij[idx(*i)?][idx(*j)?];
                (v > 0).then_some(v)
            }
            _ => None,
        }
    }

    /// Names and values of all housed symbols, `a1..a4` first.
    pub fn symbols(&self) -> Vec<(String, u32)> {
        let mut out: Vec<(String, u32)> = (0..4).map(|i| (format!("a{}", i + 1), self.a[i])).collect();
        for i in 0..4 {
            for j in 0..4 {
                if self.aij[i][j] > 0 {
                    out.push((format!("a{}{}", i + 1, j + 1), self.aij[i][j]));
                }
            }
        }
        out
    }

    /// Every generator vanishes under `x_i -> t^{n_i}`.
    pub fn vanishes_on(&self, spec: &CurveSpec) -> bool {
        self.f.iter().all(|g| g.evaluate_weighted(&spec.n()).is_empty())
    }
}

/// Each `a_j` equals the sum of the exponents of `x_j` on the right-hand
/// sides of `f1..f4`.
pub fn gluing_check(data: &BresinskyData) -> bool {
    (0..4).all(|j| (0..4).map(|i| data.aij[i][j]).sum::<u32>() == data.a[j])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", content = "detail", rename_all = "snake_case")]
pub enum Rejection {
    NotSymmetric,
    CompleteIntersection,
    ShapeMismatch(String),
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotSymmetric => f.write_str("not symmetric"),
            Rejection::CompleteIntersection => f.write_str("complete intersection"),
            Rejection::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    Gorenstein(BresinskyData),
    NotGorensteinNci(Rejection),
}

/// `min { k >= 1 : k n_i in <n_j : j != i> }` for every `i`.
pub fn diagonal_exponents(spec: &CurveSpec) -> [u32; 4] {
    let n = spec.n();
    let mut a = [0; 4];
    for i in 0..4 {
        let others: Vec<u64> = (0..4).filter(|&j| j != i).map(|j| n[j]).collect();
        let limit = n[i] * others[0];
        let table = membership_table(&others, limit);
        a[i] = (1..).find(|&k| table[(k * n[i]) as usize]).expect("k = n_j always works") as u32;
    }
    a
}

pub fn detect_structure(spec: &CurveSpec) -> Result<Structure> {
    use Structure::NotGorensteinNci as Reject;
    if !spec.symmetry_report()?.is_symmetric {
        return Ok(Reject(Rejection::NotSymmetric));
    }
    let betti = spec.betti_elements()?;
    let count: usize = betti.iter().map(|b| b.components.len() - 1).sum();
    if count == 3 {
        return Ok(Reject(Rejection::CompleteIntersection));
    }
    if count != 5 {
        return Ok(Reject(Rejection::ShapeMismatch(format!("{count} minimal generators"))));
    }

    let n = spec.n();
    let a = diagonal_exponents(spec);
    let mut aij = [[0u32; 4]; 4];
    let mut rhs = [(0usize, 0usize); 4];
    for i in 0..4 {
        let s = a[i] as u64 * n[i];
        let two_var: Vec<ExponentVector> =
            spec.factorizations(s).into_iter().filter(|u| u.get(i) == 0 && u.support().count_ones() == 2).collect();
        let [u] = two_var.as_slice() else {
            return Ok(Reject(Rejection::ShapeMismatch(format!(
                "{} two-variable factorizations of a{} n{}",
                two_var.len(),
                i + 1,
                i + 1
            ))));
        };
        let vars: Vec<usize> = (0..4).filter(|&j| u.get(j) > 0).collect();
        rhs[i] = (vars[0], vars[1]);
        for &j in &vars {
            aij[i][j] = u.get(j);
        }
    }
    let Some(pat) = CASE_TABLE.iter().find(|p| p.rhs == rhs) else {
        return Ok(Reject(Rejection::ShapeMismatch(format!("right-hand sides {rhs:?} match no case"))));
    };
    let data = BresinskyData::from_exponents(pat.label, a, aij);

    // cross-check against the Betti elements
    for (i, g) in data.f.iter().enumerate() {
        let mut terms = g.terms().map(|(m, _)| *m);
        let (u, v) = (terms.next().unwrap(), terms.next().unwrap());
        if u.weighted_degree(&n) != v.weighted_degree(&n) {
            return Err(Error::Internal(format!("f{} = {g} is not in the toric ideal of {spec}", i + 1)));
        }
        let s = u.weighted_degree(&n);
        let separated = betti.iter().find(|b| b.degree == s).is_some_and(|b| {
            let comp = |m: &ExponentVector| b.components.iter().position(|c| c.contains(m));
            comp(&u).is_some() && comp(&u) != comp(&v)
        });
        if !separated {
            return Err(Error::Internal(format!("f{} = {g} is not a minimal generator of {spec}", i + 1)));
        }
    }
    for (i, row) in aij.iter().enumerate() {
        for j in 0..4 {
            if row[j] >= a[j] {
                return Err(Error::Internal(format!("a{}{} >= a{} for {spec}", i + 1, j + 1, j + 1)));
            }
        }
    }
    Ok(Structure::Gorenstein(data))
}

/// Case-1a exponents: `a13, a14, a21, a24, a31, a32, a42, a43`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Case1aParams {
    pub a13: u32,
    pub a14: u32,
    pub a21: u32,
    pub a24: u32,
    pub a31: u32,
    pub a32: u32,
    pub a42: u32,
    pub a43: u32,
}

impl Case1aParams {
    pub fn diagonal(&self) -> [u32; 4] {
        [self.a21 + self.a31, self.a32 + self.a42, self.a13 + self.a43, self.a14 + self.a24]
    }

    pub fn matrix(&self) -> [[u32; 4]; 4] {
        let mut m = [[0; 4]; 4];
        m[0][2] = self.a13;
        m[0][3] = self.a14;
        m[1][0] = self.a21;
        m[1][3] = self.a24;
        m[2][0] = self.a31;
        m[2][1] = self.a32;
        m[3][1] = self.a42;
        m[3][2] = self.a43;
        m
    }

    pub fn data(&self) -> BresinskyData {
        BresinskyData::from_exponents(CaseLabel::C1a, self.diagonal(), self.matrix())
    }

    /// Multiplicities from the closed formulas, in case-1a naming.
    pub fn multiplicities(&self) -> [u64; 4] {
        let [a1, a2, a3, a4] = self.diagonal().map(u64::from);
        let (a13, a14, a21, a24) = (self.a13 as u64, self.a14 as u64, self.a21 as u64, self.a24 as u64);
        let (a31, a32, a42, a43) = (self.a31 as u64, self.a32 as u64, self.a42 as u64, self.a43 as u64);
        [
            a2 * a3 * a14 + a32 * a13 * a24,
            a3 * a4 * a21 + a31 * a43 * a24,
            a1 * a4 * a32 + a14 * a42 * a31,
            a1 * a2 * a43 + a42 * a21 * a13,
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstantiationRejection {
    InvalidExponents,
    DuplicateMultiplicities,
    GcdNotOne,
    EmbeddingDimension,
}

impl fmt::Display for InstantiationRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InstantiationRejection::InvalidExponents => "exponents violate 0 < a_ij",
            InstantiationRejection::DuplicateMultiplicities => "duplicate multiplicities",
            InstantiationRejection::GcdNotOne => "gcd ≠ 1",
            InstantiationRejection::EmbeddingDimension => "embedding dimension < 4",
        })
    }
}

/// An instantiated case-1a curve after sorting the multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub spec: CurveSpec,
    /// Case-1a variable `i` is variable `perm[i]` of the sorted curve.
    pub perm: [usize; 4],
}

pub fn instantiate_case1a(p: &Case1aParams) -> std::result::Result<Instance, InstantiationRejection> {
    let vals = [p.a13, p.a14, p.a21, p.a24, p.a31, p.a32, p.a42, p.a43];
    if vals.contains(&0) {
        return Err(InstantiationRejection::InvalidExponents);
    }
    let n = p.multiplicities();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&i| n[i]);
    let sorted = order.map(|i| n[i]);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(InstantiationRejection::DuplicateMultiplicities);
    }
    if n.iter().fold(0u64, |g, &x| g.gcd(&x)) != 1 {
        return Err(InstantiationRejection::GcdNotOne);
    }
    let spec = CurveSpec::new(sorted).map_err(|_| InstantiationRejection::EmbeddingDimension)?;
    let mut perm = [0; 4];
    for (pos, &i) in order.iter().enumerate() {
        perm[i] = pos;
    }
    Ok(Instance { spec, perm })
}

impl Instance {
    /// The case-1a data carried to the sorted curve. This is the structure
    /// `detect_structure` reports whenever the curve is Gorenstein and not a
    /// complete intersection; `None` if the relabelled shape is no case.
    pub fn relabeled(&self, p: &Case1aParams) -> Option<BresinskyData> {
        let (a0, m0) = (p.diagonal(), p.matrix());
        let mut a = [0; 4];
        let mut aij = [[0; 4]; 4];
        for i in 0..4 {
            a[self.perm[i]] = a0[i];
            for j in 0..4 {
                aij[self.perm[i]][self.perm[j]] = m0[i][j];
            }
        }
        let rhs: Vec<(usize, usize)> = aij
            .iter()
            .map(|row| {
                let v: Vec<usize> = (0..4).filter(|&j| row[j] > 0).collect();
                (v[0], v[1])
            })
            .collect();
        let pat = CASE_TABLE.iter().find(|pat| pat.rhs[..] == rhs[..])?;
        Some(BresinskyData::from_exponents(pat.label, a, aij))
    }
}
