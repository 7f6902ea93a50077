//! The tangent cone ideal `I(C)_*`: generators, minimal count, graded
//! dimensions and the Cohen-Macaulay test.

pub mod linalg;

use std::collections::{BTreeMap, HashMap};

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, PolyError, Result};
use crate::morasb::StandardBasis;
use crate::poly::{ExponentVector, MonomialOrder, Polynomial};
use crate::semigroup::{for_each_vector_up_to, support_components, CurveSpec};
use linalg::{Echelon, SparseRow};

/// Largest degree bound accepted for graded computations.
pub const MAX_DEGREE_BOUND: u32 = 40;
/// Slack added to the largest generator degree.
pub const DEGREE_SLACK: u32 = 4;

/// Least homogeneous summand, scaled so its leading coefficient under `order` is `+1`.
pub fn lowest_form(order: &MonomialOrder, f: &Polynomial) -> Result<Polynomial> {
    Ok(f.lowest_form()?.monic(order)?)
}

/// Lowest forms of the basis elements, without repetitions up to scalars.
pub fn tangent_generators(basis: &StandardBasis) -> Result<Vec<Polynomial>> {
    let mut out: Vec<Polynomial> = Vec::new();
    for g in &basis.elements {
        let l = lowest_form(&basis.order, g)?;
        if !out.contains(&l) {
            out.push(l);
        }
    }
    Ok(out)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of monomials of degree `d` in four variables.
pub fn monomial_count(d: u32) -> u64 {
    binomial(d as u64 + 3, 3)
}

fn column_index(d: u32) -> HashMap<ExponentVector, usize> {
    ExponentVector::all_of_degree(d).into_iter().enumerate().map(|(i, m)| (m, i)).collect()
}

fn to_row(p: &Polynomial, cols: &HashMap<ExponentVector, usize>) -> Result<SparseRow> {
    let mut row = SparseRow::new();
    for (m, c) in p.terms() {
        if !c.is_integer() {
            return Err(Error::Internal(format!("non-integral coefficient in {p}")));
        }
        let v = c.to_integer().to_i128().ok_or_else(|| Error::Internal("coefficient too large".into()))?;
        row.insert(cols[m], v);
    }
    Ok(row)
}

fn check_homogeneous(h: &[Polynomial]) -> Result<()> {
    for p in h {
        if p.is_zero() {
            return Err(PolyError::ZeroPolynomial.into());
        }
        if !p.is_homogeneous() {
            return Err(Error::InhomogeneousInput(p.to_string()));
        }
    }
    Ok(())
}

fn degree_of(p: &Polynomial) -> u32 {
    p.degree().expect("non-zero")
}

/// Echelon form of `I_d`: multiples of lower-degree generators first, then
/// the generators of degree exactly `d`.
struct DegreePiece {
    echelon: Echelon,
    /// Indices into the input of the degree-`d` generators that raised the rank.
    new_generators: Vec<usize>,
}

fn degree_piece(h: &[Polynomial], d: u32, cols: &HashMap<ExponentVector, usize>) -> Result<DegreePiece> {
    let mut echelon = Echelon::new();
    for p in h.iter().filter(|p| degree_of(p) < d) {
        for m in ExponentVector::all_of_degree(d - degree_of(p)) {
            echelon.insert(to_row(&p.mul_term(&m, &num_traits::One::one()), cols)?)?;
        }
    }
    let mut new_generators = Vec::new();
    for (i, p) in h.iter().enumerate().filter(|(_, p)| degree_of(p) == d) {
        if echelon.insert(to_row(p, cols)?)? {
            new_generators.push(i);
        }
    }
    Ok(DegreePiece { echelon, new_generators })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimalCount {
    pub count: usize,
    /// Number of minimal generators in each degree that needs any.
    pub per_degree: BTreeMap<u32, usize>,
    /// A minimal generating subset of the input.
    pub minimal: Vec<Polynomial>,
}

/// Minimal number of generators of the ideal spanned by homogeneous `h`,
/// by graded Nakayama.
pub fn minimal_generator_count(h: &[Polynomial]) -> Result<MinimalCount> {
    check_homogeneous(h)?;
    if h.is_empty() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let mut degrees: Vec<u32> = h.iter().map(degree_of).collect();
    degrees.sort_unstable();
    degrees.dedup();
    if let Some(&d) = degrees.last() {
        if d > MAX_DEGREE_BOUND {
            return Err(Error::DegreeBoundTooLarge(d));
        }
    }
    let mut per_degree = BTreeMap::new();
    let mut chosen = Vec::new();
    for d in degrees {
        let piece = degree_piece(h, d, &column_index(d))?;
        if !piece.new_generators.is_empty() {
            per_degree.insert(d, piece.new_generators.len());
            chosen.extend(piece.new_generators);
        }
    }
    chosen.sort_unstable();
    let minimal = chosen.iter().map(|&i| h[i].clone()).collect();
    Ok(MinimalCount { count: chosen.len(), per_degree, minimal })
}

/// Whether the homogeneous `p` lies in the ideal spanned by homogeneous `h`.
pub fn ideal_contains(h: &[Polynomial], p: &Polynomial) -> Result<bool> {
    check_homogeneous(h)?;
    if p.is_zero() {
        return Ok(true);
    }
    if !p.is_homogeneous() {
        return Ok(false);
    }
    let d = degree_of(p);
    let cols = column_index(d);
    let lower: Vec<Polynomial> = h.iter().filter(|q| degree_of(q) <= d).cloned().collect();
    let piece = degree_piece(&lower, d, &cols)?;
    piece.echelon.contains(to_row(p, &cols)?)
}

/// `dim I_d` for `d = 0..=bound`.
pub fn graded_dims(h: &[Polynomial], bound: u32) -> Result<Vec<u64>> {
    check_homogeneous(h)?;
    (0..=bound).map(|d| Ok(degree_piece(h, d, &column_index(d))?.echelon.rank() as u64)).collect()
}

/// `dim (I : x1)_d - dim I_d`, and a monomial witness when positive.
fn colon_excess(h: &[Polynomial], d: u32) -> Result<(u64, Option<ExponentVector>)> {
    let up = column_index(d + 1);
    let full = degree_piece(h, d + 1, &up)?.echelon;
    // dim (I : x1)_d = dim I_{d+1} - dim of I_{d+1} restricted to x1 = 0
    let mut restricted = Echelon::new();
    for p in h.iter().filter(|p| degree_of(p) <= d + 1) {
        for m in ExponentVector::all_of_degree(d + 1 - degree_of(p)) {
            let row: SparseRow = to_row(&p.mul_term(&m, &num_traits::One::one()), &up)?
                .into_iter()
                .filter(|(c, _)| !x1_divides_column(*c, d + 1))
                .collect();
            restricted.insert(row)?;
        }
    }
    let colon = (full.rank() - restricted.rank()) as u64;
    let here = degree_piece(h, d, &column_index(d))?.echelon;
    let dim_d = here.rank() as u64;
    if colon <= dim_d {
        return Ok((0, None));
    }
    let cols_d = column_index(d);
    for m in ExponentVector::all_of_degree(d) {
        let unit = |cols: &HashMap<ExponentVector, usize>, m: ExponentVector| -> SparseRow {
            std::iter::once((cols[&m], 1i128)).collect()
        };
        let x1m = m.mul(&ExponentVector::var_power(0, 1));
        if full.contains(unit(&up, x1m))? && !here.contains(unit(&cols_d, m))? {
            return Ok((colon - dim_d, Some(m)));
        }
    }
    Ok((colon - dim_d, None))
}

/// Columns of `column_index(d)` are in lexicographically decreasing order, so
/// the monomials divisible by `x1` come first.
fn x1_divides_column(c: usize, d: u32) -> bool {
    (c as u64) < monomial_count(d) - monomial_count_3(d)
}

/// Number of monomials of degree `d` in three variables.
fn monomial_count_3(d: u32) -> u64 {
    binomial(d as u64 + 2, 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmVerdict {
    pub is_cm: bool,
    pub degree_bound: u32,
    /// A monomial `m` with `x1 m` in the ideal and `m` outside it.
    pub witness: Option<String>,
    pub witness_degree: Option<u32>,
}

/// `x1` is a non-zerodivisor modulo the ideal, checked in degrees `0..=bound`.
pub fn is_cm_tangent_cone(h: &[Polynomial], bound: u32) -> Result<CmVerdict> {
    check_homogeneous(h)?;
    for d in 0..=bound {
        let (excess, witness) = colon_excess(h, d)?;
        if excess > 0 {
            return Ok(CmVerdict {
                is_cm: false,
                degree_bound: bound,
                witness: witness.map(|m| m.to_string()),
                witness_degree: Some(d),
            });
        }
    }
    Ok(CmVerdict { is_cm: true, degree_bound: bound, witness: None, witness_degree: None })
}

/// Length of `K[x]/(I, x1)`, summed up to the first vanishing degree.
pub fn length_modulo_x1(h: &[Polynomial]) -> Result<u64> {
    check_homogeneous(h)?;
    let mut total = 0;
    for d in 0..=MAX_DEGREE_BOUND {
        let cols = column_index(d);
        let mut e = Echelon::new();
        for p in h.iter().filter(|p| degree_of(p) <= d) {
            for m in ExponentVector::all_of_degree(d - degree_of(p)) {
                let row: SparseRow = to_row(&p.mul_term(&m, &num_traits::One::one()), &cols)?
                    .into_iter()
                    .filter(|(c, _)| !x1_divides_column(*c, d))
                    .collect();
                e.insert(row)?;
            }
        }
        let piece = monomial_count_3(d) - e.rank() as u64;
        if piece == 0 {
            return Ok(total);
        }
        total += piece;
    }
    Err(Error::DegreeBoundTooLarge(MAX_DEGREE_BOUND + 1))
}

/// Longest factorization length of every `s <= limit`; `None` for gaps.
pub fn max_lengths(spec: &CurveSpec, limit: u64) -> Vec<Option<u32>> {
    let n = spec.n();
    let mut best: Vec<Option<u32>> = vec![None; limit as usize + 1];
    best[0] = Some(0);
    for s in 1..=limit as usize {
        best[s] = n.iter().filter(|&&g| g as usize <= s).filter_map(|&g| best[s - g as usize].map(|l| l + 1)).max();
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedKernel {
    /// `dim` of `I(C)` intersected with polynomials of degree `<= e`, for `e = 0..=d`.
    pub slice_dims: Vec<u64>,
    /// Dimension of the degree-`e` piece of `I(C)_*`, for `e = 0..=d`.
    pub initial_dims: Vec<u64>,
}

/// Kernel of `x_i -> t^{n_i}` graded by total degree, from factorizations
/// alone. A degree-`e` monomial of value `s` contributes to the initial
/// piece unless every factorization of `s` has length at most `e` and `s`
/// has no other factorization of length `e`, so
/// `dim (I_*)_e = #monomials of degree e - #{s : max length of s = e}`.
pub fn graded_kernel(spec: &CurveSpec, d: u32) -> GradedKernel {
    let n = spec.n();
    let limit = d as u64 * n[3];
    let longest = max_lengths(spec, limit);
    let mut initial_dims = vec![0u64; d as usize + 1];
    let mut slice_counts: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for_each_vector_up_to(&n, limit, |u, s| {
        let e = u.total_degree();
        if e > d {
            return;
        }
        slice_counts.entry(s).or_insert_with(|| vec![0; d as usize + 1])[e as usize] += 1;
    });
    for (&s, counts) in &slice_counts {
        let top = longest[s as usize].expect("members have factorizations");
        for (e, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            initial_dims[e] += if top as usize > e { c } else { c - 1 };
        }
    }
    let mut slice_dims = vec![0u64; d as usize + 1];
    for counts in slice_counts.values() {
        let mut acc = 0u64;
        for (e, &c) in counts.iter().enumerate() {
            acc += c;
            slice_dims[e] += acc.saturating_sub(1);
        }
    }
    GradedKernel { slice_dims, initial_dims }
}

/// A basis of the degree-`<= d` slice of `I(C)`: consecutive differences
/// inside each group of monomials with the same value.
pub fn kernel_basis(spec: &CurveSpec, d: u32) -> Vec<(ExponentVector, ExponentVector)> {
    let n = spec.n();
    let mut groups: BTreeMap<u64, Vec<ExponentVector>> = BTreeMap::new();
    for_each_vector_up_to(&n, d as u64 * n[3], |u, s| {
        if u.total_degree() <= d {
            groups.entry(s).or_default().push(u);
        }
    });
    let mut out = Vec::new();
    for mut g in groups.into_values() {
        g.sort();
        out.extend(g.windows(2).map(|w| (w[0], w[1])));
    }
    out
}

/// Number of classes of factorizations of `s` under the moves
/// `x^a m <-> x^b m` of the given binomials; the multiples of the binomials
/// span the whole degree-`s` piece of `I(C)` exactly when this is 1.
pub fn move_components(spec: &CurveSpec, gens: &[(ExponentVector, ExponentVector)], s: u64) -> usize {
    let facts = spec.factorizations(s);
    if facts.is_empty() {
        return 0;
    }
    let index: HashMap<ExponentVector, usize> = facts.iter().enumerate().map(|(i, u)| (*u, i)).collect();
    let mut parent: Vec<usize> = (0..facts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = facts.len();
    for (i, u) in facts.iter().enumerate() {
        for (a, b) in gens {
            if let Some(rest) = u.checked_div(a) {
                let v = rest.mul(b);
                if let Some(&j) = index.get(&v) {
                    let (x, y) = (find(&mut parent, i), find(&mut parent, j));
                    if x != y {
                        parent[x] = y;
                        comps -= 1;
                    }
                }
            }
        }
    }
    comps
}

/// The binomials generate `I(C)` in every semigroup degree `<= bound`.
pub fn generates_kernel_up_to(spec: &CurveSpec, gens: &[(ExponentVector, ExponentVector)], bound: u64) -> bool {
    let member = spec.membership(bound);
    (0..=bound).filter(|&s| member[s as usize]).all(|s| move_components(spec, gens, s) == 1)
}

/// Factorization-graph components of `s`, re-exported for oracle tests.
pub fn factorization_components(spec: &CurveSpec, s: u64) -> usize {
    support_components(&spec.factorizations(s)).len()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentConeReport {
    pub generators: Vec<String>,
    pub minimal_count: usize,
    pub per_degree: BTreeMap<u32, usize>,
    pub minimal_generators: Vec<String>,
    pub graded_dims: Vec<u64>,
    pub kernel_dims: Vec<u64>,
    pub dims_agree: bool,
    pub cm: CmVerdict,
    pub length_modulo_x1: u64,
    pub degree_bound: u32,
    #[serde(skip)]
    pub generator_polys: Vec<Polynomial>,
    #[serde(skip)]
    pub minimal_polys: Vec<Polynomial>,
}

/// `D = max generator degree + slack`, or the override.
pub fn degree_bound(h: &[Polynomial], override_bound: Option<u32>) -> Result<u32> {
    let d = match override_bound {
        Some(d) => d,
        None => h.iter().map(degree_of).max().unwrap_or(0) + DEGREE_SLACK,
    };
    if d > MAX_DEGREE_BOUND {
        return Err(Error::DegreeBoundTooLarge(d));
    }
    Ok(d)
}

/// Full tangent-cone analysis of a certified standard basis.
pub fn analyze(spec: &CurveSpec, basis: &StandardBasis, bound: Option<u32>) -> Result<TangentConeReport> {
    let gens = tangent_generators(basis)?;
    let d = degree_bound(&gens, bound)?;
    let min = minimal_generator_count(&gens)?;
    let graded_dims = graded_dims(&gens, d)?;
    let kernel_dims = graded_kernel(spec, d).initial_dims;
    let cm = is_cm_tangent_cone(&gens, d)?;
    let length = length_modulo_x1(&gens)?;
    let show = |ps: &[Polynomial]| ps.iter().map(|p| p.display_in(&basis.order)).collect();
    Ok(TangentConeReport {
        generators: show(&gens),
        minimal_count: min.count,
        per_degree: min.per_degree,
        minimal_generators: show(&min.minimal),
        minimal_polys: min.minimal.clone(),
        dims_agree: graded_dims == kernel_dims,
        graded_dims,
        kernel_dims,
        cm,
        length_modulo_x1: length,
        degree_bound: d,
        generator_polys: gens,
    })
}

/// Sign-insensitive form used for set comparisons.
pub fn normalized(p: &Polynomial) -> Polynomial {
    let c = p.canonical_scaling();
    if c.terms().next().is_some_and(|(_, c)| c.is_negative()) {
        -c
    } else {
        c
    }
}
