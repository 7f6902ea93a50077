//! Exact sparse polynomials in `x1..x4` over the rationals.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vector, so iteration is
//! lexicographic on exponents and every polynomial has one canonical form.
//! Term orders are passed explicitly wherever a leading term is needed; the
//! same polynomial is routinely inspected under two different rankings.

mod monomial;
mod order;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use monomial::{ExponentVector, NVARS};
pub use order::{MonomialOrder, OrderKind};

use crate::error::PolyError;

pub type Coeff = BigRational;

pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<ExponentVector, Coeff>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Self::monomial(ExponentVector::ONE, Coeff::one())
    }

    pub fn monomial(m: ExponentVector, c: Coeff) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    /// `x^u - x^v`.
    pub fn binomial(u: ExponentVector, v: ExponentVector) -> Self {
        let mut p = Self::monomial(u, Coeff::one());
        p.add_term(v, -Coeff::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (ExponentVector, Coeff)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &Coeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &ExponentVector) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, m: ExponentVector, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    /// `c * x^m * self`.
    pub fn mul_term(&self, m: &ExponentVector, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    /// Highest total degree among the terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).max()
    }

    /// Lowest total degree among the terms.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExponentVector::total_degree).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.low_degree()
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Result<(ExponentVector, Coeff), PolyError> {
        self.terms
            .iter()
            .max_by(|a, b| order.compare(a.0, b.0))
            .map(|(m, c)| (*m, c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, order: &MonomialOrder) -> Result<ExponentVector, PolyError> {
        self.leading_term(order).map(|t| t.0)
    }

    /// `deg(f) - deg(LM(f))`.
    pub fn ecart(&self, order: &MonomialOrder) -> Result<u32, PolyError> {
        let lm = self.leading_monomial(order)?;
        Ok(self.degree().unwrap_or(0) - lm.total_degree())
    }

    /// The homogeneous summand of least total degree.
    pub fn lowest_form(&self) -> Result<Polynomial, PolyError> {
        let d = self.low_degree().ok_or(PolyError::ZeroPolynomial)?;
        Ok(Polynomial {
            terms: self.terms.iter().filter(|(m, _)| m.total_degree() == d).map(|(m, c)| (*m, c.clone())).collect(),
        })
    }

    /// Scales so the leading coefficient under `order` is `+1`.
    pub fn monic(&self, order: &MonomialOrder) -> Result<Polynomial, PolyError> {
        let (_, lc) = self.leading_term(order)?;
        Ok(self.scale(&lc.recip()))
    }

    /// Scales so the lexicographically greatest term has coefficient `+1`;
    /// two polynomials are proportional iff their canonical scalings agree.
    pub fn canonical_scaling(&self) -> Polynomial {
        match self.terms.iter().next_back() {
            Some((_, c)) => self.scale(&c.recip()),
            None => Polynomial::zero(),
        }
    }

    /// Image under `x_i -> t^{w_i}`, as a map from powers of `t` to
    /// coefficients.
    pub fn evaluate_weighted(&self, w: &[u64; NVARS]) -> BTreeMap<u64, Coeff> {
        let mut out: BTreeMap<u64, Coeff> = BTreeMap::new();
        for (m, c) in &self.terms {
            *out.entry(m.weighted_degree(w)).or_insert_with(Coeff::zero) += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    pub fn permuted(&self, perm: &[usize; NVARS]) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.permuted(perm), c.clone())))
    }

    /// Renders the terms from greatest to least under `order`.
    pub fn display_in(&self, order: &MonomialOrder) -> String {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.compare(b.0, a.0));
        render_terms(terms.into_iter())
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

/// S-polynomial `LC(g) * (L/LM f) * f - LC(f) * (L/LM g) * g` with
/// `L = lcm(LM f, LM g)`.
pub fn spoly(order: &MonomialOrder, f: &Polynomial, g: &Polynomial) -> Result<Polynomial, PolyError> {
    let (mf, cf) = f.leading_term(order)?;
    let (mg, cg) = g.leading_term(order)?;
    let l = mf.lcm(&mg);
    let tf = l.checked_div(&mf).expect("lcm is divisible");
    let tg = l.checked_div(&mg).expect("lcm is divisible");
    Ok(f.mul_term(&tf, &cg) - g.mul_term(&tg, &cf))
}

fn render_terms<'a, I: Iterator<Item = (&'a ExponentVector, &'a Coeff)>>(terms: I) -> String {
    let mut out = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{abs}*{m}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Positive terms first, each group by decreasing degrevlex, so a binomial
/// `x^u - x^v` prints the way it was built.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = MonomialOrder::new(OrderKind::GlobalDegrevlex, [3, 2, 1, 0]).expect("valid ranking");
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.1.is_negative().cmp(&b.1.is_negative()).then(order.compare(b.0, a.0)));
        f.write_str(&render_terms(terms.into_iter()))
    }
}

impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Coeff::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
