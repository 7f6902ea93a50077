//! Linear exponent expressions, inequality atoms and binomial templates over
//! the symbols `a1..a4`, `aij`.

use std::fmt;

use serde::Serialize;

use super::CaselawError;
use crate::poly::{coeff, ExponentVector, Polynomial};

/// `c0 + sum c_k * sym_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    constant: i64,
    terms: Vec<(i64, String)>,
    text: String,
}

impl Expr {
    pub fn parse(s: &str) -> Result<Expr, CaselawError> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(CaselawError::Syntax(format!("empty expression in `{s}`")));
        }
        let mut constant = 0;
        let mut terms = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let sign = match bytes[i] {
                b'+' => {
                    i += 1;
                    1
                }
                b'-' => {
                    i += 1;
                    -1
                }
                _ if i == 0 => 1,
                _ => return Err(CaselawError::Syntax(format!("expected + or - in `{text}`"))),
            };
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let factor: Option<i64> = (i > start).then(|| text[start..i].parse().expect("digits"));
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'a' {
                let s0 = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let name = &text[s0..i];
                if !valid_symbol(name) {
                    return Err(CaselawError::Syntax(format!("bad symbol `{name}` in `{text}`")));
                }
                terms.push((sign * factor.unwrap_or(1), name.to_string()));
            } else {
                let f = factor.ok_or_else(|| CaselawError::Syntax(format!("dangling sign in `{text}`")))?;
                constant += sign * f;
            }
        }
        Ok(Expr { constant, terms, text })
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(_, s)| s.as_str())
    }

    pub fn eval<F: Fn(&str) -> Option<u32>>(&self, lookup: &F) -> Result<i64, CaselawError> {
        let mut v = self.constant;
        for (c, s) in &self.terms {
            let x = lookup(s).ok_or_else(|| CaselawError::Unhoused(s.clone()))?;
            v += c * x as i64;
        }
        Ok(v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn valid_symbol(name: &str) -> bool {
    let d = &name.as_bytes()[1..];
    let ok = |b: &u8| (b'1'..=b'4').contains(b);
    match d {
        [i] => ok(i),
        [i, j] => ok(i) && ok(j) && i != j,
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
    Eq,
}

impl Relation {
    pub fn holds(self, l: i64, r: i64) -> bool {
        match self {
            Relation::Lt => l < r,
            Relation::Le => l <= r,
            Relation::Eq => l == r,
        }
    }
}

/// `lhs rel rhs`; `>` and `>=` are stored with the sides swapped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub lhs: Expr,
    pub rel: Relation,
    pub rhs: Expr,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvaluatedAtom {
    pub text: String,
    pub lhs: i64,
    pub rhs: i64,
    pub truth: bool,
}

impl Atom {
    pub fn parse(s: &str) -> Result<Atom, CaselawError> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        for (op, rel, swap) in [
            ("<=", Relation::Le, false),
            (">=", Relation::Le, true),
            ("<", Relation::Lt, false),
            (">", Relation::Lt, true),
            ("=", Relation::Eq, false),
        ] {
            if let Some((l, r)) = text.split_once(op) {
                let (l, r) = (Expr::parse(l)?, Expr::parse(r)?);
                let (lhs, rhs) = if swap { (r, l) } else { (l, r) };
                return Ok(Atom { lhs, rel, rhs, text });
            }
        }
        Err(CaselawError::Syntax(format!("no relation in `{s}`")))
    }

    /// Comma-separated atoms.
    pub fn parse_list(s: &str) -> Result<Vec<Atom>, CaselawError> {
        s.split(',').filter(|t| !t.trim().is_empty()).map(Atom::parse).collect()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.lhs.symbols().chain(self.rhs.symbols())
    }

    pub fn eval<F: Fn(&str) -> Option<u32>>(&self, lookup: &F) -> Result<EvaluatedAtom, CaselawError> {
        let (lhs, rhs) = (self.lhs.eval(lookup)?, self.rhs.eval(lookup)?);
        Ok(EvaluatedAtom { text: self.text.clone(), lhs, rhs, truth: self.rel.holds(lhs, rhs) })
    }
}

/// A signed sum of monomials with symbolic exponents, written as in
/// `x3^(a3+a13)-x1^a1x2^a32x4^(a34-a14)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    terms: Vec<(i64, Vec<(usize, Expr)>)>,
    text: String,
}

impl Template {
    pub fn parse(s: &str) -> Result<Template, CaselawError> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = |m: &str| CaselawError::Syntax(format!("{m} in template `{text}`"));
        let b = text.as_bytes();
        let mut terms = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let sign = match b[i] {
                b'+' => {
                    i += 1;
                    1
                }
                b'-' => {
                    i += 1;
                    -1
                }
                _ if i == 0 => 1,
                _ => return Err(err("expected + or -")),
            };
            let mut factors = Vec::new();
            while i < b.len() && b[i] == b'x' {
                let var = match b.get(i + 1) {
                    Some(d @ b'1'..=b'4') => (d - b'1') as usize,
                    _ => return Err(err("bad variable")),
                };
                i += 2;
                let exp = if b.get(i) == Some(&b'^') {
                    i += 1;
                    if b.get(i) == Some(&b'(') {
                        let close = text[i..].find(')').ok_or_else(|| err("unclosed parenthesis"))? + i;
                        let e = Expr::parse(&text[i + 1..close])?;
                        i = close + 1;
                        e
                    } else {
                        let s0 = i;
                        if b.get(i) == Some(&b'a') {
                            i += 1;
                        }
                        while i < b.len() && b[i].is_ascii_digit() {
                            i += 1;
                        }
                        Expr::parse(&text[s0..i])?
                    }
                } else {
                    Expr::parse("1")?
                };
                factors.push((var, exp));
            }
            if factors.is_empty() {
                return Err(err("expected a monomial"));
            }
            terms.push((sign, factors));
        }
        if terms.is_empty() {
            return Err(err("empty"));
        }
        Ok(Template { terms, text })
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().flat_map(|(_, fs)| fs.iter().flat_map(|(_, e)| e.symbols()))
    }

    pub fn instantiate<F: Fn(&str) -> Option<u32>>(&self, lookup: &F) -> Result<Polynomial, CaselawError> {
        let mut p = Polynomial::zero();
        for (sign, factors) in &self.terms {
            let mut e = [0u32; 4];
            for (var, exp) in factors {
                let v = exp.eval(lookup)?;
                if v < 0 {
                    return Err(CaselawError::NegativeExponent(self.text.clone()));
                }
                e[*var] += v as u32;
            }
            p.add_term(ExponentVector::new(e), coeff(*sign));
        }
        Ok(p)
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lookup(s: &str) -> Option<u32> {
        match s {
            "a1" => Some(8),
            "a3" => Some(11),
            "a13" => Some(4),
            "a14" => Some(1),
            "a32" => Some(2),
            "a34" => Some(8),
            _ => None,
        }
    }

    #[test]
    fn expressions() {
        assert_eq!(Expr::parse("a3+a13").unwrap().eval(&lookup), Ok(15));
        assert_eq!(Expr::parse("2a34-a14").unwrap().eval(&lookup), Ok(15));
        assert_eq!(Expr::parse("2*a34+1").unwrap().eval(&lookup), Ok(17));
        assert_eq!(Expr::parse("a21").unwrap().eval(&lookup), Err(CaselawError::Unhoused("a21".into())));
        assert!(Expr::parse("a5").is_err());
        assert!(Expr::parse("a11").is_err());
    }

    #[test]
    fn atoms() {
        let a = Atom::parse("a3+a13 < a1+a32+a34-a14").unwrap().eval(&lookup).unwrap();
        assert_eq!((a.lhs, a.rhs, a.truth), (15, 17, true));
        let b = Atom::parse("a32+a34>=a3").unwrap().eval(&lookup).unwrap();
        assert_eq!((b.lhs, b.rhs, b.truth), (11, 10, false));
        assert_eq!(Atom::parse_list("a1<a3, a14=1").unwrap().len(), 2);
    }

    #[test]
    fn templates() {
        let t = Template::parse("x3^(a3+a13)-x1^a1x2^a32x4^(a34-a14)").unwrap();
        let want: Polynomial = "x3^15 - x1^8*x2^2*x4^7".parse().unwrap();
        assert_eq!(t.instantiate(&lookup).unwrap(), want);
        let m = Template::parse("x3^a13x4").unwrap().instantiate(&lookup).unwrap();
        assert_eq!(m, "x3^4*x4".parse().unwrap());
        let neg = Template::parse("x4^(a14-a34)").unwrap();
        assert!(matches!(neg.instantiate(&lookup), Err(CaselawError::NegativeExponent(_))));
    }
}
