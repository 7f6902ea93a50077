//! Text syntax: `3/2*x1^2*x3 - x4 + 1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use super::{Coeff, ExponentVector, Polynomial, NVARS};
use crate::error::ParseError;

impl FromStr for Polynomial {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ParseError::BadPolynomial { input: s.to_string(), reason: reason.to_string() };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        let mut out = Polynomial::zero();
        for (negative, body) in split_terms(&compact).ok_or_else(|| bad("dangling sign"))? {
            let (m, mut c) = parse_term(body).map_err(|r| bad(&r))?;
            if negative {
                c = -c;
            }
            out.add_term(m, c);
        }
        Ok(out)
    }
}

fn split_terms(s: &str) -> Option<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut negative = false;
    let mut start = 0;
    let bytes = s.as_bytes();
    if let Some(&b) = bytes.first() {
        if b == b'-' || b == b'+' {
            negative = b == b'-';
            start = 1;
        }
    }
    let first = start;
    for i in first..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && i > start {
            out.push((negative, &s[start..i]));
            negative = bytes[i] == b'-';
            start = i + 1;
        }
    }
    if start >= s.len() {
        return None;
    }
    out.push((negative, &s[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return None;
    }
    Some(out)
}

fn parse_term(t: &str) -> Result<(ExponentVector, Coeff), String> {
    let mut c = Coeff::one();
    let mut e = [0u32; NVARS];
    for factor in t.split('*') {
        if let Some(rest) = factor.strip_prefix('x') {
            let (var, pow) = match rest.split_once('^') {
                Some((v, p)) => (v, p.parse::<u32>().map_err(|_| format!("bad exponent in `{factor}`"))?),
                None => (rest, 1),
            };
            let v: usize = var.parse().map_err(|_| format!("bad variable `{factor}`"))?;
            if !(1..=NVARS).contains(&v) {
                return Err(format!("variable `{factor}` out of range"));
            }
            e[v - 1] += pow;
        } else {
            c *= parse_rational(factor).ok_or_else(|| format!("bad factor `{factor}`"))?;
        }
    }
    Ok((ExponentVector::new(e), c))
}

fn parse_rational(s: &str) -> Option<Coeff> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d == BigInt::from(0) {
        return None;
    }
    Some(Coeff::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_terms() {
        let f: Polynomial = "3/2*x1^2*x3 - x4".parse().unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f.coefficient(&ExponentVector::new([2, 0, 1, 0])), Coeff::new(3.into(), 2.into()));
        assert_eq!(f.coefficient(&ExponentVector::new([0, 0, 0, 1])), -Coeff::one());
    }

    #[test]
    fn combines_like_terms() {
        let f: Polynomial = "x1*x2 + x2*x1 - 2*x1*x2".parse().unwrap();
        assert!(f.is_zero());
        let g: Polynomial = "-x1^2 + 3".parse().unwrap();
        assert_eq!(g.len(), 2);
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x5", "x1^", "x1 +", "1/0", "y2", "x1^-2"] {
            assert!(s.parse::<Polynomial>().is_err(), "{s}");
        }
    }
}
