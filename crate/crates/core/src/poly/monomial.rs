use std::fmt;

use serde::{Deserialize, Serialize};

/// Number of variables in the ambient polynomial ring.
pub const NVARS: usize = 4;

/// Exponent vector of a monomial `x1^e1 * x2^e2 * x3^e3 * x4^e4`.
///
/// The derived `Ord` is plain lexicographic order on the exponents and is only
/// used for deterministic storage; term orders live in [`super::MonomialOrder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; NVARS]", into = "[u32; NVARS]")]
pub struct ExponentVector {
    e: [u32; NVARS],
    deg: u32,
}

impl From<[u32; NVARS]> for ExponentVector {
    fn from(e: [u32; NVARS]) -> Self {
        ExponentVector::new(e)
    }
}

impl From<ExponentVector> for [u32; NVARS] {
    fn from(m: ExponentVector) -> Self {
        m.e
    }
}

impl ExponentVector {
    pub const ONE: ExponentVector = ExponentVector { e: [0; NVARS], deg: 0 };

    pub fn new(e: [u32; NVARS]) -> Self {
        ExponentVector { e, deg: e.iter().sum() }
    }

    /// `x_var^power`, with `var` zero-based.
    pub fn var_power(var: usize, power: u32) -> Self {
        let mut e = [0; NVARS];
        e[var] = power;
        Self::new(e)
    }

    pub fn exponents(&self) -> [u32; NVARS] {
        self.e
    }

    pub fn get(&self, var: usize) -> u32 {
        self.e[var]
    }

    pub fn total_degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.e.iter().zip(other.e.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &ExponentVector) -> ExponentVector {
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(other.e.iter()) {
            *x += y;
        }
        ExponentVector::new(e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn checked_div(&self, other: &ExponentVector) -> Option<ExponentVector> {
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(other.e.iter()) {
            *x = x.checked_sub(*y)?;
        }
        Some(ExponentVector::new(e))
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(other.e.iter()) {
            *x = (*x).max(*y);
        }
        ExponentVector::new(e)
    }

    pub fn gcd(&self, other: &ExponentVector) -> ExponentVector {
        let mut e = self.e;
        for (x, y) in e.iter_mut().zip(other.e.iter()) {
            *x = (*x).min(*y);
        }
        ExponentVector::new(e)
    }

    pub fn is_coprime(&self, other: &ExponentVector) -> bool {
        self.gcd(other).is_one()
    }

    /// Bit mask of the variables occurring with positive exponent.
    pub fn support(&self) -> u8 {
        self.e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u8, |m, (i, _)| m | (1 << i))
    }

    /// Weighted degree `u . w`; with `w = (n1,..,n4)` this is the exponent of
    /// `t` in the image of the monomial under `x_i -> t^{n_i}`.
    pub fn weighted_degree(&self, w: &[u64; NVARS]) -> u64 {
        self.e.iter().zip(w.iter()).map(|(&x, &y)| x as u64 * y).sum()
    }

    /// Relabels variables: variable `i` becomes variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize; NVARS]) -> ExponentVector {
        let mut e = [0; NVARS];
        for i in 0..NVARS {
            e[perm[i]] = self.e[i];
        }
        ExponentVector::new(e)
    }

    /// All exponent vectors of the given total degree, in lexicographically
    /// decreasing order.
    pub fn all_of_degree(d: u32) -> Vec<ExponentVector> {
        let mut out = Vec::new();
        for a in (0..=d).rev() {
            for b in (0..=d - a).rev() {
                for c in (0..=d - a - b).rev() {
                    out.push(ExponentVector::new([a, b, c, d - a - b - c]));
                }
            }
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &x) in self.e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if x == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, x)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_is_cached_sum() {
        let m = ExponentVector::new([1, 0, 4, 2]);
        assert_eq!(m.total_degree(), 7);
        assert_eq!(ExponentVector::ONE.total_degree(), 0);
    }

    #[test]
    fn divisibility_is_componentwise() {
        let a = ExponentVector::new([1, 0, 2, 0]);
        let b = ExponentVector::new([1, 3, 2, 1]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(b.checked_div(&a), Some(ExponentVector::new([0, 3, 0, 1])));
        assert_eq!(a.checked_div(&b), None);
    }

    #[test]
    fn all_of_degree_counts_binomial() {
        for d in 0..8u32 {
            let n = (d as usize + 3) * (d as usize + 2) * (d as usize + 1) / 6;
            assert_eq!(ExponentVector::all_of_degree(d).len(), n);
        }
    }

    #[test]
    fn display() {
        assert_eq!(ExponentVector::new([0, 0, 4, 1]).to_string(), "x3^4*x4");
        assert_eq!(ExponentVector::ONE.to_string(), "1");
    }
}
