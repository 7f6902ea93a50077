use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::monomial::{ExponentVector, NVARS};
use crate::error::ParseError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    /// Degree reverse lexicographic; a well-order.
    GlobalDegrevlex,
    /// Negative degree reverse lexicographic; a local order in which the
    /// constant monomial is the greatest.
    NegativeDegrevlex,
}

/// A degree reverse lexicographic order, global or local, on a chosen
/// ranking of the four variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub kind: OrderKind,
    /// Zero-based variable indices from greatest to least.
    pub ranking: [usize; NVARS],
}

impl MonomialOrder {
    /// Negative degrevlex with `x4 > x3 > x2 > x1`.
    pub const LOCAL_4321: MonomialOrder = MonomialOrder { kind: OrderKind::NegativeDegrevlex, ranking: [3, 2, 1, 0] };
    /// Negative degrevlex with `x4 > x2 > x3 > x1`.
    pub const LOCAL_4231: MonomialOrder = MonomialOrder { kind: OrderKind::NegativeDegrevlex, ranking: [3, 1, 2, 0] };

    pub fn new(kind: OrderKind, ranking: [usize; NVARS]) -> Result<Self, ParseError> {
        let mut seen = [false; NVARS];
        for &v in &ranking {
            if v >= NVARS || seen[v] {
                return Err(ParseError::BadOrder(format!("{ranking:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(MonomialOrder { kind, ranking })
    }

    pub fn local(ranking: [usize; NVARS]) -> Result<Self, ParseError> {
        Self::new(OrderKind::NegativeDegrevlex, ranking)
    }

    pub fn is_local(&self) -> bool {
        self.kind == OrderKind::NegativeDegrevlex
    }

    pub fn compare(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        let (da, db) = (a.total_degree(), b.total_degree());
        if da != db {
            return match self.kind {
                OrderKind::GlobalDegrevlex => da.cmp(&db),
                OrderKind::NegativeDegrevlex => db.cmp(&da),
            };
        }
        // Reverse lexicographic tie-break: scanning from the least variable,
        // the first larger exponent makes the monomial smaller.
        for &v in self.ranking.iter().rev() {
            match a.get(v).cmp(&b.get(v)) {
                Ordering::Equal => continue,
                other => return other.reverse(),
            }
        }
        Ordering::Equal
    }

    /// The same kind of order with the variables relabelled by `perm`
    /// (variable `i` becomes `perm[i]`).
    pub fn permuted(&self, perm: &[usize; NVARS]) -> MonomialOrder {
        let mut ranking = self.ranking;
        for r in ranking.iter_mut() {
            *r = perm[*r];
        }
        MonomialOrder { kind: self.kind, ranking }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == OrderKind::GlobalDegrevlex {
            write!(f, "degrevlex ")?;
        }
        let names: Vec<String> = self.ranking.iter().map(|v| format!("x{}", v + 1)).collect();
        write!(f, "{}", names.join(">"))
    }
}

/// Parses a local order from `x4,x2,x3,x1` or `x4>x2>x3>x1`; a leading
/// `degrevlex ` selects the global order instead.
impl FromStr for MonomialOrder {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (kind, rest) = match s.strip_prefix("degrevlex") {
            Some(rest) => (OrderKind::GlobalDegrevlex, rest.trim()),
            None => (OrderKind::NegativeDegrevlex, s),
        };
        let parts: Vec<&str> = rest.split([',', '>']).map(str::trim).collect();
        if parts.len() != NVARS {
            return Err(ParseError::BadOrder(s.to_string()));
        }
        let mut ranking = [0; NVARS];
        for (slot, p) in ranking.iter_mut().zip(parts) {
            let idx: usize = p
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .filter(|&i: &usize| (1..=NVARS).contains(&i))
                .ok_or_else(|| ParseError::BadOrder(s.to_string()))?;
            *slot = idx - 1;
        }
        MonomialOrder::new(kind, ranking)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(e: [u32; 4]) -> ExponentVector {
        ExponentVector::new(e)
    }

    #[test]
    fn lower_degree_wins_locally() {
        let o = MonomialOrder::LOCAL_4321;
        assert_eq!(o.compare(&ev([0, 0, 4, 1]), &ev([8, 0, 0, 0])), Ordering::Greater);
        let m = ev([1, 2, 3, 4]);
        assert_eq!(o.compare(&m, &m), Ordering::Equal);
    }

    #[test]
    fn mixed_ranking_example() {
        let o = MonomialOrder::LOCAL_4231;
        assert_eq!(o.compare(&ev([3, 0, 0, 8]), &ev([0, 8, 4, 0])), Ordering::Greater);
        // equal degree: larger power of the least variable x1 loses
        assert_eq!(o.compare(&ev([0, 10, 0, 0]), &ev([3, 0, 7, 0])), Ordering::Greater);
    }

    #[test]
    fn ranking_changes_tie_break() {
        // x2*x3 vs x3^2 ... pick a pair separated only by x2/x3 placement
        let a = ev([0, 1, 0, 1]);
        let b = ev([0, 0, 1, 1]);
        // x4>x3>x2>x1: least is x1 (tie), then x2: a has more x2 -> a smaller
        assert_eq!(MonomialOrder::LOCAL_4321.compare(&a, &b), Ordering::Less);
        // x4>x2>x3>x1: after x1 comes x3: b has more x3 -> b smaller
        assert_eq!(MonomialOrder::LOCAL_4231.compare(&a, &b), Ordering::Greater);
    }

    #[test]
    fn parse_and_display() {
        let o: MonomialOrder = "x4,x2,x3,x1".parse().unwrap();
        assert_eq!(o, MonomialOrder::LOCAL_4231);
        assert_eq!(o.to_string(), "x4>x2>x3>x1");
        let g: MonomialOrder = "degrevlex x4>x3>x2>x1".parse().unwrap();
        assert_eq!(g.kind, OrderKind::GlobalDegrevlex);
        assert!("x4,x4,x3,x1".parse::<MonomialOrder>().is_err());
        assert!("x4,x3,x1".parse::<MonomialOrder>().is_err());
    }
}
