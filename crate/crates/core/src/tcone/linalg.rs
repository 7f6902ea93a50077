//! Row echelon form over the integers for sparse rows.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;

use crate::error::{Error, Result};

pub type SparseRow = BTreeMap<usize, i128>;

/// Incrementally built echelon basis; each row is keyed by its least column.
#[derive(Default, Debug)]
pub struct Echelon {
    pivots: HashMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `row` to the span; true when the rank grows.
    pub fn insert(&mut self, row: SparseRow) -> Result<bool> {
        let r = self.reduce(row)?;
        match r.keys().next() {
            Some(&col) => {
                self.pivots.insert(col, r);
                Ok(true)
            }
            None => Ok(false),
        }
    }

    pub fn contains(&self, row: SparseRow) -> Result<bool> {
        Ok(self.reduce(row)?.is_empty())
    }

    fn reduce(&self, mut row: SparseRow) -> Result<SparseRow> {
        row.retain(|_, v| *v != 0);
        // columns below the current lead are already free of pivots
        let mut floor = 0usize;
        loop {
            let Some((&col, &val)) = row.range(floor..).find(|(c, _)| self.pivots.contains_key(c)) else {
                return Ok(row);
            };
            let piv = &self.pivots[&col];
            let p = piv[&col];
            let g = val.gcd(&p);
            let (rs, ps) = (p / g, val / g);
            let mut next = SparseRow::new();
            for (&c, &v) in &row {
                next.insert(c, checked(v.checked_mul(rs))?);
            }
            for (&c, &v) in piv {
                let e = next.entry(c).or_insert(0);
                *e = checked(e.checked_sub(checked(v.checked_mul(ps))?))?;
            }
            next.retain(|_, v| *v != 0);
            let content = next.values().fold(0i128, |g, v| g.gcd(v));
            if content > 1 {
                for v in next.values_mut() {
                    *v /= content;
                }
            }
            row = next;
            floor = col + 1;
        }
    }
}

fn checked(v: Option<i128>) -> Result<i128> {
    v.ok_or_else(|| Error::Internal("integer overflow in elimination".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i128)]) -> SparseRow {
        entries.iter().copied().collect()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, -1)])).unwrap());
        assert!(e.insert(row(&[(1, 1), (2, -1)])).unwrap());
        assert!(!e.insert(row(&[(0, 2), (2, -2)])).unwrap());
        assert!(e.contains(row(&[(0, 3), (1, -3)])).unwrap());
        assert!(!e.contains(row(&[(2, 1)])).unwrap());
        assert!(!e.insert(row(&[])).unwrap());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn rational_combinations() {
        let mut e = Echelon::new();
        e.insert(row(&[(0, 2), (1, 3)])).unwrap();
        e.insert(row(&[(0, 3), (1, 5)])).unwrap();
        assert!(e.contains(row(&[(1, 1)])).unwrap());
        assert!(e.contains(row(&[(0, 1)])).unwrap());
    }
}
