//! Integer lattices in Z^n kept in row Hermite form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sublattice of Z^n spanned by the inserted vectors. Rows are kept in
/// echelon form with positive pivots and reduced entries above each pivot,
/// so membership is a single reduction pass.
#[derive(Clone, Debug, Default)]
pub struct HermiteLattice {
    dim: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl HermiteLattice {
    pub fn new(dim: usize) -> Self {
        HermiteLattice { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the echelon rows; the remainder vanishes iff `v`
    /// lies in the lattice.
    fn reduce(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let q = v[*p].div_floor(&row[*p]);
            if !q.is_zero() {
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &q * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        self.reduce(v.to_vec()).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the spanning set. Returns `false` if it was already a member.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice dimension");
        let mut pending = vec![v.to_vec()];
        let mut changed = false;
        while let Some(w) = pending.pop() {
            let w = self.reduce(w);
            let Some(p) = w.iter().position(|x| !x.is_zero()) else {
                continue;
            };
            changed = true;
            match self.rows.iter().position(|(q, _)| *q == p) {
                None => {
                    let mut w = w;
                    if w[p].is_negative() {
                        w.iter_mut().for_each(|x| *x = -&*x);
                    }
                    let at = self.rows.partition_point(|(q, _)| *q < p);
                    self.rows.insert(at, (p, w));
                }
                Some(k) => {
                    // replace the row by gcd combination; the leftover drops its pivot
                    let (_, row) = self.rows.remove(k);
                    let (a, b) = (&row[p], &w[p]);
                    let e = a.extended_gcd(b);
                    let g = e.gcd;
                    let combo: Vec<BigInt> = row.iter().zip(&w).map(|(r, x)| &e.x * r + &e.y * x).collect();
                    let (ra, rb) = (a / &g, b / &g);
                    let rest: Vec<BigInt> = row.iter().zip(&w).map(|(r, x)| &rb * r - &ra * x).collect();
                    pending.push(rest);
                    pending.push(combo);
                }
            }
        }
        if changed {
            self.tidy();
        }
        changed
    }

    fn tidy(&mut self) {
        for k in 0..self.rows.len() {
            let (p, pivot_row) = self.rows[k].clone();
            for (_, row) in self.rows[..k].iter_mut() {
                let q = row[p].div_floor(&pivot_row[p]);
                if !q.is_zero() {
                    for (x, r) in row.iter_mut().zip(&pivot_row) {
                        *x -= &q * r;
                    }
                }
            }
        }
    }

    /// Echelon basis of the lattice.
    pub fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    /// Index of the lattice in Z^n when it has full rank.
    pub fn index(&self) -> Option<BigInt> {
        (self.rank() == self.dim).then(|| self.rows.iter().map(|(p, r)| r[*p].abs()).product())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integer_not_rational_membership() {
        let mut l = HermiteLattice::new(2);
        assert!(l.insert(&v(&[2, 0])));
        assert!(!l.contains(&v(&[1, 0])));
        assert!(l.contains(&v(&[-4, 0])));
        l.insert(&v(&[3, 1]));
        assert!(l.contains(&v(&[1, 1])));
        assert!(!l.contains(&v(&[0, 1])));
        assert_eq!(l.index(), Some(BigInt::from(2)));
    }

    #[test]
    fn gcd_merges_pivots() {
        let mut l = HermiteLattice::new(1);
        l.insert(&v(&[6]));
        l.insert(&v(&[10]));
        assert_eq!(l.basis(), vec![v(&[2])]);
        assert!(!l.insert(&v(&[4])));
    }

    proptest! {
        #[test]
        fn inserted_vectors_and_combinations_are_members(
            vs in proptest::collection::vec(proptest::collection::vec(-9i64..10, 3), 1..5),
            cs in proptest::collection::vec(-3i64..4, 5),
        ) {
            let mut l = HermiteLattice::new(3);
            for x in &vs {
                l.insert(&v(x));
            }
            let mut sum = vec![0i64; 3];
            for (x, c) in vs.iter().zip(&cs) {
                prop_assert!(l.contains(&v(x)));
                for k in 0..3 {
                    sum[k] += c * x[k];
                }
            }
            prop_assert!(l.contains(&v(&sum)));
            prop_assert!(l.rank() <= vs.len());
        }
    }
}
