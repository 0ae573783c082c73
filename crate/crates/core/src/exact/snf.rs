//! Smith normal form over the integers, plus the linear-algebra services built
//! on it: invariant factors, integer system solving, kernels and cokernels.
//!
//! Two elimination paths exist. [`smith_normal_form`] is the dense reference
//! path that carries the unimodular transforms. [`invariant_factors`] skips
//! the transforms and first runs a sparse elimination on unit pivots, handing
//! the (usually tiny) residual block to the dense path. Both use
//! smallest-absolute-value pivoting.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Matrices with more than this fraction of nonzero entries skip the sparse
/// elimination and go straight to the dense path.
pub const DENSIFY_FILL_RATIO: f64 = 0.25;

/// `d = u * m * v` with `u`, `v` unimodular and `d` diagonal with a
/// nonnegative divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

type Dense = Vec<Vec<BigInt>>;

struct DenseElim {
    a: Dense,
    u: Option<Dense>,
    v: Option<Dense>,
    rows: usize,
    cols: usize,
}

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

impl DenseElim {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in &mut self.a {
                r.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for r in v.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let (src, dst) = pair_mut(&mut self.a, k, i);
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        if let Some(u) = &mut self.u {
            let (src, dst) = pair_mut(u, k, i);
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                if !s.is_zero() {
                    *d -= q * s;
                }
            }
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in &mut self.a {
            if !r[k].is_zero() {
                let t = q * &r[k];
                r[j] -= t;
            }
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                if !r[k].is_zero() {
                    let t = q * &r[k];
                    r[j] -= t;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -std::mem::take(x);
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -std::mem::take(x);
            }
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.abs() < self.a[bi][bj].abs(),
                };
                if better {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            loop {
                let Some((pi, pj)) = self.smallest_in(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&p);
                        self.row_sub(i, t, &q);
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&p);
                        self.col_sub(j, t, &q);
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    continue;
                }
                // enforce p | every remaining entry
                let offender =
                    (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match offender {
                    Some(i) => {
                        // row_t += row_i
                        self.row_sub(t, i, &-BigInt::one());
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

fn pair_mut<T>(v: &mut [T], src: usize, dst: usize) -> (&T, &mut T) {
    assert_ne!(src, dst);
    if src < dst {
        let (a, b) = v.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = v.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

/// Dense reference Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = m.shape();
    let mut e = DenseElim {
        a: m.to_dense(),
        u: Some(identity(rows)),
        v: Some(identity(cols)),
        rows,
        cols,
    };
    e.run();
    SmithForm {
        u: IntMatrix::from_dense_shape(rows, rows, &e.u.unwrap()),
        d: IntMatrix::from_dense_shape(rows, cols, &e.a),
        v: IntMatrix::from_dense_shape(cols, cols, &e.v.unwrap()),
    }
}

fn dense_invariant_factors(rows: usize, cols: usize, a: Dense) -> Vec<BigInt> {
    let mut e = DenseElim {
        a,
        u: None,
        v: None,
        rows,
        cols,
    };
    e.run();
    (0..rows.min(cols))
        .map(|i| e.a[i][i].clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Row-wise sparse elimination state over unit pivots.
struct SparseElim {
    rows: Vec<BTreeMap<usize, BigInt>>,
    active: Vec<bool>,
    col_rows: Vec<BTreeSet<usize>>,
}

impl SparseElim {
    fn new(m: &IntMatrix) -> Self {
        let rows = m.clone().into_rows();
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        for (i, r) in rows.iter().enumerate() {
            for &j in r.keys() {
                col_rows[j].insert(i);
            }
        }
        SparseElim {
            active: vec![true; rows.len()],
            rows,
            col_rows,
        }
    }

    /// Cheapest unit pivot among active rows by Markowitz cost.
    fn find_unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in self.rows.iter().enumerate() {
            if !self.active[i] || r.is_empty() {
                continue;
            }
            for (&j, v) in r {
                if v.abs().is_one() {
                    let cost = (r.len() - 1) * (self.col_rows[j].len() - 1);
                    if best.is_none_or(|(_, _, c)| cost < c) {
                        best = Some((i, j, cost));
                        if cost == 0 {
                            return Some((i, j));
                        }
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Eliminates column `c` from every other active row using row `r`,
    /// applying the same operations to `rhs` when present. Deactivates `r`.
    fn pivot(&mut self, r: usize, c: usize, mut rhs: Option<&mut Vec<Vec<BigInt>>>) {
        self.active[r] = false;
        let prow = std::mem::take(&mut self.rows[r]);
        for &j in prow.keys() {
            self.col_rows[j].remove(&r);
        }
        let p = prow[&c].clone();
        let targets: Vec<usize> = self.col_rows[c].iter().copied().collect();
        for i in targets {
            // row_i -= (a_ic / p) * row_r, exact since p = ±1
            let q = &self.rows[i][&c] * &p;
            for (&j, v) in &prow {
                let e = self.rows[i].entry(j).or_default();
                *e -= &q * v;
                if e.is_zero() {
                    self.rows[i].remove(&j);
                    self.col_rows[j].remove(&i);
                } else {
                    self.col_rows[j].insert(i);
                }
            }
            if let Some(rhs) = rhs.as_deref_mut() {
                let (src, dst) = pair_mut(rhs, r, i);
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d -= &q * s;
                }
            }
        }
        self.rows[r] = prow;
    }

    /// Active rows and the columns they touch.
    fn residual(&self) -> (Vec<usize>, Vec<usize>) {
        let rows: Vec<usize> = (0..self.rows.len())
            .filter(|&i| self.active[i] && !self.rows[i].is_empty())
            .collect();
        let cols: BTreeSet<usize> = rows.iter().flat_map(|&i| self.rows[i].keys().copied()).collect();
        (rows, cols.into_iter().collect())
    }
}

/// Nonzero invariant factors of `m` in divisibility order.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (rows, cols) = m.shape();
    if m.is_zero() {
        return Vec::new();
    }
    if m.fill_ratio() > DENSIFY_FILL_RATIO {
        return dense_invariant_factors(rows, cols, m.to_dense());
    }
    let mut elim = SparseElim::new(m);
    let mut units = 0usize;
    while let Some((r, c)) = elim.find_unit_pivot() {
        elim.pivot(r, c, None);
        elim.rows[r].clear();
        units += 1;
    }
    let (rr, rc) = elim.residual();
    let dense: Dense = rr
        .iter()
        .map(|&i| {
            rc.iter()
                .map(|j| elim.rows[i].get(j).cloned().unwrap_or_default())
                .collect()
        })
        .collect();
    let mut out = vec![BigInt::one(); units];
    out.extend(dense_invariant_factors(rr.len(), rc.len(), dense));
    out
}

pub fn rank(m: &IntMatrix) -> usize {
    invariant_factors(m).len()
}

/// Solves `a * x = b` over the integers (`b` may have several columns).
/// Returns `None` when no integer solution exists.
pub fn solve(a: &IntMatrix, b: &IntMatrix) -> Result<Option<IntMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::ShapeMismatch(format!(
            "system matrix has {} rows but right-hand side has {}",
            a.rows(),
            b.rows()
        )));
    }
    let ncols_b = b.cols();
    let mut rhs: Vec<Vec<BigInt>> = b.to_dense();
    let mut elim = SparseElim::new(a);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    while let Some((r, c)) = elim.find_unit_pivot() {
        elim.pivot(r, c, Some(&mut rhs));
        pivots.push((r, c));
    }
    // residual system over active rows and non-pivot columns
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let res_rows: Vec<usize> = (0..a.rows()).filter(|&i| elim.active[i]).collect();
    let res_cols: Vec<usize> = (0..a.cols()).filter(|c| !pivot_cols.contains(c)).collect();
    let mut col_pos = vec![usize::MAX; a.cols()];
    for (k, &c) in res_cols.iter().enumerate() {
        col_pos[c] = k;
    }
    let res_a: Dense = res_rows
        .iter()
        .map(|&i| {
            let mut row = vec![BigInt::zero(); res_cols.len()];
            for (&j, v) in &elim.rows[i] {
                row[col_pos[j]] = v.clone();
            }
            row
        })
        .collect();
    let res_b: Dense = res_rows.iter().map(|&i| rhs[i].clone()).collect();
    let Some(y) = dense_solve(res_rows.len(), res_cols.len(), res_a, res_b, ncols_b) else {
        return Ok(None);
    };
    let mut x: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols_b]; a.cols()];
    for (k, &c) in res_cols.iter().enumerate() {
        x[c] = y[k].clone();
    }
    for &(r, c) in pivots.iter().rev() {
        let row = &elim.rows[r];
        let p = &row[&c];
        for k in 0..ncols_b {
            let mut acc = rhs[r][k].clone();
            for (&j, v) in row {
                if j != c {
                    acc -= v * &x[j][k];
                }
            }
            // p = ±1
            x[c][k] = acc * p;
        }
    }
    Ok(Some(IntMatrix::from_dense_shape(a.cols(), ncols_b, &x)))
}

/// Dense solve through the reference SNF: `D y' = U b`, `x = V y'`.
fn dense_solve(rows: usize, cols: usize, a: Dense, b: Dense, nb: usize) -> Option<Dense> {
    let sf = smith_normal_form(&IntMatrix::from_dense_shape(rows, cols, &a));
    let ub =
        sf.u.mul(&IntMatrix::from_dense_shape(rows, nb, &b))
            .expect("shapes agree")
            .to_dense();
    let diag = sf.d.diagonal();
    let mut y = vec![vec![BigInt::zero(); nb]; cols];
    for (i, ubi) in ub.iter().enumerate() {
        let d = diag.get(i).cloned().unwrap_or_default();
        for k in 0..nb {
            if d.is_zero() {
                if !ubi[k].is_zero() {
                    return None;
                }
            } else {
                let (q, r) = ubi[k].div_rem(&d);
                if !r.is_zero() {
                    return None;
                }
                y[i][k] = q;
            }
        }
    }
    Some(
        sf.v.mul(&IntMatrix::from_dense_shape(cols, nb, &y))
            .expect("shapes agree")
            .to_dense(),
    )
}

/// A Z-basis of `{x : m x = 0}`, as the columns of the returned matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let sf = smith_normal_form(m);
    let r = sf.rank();
    let keep: Vec<usize> = (r..m.cols()).collect();
    let all_rows: Vec<usize> = (0..m.cols()).collect();
    sf.v.submatrix(&all_rows, &keep)
}

/// The cokernel of `m: Z^cols -> Z^rows` together with the projection onto
/// canonical coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    u: IntMatrix,
    /// Diagonal entry per target coordinate (0 for free coordinates).
    moduli: Vec<BigInt>,
}

impl Cokernel {
    pub fn new(m: &IntMatrix) -> Self {
        let sf = smith_normal_form(m);
        let diag = sf.d.diagonal();
        let moduli = (0..m.rows())
            .map(|i| diag.get(i).cloned().unwrap_or_default())
            .collect();
        Cokernel { u: sf.u, moduli }
    }

    pub fn group(&self) -> super::group::FgAbGroup {
        let rank = self.moduli.iter().filter(|d| d.is_zero()).count();
        let torsion: Vec<BigInt> = self
            .moduli
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        super::group::FgAbGroup::new(rank, torsion).expect("smith diagonal is a divisibility chain")
    }

    /// Coordinates of the class of `y`: torsion coordinates reduced into
    /// `[0, d)` first, then free coordinates. Unit summands are dropped.
    pub fn project(&self, y: &[BigInt]) -> Vec<BigInt> {
        let uy = self.u.mul_vec(y);
        let mut torsion = Vec::new();
        let mut free = Vec::new();
        for (x, d) in uy.into_iter().zip(&self.moduli) {
            if d.is_zero() {
                free.push(x);
            } else if !d.is_one() {
                torsion.push(x.mod_floor(d));
            }
        }
        torsion.extend(free);
        torsion
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn certify(a: &IntMatrix, sf: &SmithForm) {
        assert_eq!(sf.u.mul(a).unwrap().mul(&sf.v).unwrap(), sf.d);
        assert!(sf.u.is_unimodular());
        assert!(sf.v.is_unimodular());
        assert!(sf.d.is_diagonal());
        let diag = sf.d.diagonal();
        assert!(diag.iter().all(|x| !x.is_negative()));
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::identity(3);
        let sf = smith_normal_form(&id);
        assert_eq!(sf.d, id);
        assert_eq!(sf.u, id);
        assert_eq!(sf.v, id);

        let z = IntMatrix::zeros(2, 4);
        let sf = smith_normal_form(&z);
        assert_eq!(sf.d, z);
        assert_eq!(sf.u, IntMatrix::identity(2));
        assert_eq!(sf.v, IntMatrix::identity(4));
    }

    #[test]
    fn two_by_two_example() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let sf = smith_normal_form(&a);
        certify(&a, &sf);
        assert_eq!(sf.d, m(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn degenerate_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let z = IntMatrix::zeros(r, c);
            certify(&z, &smith_normal_form(&z));
            assert!(invariant_factors(&z).is_empty());
        }
    }

    #[test]
    fn divisibility_fix_up() {
        // diag(2, 3) must become diag(1, 6)
        let a = m(&[&[2, 0], &[0, 3]]);
        let sf = smith_normal_form(&a);
        certify(&a, &sf);
        assert_eq!(sf.d, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(invariant_factors(&a), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(1..9);
            let c = rng.gen_range(1..9);
            let dense: Vec<Vec<i64>> = (0..r)
                .map(|_| {
                    (0..c)
                        .map(|_| if rng.gen_bool(0.3) { rng.gen_range(-3..=3) } else { 0 })
                        .collect()
                })
                .collect();
            let a = IntMatrix::from_dense(&dense).unwrap();
            let reference = smith_normal_form(&a).invariant_factors();
            assert_eq!(invariant_factors(&a), reference);
            let mut sparse = SparseElim::new(&a);
            let mut units = 0;
            while let Some((r, c)) = sparse.find_unit_pivot() {
                sparse.pivot(r, c, None);
                sparse.rows[r].clear();
                units += 1;
            }
            assert!(units <= reference.len());
        }
    }

    #[test]
    fn solve_finds_integer_solutions() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let b = m(&[&[2], &[2]]);
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        // 2x = 1 has no integer solution
        assert!(solve(&m(&[&[2]]), &m(&[&[1]])).unwrap().is_none());
        // mixed unit pivots and residual block
        let a = m(&[&[1, 1, 0], &[0, 2, 2], &[1, 3, 2]]);
        let b = m(&[&[1, 0], &[4, 2], &[5, 2]]);
        let x = solve(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
    }

    #[test]
    fn kernel_and_cokernel() {
        let a = m(&[&[1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.shape(), (3, 2));
        assert!(a.mul(&k).unwrap().is_zero());

        let c = Cokernel::new(&m(&[&[2, 0], &[0, 0]]));
        assert_eq!(c.group().to_string(), "Z ⊕ Z/2");
        assert_eq!(
            c.project(&[BigInt::from(3), BigInt::from(5)]),
            vec![BigInt::from(1), BigInt::from(5)]
        );
    }
}
