//! Iterated bar constructions `B^n P` for finite abelian groups and windowed
//! lattices.
//!
//! A simplex of `B^n P` in multidegree `(i_1, …, i_n)` is an `i_1 × … × i_n`
//! array over `P`. Along each axis the structure maps are those of the bar
//! construction on slices:
//!
//! * `d_0` drops the first slice, `d_k` drops the last one,
//! * `d_l` for `0 < l < k` replaces slices `l-1` and `l` by their sum,
//! * `s_l` inserts a zero slice at position `l`.
//!
//! The total complex uses `∂ = Σ_j (-1)^{i_1+…+i_{j-1}} Σ_l (-1)^l d^{(j)}_l`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{ChainComplex, FgAbGroup, FinAbGroup, IntMatrix};

/// The abelian group `P` fed into the bar construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficients {
    Finite(FinAbGroup),
    /// `Z^rank`, with simplices restricted to entries in `[-window, window]`.
    Lattice {
        rank: usize,
        window: u32,
    },
}

impl Coefficients {
    /// Number of integer coordinates per group element.
    pub fn width(&self) -> usize {
        match self {
            Coefficients::Finite(g) => g.orders().len(),
            Coefficients::Lattice { rank, .. } => *rank,
        }
    }

    fn add_into(&self, acc: &mut [i64], x: &[i64]) {
        match self {
            Coefficients::Finite(g) => {
                for ((a, b), &n) in acc.iter_mut().zip(x).zip(g.orders()) {
                    *a = (*a + b).rem_euclid(n as i64);
                }
            }
            Coefficients::Lattice { .. } => {
                for (a, b) in acc.iter_mut().zip(x) {
                    *a += b;
                }
            }
        }
    }

    /// All elements in a fixed order (the window for lattices).
    fn elements(&self) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> = match self {
            Coefficients::Finite(g) => g.orders().iter().map(|&n| (0, n as i64 - 1)).collect(),
            Coefficients::Lattice { rank, window } => vec![(-(*window as i64), *window as i64); *rank],
        };
        let mut out = vec![vec![]];
        for (lo, hi) in ranges {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (lo..=hi).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// The group itself in canonical form.
    pub fn group(&self) -> FgAbGroup {
        match self {
            Coefficients::Finite(g) => g.canonical(),
            Coefficients::Lattice { rank, .. } => FgAbGroup::free(*rank),
        }
    }

    fn with_window(&self, window: u32) -> Coefficients {
        match self {
            Coefficients::Finite(_) => self.clone(),
            Coefficients::Lattice { rank, .. } => Coefficients::Lattice { rank: *rank, window },
        }
    }
}

/// An `n`-dimensional array over `P`, flattened row-major with the group
/// coordinates innermost.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    shape: Vec<usize>,
    entries: Vec<i64>,
}

impl Simplex {
    pub fn new(shape: Vec<usize>, entries: Vec<i64>, width: usize) -> Result<Self> {
        if entries.len() != shape.iter().product::<usize>() * width {
            return Err(Error::ShapeMismatch("simplex entries do not fill its shape".into()));
        }
        Ok(Simplex { shape, entries })
    }

    /// The basepoint in multidegree `(0, …, 0)`.
    pub fn point(n: usize) -> Self {
        Simplex {
            shape: vec![0; n],
            entries: vec![],
        }
    }

    pub fn multidegree(&self) -> &[usize] {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.iter().sum()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// `(outer, slices, inner)` block sizes along `axis`, `inner` counted in
    /// integer coordinates.
    fn blocks(&self, axis: usize, width: usize) -> (usize, usize, usize) {
        let outer = self.shape[..axis].iter().product();
        let inner = self.shape[axis + 1..].iter().product::<usize>() * width;
        (outer, self.shape[axis], inner)
    }

    fn slice(&self, o: usize, t: usize, blocks: (usize, usize, usize)) -> &[i64] {
        let (_, k, inner) = blocks;
        let start = (o * k + t) * inner;
        &self.entries[start..start + inner]
    }

    /// Face `d_l` along `axis`.
    pub fn face(&self, axis: usize, l: usize, p: &Coefficients) -> Simplex {
        let b = self.blocks(axis, p.width());
        let (outer, k, inner) = b;
        assert!(k >= 1 && l <= k, "face d_{l} undefined on {k} slices");
        let mut shape = self.shape.clone();
        shape[axis] = k - 1;
        let mut entries = Vec::with_capacity(outer * (k - 1) * inner);
        for o in 0..outer {
            for u in 0..k - 1 {
                if l == 0 {
                    entries.extend_from_slice(self.slice(o, u + 1, b));
                } else if l == k || u < l - 1 {
                    entries.extend_from_slice(self.slice(o, u, b));
                } else if u == l - 1 {
                    let mut acc = self.slice(o, u, b).to_vec();
                    let next = self.slice(o, u + 1, b);
                    for (a, x) in acc.chunks_mut(p.width().max(1)).zip(next.chunks(p.width().max(1))) {
                        p.add_into(a, x);
                    }
                    entries.extend(acc);
                } else {
                    entries.extend_from_slice(self.slice(o, u + 1, b));
                }
            }
        }
        Simplex { shape, entries }
    }

    /// Degeneracy `s_l` along `axis`.
    pub fn degeneracy(&self, axis: usize, l: usize, p: &Coefficients) -> Simplex {
        let b = self.blocks(axis, p.width());
        let (outer, k, inner) = b;
        assert!(l <= k, "degeneracy s_{l} undefined on {k} slices");
        let mut shape = self.shape.clone();
        shape[axis] = k + 1;
        let mut entries = Vec::with_capacity(outer * (k + 1) * inner);
        for o in 0..outer {
            for u in 0..=k {
                match u.cmp(&l) {
                    std::cmp::Ordering::Less => entries.extend_from_slice(self.slice(o, u, b)),
                    std::cmp::Ordering::Equal => entries.extend(std::iter::repeat_n(0, inner)),
                    std::cmp::Ordering::Greater => entries.extend_from_slice(self.slice(o, u - 1, b)),
                }
            }
        }
        Simplex { shape, entries }
    }

    /// Some axis-slice is identically zero, i.e. the simplex lies in the image
    /// of a degeneracy. Only the basepoint of multidegree zero escapes.
    pub fn is_degenerate(&self, width: usize) -> bool {
        (0..self.shape.len()).any(|axis| {
            let b = self.blocks(axis, width);
            let (outer, k, _) = b;
            (0..k).any(|t| (0..outer).all(|o| self.slice(o, t, b).iter().all(|&x| x == 0)))
        })
    }

    fn max_abs(&self) -> i64 {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

/// Signed faces of `x` under the total differential.
fn boundary_terms(x: &Simplex, p: &Coefficients) -> Vec<(i64, Simplex)> {
    let mut terms = Vec::new();
    let mut offset = 0usize;
    for (axis, &k) in x.shape.iter().enumerate() {
        if k > 0 {
            for l in 0..=k {
                let sign = if (offset + l).is_multiple_of(2) { 1 } else { -1 };
                terms.push((sign, x.face(axis, l, p)));
            }
        }
        offset += k;
    }
    terms
}

/// Multidegrees of total degree `deg` in `n` directions, lexicographic.
pub fn multidegrees(n: usize, deg: usize, min_entry: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    let rest_min = min_entry * (n - 1);
    if deg < rest_min {
        return out;
    }
    for first in min_entry..=deg - rest_min {
        for mut tail in multidegrees(n - 1, deg - first, min_entry) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// All arrays of the given shape with entries from `elements`.
fn arrays(shape: &[usize], elements: &[Vec<i64>], keep: impl Fn(&Simplex) -> bool) -> Vec<Simplex> {
    let cells: usize = shape.iter().product();
    let mut out = Vec::new();
    let mut idx = vec![0usize; cells];
    if elements.is_empty() {
        return out;
    }
    loop {
        let entries: Vec<i64> = idx.iter().flat_map(|&i| elements[i].iter().copied()).collect();
        let s = Simplex {
            shape: shape.to_vec(),
            entries,
        };
        if keep(&s) {
            out.push(s);
        }
        let mut pos = cells;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// A chain complex together with its simplicial basis and degeneracy tags.
#[derive(Clone, Debug)]
pub struct TaggedComplex {
    pub complex: ChainComplex,
    pub bases: Vec<Vec<Simplex>>,
    /// Per degree and basis element: does the simplex lie in the image of a
    /// degeneracy. `None` when the data was not recorded.
    pub degenerate: Option<Vec<Vec<bool>>>,
}

fn assemble(bases: Vec<Vec<Simplex>>, p: &Coefficients, normalized: bool) -> Result<ChainComplex> {
    let index: Vec<HashMap<&Simplex, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let mut diffs = Vec::new();
    for deg in 1..bases.len() {
        let mut triplets: HashMap<(usize, usize), i64> = HashMap::new();
        for (col, x) in bases[deg].iter().enumerate() {
            for (sign, y) in boundary_terms(x, p) {
                match index[deg - 1].get(&y) {
                    Some(&row) => *triplets.entry((row, col)).or_insert(0) += sign,
                    None if normalized && y.is_degenerate(p.width()) => {}
                    None => {
                        return Err(Error::WindowUnderflow(format!(
                            "a face of a degree-{deg} simplex is missing from the generated basis"
                        )))
                    }
                }
            }
        }
        let m = IntMatrix::from_triplets(
            bases[deg - 1].len(),
            bases[deg].len(),
            triplets
                .into_iter()
                .filter(|(_, v)| *v != 0)
                .map(|((r, c), v)| (r, c, BigInt::from(v))),
        )?;
        diffs.push((deg as i64, m));
    }
    ChainComplex::new(0, bases.iter().map(Vec::len).collect(), diffs)
}

/// Face/degeneracy closure of `seeds` through degree `top`.
fn closure(seeds: Vec<Simplex>, p: &Coefficients, top: usize, with_degeneracies: bool) -> Vec<BTreeSet<Simplex>> {
    let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); top + 1];
    let mut stack = seeds;
    while let Some(x) = stack.pop() {
        let deg = x.degree();
        if deg > top || !levels[deg].insert(x.clone()) {
            continue;
        }
        for (axis, &k) in x.shape.iter().enumerate() {
            if k > 0 {
                for l in 0..=k {
                    stack.push(x.face(axis, l, p));
                }
            }
            if with_degeneracies && deg < top {
                for l in 0..=k {
                    stack.push(x.degeneracy(axis, l, p));
                }
            }
        }
    }
    levels
}

/// The chain complex `Z[B^n P]` through degree `cap + 1`, on the full
/// (unnormalized) simplicial basis, tagged with degeneracy data.
pub fn bar_complex(p: &Coefficients, n: usize, cap: usize) -> Result<TaggedComplex> {
    if n == 0 {
        return Err(Error::Structural("bar construction needs n >= 1".into()));
    }
    let top = cap + 1;
    let bases: Vec<Vec<Simplex>> = match p {
        Coefficients::Finite(_) => {
            let elements = p.elements();
            (0..=top)
                .map(|deg| {
                    multidegrees(n, deg, 0)
                        .iter()
                        .flat_map(|md| arrays(md, &elements, |_| true))
                        .collect()
                })
                .collect()
        }
        Coefficients::Lattice { window, .. } => {
            if *window == 0 {
                return Err(Error::WindowUnderflow("lattice window must be at least 1".into()));
            }
            let elements = p.elements();
            let seeds = (0..=top)
                .flat_map(|deg| multidegrees(n, deg, 0))
                .flat_map(|md| arrays(&md, &elements, |_| true))
                .collect();
            closure(seeds, p, top, true)
                .into_iter()
                .map(|l| l.into_iter().collect())
                .collect()
        }
    };
    let degenerate = bases
        .iter()
        .map(|b| b.iter().map(|s| s.is_degenerate(p.width())).collect())
        .collect();
    let complex = assemble(bases.clone(), p, false)?;
    Ok(TaggedComplex {
        complex,
        bases,
        degenerate: Some(degenerate),
    })
}

/// Quotient by the subcomplex spanned by degenerate simplices.
pub fn normalized_chains(c: &TaggedComplex) -> Result<TaggedComplex> {
    let tags = c
        .degenerate
        .as_ref()
        .ok_or_else(|| Error::Structural("complex carries no degeneracy tags".into()))?;
    let lo = c.complex.lo();
    if tags.len() != c.complex.ranks().len() || tags.iter().zip(c.complex.ranks()).any(|(t, r)| t.len() != *r) {
        return Err(Error::Structural("degeneracy tags do not match the basis".into()));
    }
    let keep: Vec<Vec<usize>> = tags
        .iter()
        .map(|t| t.iter().enumerate().filter(|(_, d)| !**d).map(|(i, _)| i).collect())
        .collect();
    let ranks = keep.iter().map(Vec::len).collect();
    let diffs = (1..keep.len())
        .map(|k| {
            let deg = lo + k as i64;
            (deg, c.complex.differential(deg).submatrix(&keep[k - 1], &keep[k]))
        })
        .collect();
    let complex = ChainComplex::new(lo, ranks, diffs)
        .map_err(|_| Error::Structural("degenerate simplices do not span a subcomplex".into()))?;
    let bases = if c.bases.len() == keep.len() {
        c.bases
            .iter()
            .zip(&keep)
            .map(|(b, k)| k.iter().map(|&i| b[i].clone()).collect())
            .collect()
    } else {
        vec![]
    };
    Ok(TaggedComplex {
        complex,
        degenerate: Some(keep.iter().map(|k| vec![false; k.len()]).collect()),
        bases,
    })
}

/// The normalized chains of `B^n P` through degree `cap + 1`, generated
/// directly on nondegenerate simplices.
pub fn normalized_bar_complex(p: &Coefficients, n: usize, cap: usize) -> Result<TaggedComplex> {
    if n == 0 {
        return Err(Error::Structural("bar construction needs n >= 1".into()));
    }
    let top = cap + 1;
    let w = p.width();
    let bases: Vec<Vec<Simplex>> = match p {
        Coefficients::Finite(_) => {
            let nonzero: Vec<Vec<i64>> = p.elements().into_iter().filter(|e| e.iter().any(|&x| x != 0)).collect();
            let all = p.elements();
            (0..=top)
                .map(|deg| {
                    if deg == 0 {
                        return vec![Simplex::point(n)];
                    }
                    multidegrees(n, deg, 1)
                        .iter()
                        .flat_map(|md| {
                            // with a single axis every entry is a slice
                            let pool = if n == 1 { &nonzero } else { &all };
                            arrays(md, pool, |s| !s.is_degenerate(w))
                        })
                        .collect()
                })
                .collect()
        }
        Coefficients::Lattice { window, .. } => {
            if *window == 0 {
                return Err(Error::WindowUnderflow("lattice window must be at least 1".into()));
            }
            let elements = p.elements();
            let mut seeds = vec![Simplex::point(n)];
            for deg in 1..=top {
                for md in multidegrees(n, deg, 1) {
                    seeds.extend(arrays(&md, &elements, |s| !s.is_degenerate(w)));
                }
            }
            closure(seeds, p, top, false)
                .into_iter()
                .map(|l| l.into_iter().filter(|s| !s.is_degenerate(w)).collect())
                .collect()
        }
    };
    let complex = assemble(bases.clone(), p, true)?;
    Ok(TaggedComplex {
        complex,
        degenerate: Some(bases.iter().map(|b| vec![false; b.len()]).collect()),
        bases,
    })
}

/// Eilenberg–MacLane homology `H_i(Z[B^n P])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmHomology {
    pub group: FgAbGroup,
    /// Window at which the value was accepted (lattices only).
    pub window: Option<u32>,
    /// Whether the value agreed at windows `m` and `m + 1`. Always true for
    /// finite groups.
    pub stable: bool,
    /// Largest absolute entry among the materialized simplices.
    pub max_entry: i64,
}

impl EmHomology {
    pub fn accepted(&self) -> Result<&FgAbGroup> {
        if self.stable {
            Ok(&self.group)
        } else {
            Err(Error::Unstable(format!(
                "homology changed between windows {} and {}",
                self.window.unwrap_or(0),
                self.window.unwrap_or(0) + 1
            )))
        }
    }
}

pub fn em_homology(p: &Coefficients, n: usize, i: usize) -> Result<EmHomology> {
    let at = |q: &Coefficients| -> Result<(FgAbGroup, i64)> {
        let c = normalized_bar_complex(q, n, i)?;
        let max_entry = c.bases.iter().flatten().map(Simplex::max_abs).max().unwrap_or(0);
        Ok((c.complex.homology(i as i64)?, max_entry))
    };
    match p {
        Coefficients::Finite(_) => {
            let (group, max_entry) = at(p)?;
            Ok(EmHomology {
                group,
                window: None,
                stable: true,
                max_entry,
            })
        }
        Coefficients::Lattice { window, .. } => {
            if *window == 0 {
                return Err(Error::WindowUnderflow("lattice window must be at least 1".into()));
            }
            let (g0, _) = at(p)?;
            let (g1, max_entry) = at(&p.with_window(window + 1))?;
            Ok(EmHomology {
                stable: g0 == g1,
                group: g1,
                window: Some(*window),
                max_entry,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zn(n: u64) -> Coefficients {
        Coefficients::Finite(FinAbGroup::cyclic(n).unwrap())
    }

    fn all_simplices(p: &Coefficients, n: usize, deg: usize) -> Vec<Simplex> {
        multidegrees(n, deg, 0)
            .iter()
            .flat_map(|md| arrays(md, &p.elements(), |_| true))
            .collect()
    }

    #[test]
    fn simplicial_identities_hold_exhaustively() {
        let p = Coefficients::Finite(FinAbGroup::new(vec![2, 3]).unwrap());
        for n in 1..=2 {
            for deg in 0..=3 {
                for x in all_simplices(&p, n, deg) {
                    for axis in 0..n {
                        let k = x.shape[axis];
                        for j in 0..=k {
                            let s = x.degeneracy(axis, j, &p);
                            assert_eq!(s.face(axis, j, &p), x);
                            assert_eq!(s.face(axis, j + 1, &p), x);
                            for i in 0..=k + 1 {
                                if i < j {
                                    assert_eq!(s.face(axis, i, &p), x.face(axis, i, &p).degeneracy(axis, j - 1, &p));
                                } else if i > j + 1 {
                                    assert_eq!(s.face(axis, i, &p), x.face(axis, i - 1, &p).degeneracy(axis, j, &p));
                                }
                            }
                            for i in 0..=j {
                                assert_eq!(
                                    s.degeneracy(axis, i, &p),
                                    x.degeneracy(axis, i, &p).degeneracy(axis, j + 1, &p)
                                );
                            }
                        }
                        if k >= 2 {
                            for j in 0..=k {
                                for i in 0..j {
                                    assert_eq!(
                                        x.face(axis, j, &p).face(axis, i, &p),
                                        x.face(axis, i, &p).face(axis, j - 1, &p)
                                    );
                                }
                            }
                        }
                    }
                    if n == 2 && x.shape[0] > 0 && x.shape[1] > 0 {
                        // faces in different directions commute
                        for a in 0..=x.shape[0] {
                            for b in 0..=x.shape[1] {
                                assert_eq!(x.face(0, a, &p).face(1, b, &p), x.face(1, b, &p).face(0, a, &p));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn level_ranks_of_bz2() {
        let c = bar_complex(&zn(2), 1, 3).unwrap();
        assert_eq!(c.complex.ranks(), &[1, 2, 4, 8, 16]);
    }

    #[test]
    fn bz2_low_homology() {
        let c = bar_complex(&zn(2), 1, 3).unwrap();
        assert_eq!(c.complex.homology(0).unwrap(), FgAbGroup::free(1));
        assert_eq!(c.complex.homology(1).unwrap(), FgAbGroup::cyclic(2));
    }

    #[test]
    fn faces_follow_the_bar_formula() {
        let p = zn(5);
        let x = Simplex::new(vec![3], vec![1, 2, 4], 1).unwrap();
        assert_eq!(x.face(0, 0, &p).entries(), &[2, 4]);
        assert_eq!(x.face(0, 1, &p).entries(), &[3, 4]);
        assert_eq!(x.face(0, 2, &p).entries(), &[1, 1]);
        assert_eq!(x.face(0, 3, &p).entries(), &[1, 2]);
        assert_eq!(x.degeneracy(0, 1, &p).entries(), &[1, 0, 2, 4]);
    }

    #[test]
    fn normalized_bz2_ranks_are_one() {
        let c = normalized_chains(&bar_complex(&zn(2), 1, 3).unwrap()).unwrap();
        assert_eq!(c.complex.ranks(), &[1, 1, 1, 1, 1]);
        assert_eq!(c.bases[3][0].entries(), &[1, 1, 1]);
    }

    #[test]
    fn normalization_preserves_homology() {
        let full = bar_complex(&zn(3), 1, 3).unwrap();
        let norm = normalized_chains(&full).unwrap();
        let direct = normalized_bar_complex(&zn(3), 1, 3).unwrap();
        for i in 0..=3 {
            let h = full.complex.homology(i).unwrap();
            assert_eq!(norm.complex.homology(i).unwrap(), h);
            assert_eq!(direct.complex.homology(i).unwrap(), h);
        }
        let full2 = bar_complex(&zn(2), 2, 2).unwrap();
        let norm2 = normalized_chains(&full2).unwrap();
        for i in 0..=2 {
            assert_eq!(norm2.complex.homology(i).unwrap(), full2.complex.homology(i).unwrap());
        }
    }

    #[test]
    fn normalizing_a_nondegenerate_complex_is_the_identity() {
        let c = normalized_bar_complex(&zn(3), 1, 2).unwrap();
        let again = normalized_chains(&c).unwrap();
        assert_eq!(again.complex, c.complex);
    }

    #[test]
    fn missing_tags_are_a_structural_error() {
        let mut c = bar_complex(&zn(2), 1, 1).unwrap();
        c.degenerate = None;
        assert!(matches!(normalized_chains(&c), Err(Error::Structural(_))));
    }

    #[test]
    fn b2_z3_is_empty_below_degree_two() {
        let c = normalized_bar_complex(&zn(3), 2, 2).unwrap();
        assert_eq!(&c.complex.ranks()[..2], &[1, 0]);
        assert_eq!(c.complex.ranks()[2], 2);
    }

    #[test]
    fn em_values() {
        let h = |p: &Coefficients, n, i| em_homology(p, n, i).unwrap().accepted().unwrap().clone();
        assert!(h(&zn(2), 2, 1).is_trivial());
        assert_eq!(h(&zn(2), 2, 2), FgAbGroup::cyclic(2));
        let z = Coefficients::Lattice { rank: 1, window: 2 };
        assert_eq!(h(&z, 1, 1), FgAbGroup::free(1));
        assert!(h(&z, 2, 3).is_trivial());
    }

    #[test]
    fn zero_window_underflows() {
        let z = Coefficients::Lattice { rank: 1, window: 0 };
        assert!(matches!(em_homology(&z, 1, 1), Err(Error::WindowUnderflow(_))));
    }
}
