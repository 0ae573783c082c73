//! Finite simplicial models of tori.
//!
//! The circle is the boundary of a triangle on the ordered vertices
//! `0 < 1 < 2`. A product of ordered simplicial complexes is triangulated by
//! staircase chains: strictly increasing chains of vertex tuples in the
//! product order whose projection to each factor spans a simplex.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{ChainComplex, FgAbGroup, IntMatrix};

const CIRCLE_VERTICES: usize = 3;

fn circle_simplex(values: &[usize]) -> bool {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len() <= 2
}

/// Simplices of the staircase triangulation of `(S^1)^m` by dimension, each a
/// chain of vertex tuples.
pub fn torus_simplices(m: usize) -> Vec<Vec<Vec<Vec<usize>>>> {
    let vertices: Vec<Vec<usize>> = (0..CIRCLE_VERTICES.pow(m as u32))
        .map(|mut x| {
            (0..m)
                .map(|_| {
                    let d = x % CIRCLE_VERTICES;
                    x /= CIRCLE_VERTICES;
                    d
                })
                .collect()
        })
        .collect();
    let mut by_dim: Vec<Vec<Vec<Vec<usize>>>> = vec![vertices.iter().map(|v| vec![v.clone()]).collect()];
    loop {
        let mut next = Vec::new();
        for chain in by_dim.last().expect("dimension 0 present") {
            let last = chain.last().expect("chains are nonempty");
            for v in &vertices {
                let above = v.iter().zip(last).all(|(a, b)| a >= b) && v != last;
                if !above {
                    continue;
                }
                let spans = (0..m).all(|f| {
                    let mut vals: Vec<usize> = chain.iter().map(|w| w[f]).collect();
                    vals.push(v[f]);
                    circle_simplex(&vals)
                });
                if spans {
                    let mut c = chain.clone();
                    c.push(v.clone());
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        by_dim.push(next);
    }
    by_dim
}

/// Simplicial cochain complex of the torus model `(S^1)^m`.
pub fn torus_cochains(m: usize) -> ChainComplex {
    let simplices = torus_simplices(m);
    let index: Vec<HashMap<&Vec<Vec<usize>>, usize>> = simplices
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();
    let coboundaries = (1..simplices.len())
        .map(|k| {
            let entries = simplices[k].iter().enumerate().flat_map(|(row, s)| {
                let index = &index[k - 1];
                (0..s.len()).map(move |i| {
                    let mut face = s.clone();
                    face.remove(i);
                    (row, index[&face], BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
                })
            });
            let m = IntMatrix::from_triplets(simplices[k].len(), simplices[k - 1].len(), entries)
                .expect("faces are distinct simplices");
            (k as i64 - 1, m)
        })
        .collect();
    ChainComplex::from_cochains(0, simplices.iter().map(Vec::len).collect(), coboundaries)
        .expect("simplicial coboundary squares to zero")
}

/// `H^i` of the `|J|`-fold torus.
pub fn torus_cohomology(factors: usize, i: usize, bound: usize) -> Result<FgAbGroup> {
    if factors > bound {
        return Err(Error::Refused(format!(
            "{factors} torus factors exceed the configured bound {bound}"
        )));
    }
    let c = torus_cochains(factors);
    if i >= c.ranks().len() {
        return Ok(FgAbGroup::trivial());
    }
    c.cohomology(i as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_model() {
        let s = torus_simplices(1);
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![3, 3]);
        assert_eq!(torus_cohomology(1, 0, 3).unwrap(), FgAbGroup::free(1));
        assert_eq!(torus_cohomology(1, 1, 3).unwrap(), FgAbGroup::free(1));
        assert!(torus_cohomology(1, 2, 3).unwrap().is_trivial());
    }

    #[test]
    fn two_torus() {
        // 9 vertices, 27 edges, 18 triangles
        let s = torus_simplices(2);
        assert_eq!(s.iter().map(Vec::len).collect::<Vec<_>>(), vec![9, 27, 18]);
        assert_eq!(torus_cohomology(2, 2, 3).unwrap(), FgAbGroup::free(1));
        assert_eq!(torus_cohomology(2, 1, 3).unwrap(), FgAbGroup::free(2));
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(torus_cohomology(4, 0, 3), Err(Error::Refused(_))));
    }
}
