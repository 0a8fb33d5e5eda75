//! Dense linear algebra over `F_p`, plus fraction-free rank over a
//! Laurent-polynomial domain.

use std::collections::{BTreeMap, BTreeSet};

use crate::char_p::Prime;
use crate::series::poly::Poly;

/// Row-reduce in place; returns the pivot columns.
pub fn rref(p: Prime, m: &mut [Vec<u32>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = p.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = p.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in c..cols {
                    let v = p.mul(f, m[r][k]);
                    m[i][k] = p.sub(m[i][k], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(p: Prime, m: &[Vec<u32>]) -> usize {
    let mut a = m.to_vec();
    rref(p, &mut a).len()
}

/// Basis of `{x : M x = 0}` for `M` with `cols` columns.
pub fn nullspace(p: Prime, m: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = m.to_vec();
    let pivots = rref(p, &mut a);
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivot_set.contains(c)) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = p.neg(a[r][free]);
        }
        out.push(v);
    }
    out
}

/// One solution of `M x = b`, if any.
pub fn solve(p: Prime, m: &[Vec<u32>], b: &[u32]) -> Option<Vec<u32>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<u32>> =
        m.iter().zip(b).map(|(row, &bi)| row.iter().copied().chain([bi]).collect()).collect();
    let pivots = rref(p, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u32; cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols];
    }
    Some(x)
}

/// Dense matrix whose columns are the given sparse vectors.
pub fn columns_to_dense<K: Ord + Clone>(vectors: &[BTreeMap<K, u32>]) -> Vec<Vec<u32>> {
    let keys: BTreeSet<K> = vectors.iter().flat_map(|v| v.keys().cloned()).collect();
    keys.iter()
        .map(|k| vectors.iter().map(|v| v.get(k).copied().unwrap_or(0)).collect())
        .collect()
}

/// Linear relations among sparse vectors: basis of `{c : sum c_i v_i = 0}`.
pub fn relations<K: Ord + Clone>(p: Prime, vectors: &[BTreeMap<K, u32>]) -> Vec<Vec<u32>> {
    nullspace(p, &columns_to_dense(vectors), vectors.len())
}

pub fn sparse_rank<K: Ord + Clone>(p: Prime, vectors: &[BTreeMap<K, u32>]) -> usize {
    vectors.len() - relations(p, vectors).len()
}

/// `sum c_i v_i` for sparse vectors.
pub fn combine<K: Ord + Clone>(p: Prime, coeffs: &[u32], vectors: &[BTreeMap<K, u32>]) -> BTreeMap<K, u32> {
    let mut out: BTreeMap<K, u32> = BTreeMap::new();
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c == 0 {
            continue;
        }
        for (k, &x) in v {
            let e = out.entry(k.clone()).or_insert(0);
            *e = p.add(*e, p.mul(c, x));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Restrict a subspace (rows are coordinate vectors over an ansatz) to the
/// kernel of one more linear map, given by the images of the ansatz vectors.
pub fn refine_kernel<K: Ord + Clone>(
    p: Prime,
    basis: &[Vec<u32>],
    ansatz_images: &[BTreeMap<K, u32>],
) -> Vec<Vec<u32>> {
    if basis.is_empty() {
        return Vec::new();
    }
    let images: Vec<BTreeMap<K, u32>> =
        basis.iter().map(|b| combine(p, b, ansatz_images)).collect();
    if images.iter().all(|v| v.is_empty()) {
        return basis.to_vec();
    }
    let rel = relations(p, &images);
    let dim = basis[0].len();
    rel.iter()
        .map(|c| {
            let mut v = vec![0u32; dim];
            for (&ci, b) in c.iter().zip(basis) {
                if ci != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = p.add(*x, p.mul(ci, y));
                    }
                }
            }
            v
        })
        .collect()
}

/// Identity basis of an `n`-dimensional ansatz.
pub fn identity_basis(n: usize) -> Vec<Vec<u32>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// Rank of vectors with Laurent-polynomial entries over the fraction field,
/// by fraction-free elimination.
pub fn poly_rank<K: Ord + Clone>(vectors: &[BTreeMap<K, Poly>]) -> usize {
    let mut rows: Vec<BTreeMap<K, Poly>> = vectors
        .iter()
        .map(|v| v.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), c.clone())).collect())
        .collect();
    let mut rank = 0;
    while let Some(idx) = rows.iter().position(|r| !r.is_empty()) {
        let piv_row = rows.swap_remove(idx);
        let (key, piv) = piv_row.iter().next().map(|(k, c)| (k.clone(), c.clone())).unwrap();
        rank += 1;
        for row in rows.iter_mut() {
            let Some(f) = row.get(&key).cloned() else { continue };
            let mut next: BTreeMap<K, Poly> = BTreeMap::new();
            let keys: BTreeSet<K> = row.keys().chain(piv_row.keys()).cloned().collect();
            for k in keys {
                let a = row.get(&k).map(|x| x.mul(&piv));
                let b = piv_row.get(&k).map(|x| x.mul(&f));
                let v = match (a, b) {
                    (Some(a), Some(b)) => a.sub(&b),
                    (Some(a), None) => a,
                    (None, Some(b)) => b.neg(),
                    (None, None) => continue,
                };
                if !v.is_zero() {
                    next.insert(k, v);
                }
            }
            *row = next;
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_solve() {
        let p = Prime::new(3).unwrap();
        let m = vec![vec![1, 2, 0], vec![0, 0, 1]];
        let ns = nullspace(p, &m, 3);
        assert_eq!(ns, vec![vec![1, 1, 0]]);
        assert_eq!(rank(p, &m), 2);
        let x = solve(p, &m, &[1, 2]).unwrap();
        assert_eq!((x[0] + 2 * x[1]) % 3, 1);
        assert_eq!(x[2], 2);
        assert!(solve(p, &[vec![0, 0]], &[1]).is_none());
    }

    #[test]
    fn kernel_refinement() {
        let p = Prime::new(2).unwrap();
        // images of e0, e1, e2 under one map: e0 -> 0, e1 -> a, e2 -> a
        let imgs: Vec<BTreeMap<&str, u32>> =
            vec![BTreeMap::new(), BTreeMap::from([("a", 1)]), BTreeMap::from([("a", 1)])];
        let k = refine_kernel(p, &identity_basis(3), &imgs);
        assert_eq!(k.len(), 2);
        assert_eq!(rank(p, &k), 2);
    }

    #[test]
    fn rank_over_fraction_field() {
        let p = Prime::new(2).unwrap();
        let t = Poly::var(p, 1, 0);
        let one = Poly::constant(p, 1, 1);
        // (1, t) and (t, t^2) are dependent over K(t); (1, 0) is not
        let v1 = BTreeMap::from([(0, one.clone()), (1, t.clone())]);
        let v2 = BTreeMap::from([(0, t.clone()), (1, t.mul(&t))]);
        let v3 = BTreeMap::from([(0, one)]);
        assert_eq!(poly_rank(&[v1.clone(), v2.clone()]), 1);
        assert_eq!(poly_rank(&[v1, v2, v3]), 2);
    }
}
