//! Row reduction over F_ell for small dense systems.

use crate::finite_field::PrimeModulus;

pub type Vector = Vec<u64>;

/// Reduces `rows` to reduced row echelon form in place, drops zero rows and
/// returns the pivot columns.
pub fn rref(rows: &mut Vec<Vector>, md: PrimeModulus) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = md.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = md.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c];
            for j in 0..ncols {
                let t = md.mul(f, rows[r][j]);
                rows[i][j] = md.sub(rows[i][j], t);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` in reduced row echelon form.
pub fn nullspace(m: &[Vector], ncols: usize, md: PrimeModulus) -> Vec<Vector> {
    let mut rows: Vec<Vector> = m.to_vec();
    let pivots = if rows.is_empty() { Vec::new() } else { rref(&mut rows, md) };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; ncols];
        v[free] = 1;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = md.neg(row[free]);
        }
        basis.push(v);
    }
    if !basis.is_empty() {
        rref(&mut basis, md);
    }
    basis
}

/// Lexicographically smallest vector of the span whose first nonzero
/// coordinate is 1: the last row of the reduced echelon basis.
pub fn smallest_normalized(basis: &[Vector], md: PrimeModulus) -> Option<Vector> {
    let mut rows = basis.to_vec();
    if rows.is_empty() {
        return None;
    }
    rref(&mut rows, md);
    rows.pop()
}

pub fn rank(vectors: &[Vector], md: PrimeModulus) -> usize {
    let mut rows = vectors.to_vec();
    if rows.is_empty() {
        return 0;
    }
    rref(&mut rows, md).len()
}
