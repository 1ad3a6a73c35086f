//! Fixed-size square matrices over F_ell with entries in `[0, ell)`.

use crate::finite_field::PrimeModulus;

pub type Mat<const N: usize> = [[u64; N]; N];
pub type Mat2 = Mat<2>;
pub type Mat4 = Mat<4>;

pub fn identity<const N: usize>() -> Mat<N> {
    let mut m = [[0u64; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn scalar<const N: usize>(c: u64) -> Mat<N> {
    let mut m = [[0u64; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c;
    }
    m
}

pub fn reduce<const N: usize>(m: &[[i64; N]; N], md: PrimeModulus) -> Mat<N> {
    let mut out = [[0u64; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[i][j] = md.reduce(m[i][j]);
        }
    }
    out
}

pub fn mul<const N: usize>(a: &Mat<N>, b: &Mat<N>, md: PrimeModulus) -> Mat<N> {
    let l = md.ell() as u128;
    let mut out = [[0u64; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut acc = 0u128;
            for k in 0..N {
                acc += a[i][k] as u128 * b[k][j] as u128;
            }
            out[i][j] = (acc % l) as u64;
        }
    }
    out
}

pub fn transpose<const N: usize>(a: &Mat<N>) -> Mat<N> {
    let mut out = [[0u64; N]; N];
    for i in 0..N {
        for j in 0..N {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn scale<const N: usize>(a: &Mat<N>, c: u64, md: PrimeModulus) -> Mat<N> {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = md.mul(*x, c);
        }
    }
    out
}

pub fn sub<const N: usize>(a: &Mat<N>, b: &Mat<N>, md: PrimeModulus) -> Mat<N> {
    let mut out = *a;
    for i in 0..N {
        for j in 0..N {
            out[i][j] = md.sub(a[i][j], b[i][j]);
        }
    }
    out
}

pub fn det2(a: &Mat2, md: PrimeModulus) -> u64 {
    md.sub(md.mul(a[0][0], a[1][1]), md.mul(a[0][1], a[1][0]))
}

pub fn trace<const N: usize>(a: &Mat<N>, md: PrimeModulus) -> u64 {
    (0..N).fold(0, |acc, i| md.add(acc, a[i][i]))
}

/// Determinant by elimination.
pub fn det<const N: usize>(a: &Mat<N>, md: PrimeModulus) -> u64 {
    let mut m = *a;
    let mut det = 1u64;
    for col in 0..N {
        let Some(piv) = (col..N).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = md.neg(det);
        }
        det = md.mul(det, m[col][col]);
        let inv = md.inv(m[col][col]).expect("nonzero pivot");
        for r in (col + 1)..N {
            if m[r][col] == 0 {
                continue;
            }
            let f = md.mul(m[r][col], inv);
            for c in col..N {
                m[r][c] = md.sub(m[r][c], md.mul(f, m[col][c]));
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse<const N: usize>(a: &Mat<N>, md: PrimeModulus) -> Option<Mat<N>> {
    let mut m = *a;
    let mut inv = identity::<N>();
    for col in 0..N {
        let piv = (col..N).find(|&r| m[r][col] != 0)?;
        m.swap(piv, col);
        inv.swap(piv, col);
        let p = md.inv(m[col][col]).expect("nonzero pivot");
        for c in 0..N {
            m[col][c] = md.mul(m[col][c], p);
            inv[col][c] = md.mul(inv[col][c], p);
        }
        for r in 0..N {
            if r == col || m[r][col] == 0 {
                continue;
            }
            let f = m[r][col];
            for c in 0..N {
                m[r][c] = md.sub(m[r][c], md.mul(f, m[col][c]));
                inv[r][c] = md.sub(inv[r][c], md.mul(f, inv[col][c]));
            }
        }
    }
    Some(inv)
}

pub fn inverse2(a: &Mat2, md: PrimeModulus) -> Option<Mat2> {
    let d = md.inv(det2(a, md))?;
    Some([
        [md.mul(a[1][1], d), md.mul(md.neg(a[0][1]), d)],
        [md.mul(md.neg(a[1][0]), d), md.mul(a[0][0], d)],
    ])
}

/// Lower coefficients `[c0, c1]` of `X^2 - tr X + det`.
pub fn char_poly2(a: &Mat2, md: PrimeModulus) -> [u64; 2] {
    [det2(a, md), md.neg(trace(a, md))]
}

fn principal_minor(a: &Mat4, idx: &[usize], md: PrimeModulus) -> u64 {
    match idx.len() {
        1 => a[idx[0]][idx[0]],
        2 => {
            let m = [[a[idx[0]][idx[0]], a[idx[0]][idx[1]]], [a[idx[1]][idx[0]], a[idx[1]][idx[1]]]];
            det2(&m, md)
        }
        3 => {
            let mut m = [[0u64; 3]; 3];
            for (i, &r) in idx.iter().enumerate() {
                for (j, &c) in idx.iter().enumerate() {
                    m[i][j] = a[r][c];
                }
            }
            det(&m, md)
        }
        _ => det(a, md),
    }
}

/// Lower coefficients `[c0, c1, c2, c3]` of the monic characteristic
/// polynomial, from sums of principal minors.
pub fn char_poly4(a: &Mat4, md: PrimeModulus) -> [u64; 4] {
    let mut e = [0u64; 5];
    e[0] = 1;
    for mask in 1u32..16 {
        let idx: Vec<usize> = (0..4).filter(|&i| mask & (1 << i) != 0).collect();
        let k = idx.len();
        e[k] = md.add(e[k], principal_minor(a, &idx, md));
    }
    // X^4 - e1 X^3 + e2 X^2 - e3 X + e4
    [e[4], md.neg(e[3]), e[2], md.neg(e[1])]
}

/// Lower coefficients of the product of two monic quadratics.
pub fn quad_product(f: [u64; 2], g: [u64; 2], md: PrimeModulus) -> [u64; 4] {
    let (f0, f1, g0, g1) = (f[0], f[1], g[0], g[1]);
    [
        md.mul(f0, g0),
        md.add(md.mul(f0, g1), md.mul(f1, g0)),
        md.add(md.add(f0, g0), md.mul(f1, g1)),
        md.add(f1, g1),
    ]
}

/// Splits a 4x4 matrix into its 2x2 blocks `(A, B, C, D)`.
pub fn blocks(m: &Mat4) -> (Mat2, Mat2, Mat2, Mat2) {
    let b = |r: usize, c: usize| [[m[r][c], m[r][c + 1]], [m[r + 1][c], m[r + 1][c + 1]]];
    (b(0, 0), b(0, 2), b(2, 0), b(2, 2))
}

pub fn from_blocks(a: &Mat2, b: &Mat2, c: &Mat2, d: &Mat2) -> Mat4 {
    let mut m = [[0u64; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j];
            m[i][j + 2] = b[i][j];
            m[i + 2][j] = c[i][j];
            m[i + 2][j + 2] = d[i][j];
        }
    }
    m
}

/// Places `m1` on coordinates (0, 2) and `m2` on (1, 3); the result is a
/// symplectic similitude when the determinants agree.
pub fn interleave(m1: &Mat2, m2: &Mat2) -> Mat4 {
    let mut m = [[0u64; 4]; 4];
    for (src, off) in [(m1, 0usize), (m2, 1usize)] {
        for i in 0..2 {
            for j in 0..2 {
                m[2 * i + off][2 * j + off] = src[i][j];
            }
        }
    }
    m
}

pub fn is_upper_triangular<const N: usize>(a: &Mat<N>) -> bool {
    (0..N).all(|i| (0..i).all(|j| a[i][j] == 0))
}

pub fn is_diagonal<const N: usize>(a: &Mat<N>) -> bool {
    (0..N).all(|i| (0..N).all(|j| i == j || a[i][j] == 0))
}

pub fn companion(c0: u64, c1: u64, md: PrimeModulus) -> Mat2 {
    [[0, md.neg(c0)], [1, md.neg(c1)]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(l: u64) -> PrimeModulus {
        PrimeModulus::new(l).unwrap()
    }

    #[test]
    fn inverse_and_det_agree_with_2x2_formulas() {
        let md = m(7);
        for code in 0..7u64.pow(4) {
            let a = [[code % 7, (code / 7) % 7], [(code / 49) % 7, (code / 343) % 7]];
            assert_eq!(det(&a, md), det2(&a, md));
            assert_eq!(inverse(&a, md), inverse2(&a, md));
            if let Some(inv) = inverse(&a, md) {
                assert_eq!(mul(&a, &inv, md), identity());
            }
        }
    }

    #[test]
    fn char_poly4_of_block_diagonal_is_product() {
        let md = m(11);
        let a = [[3, 4], [1, 9]];
        let b = [[2, 7], [5, 5]];
        let big = from_blocks(&a, &[[0; 2]; 2], &[[0; 2]; 2], &b);
        assert_eq!(char_poly4(&big, md), quad_product(char_poly2(&a, md), char_poly2(&b, md), md));
        assert_eq!(char_poly4(&interleave(&a, &b), md), char_poly4(&big, md));
    }

    #[test]
    fn char_poly4_cayley_hamilton() {
        let md = m(13);
        let a: Mat4 = [[1, 5, 0, 7], [2, 2, 11, 3], [0, 4, 9, 12], [6, 1, 8, 10]];
        let c = char_poly4(&a, md);
        let mut p = [[0u64; 4]; 4];
        let mut power = identity::<4>();
        let coeffs = [c[0], c[1], c[2], c[3], 1];
        for &ck in &coeffs {
            let term = scale(&power, ck, md);
            for i in 0..4 {
                for j in 0..4 {
                    p[i][j] = md.add(p[i][j], term[i][j]);
                }
            }
            power = mul(&power, &a, md);
        }
        assert_eq!(p, [[0u64; 4]; 4]);
    }
}
