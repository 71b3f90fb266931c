//! Small dense integer matrices: echelon forms with unimodular transforms,
//! Hermite normal form, determinants and adjugates.
//!
//! Matrices are row-major `Vec<Vec<i64>>`. Entries stay tiny at the scales
//! used here; intermediate products go through `i128`.

use num_integer::Integer;

pub type Mat = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Mat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..cols)
                .map(|j| {
                    let s: i128 = (0..inner).map(|k| r[k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(s).expect("matrix entry overflow")
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &Mat, v: &[i64]) -> Vec<i64> {
    a.iter()
        .map(|r| {
            let s: i128 = r.iter().zip(v).map(|(&x, &y)| x as i128 * y as i128).sum();
            i64::try_from(s).expect("vector entry overflow")
        })
        .collect()
}

/// `v * a` for a row vector `v`.
pub fn vec_mul(v: &[i64], a: &Mat) -> Vec<i64> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            let s: i128 = v.iter().zip(a).map(|(&x, r)| x as i128 * r[j] as i128).sum();
            i64::try_from(s).expect("vector entry overflow")
        })
        .collect()
}

fn row_combine(m: &mut Mat, i: usize, j: usize, (a, b, c, d): (i64, i64, i64, i64)) {
    // (row_i, row_j) <- (a row_i + b row_j, c row_i + d row_j)
    for col in 0..m[i].len() {
        let (x, y) = (m[i][col] as i128, m[j][col] as i128);
        m[i][col] = i64::try_from(a as i128 * x + b as i128 * y).expect("overflow");
        m[j][col] = i64::try_from(c as i128 * x + d as i128 * y).expect("overflow");
    }
}

/// Row echelon form `H = U A` with `U` unimodular. Pivots are positive.
pub fn echelon_with_transform(a: &Mat) -> (Mat, Mat) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut h = a.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[i][c] == 0 {
                continue;
            }
            let (x, y) = (h[r][c], h[i][c]);
            let e = x.extended_gcd(&y);
            // [s t; -y/g x/g] has determinant 1
            let op = (e.x, e.y, -y / e.gcd, x / e.gcd);
            row_combine(&mut h, r, i, op);
            row_combine(&mut u, r, i, op);
        }
        if h[r][c] == 0 {
            continue;
        }
        if h[r][c] < 0 {
            h[r].iter_mut().for_each(|x| *x = -*x);
            u[r].iter_mut().for_each(|x| *x = -*x);
        }
        r += 1;
    }
    (h, u)
}

/// Hermite normal form of the lattice spanned by the rows of `a`: echelon,
/// positive pivots, entries above each pivot reduced into `[0, pivot)`,
/// zero rows removed.
pub fn hnf(a: &Mat) -> Mat {
    let (mut h, _) = echelon_with_transform(a);
    h.retain(|r| r.iter().any(|&x| x != 0));
    for i in 0..h.len() {
        let c = h[i].iter().position(|&x| x != 0).expect("nonzero row");
        let p = h[i][c];
        for k in 0..i {
            let q = Integer::div_floor(&h[k][c], &p);
            if q != 0 {
                let pivot_row = h[i].clone();
                for (x, y) in h[k].iter_mut().zip(pivot_row) {
                    *x -= q * y;
                }
            }
        }
    }
    h
}

/// Whether `v` is an integer combination of the rows of an HNF basis.
pub fn in_row_lattice(h: &Mat, v: &[i64]) -> bool {
    let mut w = v.to_vec();
    for row in h {
        let c = row.iter().position(|&x| x != 0).expect("nonzero row");
        if w[c] % row[c] != 0 {
            return false;
        }
        let q = w[c] / row[c];
        for (x, y) in w.iter_mut().zip(row) {
            *x -= q * y;
        }
    }
    w.iter().all(|&x| x == 0)
}

/// Determinant by fraction-free elimination.
pub fn det(a: &Mat) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    i64::try_from(sign * m[n - 1][n - 1]).expect("determinant overflow")
}

fn minor(a: &Mat, skip_r: usize, skip_c: usize) -> Mat {
    a.iter()
        .enumerate()
        .filter(|&(i, _)| i != skip_r)
        .map(|(_, r)| r.iter().enumerate().filter(|&(j, _)| j != skip_c).map(|(_, &x)| x).collect())
        .collect()
}

/// `adj(a)`, so that `adj(a) a = det(a) I`.
pub fn adjugate(a: &Mat) -> Mat {
    let n = a.len();
    if n == 1 {
        return vec![vec![1]];
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                    s * det(&minor(a, j, i))
                })
                .collect()
        })
        .collect()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &Mat) -> Mat {
    let d = det(a);
    assert!(d == 1 || d == -1, "matrix is not unimodular");
    adjugate(a).into_iter().map(|r| r.into_iter().map(|x| x * d).collect()).collect()
}

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        return v.to_vec();
    }
    v.iter().map(|&x| x / g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&vec![vec![2, 3], vec![1, 2]]), 1);
        assert_eq!(det(&vec![vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det(&vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]), -3);
        assert_eq!(det(&vec![vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn hnf_example() {
        let h = hnf(&vec![vec![2, 0], vec![0, 2], vec![1, 1]]);
        assert_eq!(h, vec![vec![1, 1], vec![0, 2]]);
        assert!(in_row_lattice(&h, &[3, 1]));
        assert!(!in_row_lattice(&h, &[1, 0]));
    }

    fn arb_mat(n: usize) -> impl Strategy<Value = Mat> {
        prop::collection::vec(prop::collection::vec(-5i64..6, n), n)
    }

    proptest! {
        #[test]
        fn echelon_transform_is_unimodular(a in arb_mat(3)) {
            let (h, u) = echelon_with_transform(&a);
            prop_assert_eq!(mul(&u, &a), h.clone());
            prop_assert_eq!(det(&u).abs(), 1);
            prop_assert_eq!(det(&h).abs(), det(&a).abs());
            let inv = unimodular_inverse(&u);
            prop_assert_eq!(mul(&inv, &u), identity(3));
        }

        #[test]
        fn adjugate_identity(a in arb_mat(3)) {
            let d = det(&a);
            let p = mul(&adjugate(&a), &a);
            let expect: Mat = identity(3).into_iter().map(|r| r.into_iter().map(|x| x * d).collect()).collect();
            prop_assert_eq!(p, expect);
        }

        #[test]
        fn hnf_is_canonical(a in arb_mat(3), b in arb_mat(3)) {
            // same lattice, different generators
            let u = echelon_with_transform(&b).1;
            let a2 = mul(&u, &a);
            prop_assert_eq!(hnf(&a), hnf(&a2));
        }
    }
}
