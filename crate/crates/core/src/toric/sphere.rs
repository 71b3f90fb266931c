use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::binomial;
use serde::Serialize;

use crate::grothring::LaurentPoly;

/// `(f_{-1}, f_0, ..., f_{m-1})` of an `(m-1)`-dimensional simplicial
/// complex, with `f_{-1} = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceVector {
    f: Vec<i128>,
}

impl FaceVector {
    /// Counts `f_0, ..., f_{m-1}`; `f_{-1} = 1` is prepended.
    pub fn new(counts: &[i128]) -> Self {
        let mut f = vec![1];
        f.extend_from_slice(counts);
        Self { f }
    }

    pub fn m(&self) -> usize {
        self.f.len() - 1
    }

    /// `f_i` for `i >= -1`.
    pub fn get(&self, i: i64) -> i128 {
        self.f[(i + 1) as usize]
    }

    pub fn entries(&self) -> &[i128] {
        &self.f
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DehnSommerville {
    pub h: Vec<i128>,
    pub symmetric: bool,
}

/// `h_p = Σ_{i=p}^{m} (-1)^{i-p} C(i, p) f_{m-1-i}` and whether
/// `h_p = h_{m-p}` for all `p`.
pub fn dehn_sommerville(fv: &FaceVector) -> DehnSommerville {
    let m = fv.m() as i64;
    let h: Vec<i128> = (0..=m)
        .map(|p| {
            (p..=m)
                .map(|i| {
                    let sign = if (i - p) % 2 == 0 { 1 } else { -1 };
                    sign * binomial(i as i128, p as i128) * fv.get(m - 1 - i)
                })
                .sum()
        })
        .collect();
    let symmetric = h.iter().eq(h.iter().rev());
    DehnSommerville { h, symmetric }
}

/// Face vector of the pure complex generated by `facets`.
pub fn face_vector(facets: &[Vec<usize>]) -> FaceVector {
    let m = facets.iter().map(Vec::len).max().unwrap_or(0);
    let mut faces = BTreeSet::new();
    for f in facets {
        for mask in 1u64..1 << f.len() {
            let face: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
            faces.insert(face);
        }
    }
    let mut counts = vec![0i128; m];
    for f in &faces {
        counts[f.len() - 1] += 1;
    }
    FaceVector::new(&counts)
}

/// Facets of the boundary of the `m`-simplex, an `(m-1)`-sphere.
pub fn simplex_boundary_facets(m: usize) -> Vec<Vec<usize>> {
    (0..=m).map(|skip| (0..=m).filter(|&v| v != skip).collect()).collect()
}

/// Facets of the boundary of the `m`-dimensional cross-polytope; vertex
/// `2i` is `+e_i` and `2i + 1` is `-e_i`.
pub fn cross_polytope_facets(m: usize) -> Vec<Vec<usize>> {
    (0u64..1 << m).map(|signs| (0..m).map(|i| 2 * i + (signs >> i & 1) as usize).collect()).collect()
}

/// `Σ_{l=0}^{n} C(n+1, n-l) (t-1)^l = t^n + ... + t + 1`.
pub fn verify_aux_binomial(n: u32) -> bool {
    let lhs: LaurentPoly = (0..=n)
        .map(|l| {
            let c = binomial(BigInt::from(n + 1), BigInt::from(n - l));
            LaurentPoly::l_minus_one().pow(l) * LaurentPoly::monomial(c, 0)
        })
        .sum();
    let rhs = LaurentPoly::from_terms((0..=i64::from(n)).map(|e| (e, BigInt::from(1))));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let tri = dehn_sommerville(&FaceVector::new(&[3, 3]));
        assert_eq!(tri.h, vec![1, 1, 1]);
        assert!(tri.symmetric);
        assert_eq!(dehn_sommerville(&FaceVector::new(&[2])).h, vec![1, 1]);
        let oct = face_vector(&cross_polytope_facets(3));
        assert_eq!(oct.entries(), &[1, 6, 12, 8]);
        assert_eq!(dehn_sommerville(&oct).h, vec![1, 3, 3, 1]);
        assert_eq!(face_vector(&simplex_boundary_facets(2)).entries(), &[1, 3, 3]);
    }

    #[test]
    fn negative_empty_face_breaks_symmetry() {
        // f_{-1} = -1 for two points
        let fv = FaceVector { f: vec![-1, 2] };
        assert!(!dehn_sommerville(&fv).symmetric);
    }

    #[test]
    fn spheres_are_symmetric() {
        for m in 1..=5 {
            let s = dehn_sommerville(&face_vector(&simplex_boundary_facets(m)));
            assert!(s.symmetric, "simplex {m}: {:?}", s.h);
            assert!(s.h.iter().all(|&x| x == 1));
            let c = dehn_sommerville(&face_vector(&cross_polytope_facets(m)));
            assert!(c.symmetric, "cross {m}: {:?}", c.h);
            let expect: Vec<i128> = (0..=m as i128).map(|p| binomial(m as i128, p)).collect();
            assert_eq!(c.h, expect);
        }
    }

    #[test]
    fn non_sphere_is_flagged() {
        // a single edge is a disk, not a sphere
        assert!(!dehn_sommerville(&face_vector(&[vec![0, 1]])).symmetric);
    }

    #[test]
    fn aux_binomial() {
        assert!((0..=20).all(verify_aux_binomial));
    }
}
