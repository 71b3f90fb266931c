//! Lattice models of the cyclic covers `t^d = x_1^{p_1} ... x_k^{p_k}`.
//!
//! The normalization of such a cover is the monoid algebra on
//! `M ∩ R_{≥0}^k` with `M = Z^k + Z v`, `v = p / d`. Lattices are stored in
//! `scale`-multiplied integer coordinates and kept in Hermite normal form
//! with the smallest possible scale, so equality is structural.

pub mod intmat;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use intmat::Mat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid cover spec: {0}")]
    InvalidSpec(String),
    #[error("axis {axis} out of range for rank {rank}")]
    BadAxis { axis: usize, rank: usize },
    #[error("empty index set")]
    EmptySubset,
    #[error("vector {0:?} is not coprime")]
    NotCoprime(Vec<i64>),
    #[error("rank {0} is too large for Hilbert basis enumeration (max 3)")]
    RankTooLarge(usize),
}

/// `t^d = x_1^{p_1} ... x_k^{p_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoverSpec {
    pub d: u64,
    pub p: Vec<u64>,
}

impl CoverSpec {
    pub fn new(d: u64, p: Vec<u64>) -> Result<Self, CoverError> {
        if d == 0 || p.contains(&0) {
            return Err(CoverError::InvalidSpec("d and all p_i must be positive".into()));
        }
        Ok(Self { d, p })
    }

    pub fn rank(&self) -> usize {
        self.p.len()
    }

    /// The spec describing the restriction to `x_axis = 0` (1-based axis):
    /// `d' = gcd(d, p_axis)` and the remaining exponents.
    pub fn reduced_along(&self, axis: usize) -> Result<CoverSpec, CoverError> {
        self.check_axis(axis)?;
        let d2 = self.d.gcd(&self.p[axis - 1]);
        let mut p = self.p.clone();
        p.remove(axis - 1);
        Ok(CoverSpec { d: d2, p })
    }

    fn check_axis(&self, axis: usize) -> Result<(), CoverError> {
        if axis == 0 || axis > self.rank() {
            return Err(CoverError::BadAxis { axis, rank: self.rank() });
        }
        Ok(())
    }
}

impl fmt::Display for CoverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.p.iter().map(u64::to_string).collect();
        write!(f, "({}; {})", self.d, p.join(","))
    }
}

impl FromStr for CoverSpec {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoverError::InvalidSpec(s.to_string());
        let inner = s.trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (d, p) = inner.split_once(';').ok_or_else(bad)?;
        let d = d.trim().parse().map_err(|_| bad())?;
        let p = if p.trim().is_empty() {
            Vec::new()
        } else {
            p.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        CoverSpec::new(d, p)
    }
}

/// A full-rank sublattice of `(1/scale) Z^k`, rows in HNF.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeModel {
    rank: usize,
    scale: i64,
    basis: Mat,
}

impl LatticeModel {
    /// Lattice spanned by the rows of `gens / scale`.
    pub fn from_generators(rank: usize, scale: i64, gens: &Mat) -> Self {
        assert!(scale >= 1);
        let mut basis = intmat::hnf(gens);
        assert_eq!(basis.len(), rank, "generators do not span a full-rank lattice");
        let g = basis.iter().flatten().fold(scale, |g, &x| g.gcd(&x));
        for x in basis.iter_mut().flatten() {
            *x /= g;
        }
        Self { rank, scale: scale / g, basis }
    }

    pub fn standard(rank: usize) -> Self {
        Self::from_generators(rank, 1, &intmat::identity(rank))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// HNF rows in scaled coordinates.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn rational_basis(&self) -> Vec<Vec<Rational64>> {
        self.basis.iter().map(|r| r.iter().map(|&x| Rational64::new(x, self.scale)).collect()).collect()
    }

    /// Membership of `v / scale`, where `v` is given at this lattice's scale.
    fn contains_scaled(&self, v: &[i64]) -> bool {
        intmat::in_row_lattice(&self.basis, v)
    }

    pub fn contains(&self, v: &[Rational64]) -> bool {
        let scaled: Option<Vec<i64>> = v
            .iter()
            .map(|x| {
                let y = *x * Rational64::from_integer(self.scale);
                y.is_integer().then(|| y.to_integer())
            })
            .collect();
        scaled.is_some_and(|s| self.contains_scaled(&s))
    }

    /// `[M : Z^k]`, valid when `Z^k ⊆ M`.
    pub fn index_over_integers(&self) -> i64 {
        let det = intmat::det(&self.basis).abs();
        self.scale.pow(self.rank as u32) / det
    }
}

impl fmt::Display for LatticeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rational_basis().iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            f.write_str(&cells.join(" "))?;
        }
        Ok(())
    }
}

/// `M = Z^k + Z (p / d)`.
pub fn lattice_of_cover(spec: &CoverSpec) -> LatticeModel {
    let k = spec.rank();
    let d = spec.d as i64;
    let mut gens: Mat =
        intmat::identity(k).into_iter().map(|r| r.into_iter().map(|x| x * d).collect()).collect();
    gens.push(spec.p.iter().map(|&x| x as i64).collect());
    LatticeModel::from_generators(k, d, &gens)
}

/// `{α ∈ M | α_axis = 0}` with the axis coordinate deleted (1-based axis).
pub fn restrict_lattice(m: &LatticeModel, axis: usize) -> Result<LatticeModel, CoverError> {
    let k = m.rank;
    if axis == 0 || axis > k {
        return Err(CoverError::BadAxis { axis, rank: k });
    }
    let col: Mat = m.basis.iter().map(|r| vec![r[axis - 1]]).collect();
    let (_, u) = intmat::echelon_with_transform(&col);
    let kernel: Mat = u[1..].to_vec();
    let vectors = intmat::mul(&kernel, &m.basis);
    let gens: Mat = vectors
        .into_iter()
        .map(|mut r| {
            r.remove(axis - 1);
            r
        })
        .collect();
    if k == 1 {
        return Ok(LatticeModel { rank: 0, scale: 1, basis: Vec::new() });
    }
    Ok(LatticeModel::from_generators(k - 1, m.scale, &gens))
}

/// `(c, e, reduced)`: `c = gcd(p, d)` components, each a cover of degree
/// `e = d / c` with exponents `p / c`.
pub fn component_decomposition(spec: &CoverSpec) -> (u64, u64, CoverSpec) {
    let c = spec.p.iter().fold(spec.d, |g, &x| g.gcd(&x));
    let reduced = CoverSpec { d: spec.d / c, p: spec.p.iter().map(|&x| x / c).collect() };
    (c, spec.d / c, reduced)
}

/// `(m_I, α, c_I)` with `α_i = m_i / m_I` and `c_I = Σ_{i∈I} m_i`. Indices
/// are 0-based.
pub fn gcd_cover_order(m: &[u64], subset: &[usize]) -> Result<(u64, Vec<u64>, u64), CoverError> {
    if subset.is_empty() {
        return Err(CoverError::EmptySubset);
    }
    let g = subset.iter().fold(0u64, |g, &i| g.gcd(&m[i]));
    let alpha = subset.iter().map(|&i| m[i] / g).collect();
    let c = subset.iter().map(|&i| m[i]).sum();
    Ok((g, alpha, c))
}

/// A determinant-one integer matrix whose first row is `α`.
pub fn unimodular_completion(alpha: &[i64]) -> Result<Mat, CoverError> {
    if alpha.is_empty() || intmat::gcd_all(alpha) != 1 {
        return Err(CoverError::NotCoprime(alpha.to_vec()));
    }
    let col: Mat = alpha.iter().map(|&x| vec![x]).collect();
    let (_, u) = intmat::echelon_with_transform(&col);
    // U α^T = e_1, so α^T is the first column of U^-1
    let mut c = intmat::transpose(&intmat::unimodular_inverse(&u));
    let r = c.len();
    if intmat::det(&c) < 0 {
        c[r - 1].iter_mut().for_each(|x| *x = -*x);
    }
    if alpha[0] != 0 {
        let a0 = alpha[0].abs();
        for i in 1..r {
            let q = Integer::div_floor(&c[i][0], &a0) * alpha[0].signum();
            for j in 0..r {
                c[i][j] -= q * alpha[j];
            }
        }
    }
    Ok(c)
}

/// Minimal generators of the monoid `M ∩ R_{≥0}^k`, by enumeration in the
/// box spanned by the primitive lattice points on the coordinate rays.
pub fn hilbert_basis(m: &LatticeModel) -> Result<Vec<Vec<Rational64>>, CoverError> {
    let k = m.rank;
    if k > 3 {
        return Err(CoverError::RankTooLarge(k));
    }
    let mut unit = vec![0i64; k];
    let mut bounds = Vec::with_capacity(k);
    for i in 0..k {
        let mut t = 1;
        loop {
            unit[i] = t;
            let hit = m.contains_scaled(&unit);
            unit[i] = 0;
            if hit {
                break;
            }
            t += 1;
        }
        bounds.push(t);
    }
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut point = vec![0i64; k];
    loop {
        if point.iter().any(|&x| x != 0) && m.contains_scaled(&point) {
            candidates.push(point.clone());
        }
        let mut i = 0;
        while i < k {
            point[i] += 1;
            if point[i] <= bounds[i] {
                break;
            }
            point[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    let set: std::collections::HashSet<&Vec<i64>> = candidates.iter().collect();
    let irreducible: Vec<Vec<i64>> = candidates
        .iter()
        .filter(|x| {
            !candidates.iter().any(|y| {
                y != *x && {
                    let diff: Vec<i64> = x.iter().zip(y.iter()).map(|(a, b)| a - b).collect();
                    diff.iter().all(|&v| v >= 0) && set.contains(&diff)
                }
            })
        })
        .cloned()
        .collect();
    Ok(irreducible
        .into_iter()
        .map(|v| v.into_iter().map(|x| Rational64::new(x, m.scale)).collect())
        .collect())
}

/// The group map `μ_d -> μ_{d'}`, `ζ -> ζ^{d/d'}`, of the restriction to
/// `x_axis = 0`, with `s' = s^{d/d'} x_axis^{-p_axis/d'}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionAction {
    pub d_prime: u64,
    pub exponent: u64,
    pub coordinate_exponent: u64,
}

pub fn restriction_action(spec: &CoverSpec, axis: usize) -> Result<RestrictionAction, CoverError> {
    spec.check_axis(axis)?;
    let p = spec.p[axis - 1];
    let d2 = spec.d.gcd(&p);
    debug_assert!(spec.d.is_multiple_of(d2) && p.is_multiple_of(d2));
    Ok(RestrictionAction { d_prime: d2, exponent: spec.d / d2, coordinate_exponent: p / d2 })
}

/// Restriction and index checks for one spec; returns a description
/// of the first violated property.
pub fn check_spec(spec: &CoverSpec) -> Result<(), String> {
    let m = lattice_of_cover(spec);
    let (c, e, reduced) = component_decomposition(spec);
    if m.index_over_integers() as u64 != spec.d / c {
        return Err(format!("{spec}: index {} != d/gcd {}", m.index_over_integers(), spec.d / c));
    }
    if !spec.d.is_multiple_of(c) || spec.p.iter().any(|&x| x % c != 0) || e * c != spec.d {
        return Err(format!("{spec}: component count {c} does not divide"));
    }
    if reduced.p.iter().fold(reduced.d, |g, &x| g.gcd(&x)) != 1 {
        return Err(format!("{spec}: reduced spec {reduced} is not coprime"));
    }
    for axis in 1..=spec.rank() {
        let restricted = restrict_lattice(&m, axis).map_err(|e| e.to_string())?;
        let expect = lattice_of_cover(&spec.reduced_along(axis).map_err(|e| e.to_string())?);
        if restricted != expect {
            return Err(format!("{spec}: restriction along {axis} gives\n{restricted}\nnot\n{expect}"));
        }
    }
    let alpha: Vec<i64> = reduced.p.iter().map(|&x| x as i64).collect();
    if intmat::gcd_all(&alpha) == 1 {
        let u = unimodular_completion(&alpha).map_err(|e| e.to_string())?;
        if intmat::det(&u).abs() != 1 || u[0] != alpha {
            return Err(format!("{spec}: bad completion {u:?}"));
        }
    }
    Ok(())
}

/// Every spec with `1 <= d <= max_d`, `1 <= k <= max_k`, `1 <= p_i <= max_p`.
pub fn spec_grid(max_d: u64, max_k: usize, max_p: u64) -> Vec<CoverSpec> {
    let mut out = Vec::new();
    let mut tuples: Vec<Vec<u64>> = vec![Vec::new()];
    for _ in 0..max_k {
        tuples = tuples
            .iter()
            .flat_map(|t| {
                (1..=max_p).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
        for d in 1..=max_d {
            out.extend(tuples.iter().map(|p| CoverSpec { d, p: p.clone() }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: u64, p: &[u64]) -> CoverSpec {
        CoverSpec::new(d, p.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(lattice_of_cover(&spec(1, &[3, 5])), LatticeModel::standard(2));
        let m = lattice_of_cover(&spec(2, &[1, 1]));
        assert_eq!(m.rational_basis(), vec![vec![r(1, 2), r(1, 2)], vec![r(0, 1), r(1, 1)]]);
        let m = lattice_of_cover(&spec(3, &[1, 2]));
        assert_eq!(m.rational_basis(), vec![vec![r(1, 3), r(2, 3)], vec![r(0, 1), r(1, 1)]]);
        assert_eq!(m.index_over_integers(), 3);
        assert_eq!(m.to_string(), "1/3 2/3\n0 1");
    }

    #[test]
    fn restriction_examples() {
        let z1 = LatticeModel::standard(1);
        assert_eq!(restrict_lattice(&lattice_of_cover(&spec(2, &[1, 1])), 1).unwrap(), z1);
        let m = restrict_lattice(&lattice_of_cover(&spec(4, &[2, 6])), 1).unwrap();
        assert_eq!(m, lattice_of_cover(&spec(2, &[6])));
        assert_eq!(m, z1);
        let m = restrict_lattice(&lattice_of_cover(&spec(6, &[4, 3])), 2).unwrap();
        assert_eq!(m, lattice_of_cover(&spec(3, &[4])));
        assert_eq!(m.scale(), 3);
        assert!(matches!(restrict_lattice(&m, 2), Err(CoverError::BadAxis { .. })));
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(component_decomposition(&spec(2, &[2])), (2, 1, spec(1, &[1])));
        assert_eq!(component_decomposition(&spec(4, &[2, 6])), (2, 2, spec(2, &[1, 3])));
        assert_eq!(component_decomposition(&spec(5, &[2, 3])).0, 1);
    }

    #[test]
    fn gcd_order_examples() {
        assert_eq!(gcd_cover_order(&[2, 1], &[0, 1]).unwrap(), (1, vec![2, 1], 3));
        assert_eq!(gcd_cover_order(&[4, 6], &[0, 1]).unwrap(), (2, vec![2, 3], 10));
        assert_eq!(gcd_cover_order(&[4, 6], &[1]).unwrap(), (6, vec![1], 6));
        assert_eq!(gcd_cover_order(&[4], &[]), Err(CoverError::EmptySubset));
    }

    #[test]
    fn completion_examples() {
        assert_eq!(unimodular_completion(&[1]).unwrap(), vec![vec![1]]);
        assert_eq!(unimodular_completion(&[2, 3]).unwrap(), vec![vec![2, 3], vec![1, 2]]);
        let u = unimodular_completion(&[6, 10, 15]).unwrap();
        assert_eq!(u[0], vec![6, 10, 15]);
        assert_eq!(intmat::det(&u), 1);
        assert!(matches!(unimodular_completion(&[2, 4]), Err(CoverError::NotCoprime(_))));
    }

    #[test]
    fn hilbert_examples() {
        let hb = hilbert_basis(&LatticeModel::standard(2)).unwrap();
        assert_eq!(hb, vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]]);
        let hb = hilbert_basis(&lattice_of_cover(&spec(2, &[1, 1]))).unwrap();
        assert_eq!(hb.len(), 3);
        assert!(hb.contains(&vec![r(1, 2), r(1, 2)]));
        let hb = hilbert_basis(&lattice_of_cover(&spec(3, &[1, 2]))).unwrap();
        let mut expect = vec![
            vec![r(1, 1), r(0, 1)],
            vec![r(0, 1), r(1, 1)],
            vec![r(1, 3), r(2, 3)],
            vec![r(2, 3), r(1, 3)],
        ];
        let mut got = hb.clone();
        got.sort();
        expect.sort();
        assert_eq!(got, expect);
        assert!(matches!(hilbert_basis(&LatticeModel::standard(4)), Err(CoverError::RankTooLarge(4))));
    }

    #[test]
    fn hilbert_basis_generates_box() {
        for s in [spec(3, &[1, 2]), spec(5, &[2, 3]), spec(4, &[1, 1, 2]), spec(6, &[1, 2, 3])] {
            let m = lattice_of_cover(&s);
            let hb = hilbert_basis(&m).unwrap();
            for x in &hb {
                for y in &hb {
                    let diff: Vec<Rational64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    if x != y && diff.iter().all(|v| *v >= r(0, 1)) {
                        assert!(!hb.contains(&diff) || diff.iter().all(|v| *v == r(0, 1)));
                    }
                }
            }
            // every monoid point in [0, 2]^k is a nonnegative combination
            let k = s.rank();
            let sc = m.scale();
            let mut reachable = std::collections::HashSet::new();
            reachable.insert(vec![0i64; k]);
            let hbs: Vec<Vec<i64>> = hb
                .iter()
                .map(|v| v.iter().map(|x| (*x * Rational64::from_integer(sc)).to_integer()).collect())
                .collect();
            let lim = 2 * sc;
            let mut frontier = vec![vec![0i64; k]];
            while let Some(p) = frontier.pop() {
                for h in &hbs {
                    let q: Vec<i64> = p.iter().zip(h).map(|(a, b)| a + b).collect();
                    if q.iter().all(|&x| x <= lim) && reachable.insert(q.clone()) {
                        frontier.push(q);
                    }
                }
            }
            let total = (0..(lim + 1).pow(k as u32))
                .map(|mut i| {
                    (0..k)
                        .map(|_| {
                            let c = i % (lim + 1);
                            i /= lim + 1;
                            c
                        })
                        .collect::<Vec<i64>>()
                })
                .filter(|v| m.contains_scaled(v))
                .count();
            assert_eq!(total, reachable.len(), "{s}");
        }
    }

    #[test]
    fn action_examples() {
        let a = restriction_action(&spec(2, &[1, 5]), 1).unwrap();
        assert_eq!((a.d_prime, a.exponent), (1, 2));
        let a = restriction_action(&spec(6, &[4]), 1).unwrap();
        assert_eq!((a.d_prime, a.exponent, a.coordinate_exponent), (2, 3, 2));
        let a = restriction_action(&spec(3, &[6]), 1).unwrap();
        assert_eq!((a.d_prime, a.exponent), (3, 1));
    }

    #[test]
    fn spec_parsing() {
        let s: CoverSpec = "(4; 2,6)".parse().unwrap();
        assert_eq!(s, spec(4, &[2, 6]));
        assert_eq!(s.to_string(), "(4; 2,6)");
        assert!("4; 2".parse::<CoverSpec>().is_err());
        assert!("(0; 2)".parse::<CoverSpec>().is_err());
    }

    #[test]
    fn small_sweep() {
        for s in spec_grid(4, 3, 4) {
            check_spec(&s).unwrap();
        }
    }
}
