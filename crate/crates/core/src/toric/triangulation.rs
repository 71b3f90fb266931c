use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::ToricError;
use crate::grothring::LaurentPoly;

/// Sorted vertex indices.
pub type Simplex = Vec<usize>;

/// A linear triangulation of the standard `n`-simplex refining its standard
/// triangulation. Vertices are barycentric coordinate vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    n: usize,
    vertices: Vec<Vec<BigRational>>,
    maximal: Vec<Simplex>,
    faces: BTreeSet<Simplex>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Solves `sum_j x_j * cols[j] = b` for a square nonsingular system.
fn solve(cols: &[&Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    if cols.len() != n {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let pivot = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

fn det(rows: &[&Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| (*r).clone()).collect();
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(c, p);
            acc = -acc;
        }
        acc *= &m[c][c];
        for r in c + 1..n {
            let f = &m[r][c] / &m[c][c];
            let pivot = m[c].clone();
            for (x, y) in m[r].iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    acc
}

fn subsets(s: &[usize]) -> impl Iterator<Item = Simplex> + '_ {
    (1u64..1 << s.len())
        .map(move |mask| s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
}

fn signed_power(sign_exp: usize, k: usize) -> LaurentPoly {
    let p = LaurentPoly::l_minus_one().pow(k as u32);
    if sign_exp.is_multiple_of(2) {
        p
    } else {
        -p
    }
}

impl Triangulation {
    pub fn new(n: usize, vertices: Vec<Vec<BigRational>>, maximal: Vec<Simplex>) -> Result<Self, ToricError> {
        let bad = |m: String| Err(ToricError::InvalidTriangulation(m));
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != n + 1 {
                return bad(format!("vertex {i} has {} coordinates, expected {}", v.len(), n + 1));
            }
            if v.iter().any(Signed::is_negative) || v.iter().sum::<BigRational>() != BigRational::one() {
                return bad(format!("vertex {i} is not a point of the simplex"));
            }
        }
        if vertices.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return bad("repeated vertex".into());
        }
        let mut maximal: Vec<Simplex> = maximal
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        maximal.sort();
        maximal.dedup();
        if maximal.is_empty() {
            return bad("no maximal simplices".into());
        }
        let mut used = BTreeSet::new();
        let mut volume = BigRational::zero();
        for s in &maximal {
            if s.len() != n + 1 || s.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("{s:?} does not have {} distinct vertices", n + 1));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= vertices.len()) {
                return bad(format!("unknown vertex {v}"));
            }
            let rows: Vec<&Vec<BigRational>> = s.iter().map(|&v| &vertices[v]).collect();
            let d = det(&rows);
            if d.is_zero() {
                return bad(format!("{s:?} is degenerate"));
            }
            volume += d.abs();
            used.extend(s.iter().copied());
        }
        if used.len() != vertices.len() {
            return bad("vertex not used by any simplex".into());
        }
        if volume != BigRational::one() {
            return bad(format!("simplices have total volume {volume}, expected 1"));
        }
        let faces = maximal.iter().flat_map(|s| subsets(s)).collect();
        Ok(Self { n, vertices, maximal, faces })
    }

    /// The standard triangulation: `Δ` and its faces.
    pub fn standard(n: usize) -> Self {
        let vertices = (0..=n).map(|i| (0..=n).map(|j| rat(i64::from(i == j))).collect()).collect();
        Self::new(n, vertices, vec![(0..=n).collect()]).expect("standard simplex is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn maximal(&self) -> &[Simplex] {
        &self.maximal
    }

    /// Every nonempty simplex, in lexicographic order.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.faces.iter()
    }

    fn member(&self, s: &[usize]) -> Result<Simplex, ToricError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if self.faces.contains(&s) {
            Ok(s)
        } else {
            Err(ToricError::NotASimplex(s))
        }
    }

    /// Standard vertices of the smallest standard face containing `s`.
    pub fn carrier(&self, s: &[usize]) -> Result<Vec<usize>, ToricError> {
        let s = self.member(s)?;
        Ok((0..=self.n).filter(|&j| s.iter().any(|&v| !self.vertices[v][j].is_zero())).collect())
    }

    /// All simplices containing `s`.
    pub fn star(&self, s: &[usize]) -> Result<Vec<Simplex>, ToricError> {
        let s = self.member(s)?;
        Ok(self.faces.iter().filter(|f| s.iter().all(|v| f.binary_search(v).is_ok())).cloned().collect())
    }

    fn carrier_dim(&self, s: &[usize]) -> usize {
        (0..=self.n).filter(|&j| s.iter().any(|&v| !self.vertices[v][j].is_zero())).count() - 1
    }

    fn star_term(&self, s: &[usize]) -> LaurentPoly {
        let cd = self.carrier_dim(s);
        signed_power(cd, cd + 1 - s.len())
    }

    /// `g_τ(t) = Σ_{σ ⊇ τ} (-1)^{dim σ_Δ} (t-1)^{dim σ_Δ - dim σ}`.
    pub fn g_poly(&self, tau: &[usize]) -> Result<LaurentPoly, ToricError> {
        Ok(self.star(tau)?.iter().map(|s| self.star_term(s)).sum())
    }

    /// `h(t) = Σ_σ (-1)^{dim σ_Δ} (t-1)^{dim σ_Δ - dim σ} - 1`.
    pub fn h_poly(&self) -> LaurentPoly {
        self.faces.iter().map(|s| self.star_term(s)).sum::<LaurentPoly>() - LaurentPoly::one()
    }

    /// `g_τ(1/t) = t^{dim τ - n} g_τ(t)`.
    pub fn g_palindromic(&self, tau: &[usize]) -> Result<bool, ToricError> {
        let g = self.g_poly(tau)?;
        Ok(g.is_palindromic(tau.len() as i64 - 1 - self.n as i64))
    }

    /// `h(1/t) = t^{-(n+1)} h(t)`.
    pub fn h_palindromic(&self) -> bool {
        self.h_poly().is_palindromic(-(self.n as i64) - 1)
    }

    /// Barycentric coordinates of `p` in the maximal simplex `s`.
    fn locate(&self, s: &[usize], p: &[BigRational]) -> Vec<BigRational> {
        let cols: Vec<&Vec<BigRational>> = s.iter().map(|&v| &self.vertices[v]).collect();
        solve(&cols, p).expect("maximal simplices are nondegenerate")
    }

    /// Stellar subdivision of `s` at the point with positive weights
    /// `weights` on its vertices.
    pub fn stellar_subdivide(&self, s: &[usize], weights: &[BigRational]) -> Result<Self, ToricError> {
        let s = self.member(s)?;
        if weights.len() != s.len() || weights.iter().any(|w| !w.is_positive()) {
            return Err(ToricError::InvalidTriangulation(
                "subdivision weights must be positive, one per vertex".into(),
            ));
        }
        let total: BigRational = weights.iter().sum();
        let point: Vec<BigRational> = (0..=self.n)
            .map(|j| {
                s.iter().zip(weights).map(|(&v, w)| &self.vertices[v][j] * w).sum::<BigRational>() / &total
            })
            .collect();
        let b = self.vertices.len();
        let mut vertices = self.vertices.clone();
        vertices.push(point);
        let mut maximal = Vec::new();
        for m in &self.maximal {
            if s.iter().all(|v| m.binary_search(v).is_ok()) {
                for v in &s {
                    let mut f: Simplex = m.iter().copied().filter(|x| x != v).collect();
                    f.push(b);
                    maximal.push(f);
                }
            } else {
                maximal.push(m.clone());
            }
        }
        Self::new(self.n, vertices, maximal)
    }

    /// Stellar subdivision at the barycenter of `s`.
    pub fn barycentric_subdivide(&self, s: &[usize]) -> Result<Self, ToricError> {
        self.stellar_subdivide(s, &vec![BigRational::one(); s.len()])
    }

    /// `steps` stellar subdivisions of `Δ^n` at random simplices of positive
    /// dimension and random interior points.
    pub fn random_subdivision<R: Rng>(n: usize, steps: usize, rng: &mut R) -> Self {
        let mut t = Self::standard(n);
        if n == 0 {
            return t;
        }
        for _ in 0..steps {
            let candidates: Vec<&Simplex> = t.faces.iter().filter(|f| f.len() > 1).collect();
            let s = candidates[rng.gen_range(0..candidates.len())].clone();
            let w: Vec<BigRational> = s.iter().map(|_| rat(rng.gen_range(1..=3))).collect();
            t = t.stellar_subdivide(&s, &w).expect("subdividing a simplex keeps a triangulation");
        }
        t
    }

    /// Locate-and-count on `samples` random interior points: each point off
    /// every simplex boundary must lie in exactly one maximal simplex.
    pub fn check_cover<R: Rng>(&self, samples: usize, rng: &mut R) -> Result<(), String> {
        for _ in 0..samples {
            let w: Vec<BigRational> = (0..=self.n).map(|_| rat(rng.gen_range(1..=97))).collect();
            let total: BigRational = w.iter().sum();
            let p: Vec<BigRational> = w.iter().map(|x| x / &total).collect();
            let mut hits = 0;
            let mut degenerate = false;
            for m in &self.maximal {
                let lam = self.locate(m, &p);
                if lam.iter().all(|x| !x.is_negative()) {
                    if lam.iter().any(Zero::is_zero) {
                        degenerate = true;
                    } else {
                        hits += 1;
                    }
                }
            }
            if !degenerate && hits != 1 {
                let shown: Vec<String> = p.iter().map(ToString::to_string).collect();
                return Err(format!("point ({}) lies in {hits} maximal simplices", shown.join(", ")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn midpoint_segment() -> Triangulation {
        Triangulation::new(
            1,
            vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)]],
            vec![vec![0, 2], vec![2, 1]],
        )
        .unwrap()
    }

    #[test]
    fn carriers() {
        let t = midpoint_segment();
        assert_eq!(t.carrier(&[0]).unwrap(), vec![0]);
        assert_eq!(t.carrier(&[2]).unwrap(), vec![0, 1]);
        assert_eq!(t.carrier(&[1, 2]).unwrap(), vec![0, 1]);
        let s = Triangulation::standard(3);
        for f in s.simplices() {
            assert_eq!(&s.carrier(f).unwrap(), f);
        }
        assert!(matches!(t.carrier(&[0, 1]), Err(ToricError::NotASimplex(_))));
    }

    #[test]
    fn stars() {
        let t = midpoint_segment();
        assert_eq!(t.star(&[2]).unwrap(), vec![vec![0, 2], vec![1, 2], vec![2]]);
        assert_eq!(t.star(&[0, 2]).unwrap(), vec![vec![0, 2]]);
        assert!(t.star(&[]).is_err());
    }

    #[test]
    fn polynomials_of_small_triangulations() {
        let t = midpoint_segment();
        assert_eq!(t.g_poly(&[2]).unwrap(), LaurentPoly::from_coeffs(&[-1, -1]));
        assert_eq!(t.h_poly(), LaurentPoly::from_coeffs(&[0, -1]));
        assert_eq!(t.h_poly().render_ascending("t"), "-t");
        for n in 0..=4 {
            let s = Triangulation::standard(n);
            assert!(s.h_poly().is_zero(), "n = {n}");
            let top: Simplex = (0..=n).collect();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.g_poly(&top).unwrap(), LaurentPoly::constant(sign));
            for f in s.simplices().filter(|f| f.len() <= n) {
                assert!(s.g_poly(f).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn invalid_triangulations() {
        let overlap = Triangulation::new(
            1,
            vec![vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 1)], vec![q(1, 2), q(1, 2)]],
            vec![vec![0, 1], vec![0, 2]],
        );
        assert!(overlap.is_err());
        let off = Triangulation::new(1, vec![vec![q(1, 1), q(1, 1)]], vec![vec![0]]);
        assert!(off.is_err());
    }

    #[test]
    fn random_subdivisions_are_palindromic_covers() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=3 {
            for steps in 1..=4 {
                let t = Triangulation::random_subdivision(n, steps, &mut rng);
                t.check_cover(20, &mut rng).unwrap();
                assert!(t.h_palindromic(), "{t:?}");
                for f in t.simplices() {
                    assert!(t.g_palindromic(f).unwrap());
                }
            }
        }
    }

    #[test]
    fn carrier_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = Triangulation::random_subdivision(2, 4, &mut rng);
        for a in t.simplices() {
            for b in t.star(a).unwrap() {
                let ca = t.carrier(a).unwrap();
                let cb = t.carrier(&b).unwrap();
                assert!(ca.iter().all(|v| cb.contains(v)));
            }
        }
    }
}
