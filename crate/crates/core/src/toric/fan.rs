use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ToricError;
use crate::covers::intmat::{self, Mat};
use crate::grothring::{GrothClass, LaurentPoly, StratumSymbol};

/// A fan of simplicial cones in `Z^dim`. Cones are sorted ray-index sets;
/// only the maximal ones are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialFan {
    dim: usize,
    rays: Mat,
    maximal: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RefineStrategy {
    /// Subdivide at the parallelepiped point with the smallest coordinate sum
    /// in the ray basis.
    #[default]
    MinSum,
    /// Subdivide at the point whose largest coordinate is smallest, then
    /// blow up the first maximal cone at the sum of its rays. The extra step
    /// keeps the result smooth and distinct from the `MinSum` refinement.
    MinMax,
}

fn rank(rows: &Mat) -> usize {
    if rows.is_empty() {
        return 0;
    }
    intmat::hnf(rows).len()
}

fn subsets(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..1 << s.len())
        .map(move |mask| s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect())
}

fn sign_pow(sign_exp: usize, k: usize) -> LaurentPoly {
    let p = LaurentPoly::l_minus_one().pow(k as u32);
    if sign_exp.is_multiple_of(2) {
        p
    } else {
        -p
    }
}

fn orbit_label(prefix: &str, cone: &[usize]) -> String {
    if cone.is_empty() {
        return format!("{prefix}_0");
    }
    let ids: Vec<String> = cone.iter().map(|i| (i + 1).to_string()).collect();
    format!("{prefix}_{}", ids.join(","))
}

impl SimplicialFan {
    pub fn new(dim: usize, rays: Mat, maximal: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        let bad = |m: String| Err(ToricError::InvalidFan(m));
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return bad(format!("ray {i} has {} entries, expected {dim}", r.len()));
            }
            if intmat::gcd_all(r) != 1 {
                return bad(format!("ray {i} is zero or not primitive"));
            }
        }
        if rays.iter().collect::<BTreeSet<_>>().len() != rays.len() {
            return bad("repeated ray".into());
        }
        let mut cones: Vec<Vec<usize>> = maximal
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        cones.sort();
        cones.dedup();
        for c in &cones {
            if let Some(&i) = c.iter().find(|&&i| i >= rays.len()) {
                return bad(format!("unknown ray {i}"));
            }
            let rows: Mat = c.iter().map(|&i| rays[i].clone()).collect();
            if rank(&rows) != c.len() {
                return bad(format!("cone {c:?} is not simplicial"));
            }
        }
        let keep: Vec<Vec<usize>> = cones
            .iter()
            .filter(|c| {
                !cones.iter().any(|d| d.len() > c.len() && c.iter().all(|i| d.binary_search(i).is_ok()))
            })
            .cloned()
            .collect();
        if keep.is_empty() {
            return Ok(Self { dim, rays, maximal: vec![Vec::new()] });
        }
        Ok(Self { dim, rays, maximal: keep })
    }

    /// The fan of faces of the cone spanned by `rays`.
    pub fn cone(rays: Mat) -> Result<Self, ToricError> {
        let dim = rays.first().map_or(0, Vec::len);
        let all = (0..rays.len()).collect();
        Self::new(dim, rays, vec![all])
    }

    /// The fan of `A^k`: the positive orthant.
    pub fn affine_space(k: usize) -> Self {
        Self::cone(intmat::identity(k)).expect("orthant is a cone")
    }

    /// The fan `{0}` of the torus `G_m^k`.
    pub fn torus(k: usize) -> Self {
        Self { dim: k, rays: Vec::new(), maximal: vec![Vec::new()] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &Mat {
        &self.rays
    }

    pub fn maximal(&self) -> &[Vec<usize>] {
        &self.maximal
    }

    /// Every cone including `{0}`, sorted.
    pub fn all_cones(&self) -> Vec<Vec<usize>> {
        let set: BTreeSet<Vec<usize>> = self.maximal.iter().flat_map(|c| subsets(c)).collect();
        set.into_iter().collect()
    }

    fn cone_matrix(&self, c: &[usize]) -> Mat {
        c.iter().map(|&i| self.rays[i].clone()).collect()
    }

    /// Whether every maximal cone is full-dimensional with determinant ±1.
    pub fn is_smooth(&self) -> bool {
        self.maximal.iter().all(|c| c.len() == self.dim && intmat::det(&self.cone_matrix(c)).abs() == 1)
    }

    /// `Σ_τ (L-1)^{dim - |τ|} [O_τ]`, one orbit symbol per cone.
    pub fn toric_class(&self) -> GrothClass {
        self.all_cones()
            .iter()
            .map(|c| {
                let sym = StratumSymbol::new(orbit_label("O", c), "X").with_dim((self.dim - c.len()) as u32);
                GrothClass::term(LaurentPoly::l_minus_one().pow((self.dim - c.len()) as u32), sym)
            })
            .sum()
    }

    /// Checks that this fan refines the full-dimensional cone spanned by
    /// `cone`: every ray lies in it, every maximal cone is full-dimensional,
    /// the cones fill it (volume of the slice where the coordinate sum
    /// is at most one) and sampled interior points lie in exactly one cone.
    pub fn check_refines(&self, cone: &Mat, samples: usize, seed: u64) -> Result<(), ToricError> {
        let bad = |m: String| Err(ToricError::NotARefinement(m));
        let k = cone.len();
        let frame = Frame::new(cone)?;
        if self.dim != k {
            return bad(format!("fan lives in rank {}, cone in rank {k}", self.dim));
        }
        let coords: Vec<Vec<BigRational>> = self.rays.iter().map(|r| frame.coords(r)).collect();
        for (i, c) in coords.iter().enumerate() {
            if c.iter().any(Signed::is_negative) {
                return bad(format!("ray {:?} leaves the cone", self.rays[i]));
            }
        }
        let mut volume = BigRational::zero();
        for m in &self.maximal {
            if m.len() != k {
                return bad(format!("cone {m:?} is not full-dimensional"));
            }
            let d = intmat::det(&self.cone_matrix(m)).abs();
            let mut v = BigRational::from_integer(d.into());
            for &i in m {
                v /= coords[i].iter().sum::<BigRational>();
            }
            volume += v;
        }
        if volume != BigRational::from_integer(frame.det.abs().into()) {
            return bad("cones do not fill the cone".into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let w: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=97)).collect();
            let p = intmat::vec_mul(&w, cone);
            let mut hits = 0;
            let mut degenerate = false;
            for m in &self.maximal {
                let lam = Frame::new(&self.cone_matrix(m))?.coords(&p);
                if lam.iter().all(|x| !x.is_negative()) {
                    if lam.iter().any(Zero::is_zero) {
                        degenerate = true;
                    } else {
                        hits += 1;
                    }
                }
            }
            if !degenerate && hits != 1 {
                return bad(format!("{p:?} lies in {hits} cones"));
            }
        }
        Ok(())
    }
}

/// Coordinates with respect to the rays of a full-dimensional simplicial cone.
struct Frame {
    adj: Mat,
    det: i64,
}

impl Frame {
    fn new(rays: &Mat) -> Result<Self, ToricError> {
        let k = rays.len();
        if rays.iter().any(|r| r.len() != k) {
            return Err(ToricError::InvalidFan("cone is not full-dimensional".into()));
        }
        let det = intmat::det(rays);
        if det == 0 {
            return Err(ToricError::InvalidFan("cone rays are dependent".into()));
        }
        Ok(Self { adj: intmat::adjugate(rays), det })
    }

    /// `λ` with `v = Σ λ_i r_i`, scaled by `|det|` so it stays integral.
    fn scaled(&self, v: &[i64]) -> Vec<i64> {
        let s = self.det.signum();
        intmat::vec_mul(v, &self.adj).into_iter().map(|x| x * s).collect()
    }

    fn coords(&self, v: &[i64]) -> Vec<BigRational> {
        let d = BigInt::from(self.det.abs());
        self.scaled(v).into_iter().map(|x| BigRational::new(x.into(), d.clone())).collect()
    }
}

/// A nonzero lattice point of the half-open fundamental parallelepiped of a
/// full-dimensional cone chosen by `strategy`, ties broken
/// lexicographically; `None` for smooth cones. The points are enumerated as coset
/// representatives of the ray lattice read off its Hermite normal form.
fn parallelepiped_point(rays: &Mat, strategy: RefineStrategy) -> Option<Vec<i64>> {
    let frame = Frame::new(rays).ok()?;
    let d = frame.det.abs();
    if d == 1 {
        return None;
    }
    let k = rays.len();
    let h = intmat::hnf(rays);
    let pivots: Vec<i64> = (0..k).map(|j| h[j][j]).collect();
    let mut x = vec![0i64; k];
    let mut best: Option<((i64, i64), Vec<i64>)> = None;
    loop {
        let mut j = k;
        loop {
            if j == 0 {
                return best.map(|(_, p)| p);
            }
            j -= 1;
            if x[j] + 1 < pivots[j] {
                x[j] += 1;
                break;
            }
            x[j] = 0;
        }
        let lam: Vec<i64> = frame.scaled(&x).into_iter().map(|s| s.rem_euclid(d)).collect();
        let p: Vec<i64> = intmat::vec_mul(&lam, rays).into_iter().map(|v| v / d).collect();
        let sum: i64 = lam.iter().sum();
        let max = lam.iter().copied().max().unwrap_or(0);
        let key = match strategy {
            RefineStrategy::MinSum => (sum, max),
            RefineStrategy::MinMax => (max, sum),
        };
        if best.as_ref().is_none_or(|(k, b)| (key, &p) < (*k, b)) {
            best = Some((key, p));
        }
    }
}

/// Star subdivision at a new ray `w` in the relative interior of `face`.
fn subdivide(rays: &mut Mat, maximal: &mut BTreeSet<Vec<usize>>, face: &[usize], w: Vec<i64>) {
    let b = rays.len();
    rays.push(w);
    let (hit, rest): (Vec<_>, Vec<_>) =
        std::mem::take(maximal).into_iter().partition(|m| face.iter().all(|i| m.binary_search(i).is_ok()));
    *maximal = rest.into_iter().collect();
    for m in hit {
        for v in face {
            let mut n: Vec<usize> = m.iter().copied().filter(|x| x != v).collect();
            n.push(b);
            n.sort_unstable();
            maximal.insert(n);
        }
    }
}

/// A smooth refinement of a fan of full-dimensional simplicial cones by
/// repeated stellar subdivision at parallelepiped points.
pub fn stellar_refine(fan: &SimplicialFan, strategy: RefineStrategy) -> Result<SimplicialFan, ToricError> {
    if fan.maximal.iter().any(|c| c.len() != fan.dim) {
        return Err(ToricError::InvalidFan("refinement needs full-dimensional cones".into()));
    }
    let mut rays = fan.rays.clone();
    let mut maximal: BTreeSet<Vec<usize>> = fan.maximal.iter().cloned().collect();
    loop {
        let mut witness = None;
        for c in &maximal {
            let m: Mat = c.iter().map(|&i| rays[i].clone()).collect();
            if let Some(p) = parallelepiped_point(&m, strategy) {
                witness = Some((c.clone(), m, p));
                break;
            }
        }
        let Some((c, m, p)) = witness else { break };
        let w = intmat::primitive(&p);
        let lam = Frame::new(&m)?.scaled(&w);
        let face: Vec<usize> = c.iter().zip(&lam).filter(|(_, &x)| x > 0).map(|(&i, _)| i).collect();
        subdivide(&mut rays, &mut maximal, &face, w);
    }
    if strategy == RefineStrategy::MinMax && fan.dim >= 2 {
        let c = maximal.first().expect("nonempty fan").clone();
        let w: Vec<i64> = (0..fan.dim).map(|j| c.iter().map(|&i| rays[i][j]).sum()).collect();
        subdivide(&mut rays, &mut maximal, &c, intmat::primitive(&w));
    }
    SimplicialFan::new(fan.dim, rays, maximal.into_iter().collect())
}

/// `φ(σ)` for every cone of `sigma`, as a subset of `cone`'s ray indices:
/// the smallest face containing all rays of `σ`.
fn phi_map(sigma: &SimplicialFan, cone: &Mat) -> Result<Vec<(Vec<usize>, Vec<usize>)>, ToricError> {
    let frame = Frame::new(cone)?;
    let mut support = Vec::with_capacity(sigma.rays.len());
    for r in &sigma.rays {
        let lam = frame.scaled(r);
        if lam.iter().any(|&x| x < 0) {
            return Err(ToricError::NotARefinement(format!("ray {r:?} leaves the cone")));
        }
        support.push(lam);
    }
    Ok(sigma
        .all_cones()
        .into_iter()
        .map(|c| {
            let phi = (0..cone.len()).filter(|&j| c.iter().any(|&i| support[i][j] > 0)).collect();
            (c, phi)
        })
        .collect())
}

/// `p^{τ'}(t) = Σ_{σ : φ(σ) ⊆ τ'} (-1)^{|φ(σ)|} (t-1)^{|φ(σ)| - |σ|}`, with
/// `face` a set of indices into the rays of `cone`.
pub fn p_poly(sigma: &SimplicialFan, cone: &Mat, face: &[usize]) -> Result<LaurentPoly, ToricError> {
    Ok(phi_map(sigma, cone)?
        .iter()
        .filter(|(_, phi)| phi.iter().all(|j| face.contains(j)))
        .map(|(c, phi)| sign_pow(phi.len(), phi.len() - c.len()))
        .sum())
}

/// Rays of the cone `cone / span(face)` in the quotient lattice.
pub fn quotient_cone(cone: &Mat, face: &[usize]) -> Mat {
    let k = cone.len();
    let cols: Mat = (0..k).map(|j| face.iter().map(|&i| cone[i][j]).collect()).collect();
    let u = if face.is_empty() { intmat::identity(k) } else { intmat::echelon_with_transform(&cols).1 };
    let r = face.len();
    let rays: Mat = (0..k)
        .filter(|i| !face.contains(i))
        .map(|i| intmat::primitive(&intmat::mul_vec(&u, &cone[i])[r..]))
        .collect();
    // a lattice automorphism that keeps the entries small
    intmat::transpose(&intmat::hnf(&intmat::transpose(&rays)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricDualityReport {
    pub rank: usize,
    pub multiplicity: i64,
    pub pass: bool,
    pub refinement_rays: usize,
    pub refinement_cones: usize,
    /// `(face, p(t))` for every nonempty face, 1-based ray labels.
    pub p_polys: Vec<(String, String)>,
    /// `D([Y] - R)` and `L^{-k}([Y] - R)` where `[X] = [Y] - R`.
    pub lhs: String,
    pub rhs: String,
    /// Number of cones checked, this one and all quotient cones.
    pub cones_checked: usize,
    pub failure: Option<String>,
}

/// Replays the induction for `D[X] = L^{-k}[X]` on the affine toric variety
/// of a full-dimensional simplicial cone.
pub fn check_toric_duality(cone: &Mat, strategy: RefineStrategy) -> Result<ToricDualityReport, ToricError> {
    let k = cone.len();
    let multiplicity = Frame::new(cone)?.det.abs();
    let fan = SimplicialFan::cone(cone.clone())?;
    let sigma = stellar_refine(&fan, strategy)?;
    let mut failure: Option<String> = None;
    let mut note = |m: String| {
        failure.get_or_insert(m);
    };
    if !sigma.is_smooth() {
        note("refinement is not smooth".into());
    }
    sigma.check_refines(cone, 16, k as u64)?;

    let faces: Vec<Vec<usize>> = subsets(&(0..k).collect::<Vec<_>>()).collect();
    let v_sym = |t: &[usize]| {
        StratumSymbol::new(orbit_label("V", t), "X").with_dim((k - t.len()) as u32).proper_smooth(true)
    };
    let y_sym = StratumSymbol::new("Y", "X").with_dim(k as u32).proper_smooth(true);

    // [Y] - [X] in the orbit basis, then rewritten through closures
    let mut orbit: BTreeMap<Vec<usize>, LaurentPoly> = BTreeMap::new();
    for (c, phi) in phi_map(&sigma, cone)? {
        *orbit.entry(phi.clone()).or_insert_with(LaurentPoly::zero) +=
            &LaurentPoly::l_minus_one().pow((phi.len() - c.len()) as u32);
    }
    for f in &faces {
        *orbit.entry(f.clone()).or_insert_with(LaurentPoly::zero) -= &LaurentPoly::one();
    }
    let mut r_from_orbits = GrothClass::zero();
    for (tau, c) in &orbit {
        for t in faces.iter().filter(|t| tau.iter().all(|i| t.contains(i))) {
            let sign = if (t.len() - tau.len()) % 2 == 0 { c.clone() } else { -c };
            r_from_orbits.add_term(sign, v_sym(t));
        }
    }

    let mut r = GrothClass::zero();
    let mut p_polys = Vec::new();
    let mut cones_checked = 1;
    for t in faces.iter().filter(|t| !t.is_empty()) {
        let p = p_poly(&sigma, cone, t)?;
        if !p.is_palindromic(-(t.len() as i64)) {
            note(format!("p for face {t:?} is not palindromic: {}", p.render_ascending("t")));
        }
        let sign = if t.len() % 2 == 0 { p.clone() } else { -&p };
        r.add_term(sign, v_sym(t));
        let label: Vec<String> = t.iter().map(|i| (i + 1).to_string()).collect();
        p_polys.push((label.join(","), p.render_ascending("t")));
        if t.len() < k {
            let sub = check_toric_duality(&quotient_cone(cone, t), strategy)?;
            cones_checked += sub.cones_checked;
            if !sub.pass {
                note(format!("quotient by face {t:?}: {}", sub.failure.unwrap_or_default()));
            }
        }
    }
    if r != r_from_orbits {
        note(format!("[Y] - [X] = {r_from_orbits}, expected {r}"));
    }
    let lk = LaurentPoly::l_pow(-(k as i64));
    let dr = r.dualize().expect("closure symbols are duality-eligible");
    if dr != r.scale(&lk) {
        note(format!("D(R) = {dr}, expected {}", r.scale(&lk)));
    }
    let x = GrothClass::symbol(y_sym) - r;
    let lhs = x.dualize().expect("all symbols are duality-eligible");
    let rhs = x.scale(&lk);
    if lhs != rhs {
        note("duality does not propagate to [X]".into());
    }
    Ok(ToricDualityReport {
        rank: k,
        multiplicity,
        pass: failure.is_none(),
        refinement_rays: sigma.rays.len(),
        refinement_cones: sigma.maximal.len(),
        p_polys,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        cones_checked,
        failure,
    })
}

/// Canonical form of a cone under `GL_k(Z)` and reordering of rays.
fn canonical(cone: &Mat) -> Mat {
    let k = cone.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Mat> = None;
    loop {
        let cols: Mat = (0..k).map(|j| perm.iter().map(|&i| cone[i][j]).collect()).collect();
        let h = intmat::hnf(&cols);
        if best.as_ref().is_none_or(|b| h < *b) {
            best = Some(h);
        }
        // next permutation
        let Some(i) = (1..k).rev().find(|&i| perm[i - 1] < perm[i]) else { break };
        let j = (i..k).rev().find(|&j| perm[j] > perm[i - 1]).expect("successor exists");
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
    best.unwrap_or_default()
}

/// `count` pairwise inequivalent full-dimensional simplicial cones of rank
/// `1..=max_rank` with ray entries in `[-max_entry, max_entry]`.
pub fn random_cones(seed: u64, count: usize, max_rank: usize, max_entry: i64) -> Vec<Mat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let k = rng.gen_range(1..=max_rank);
        let rays: Mat = (0..k)
            .map(|_| {
                let v: Vec<i64> = (0..k).map(|_| rng.gen_range(-max_entry..=max_entry)).collect();
                intmat::primitive(&v)
            })
            .collect();
        if intmat::det(&rays) == 0 || !seen.insert(canonical(&rays)) {
            continue;
        }
        out.push(rays);
    }
    out
}
