//! Instance grids and batch checking.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Component, ResolutionData};
use crate::par::{self, ExecMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    SelfDuality,
    FunctionalNaive,
    FunctionalSPrime,
    PowerRule(u64),
    /// `-S(f)(∞)` against the stratum formula.
    NearbyConsistency,
}

#[derive(Debug, Clone, Default)]
pub struct GridSummary {
    pub checked: usize,
    pub failures: Vec<(ResolutionData, String)>,
}

impl GridSummary {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn components(mn: &[(u64, u64)]) -> Vec<Component> {
    mn.iter().enumerate().map(|(i, &(m, n))| Component::new(format!("{}", i + 1), m, n)).collect()
}

/// Every instance with `d <= max_d`, at most `max_k` components and
/// `1 <= m_i, n_i <= max_mn`.
pub fn exhaustive_grid(max_d: u32, max_k: usize, max_mn: u64) -> Vec<ResolutionData> {
    let pairs: Vec<(u64, u64)> = (1..=max_mn).flat_map(|m| (1..=max_mn).map(move |n| (m, n))).collect();
    let mut tuples: Vec<Vec<(u64, u64)>> = vec![Vec::new()];
    let mut all = tuples.clone();
    for _ in 0..max_k {
        tuples = tuples
            .iter()
            .flat_map(|t| {
                pairs.iter().map(move |&p| {
                    let mut t = t.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
        all.extend(tuples.iter().cloned());
    }
    let mut out = Vec::new();
    for d in 1..=max_d {
        for t in &all {
            out.push(ResolutionData::new(d, components(t)).expect("grid data is valid"));
        }
    }
    out
}

/// `count` seeded random instances with `d` in `1..=max_d`, up to `max_k`
/// components and `m_i, n_i <= max_mn`.
pub fn random_grid(seed: u64, count: usize, max_d: u32, max_k: usize, max_mn: u64) -> Vec<ResolutionData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let d = rng.gen_range(1..=max_d);
            let k = rng.gen_range(0..=max_k);
            let mn: Vec<(u64, u64)> =
                (0..k).map(|_| (rng.gen_range(1..=max_mn), rng.gen_range(1..=max_mn))).collect();
            ResolutionData::new(d, components(&mn)).expect("random data is valid")
        })
        .collect()
}

fn check_one(data: &ResolutionData, kind: CheckKind) -> Result<(), String> {
    let report = match kind {
        CheckKind::SelfDuality => data.check_self_duality(),
        CheckKind::FunctionalNaive => data.check_functional_naive(),
        CheckKind::FunctionalSPrime => data.check_functional_sprime(),
        CheckKind::PowerRule(m) => Ok(data.check_power_rule(m)),
        CheckKind::NearbyConsistency => return data.nearby_fiber().map(|_| ()).map_err(|e| e.to_string()),
    };
    match report {
        Ok(r) if r.pass => Ok(()),
        Ok(r) => Err(format!("{}: {} != {}", r.identity, r.lhs, r.rhs)),
        Err(e) => Err(e.to_string()),
    }
}

/// Runs one identity over a batch; failures come back in input order.
pub fn run_checks(mode: ExecMode, data: &[ResolutionData], kind: CheckKind) -> GridSummary {
    let results = par::map_collect(mode, data, |d| check_one(d, kind));
    let failures = data.iter().zip(results).filter_map(|(d, r)| r.err().map(|e| (d.clone(), e))).collect();
    GridSummary { checked: data.len(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(exhaustive_grid(3, 3, 3).len(), 3 * (1 + 9 + 81 + 729));
        assert_eq!(exhaustive_grid(1, 1, 2).len(), 5);
        let r = random_grid(7, 50, 5, 5, 9);
        assert_eq!(r.len(), 50);
        assert_eq!(r, random_grid(7, 50, 5, 5, 9));
        assert!(r.iter().all(|d| d.components().len() <= 5 && d.d() <= 5));
    }

    #[test]
    fn small_grid_passes_in_both_modes() {
        let g = exhaustive_grid(2, 2, 2);
        for kind in [
            CheckKind::SelfDuality,
            CheckKind::FunctionalNaive,
            CheckKind::FunctionalSPrime,
            CheckKind::PowerRule(2),
            CheckKind::NearbyConsistency,
        ] {
            let a = run_checks(ExecMode::Sequential, &g, kind);
            let b = run_checks(ExecMode::Parallel, &g, kind);
            assert!(a.passed(), "{kind:?}: {:?}", a.failures.first());
            assert_eq!(a.checked, b.checked);
            assert_eq!(a.failures.len(), b.failures.len());
        }
    }
}
