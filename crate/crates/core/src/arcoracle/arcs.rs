use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::OracleError;
use crate::par::{self, ExecMode};
use crate::resolution::ResolutionData;

/// Largest `q^{d(n+1)}` the enumerators accept.
pub const ARC_BUDGET: u128 = 1_000_000_000;
/// Budget of the plain nested-loop enumerator.
pub const NAIVE_BUDGET: u128 = 2_000_000;

/// `f = x_1^{m_1} ... x_k^{m_k}` on `A^d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialFunction {
    d: u32,
    exps: Vec<u64>,
}

impl MonomialFunction {
    pub fn new(d: u32, exps: Vec<u64>) -> Result<Self, OracleError> {
        if exps.is_empty() || exps.len() > d as usize || exps.contains(&0) {
            return Err(OracleError::InvalidFunction(format!(
                "need 1 <= k <= d and positive exponents, got d = {d}, exps = {exps:?}"
            )));
        }
        Ok(Self { d, exps })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// The identity resolution: coordinate hyperplanes with `n_i = 1`.
    pub fn resolution_data(&self) -> ResolutionData {
        ResolutionData::monomial(self.d, &self.exps).expect("monomial data is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcMode {
    /// `ord_t f(γ) = n`.
    Ord,
    /// `f(γ) ≡ t^n mod t^{n+1}`.
    Monic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArcCountTask {
    pub q: u32,
    pub n: u32,
    pub mode: ArcMode,
    pub function: MonomialFunction,
}

fn check_budget(q: u32, d: u32, n: u32, budget: u128) -> Result<(), OracleError> {
    let size = u128::from(q).checked_pow(d * (n + 1));
    match size {
        Some(s) if s <= budget => Ok(()),
        _ => Err(OracleError::BudgetExceeded { q, exponent: d * (n + 1), budget }),
    }
}

/// Truncated series `Σ c_i t^i mod t^{len}`.
type Series = Vec<u8>;

fn series_mul(f: &Field, a: &[u8], b: &[u8]) -> Series {
    let n = a.len();
    let mut out = vec![0u8; n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b[..n - i].iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

fn series_pow(f: &Field, a: &[u8], m: u64) -> Series {
    let mut acc = vec![0u8; a.len()];
    acc[0] = 1;
    for _ in 0..m {
        acc = series_mul(f, &acc, a);
    }
    acc
}

fn decode(mut idx: u64, q: u64, len: usize) -> Series {
    (0..len)
        .map(|_| {
            let c = (idx % q) as u8;
            idx /= q;
            c
        })
        .collect()
}

fn order(s: &[u8]) -> Option<usize> {
    s.iter().position(|&c| c != 0)
}

fn satisfies(mode: ArcMode, n: usize, s: &[u8]) -> bool {
    match mode {
        ArcMode::Ord => order(s) == Some(n),
        ArcMode::Monic => s[..n].iter().all(|&c| c == 0) && s[n] == 1,
    }
}

/// Histogram of `x^m mod t^{n+1}` over all `x` in `F_q[t]/t^{n+1}`, built in
/// one chunk per constant coefficient and merged in order.
fn power_histogram(f: &Field, len: usize, m: u64, exec: ExecMode) -> HashMap<Series, u64> {
    let q = u64::from(f.q());
    let per = q.pow(len as u32 - 1);
    let leads: Vec<u64> = (0..q).collect();
    let parts = par::map_collect(exec, &leads, |&lead| {
        let mut h: HashMap<Series, u64> = HashMap::new();
        for rest in 0..per {
            let x = decode(lead + q * rest, q, len);
            *h.entry(series_pow(f, &x, m)).or_default() += 1;
        }
        h
    });
    let mut out = HashMap::new();
    for part in parts {
        for (k, v) in part {
            *out.entry(k).or_default() += v;
        }
    }
    out
}

/// Tallies the arcs of `L_n(A^d)` by `class(f(γ))`: enumerates every
/// coefficient tuple of each variable, convolves the value distributions of
/// `x_i^{m_i}` and classifies the products. With `target`, arcs whose value
/// has a different order are never classified.
fn tally(
    f: &Field,
    func: &MonomialFunction,
    n: u32,
    exec: ExecMode,
    target: Option<usize>,
    classes: usize,
    class: impl Fn(&[u8]) -> Option<usize> + Sync,
) -> Vec<u64> {
    let len = n as usize + 1;
    let q = u64::from(f.q());
    let k = func.exps.len();
    let free = q.pow((func.d as usize - k) as u32 * len as u32);
    if k == 1 {
        // one factor: classify each arc directly instead of storing values
        let per = q.pow(len as u32 - 1);
        let leads: Vec<u64> = (0..q).collect();
        let parts = par::map_collect(exec, &leads, |&lead| {
            let mut out = vec![0u64; classes];
            for rest in 0..per {
                let x = decode(lead + q * rest, q, len);
                if let Some(i) = class(&series_pow(f, &x, func.exps[0])) {
                    out[i] += 1;
                }
            }
            out
        });
        return merge(parts, classes, free);
    }
    let mut hists: Vec<HashMap<Series, u64>> = Vec::with_capacity(k);
    let mut cache: HashMap<u64, HashMap<Series, u64>> = HashMap::new();
    for &m in &func.exps {
        let h = cache.entry(m).or_insert_with(|| power_histogram(f, len, m, exec));
        hists.push(h.clone());
    }
    let mut acc: Vec<(Series, u64)> = {
        let mut one = vec![0u8; len];
        one[0] = 1;
        vec![(one, 1)]
    };
    let last = hists.pop().expect("at least one factor");
    for h in &hists {
        let mut next: HashMap<Series, u64> = HashMap::new();
        for (s, c) in &acc {
            for (t, d) in h {
                *next.entry(series_mul(f, s, t)).or_default() += c * d;
            }
        }
        acc = next.into_iter().collect();
        acc.sort();
    }
    // bucket the last factor by order; with `target` set only products of
    // that order are classified, since orders add over a field
    let mut buckets: Vec<Vec<(Series, u64)>> = vec![Vec::new(); len + 1];
    for (t, d) in last {
        buckets[order(&t).unwrap_or(len)].push((t, d));
    }
    let partial = par::map_collect(exec, &acc, |(s, c)| {
        let mut out = vec![0u64; classes];
        let o = order(s).unwrap_or(len);
        let wanted: Vec<&Vec<(Series, u64)>> = match target {
            Some(n) if o <= n => vec![&buckets[n - o]],
            Some(_) => Vec::new(),
            None => buckets.iter().collect(),
        };
        for (t, d) in wanted.into_iter().flatten() {
            if let Some(i) = class(&series_mul(f, s, t)) {
                out[i] += c * d;
            }
        }
        out
    });
    merge(partial, classes, free)
}

fn merge(parts: Vec<Vec<u64>>, classes: usize, factor: u64) -> Vec<u64> {
    let mut out = vec![0u64; classes];
    for p in parts {
        for (o, x) in out.iter_mut().zip(p) {
            *o += x;
        }
    }
    out.into_iter().map(|x| x * factor).collect()
}

/// Number of `γ ∈ L_n(A^d)(F_q)` with `ord_t f(γ) = n` (ord mode) or
/// `f(γ) ≡ t^n` (monic mode).
pub fn enumerate_arcs(task: &ArcCountTask, exec: ExecMode) -> Result<u64, OracleError> {
    let f = Field::new(task.q)?;
    check_budget(task.q, task.function.d, task.n, ARC_BUDGET)?;
    let n = task.n as usize;
    let mode = task.mode;
    Ok(tally(&f, &task.function, task.n, exec, Some(n), 1, |s| satisfies(mode, n, s).then_some(0))[0])
}

/// The same count by plain nested iteration over all `d(n+1)` coefficients.
pub fn enumerate_arcs_naive(task: &ArcCountTask) -> Result<u64, OracleError> {
    let f = Field::new(task.q)?;
    let d = task.function.d as usize;
    check_budget(task.q, task.function.d, task.n, NAIVE_BUDGET)?;
    let len = task.n as usize + 1;
    let q = u64::from(task.q);
    let total = q.pow((d * len) as u32);
    let mut count = 0;
    for idx in 0..total {
        let coeffs = decode(idx, q, d * len);
        let mut value = vec![0u8; len];
        value[0] = 1;
        for (i, &m) in task.function.exps.iter().enumerate() {
            let x = &coeffs[i * len..(i + 1) * len];
            value = series_mul(&f, &value, &series_pow(&f, x, m));
        }
        if satisfies(task.mode, task.n as usize, &value) {
            count += 1;
        }
    }
    Ok(count)
}

/// Arcs of `L_n(A^d)(F_q)` by `ord_t f(γ)`: entries `0..=n`, then the number
/// with `f(γ) ≡ 0 mod t^{n+1}`.
pub fn count_by_order(
    q: u32,
    n: u32,
    func: &MonomialFunction,
    exec: ExecMode,
) -> Result<Vec<u64>, OracleError> {
    let f = Field::new(q)?;
    check_budget(q, func.d, n, ARC_BUDGET)?;
    let len = n as usize + 1;
    Ok(tally(&f, func, n, exec, None, len + 1, |s| Some(order(s).unwrap_or(len))))
}
