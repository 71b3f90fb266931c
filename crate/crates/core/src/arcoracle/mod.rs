//! Brute-force point counts over small finite fields: truncated arcs of
//! monomial functions, the strata of their identity resolution, and a
//! comparison of both against the series coefficients of the zeta functions.
//!
//! Counts forget the `μ̂`-action. The arc space `L_n` carries measure
//! `L^{-nd}` in the zeta functions, so comparisons multiply the series
//! coefficient by `q^{nd}`.

mod arcs;
mod field;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

pub use arcs::{
    count_by_order, enumerate_arcs, enumerate_arcs_naive, ArcCountTask, ArcMode, MonomialFunction,
    ARC_BUDGET, NAIVE_BUDGET,
};
pub use field::Field;

use crate::grothring::{GrothError, LaurentPoly, StratumSymbol};
use crate::par::ExecMode;
use crate::ratfunc::RatError;

/// Largest `q^{d+1}` accepted by [`strata_counts`].
pub const STRATA_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("q^{exponent} with q = {q} exceeds the enumeration budget {budget}")]
    BudgetExceeded { q: u32, exponent: u32, budget: u128 },
    #[error("F_{0} is not supported (primes below 256, prime powers up to 9)")]
    UnsupportedField(u32),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("F_{0} has characteristic 2")]
    EvenCharacteristic(u32),
    #[error("{0} is not a squarefree cubic over the prime field")]
    NotSquarefree(String),
    #[error("{cubic} vanishes at every point of F_{q}")]
    EmptyDomain { q: u32, cubic: String },
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Groth(#[from] GrothError),
}

/// Point counts of every stratum symbol of the identity resolution of `f`:
/// naive open and closed strata and the covers `Ẽ°_I`.
pub fn strata_counts(q: u32, func: &MonomialFunction) -> Result<BTreeMap<StratumSymbol, u64>, OracleError> {
    let field = Field::new(q)?;
    let d = func.d() as usize;
    let k = func.exps().len();
    match u128::from(q).checked_pow(func.d() + 1) {
        Some(s) if s <= STRATA_BUDGET => {}
        _ => return Err(OracleError::BudgetExceeded { q, exponent: func.d() + 1, budget: STRATA_BUDGET }),
    }
    let data = func.resolution_data();
    let naive = data.naive_context();
    let equi = data.equivariant_context();
    let points: Vec<Vec<u8>> = (0..u64::from(q).pow(d as u32))
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let c = (i % u64::from(q)) as u8;
                    i /= u64::from(q);
                    c
                })
                .collect()
        })
        .collect();
    let zero_set = |x: &[u8]| -> u32 { (0..k).filter(|&i| x[i] == 0).fold(0, |m, i| m | 1 << i) };
    let mut out = BTreeMap::new();
    for &mask in naive.masks() {
        let open = points.iter().filter(|x| zero_set(x) == mask).count() as u64;
        let closed = points.iter().filter(|x| zero_set(x) & mask == mask).count() as u64;
        out.insert(naive.open(mask), open);
        out.insert(naive.complete(mask), closed);
    }
    for &mask in equi.masks() {
        let m_i = equi.mu_order(mask);
        let mut count = 0u64;
        for x in points.iter().filter(|x| zero_set(x) == mask) {
            let unit = (0..k)
                .filter(|i| mask >> i & 1 == 0)
                .fold(1u8, |acc, i| field.mul(acc, field.pow(x[i], func.exps()[i])));
            count += field.elements().filter(|&z| z != 0 && field.mul(field.pow(z, m_i), unit) == 1).count()
                as u64;
        }
        out.insert(equi.open(mask), count);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonRow {
    pub n: u32,
    pub mode: ArcMode,
    /// `q^{nd}` times the specialized series coefficient.
    pub predicted: String,
    /// Arc count; `None` when the row exceeds the enumeration budget.
    pub counted: Option<u64>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaComparison {
    pub q: u32,
    pub function: MonomialFunction,
    pub rows: Vec<ComparisonRow>,
    pub pass: bool,
}

impl ZetaComparison {
    pub fn checked(&self) -> usize {
        self.rows.iter().filter(|r| r.counted.is_some()).count()
    }

    /// Aligned text table, one row per `(n, mode)`.
    pub fn render_table(&self) -> String {
        let mut s = format!("{:>3}  {:<5}  {:>12}  {:>12}  ok\n", "n", "mode", "zeta", "arcs");
        for r in &self.rows {
            let counted = r.counted.map_or_else(|| "budget".to_string(), |c| c.to_string());
            let mode = match r.mode {
                ArcMode::Ord => "ord",
                ArcMode::Monic => "monic",
            };
            let ok = match (r.counted, r.ok) {
                (None, _) => "skip",
                (_, true) => "yes",
                (_, false) => "NO",
            };
            let _ = writeln!(s, "{:>3}  {:<5}  {:>12}  {:>12}  {ok}", r.n, mode, r.predicted, counted);
        }
        s
    }
}

/// For `n <= n_max`: the naive zeta function against arcs with
/// `ord_t f = n`, and (for `n >= 1`) the equivariant one against arcs with
/// `f ≡ t^n`. Rows over the arc budget are reported but not checked.
pub fn compare_zeta(
    q: u32,
    n_max: u32,
    func: &MonomialFunction,
    exec: ExecMode,
) -> Result<ZetaComparison, OracleError> {
    let counts = strata_counts(q, func)?;
    let data = func.resolution_data();
    let naive = data.naive_zeta();
    let equi = data.equivariant_zeta();
    let d = i64::from(func.d());
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for mode in [ArcMode::Ord, ArcMode::Monic] {
            let zeta = match mode {
                ArcMode::Ord => &naive,
                ArcMode::Monic if n == 0 => continue,
                ArcMode::Monic => &equi,
            };
            let coeff = zeta.series_coefficient(u64::from(n))?.scale(&LaurentPoly::l_pow(i64::from(n) * d));
            let predicted =
                coeff.specialize_count(i64::from(q), |s| counts.get(s).map(|&c| BigInt::from(c)))?;
            let task = ArcCountTask { q, n, mode, function: func.clone() };
            let counted = match enumerate_arcs(&task, exec) {
                Ok(c) => Some(c),
                Err(OracleError::BudgetExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            let ok = counted.is_none_or(|c| BigInt::from(c) == predicted);
            rows.push(ComparisonRow { n, mode, predicted: predicted.to_string(), counted, ok });
        }
    }
    let pass = rows.iter().all(|r| r.ok);
    Ok(ZetaComparison { q, function: func.clone(), rows, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitTwistReport {
    pub q: u32,
    pub cubic: String,
    /// `#U(F_q)` with `U = {g != 0}`.
    pub domain: u64,
    /// `#(μ_2 × U)(F_q) = 2 #U`.
    pub untwisted: u64,
    /// `#{(t, x) : x ∈ U, t^2 = g(x)}`.
    pub twisted: u64,
    pub differ: bool,
}

fn render_cubic(g: &[i64; 4]) -> String {
    LaurentPoly::from_terms(g.iter().enumerate().map(|(e, &c)| (e as i64, c))).render_compact("x")
}

fn poly_trim(mut a: Vec<i64>) -> Vec<i64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Degree of `gcd(a, b)` over `F_p`; `None` when both vanish.
fn gcd_degree(a: &[i64], b: &[i64], p: i64) -> Option<usize> {
    let norm = |v: &[i64]| poly_trim(v.iter().map(|x| x.rem_euclid(p)).collect());
    let (mut a, mut b) = (norm(a), norm(b));
    while !b.is_empty() {
        let inv = (1..p).find(|x| x * b[b.len() - 1] % p == 1).expect("p is prime");
        while a.len() >= b.len() {
            let c = a[a.len() - 1] * inv % p;
            let shift = a.len() - b.len();
            for (i, y) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] - c * y).rem_euclid(p);
            }
            a = poly_trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    (!a.is_empty()).then(|| a.len() - 1)
}

/// Counts `2 #U` against the points of `t^2 = g(x)` over `U = {g != 0}` for
/// a squarefree cubic `g = g_0 + g_1 x + g_2 x^2 + g_3 x^3` over `F_q`, `q` odd.
pub fn unit_twist_experiment(q: u32, g: [i64; 4]) -> Result<UnitTwistReport, OracleError> {
    let field = Field::new(q)?;
    let p = i64::from(field.characteristic());
    if p == 2 {
        return Err(OracleError::EvenCharacteristic(q));
    }
    let cubic = render_cubic(&g);
    let deriv = [g[1], 2 * g[2], 3 * g[3]];
    if g[3].rem_euclid(p) == 0 || gcd_degree(&g, &deriv, p) != Some(0) {
        return Err(OracleError::NotSquarefree(cubic));
    }
    let coeffs: Vec<u8> = g.iter().map(|&c| field.from_int(c)).collect();
    let eval = |x: u8| coeffs.iter().rev().fold(0u8, |acc, &c| field.add(field.mul(acc, x), c));
    let domain: Vec<u8> = field.elements().filter(|&x| eval(x) != 0).collect();
    if domain.is_empty() {
        return Err(OracleError::EmptyDomain { q, cubic });
    }
    let twisted =
        domain.iter().map(|&x| field.elements().filter(|&t| field.mul(t, t) == eval(x)).count() as u64).sum();
    let untwisted = 2 * domain.len() as u64;
    Ok(UnitTwistReport {
        q,
        cubic,
        domain: domain.len() as u64,
        untwisted,
        twisted,
        differ: untwisted != twisted,
    })
}

/// [`unit_twist_experiment`] over several fields; a difference at any one
/// of them separates the two nearby fibers.
pub fn unit_twist_sweep(qs: &[u32], g: [i64; 4]) -> Vec<(u32, Result<UnitTwistReport, OracleError>)> {
    qs.iter().map(|&q| (q, unit_twist_experiment(q, g))).collect()
}
