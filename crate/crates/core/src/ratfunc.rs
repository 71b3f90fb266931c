//! Rational functions `Σ c · T^e / Π (T^-m L^n - 1)` with coefficients in
//! `Z[L, L^-1]` or in a module of Grothendieck classes.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::grothring::{GrothClass, GrothError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatError {
    #[error("not regular at T = infinity: residual terms {0}")]
    NotRegularAtInfinity(String),
    #[error("not a power series in T: coefficient of T^{0} is nonzero")]
    NotExpandable(i64),
    #[error(transparent)]
    Groth(#[from] GrothError),
}

/// Coefficients a [`TRational`] can carry: a `Z[L, L^-1]`-module with a
/// semilinear duality.
pub trait Coefficient: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &LaurentPoly) -> Self;
    fn dual(&self) -> Result<Self, GrothError>;
    fn is_one(&self) -> bool;
    /// Rendering fit for a product: `-` prefixed for a negated monomial,
    /// parenthesized when it is a sum.
    fn render_factor(&self) -> String;
}

impl Coefficient for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &LaurentPoly) -> Self {
        self * c
    }
    fn dual(&self) -> Result<Self, GrothError> {
        Ok(self.bar())
    }
    fn is_one(&self) -> bool {
        LaurentPoly::is_one(self)
    }
    fn render_factor(&self) -> String {
        let s = self.render_compact("L");
        if self.is_monomial() {
            s
        } else {
            format!("({s})")
        }
    }
}

impl Coefficient for GrothClass {
    fn zero() -> Self {
        GrothClass::zero()
    }
    fn is_zero(&self) -> bool {
        GrothClass::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &LaurentPoly) -> Self {
        GrothClass::scale(self, c)
    }
    fn dual(&self) -> Result<Self, GrothError> {
        self.dualize()
    }
    fn is_one(&self) -> bool {
        false
    }
    fn render_factor(&self) -> String {
        self.render_factor()
    }
}

/// The factor `T^-m L^n - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct DenomFactor {
    pub m: u64,
    pub n: u64,
}

impl DenomFactor {
    pub fn new(m: u64, n: u64) -> Self {
        assert!(m >= 1 && n >= 1, "denominator factor needs m, n >= 1");
        Self { m, n }
    }
}

impl fmt::Display for DenomFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(T^-{} L^{} - 1)", self.m, self.n)
    }
}

type Key = (Vec<DenomFactor>, i64);

/// A finite sum of terms `coeff · T^e / Π factors`.
///
/// Like terms (same exponent and denominator multiset) are merged, but no
/// cancellation across denominators happens implicitly. Use [`eq`](Self::eq)
/// for equality of the rational functions; `==` compares representations.
#[derive(Clone, PartialEq)]
pub struct TRational<C> {
    terms: BTreeMap<Key, C>,
}

impl<C: Coefficient> Default for TRational<C> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

/// A `T`-Laurent polynomial with coefficients in `C`.
type Numerator<C> = BTreeMap<i64, C>;

fn num_add<C: Coefficient>(p: &mut Numerator<C>, e: i64, c: &C) {
    if c.is_zero() {
        return;
    }
    let sum = match p.get(&e) {
        Some(old) => old.add(c),
        None => c.clone(),
    };
    if sum.is_zero() {
        p.remove(&e);
    } else {
        p.insert(e, sum);
    }
}

/// `p · (L^n T^-m - 1)`.
fn num_mul_factor<C: Coefficient>(p: &Numerator<C>, f: DenomFactor) -> Numerator<C> {
    let ln = LaurentPoly::l_pow(f.n as i64);
    let mut out = Numerator::new();
    for (&e, c) in p {
        num_add(&mut out, e - f.m as i64, &c.scale(&ln));
        num_add(&mut out, e, &c.neg());
    }
    out
}

/// Exact division by `L^n T^-m - 1`, or `None` if it does not divide.
///
/// The factor has top coefficient `-1` in `T`, so long division from the top
/// degree never leaves the coefficient module; a nonzero remainder of span
/// below `m` cannot be a multiple.
fn num_div_factor<C: Coefficient>(p: &Numerator<C>, f: DenomFactor) -> Option<Numerator<C>> {
    let m = f.m as i64;
    let ln = LaurentPoly::l_pow(f.n as i64);
    let mut rem = p.clone();
    let mut quot = Numerator::new();
    loop {
        let (Some((&lo, _)), Some((&hi, top))) = (rem.first_key_value(), rem.last_key_value()) else {
            return Some(quot);
        };
        if hi - lo < m {
            return None;
        }
        let top = top.clone();
        // q = -top T^hi; rem -= q * (L^n T^-m - 1)
        num_add(&mut quot, hi, &top.neg());
        num_add(&mut rem, hi, &top.neg());
        num_add(&mut rem, hi - m, &top.scale(&ln));
    }
}

impl<C: Coefficient> TRational<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `c · T^e / Π denom`.
    pub fn term(c: C, t_exp: i64, mut denom: Vec<DenomFactor>) -> Self {
        denom.sort();
        let mut out = Self::zero();
        out.add_term((denom, t_exp), c);
        out
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, 0, Vec::new())
    }

    fn add_term(&mut self, key: Key, c: C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn is_zero_repr(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(coeff, t_exp, denominators)`.
    pub fn terms(&self) -> impl Iterator<Item = (&C, i64, &[DenomFactor])> {
        self.terms.iter().map(|((d, e), c)| (c, *e, d.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        for (k, a) in &self.terms {
            out.add_term(k.clone(), a.scale(c));
        }
        out
    }

    /// Product with a scalar rational function.
    pub fn mul(&self, s: &TRational<LaurentPoly>) -> Self {
        let mut out = Self::zero();
        for ((d1, e1), c1) in &self.terms {
            for ((d2, e2), c2) in &s.terms {
                let mut d: Vec<DenomFactor> = d1.iter().chain(d2).copied().collect();
                d.sort();
                out.add_term((d, e1 + e2), c1.scale(c2));
            }
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<D: Coefficient, E>(
        &self,
        mut f: impl FnMut(&C) -> Result<D, E>,
    ) -> Result<TRational<D>, E> {
        let mut out = TRational::<D>::zero();
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    fn common_denominator(&self) -> BTreeMap<DenomFactor, usize> {
        let mut lcm = BTreeMap::new();
        for (d, _) in self.terms.keys() {
            let mut counts = BTreeMap::new();
            for f in d {
                *counts.entry(*f).or_insert(0usize) += 1;
            }
            for (f, k) in counts {
                let slot = lcm.entry(f).or_insert(0);
                *slot = (*slot).max(k);
            }
        }
        lcm
    }

    /// Writes the sum as `N(T) / Π factors` over the least common multiset.
    fn to_fraction(&self) -> (Numerator<C>, Vec<DenomFactor>) {
        let lcm = self.common_denominator();
        let mut num = Numerator::new();
        for ((d, e), c) in &self.terms {
            let mut missing = lcm.clone();
            for f in d {
                *missing.get_mut(f).expect("factor in lcm") -= 1;
            }
            let mut p = Numerator::new();
            num_add(&mut p, *e, c);
            for (f, k) in missing {
                for _ in 0..k {
                    p = num_mul_factor(&p, f);
                }
            }
            for (e, c) in &p {
                num_add(&mut num, *e, c);
            }
        }
        let denom = lcm.into_iter().flat_map(|(f, k)| std::iter::repeat_n(f, k)).collect();
        (num, denom)
    }

    /// Single-fraction form with every divisible denominator factor
    /// cancelled.
    pub fn normalize(&self) -> Self {
        let (mut num, mut denom) = self.to_fraction();
        if num.is_empty() {
            return Self::zero();
        }
        let mut i = 0;
        while i < denom.len() {
            if let Some(q) = num_div_factor(&num, denom[i]) {
                num = q;
                denom.remove(i);
            } else {
                i += 1;
            }
        }
        let mut out = Self::zero();
        for (e, c) in num {
            out.add_term((denom.clone(), e), c);
        }
        out
    }

    /// Equality as rational functions.
    pub fn eq(&self, other: &Self) -> bool {
        self.sub(other).to_fraction().0.is_empty()
    }

    /// The duality `D^P`: coefficients dualized, `T -> T^-1`, each factor
    /// rewritten through `T^m L^-n - 1 = -L^-n T^m (T^-m L^n - 1)`.
    pub fn dualize_p(&self) -> Result<Self, GrothError> {
        let mut out = Self::zero();
        for ((d, e), c) in &self.terms {
            let mut scalar = LaurentPoly::one();
            let mut shift = 0i64;
            for f in d {
                scalar = scalar * LaurentPoly::monomial(-1, f.n as i64);
                shift += f.m as i64;
            }
            out.add_term((d.clone(), -e - shift), c.dual()?.scale(&scalar));
        }
        Ok(out)
    }

    /// `T -> T^m`.
    pub fn substitute_tm(&self, m: u64) -> Self {
        assert!(m >= 1, "substitution exponent must be positive");
        let mut out = Self::zero();
        for ((d, e), c) in &self.terms {
            let d = d.iter().map(|f| DenomFactor::new(f.m * m, f.n)).collect();
            out.add_term((d, e * m as i64), c.clone());
        }
        out
    }

    /// The value at `T = ∞`.
    pub fn eval_at_infinity(&self) -> Result<C, RatError> {
        let mut work: Vec<(Key, C)> = self.terms.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut reduced = Self::zero();
        while let Some(((d, e), c)) = work.pop() {
            if d.is_empty() || e <= 0 {
                reduced.add_term((d, e), c);
                continue;
            }
            // T^e / (F R) = -T^e / R + L^n T^(e-m) / (F R)
            let f = d[0];
            work.push(((d[1..].to_vec(), e), c.neg()));
            work.push(((d, e - f.m as i64), c.scale(&LaurentPoly::l_pow(f.n as i64))));
        }
        let residual: Vec<String> = reduced
            .terms
            .iter()
            .filter(|((d, e), _)| d.is_empty() && *e > 0)
            .map(|((_, e), c)| format!("{}*T^{e}", c.render_factor()))
            .collect();
        if !residual.is_empty() {
            return Err(RatError::NotRegularAtInfinity(residual.join(" + ")));
        }
        let mut acc = C::zero();
        for ((d, e), c) in &reduced.terms {
            if *e == 0 {
                acc = if d.len() % 2 == 0 { acc.add(c) } else { acc.add(&c.neg()) };
            }
        }
        Ok(acc)
    }

    /// Coefficient of `T^k` in the Laurent expansion at `T = 0`, using
    /// `1/(T^-m L^n - 1) = Σ_{s≥1} T^{ms} L^{-ns}`.
    fn laurent_coefficient(&self, k: i64) -> C {
        let mut acc = C::zero();
        for ((d, e), c) in &self.terms {
            let mut sum = LaurentPoly::zero();
            expand_into(d, k - e, LaurentPoly::one(), &mut sum);
            acc = acc.add(&c.scale(&sum));
        }
        acc
    }

    fn lowest_order(&self) -> Option<i64> {
        self.terms.keys().map(|(d, e)| e + d.iter().map(|f| f.m as i64).sum::<i64>()).min()
    }

    /// Coefficient of `T^n` in the power series expansion.
    pub fn series_coefficient(&self, n: u64) -> Result<C, RatError> {
        if let Some(low) = self.lowest_order() {
            for k in low..0 {
                if !self.laurent_coefficient(k).is_zero() {
                    return Err(RatError::NotExpandable(k));
                }
            }
        }
        Ok(self.laurent_coefficient(n as i64))
    }

    /// Canonical rendering; terms ordered by number of factors, factors and
    /// `T`-exponent.
    pub fn render(&self) -> String {
        let mut keys: Vec<(&Key, &C)> = self.terms.iter().collect();
        keys.sort_by(|((d1, e1), _), ((d2, e2), _)| (d1.len(), d1, e1).cmp(&(d2.len(), d2, e2)));
        let parts = keys.into_iter().map(|((d, e), c)| render_term(c, *e, d));
        crate::grothring::join_signed(parts)
    }
}

/// Adds the coefficient of `T^target` in `Π_{f ∈ d} Σ_{s≥1} T^{m s} L^{-n s}`
/// times `acc` into `out`.
fn expand_into(d: &[DenomFactor], target: i64, acc: LaurentPoly, out: &mut LaurentPoly) {
    let Some((f, rest)) = d.split_first() else {
        if target == 0 {
            *out += &acc;
        }
        return;
    };
    let min_rest: i64 = rest.iter().map(|g| g.m as i64).sum();
    let mut s = 1i64;
    while f.m as i64 * s + min_rest <= target {
        let next = &acc * &LaurentPoly::l_pow(-(f.n as i64) * s);
        expand_into(rest, target - f.m as i64 * s, next, out);
        s += 1;
    }
}

fn render_term<C: Coefficient>(c: &C, e: i64, d: &[DenomFactor]) -> String {
    let mut s = String::new();
    let t = (e != 0).then(|| format!("T^{e}"));
    match (c.is_one(), c.neg().is_one(), &t) {
        (true, _, Some(t)) => s.push_str(t),
        (_, true, Some(t)) => {
            s.push('-');
            s.push_str(t);
        }
        (_, _, Some(t)) => {
            s.push_str(&c.render_factor());
            s.push('*');
            s.push_str(t);
        }
        (_, _, None) => s.push_str(&c.render_factor()),
    }
    if !d.is_empty() {
        let fs: Vec<String> = d.iter().map(|f| f.to_string()).collect();
        s.push_str(&format!("/({})", fs.join(" ")));
    }
    s
}

impl<C: Coefficient> fmt::Display for TRational<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<C: Coefficient> fmt::Debug for TRational<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TRational({})", self.render())
    }
}

impl TRational<LaurentPoly> {
    /// The polynomial `T^-m L^n - 1` itself.
    pub fn factor(f: DenomFactor) -> Self {
        let mut out = Self::term(LaurentPoly::l_pow(f.n as i64), -(f.m as i64), Vec::new());
        out.add_term((Vec::new(), 0), LaurentPoly::constant(-1));
        out
    }

    /// `1 / (T^-m L^n - 1)`.
    pub fn inverse_factor(f: DenomFactor) -> Self {
        Self::term(LaurentPoly::one(), 0, vec![f])
    }

    pub fn t_pow(e: i64) -> Self {
        Self::term(LaurentPoly::one(), e, Vec::new())
    }

    pub fn scalar(c: LaurentPoly) -> Self {
        Self::constant(c)
    }
}

impl TRational<GrothClass> {
    /// `Ind^(m)` on every coefficient.
    pub fn induce(&self, m: u64) -> Self {
        self.map_coeffs(|c| Ok::<_, GrothError>(c.induce(m))).expect("induction is total")
    }
}
