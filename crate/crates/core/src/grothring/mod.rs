//! Formal Grothendieck classes over a base variety.
//!
//! Classes are finite `Z[L, L^-1]`-combinations of [`StratumSymbol`]s, which
//! form a free basis: no scissor or projective-bundle relations are imposed.
//! Every identity the engine checks is linear in these symbols once it is
//! written in the right basis (see [`BasisContext`]).

mod basis;
mod laurent;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

pub use basis::{BasisContext, BasisFlavor, StratumKind};
pub use laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrothError {
    #[error("duality undefined on {0}: symbol is not smooth and proper with known dimension")]
    DualityUndefined(String),
    #[error("symbol {0} does not belong to the basis context")]
    UnknownSymbol(String),
    #[error("no point count supplied for {0}")]
    MissingCount(String),
    #[error("specialization at L = {q} is not an integer: {value}")]
    NonIntegralSpecialization { q: i64, value: String },
    #[error("symbol {0} carries conflicting dimensions")]
    DimensionMismatch(String),
}

/// A formal generator `[X]_S`.
///
/// Identity is the tuple `(id, base, mu_order, group_tags)`; the dimension and
/// properness flag are attributes that must agree between equal symbols.
#[derive(Clone, Serialize)]
pub struct StratumSymbol {
    id: String,
    base: String,
    dim: Option<u32>,
    proper_smooth: bool,
    mu_order: u64,
    group_tags: Vec<String>,
}

impl StratumSymbol {
    pub fn new(id: impl Into<String>, base: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            base: base.into(),
            dim: None,
            proper_smooth: false,
            mu_order: 1,
            group_tags: Vec::new(),
        }
    }

    /// The class of a point over `pt`: dimension 0, smooth and proper.
    pub fn point() -> Self {
        Self::new("pt", "pt").with_dim(0).proper_smooth(true)
    }

    pub fn with_dim(mut self, dim: u32) -> Self {
        self.dim = Some(dim);
        self
    }

    pub fn proper_smooth(mut self, yes: bool) -> Self {
        self.proper_smooth = yes;
        self
    }

    pub fn with_mu_order(mut self, n: u64) -> Self {
        assert!(n >= 1, "mu order must be positive");
        self.mu_order = n;
        self
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.group_tags.push(tag.into());
        self.group_tags.sort();
        self.group_tags.dedup();
        self
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn with_base(mut self, base: impl Into<String>) -> Self {
        self.base = base.into();
        self
    }

    pub fn without_tag(mut self, tag: &str) -> Self {
        self.group_tags.retain(|t| t != tag);
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn dim(&self) -> Option<u32> {
        self.dim
    }

    pub fn is_proper_smooth(&self) -> bool {
        self.proper_smooth
    }

    pub fn mu_order(&self) -> u64 {
        self.mu_order
    }

    pub fn group_tags(&self) -> &[String] {
        &self.group_tags
    }

    pub fn is_duality_eligible(&self) -> bool {
        self.proper_smooth && self.dim.is_some()
    }

    fn key(&self) -> (&str, &str, u64, &[String]) {
        (&self.id, &self.base, self.mu_order, &self.group_tags)
    }
}

impl PartialEq for StratumSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for StratumSymbol {}

impl PartialOrd for StratumSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StratumSymbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl std::hash::Hash for StratumSymbol {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl fmt::Display for StratumSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.id)?;
        if self.mu_order > 1 {
            write!(f, "/mu{}", self.mu_order)?;
        }
        if !self.group_tags.is_empty() {
            write!(f, "/{}", self.group_tags.join(","))?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for StratumSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}@{}", self.base)?;
        match self.dim {
            Some(d) => write!(f, " dim {d}")?,
            None => f.write_str(" dim ?")?,
        }
        if self.proper_smooth {
            f.write_str(" proper")?;
        }
        Ok(())
    }
}

/// An element of the free `Z[L, L^-1]`-module on stratum symbols.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct GrothClass {
    terms: BTreeMap<StratumSymbol, LaurentPoly>,
}

impl GrothClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(sym: StratumSymbol) -> Self {
        Self::term(LaurentPoly::one(), sym)
    }

    pub fn term(c: LaurentPoly, sym: StratumSymbol) -> Self {
        let mut out = Self::zero();
        out.add_term(c, sym);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&StratumSymbol, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, sym: &StratumSymbol) -> LaurentPoly {
        self.terms.get(sym).cloned().unwrap_or_default()
    }

    /// Adds `c * [sym]`, reporting a dimension clash with an existing equal
    /// symbol instead of silently merging.
    pub fn try_add_term(&mut self, c: LaurentPoly, sym: StratumSymbol) -> Result<(), GrothError> {
        if c.is_zero() {
            return Ok(());
        }
        if let Some((existing, slot)) = self.terms.get_key_value(&sym) {
            if existing.dim != sym.dim {
                return Err(GrothError::DimensionMismatch(sym.to_string()));
            }
            let sum = slot + &c;
            if sum.is_zero() {
                self.terms.remove(&sym);
            } else {
                self.terms.insert(sym, sum);
            }
        } else {
            self.terms.insert(sym, c);
        }
        Ok(())
    }

    /// Adds `c * [sym]`.
    ///
    /// Panics if an equal symbol with a different dimension is present; use
    /// [`try_add_term`](Self::try_add_term) on untrusted data.
    pub fn add_term(&mut self, c: LaurentPoly, sym: StratumSymbol) {
        if let Err(e) = self.try_add_term(c, sym) {
            panic!("{e}");
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        let mut out = Self::zero();
        if c.is_zero() {
            return out;
        }
        for (s, a) in &self.terms {
            out.terms.insert(s.clone(), a * c);
        }
        out
    }

    /// The relative duality `D(sum c_g g) = sum bar(c_g) L^{-dim g} g`.
    pub fn dualize(&self) -> Result<Self, GrothError> {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            let dim = match (s.proper_smooth, s.dim) {
                (true, Some(d)) => d,
                _ => return Err(GrothError::DualityUndefined(format!("{s:?}"))),
            };
            out.terms.insert(s.clone(), c.bar().shift(-(dim as i64)));
        }
        Ok(out)
    }

    /// Induction `Ind^(m)`: every `mu_n` symbol becomes its `mu_{nm}` induced
    /// symbol, coefficients unchanged.
    pub fn induce(&self, m: u64) -> Self {
        assert!(m >= 1, "induction order must be positive");
        self.map_symbols(|s| {
            let n = s.mu_order * m;
            s.clone().with_mu_order(n)
        })
    }

    /// Applies a symbol relabeling, merging symbols that collide.
    pub fn map_symbols(&self, mut f: impl FnMut(&StratumSymbol) -> StratumSymbol) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.add_term(c.clone(), f(s));
        }
        out
    }

    /// Fallible relabeling.
    pub fn try_map_symbols<E>(
        &self,
        mut f: impl FnMut(&StratumSymbol) -> Result<StratumSymbol, E>,
    ) -> Result<Self, E>
    where
        E: From<GrothError>,
    {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out.try_add_term(c.clone(), f(s)?)?;
        }
        Ok(out)
    }

    /// Linear extension of `f` from symbols to classes.
    pub fn try_expand<E>(
        &self,
        mut f: impl FnMut(&StratumSymbol) -> Result<GrothClass, E>,
    ) -> Result<Self, E> {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            out += &f(s)?.scale(c);
        }
        Ok(out)
    }

    /// Point-count realization: evaluates every coefficient at `L = q` and
    /// pairs it with the supplied count of each symbol. The result must be an
    /// integer.
    pub fn specialize_count<F>(&self, q: i64, mut count: F) -> Result<BigInt, GrothError>
    where
        F: FnMut(&StratumSymbol) -> Option<BigInt>,
    {
        let mut acc = BigRational::zero();
        for (s, c) in &self.terms {
            let n = count(s).ok_or_else(|| GrothError::MissingCount(s.to_string()))?;
            acc += c.eval_int(q) * BigRational::from_integer(n);
        }
        if !acc.is_integer() {
            return Err(GrothError::NonIntegralSpecialization { q, value: acc.to_string() });
        }
        Ok(acc.to_integer())
    }

    /// Renders the class as a factor inside a larger product: bare when it is
    /// a single term, parenthesized otherwise.
    pub fn render_factor(&self) -> String {
        if self.terms.len() == 1 {
            self.to_string()
        } else {
            format!("({self})")
        }
    }
}

fn render_term(c: &LaurentPoly, s: &StratumSymbol) -> String {
    if c.is_one() {
        s.to_string()
    } else if c.is_minus_one() {
        format!("-{s}")
    } else if c.is_monomial() {
        format!("{}*{s}", c.render_compact("L"))
    } else {
        format!("({})*{s}", c.render_compact("L"))
    }
}

/// Joins rendered summands, folding a leading minus into the separator.
pub(crate) fn join_signed(parts: impl IntoIterator<Item = String>) -> String {
    let mut out = String::new();
    for (i, p) in parts.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&p);
        } else if let Some(rest) = p.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&p);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for GrothClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_signed(self.terms.iter().map(|(s, c)| render_term(c, s))))
    }
}

impl fmt::Debug for GrothClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrothClass({self})")
    }
}

impl From<StratumSymbol> for GrothClass {
    fn from(s: StratumSymbol) -> Self {
        Self::symbol(s)
    }
}

impl AddAssign<&GrothClass> for GrothClass {
    fn add_assign(&mut self, rhs: &GrothClass) {
        for (s, c) in &rhs.terms {
            self.add_term(c.clone(), s.clone());
        }
    }
}

impl SubAssign<&GrothClass> for GrothClass {
    fn sub_assign(&mut self, rhs: &GrothClass) {
        for (s, c) in &rhs.terms {
            self.add_term(-c, s.clone());
        }
    }
}

impl Add<&GrothClass> for &GrothClass {
    type Output = GrothClass;
    fn add(self, rhs: &GrothClass) -> GrothClass {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&GrothClass> for &GrothClass {
    type Output = GrothClass;
    fn sub(self, rhs: &GrothClass) -> GrothClass {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for GrothClass {
    type Output = GrothClass;
    fn add(self, rhs: GrothClass) -> GrothClass {
        &self + &rhs
    }
}

impl Sub for GrothClass {
    type Output = GrothClass;
    fn sub(self, rhs: GrothClass) -> GrothClass {
        &self - &rhs
    }
}

impl Neg for &GrothClass {
    type Output = GrothClass;
    fn neg(self) -> GrothClass {
        self.scale(&LaurentPoly::constant(-1))
    }
}

impl Neg for GrothClass {
    type Output = GrothClass;
    fn neg(self) -> GrothClass {
        -&self
    }
}

impl std::iter::Sum for GrothClass {
    fn sum<I: Iterator<Item = GrothClass>>(iter: I) -> Self {
        let mut acc = GrothClass::zero();
        for x in iter {
            acc += &x;
        }
        acc
    }
}
