//! SNC resolution data, the zeta functions and nearby fiber it determines,
//! and checkers for the duality and functional-equation identities.

mod grid;
mod nearby;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grothring::{BasisContext, BasisFlavor, GrothClass, GrothError, LaurentPoly};
use crate::ratfunc::{DenomFactor, RatError, TRational};

pub use grid::{exhaustive_grid, random_grid, run_checks, CheckKind, GridSummary};
pub use nearby::{quotient_relabel, NearbyMorphism, ResolvedGenerator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("invalid resolution data: {0}")]
    InvalidData(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duality of the nearby morphism on equivariant generator {0} is not known")]
    EquivariantDualityUnknown(String),
    #[error("symbol {0} does not carry the group tag")]
    MissingTag(String),
    #[error(transparent)]
    Rat(#[from] RatError),
    #[error(transparent)]
    Groth(#[from] GrothError),
}

/// A component `E_i` of the divisor, with multiplicity `m_i` in the pulled
/// back function and `n_i - 1` in the Jacobian.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub m: u64,
    pub n: u64,
}

impl Component {
    pub fn new(id: impl Into<String>, m: u64, n: u64) -> Self {
        Self { id: id.into(), m, n }
    }

    pub fn factor(&self) -> DenomFactor {
        DenomFactor::new(self.m, self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResolutionData {
    d: u32,
    components: Vec<Component>,
}

/// Outcome of an identity check, with both sides rendered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl IdentityReport {
    fn new(identity: &str, lhs: String, rhs: String, pass: bool) -> Self {
        Self { identity: identity.into(), lhs, rhs, pass }
    }
}

pub const MAX_COMPONENTS: usize = 12;

impl ResolutionData {
    pub fn new(d: u32, components: Vec<Component>) -> Result<Self, ResolutionError> {
        if d == 0 {
            return Err(ResolutionError::InvalidData("ambient dimension must be at least 1".into()));
        }
        if components.len() > MAX_COMPONENTS {
            return Err(ResolutionError::InvalidData(format!(
                "at most {MAX_COMPONENTS} components supported"
            )));
        }
        for (i, c) in components.iter().enumerate() {
            if c.m == 0 || c.n == 0 {
                return Err(ResolutionError::InvalidData(format!(
                    "component {} needs m >= 1 and n >= 1",
                    c.id
                )));
            }
            if c.id.is_empty() || components[..i].iter().any(|o| o.id == c.id) {
                return Err(ResolutionError::InvalidData(format!("bad or repeated id {:?}", c.id)));
            }
        }
        Ok(Self { d, components })
    }

    /// Data for `x_1^{m_1} ... x_k^{m_k}` on `A^d`: the coordinate
    /// hyperplanes with `n_i = 1`, named `1..k`.
    pub fn monomial(d: u32, exps: &[u64]) -> Result<Self, ResolutionError> {
        if exps.len() > d as usize {
            return Err(ResolutionError::InvalidData("more exponents than variables".into()));
        }
        let comps =
            exps.iter().enumerate().map(|(i, &m)| Component::new((i + 1).to_string(), m, 1)).collect();
        Self::new(d, comps)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    fn ctx(&self, flavor: BasisFlavor) -> BasisContext {
        let comps: Vec<(String, u64)> = self.components.iter().map(|c| (c.id.clone(), c.m)).collect();
        BasisContext::new(flavor, self.d, &comps)
    }

    pub fn naive_context(&self) -> BasisContext {
        self.ctx(BasisFlavor::Naive)
    }

    pub fn equivariant_context(&self) -> BasisContext {
        self.ctx(BasisFlavor::Equivariant)
    }

    fn factors(&self, ctx: &BasisContext, mask: u32) -> Vec<DenomFactor> {
        ctx.members(mask).map(|i| self.components[i].factor()).collect()
    }

    /// `𝒮(f) = Σ_I [E°_I] Π_{i∈I} (L-1)/(T^-m_i L^n_i - 1)`, `I = ∅` included.
    pub fn naive_zeta(&self) -> TRational<GrothClass> {
        let ctx = self.naive_context();
        let mut out = TRational::zero();
        for &mask in ctx.masks() {
            let c = LaurentPoly::l_minus_one().pow(mask.count_ones());
            let g = GrothClass::term(c, ctx.open(mask));
            out = out.add(&TRational::term(g, 0, self.factors(&ctx, mask)));
        }
        out
    }

    /// `S(f) = Σ_{I≠∅} (L-1)^{|I|-1} [Ẽ°_I] Π_{i∈I} 1/(T^-m_i L^n_i - 1)`.
    pub fn equivariant_zeta(&self) -> TRational<GrothClass> {
        let ctx = self.equivariant_context();
        let mut out = TRational::zero();
        for &mask in ctx.masks() {
            let c = LaurentPoly::l_minus_one().pow(mask.count_ones() - 1);
            let g = GrothClass::term(c, ctx.open(mask));
            out = out.add(&TRational::term(g, 0, self.factors(&ctx, mask)));
        }
        out
    }

    /// `ψ_f = Σ_{I≠∅} (1-L)^{|I|-1} [Ẽ°_I]`.
    pub fn nearby_fiber_formula(&self) -> GrothClass {
        let ctx = self.equivariant_context();
        let one_minus_l = -LaurentPoly::l_minus_one();
        ctx.masks()
            .iter()
            .map(|&mask| GrothClass::term(one_minus_l.pow(mask.count_ones() - 1), ctx.open(mask)))
            .sum()
    }

    /// `ψ_f = -S(f)(∞)`, cross-checked against the closed formula.
    pub fn nearby_fiber(&self) -> Result<GrothClass, ResolutionError> {
        let at_infinity = -self.equivariant_zeta().eval_at_infinity()?;
        let formula = self.nearby_fiber_formula();
        if at_infinity != formula {
            return Err(ResolutionError::Inconsistent(format!(
                "-S(inf) = {at_infinity} but the stratum formula gives {formula}"
            )));
        }
        Ok(formula)
    }

    /// `ψ_f` written in the complete basis `[Ẽ_J]`.
    pub fn nearby_fiber_complete(&self) -> Result<GrothClass, ResolutionError> {
        Ok(self.equivariant_context().to_complete_basis(&self.nearby_fiber_formula())?)
    }

    fn complete_signs(&self, ctx: &BasisContext) -> GrothClass {
        ctx.masks()
            .iter()
            .map(|&mask| {
                let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
                GrothClass::term(LaurentPoly::constant(sign), ctx.complete(mask))
            })
            .sum()
    }

    /// `S'(f) = (L-1) S(f) + Σ_{J≠∅} (-1)^{|J|} [Ẽ_J]`, in the complete basis.
    pub fn s_prime(&self) -> Result<TRational<GrothClass>, ResolutionError> {
        let ctx = self.equivariant_context();
        let s = self.equivariant_zeta().map_coeffs(|c| ctx.to_complete_basis(c))?;
        let signs = TRational::constant(self.complete_signs(&ctx));
        Ok(s.scale(&LaurentPoly::l_minus_one()).add(&signs))
    }

    /// `S'(f) = Σ_{J≠∅} [Ẽ_J] Σ_{I⊆J} (-1)^{|J|-|I|} Π_{i∈I} (L-1)/(T^-m_i L^n_i - 1)`.
    pub fn s_prime_expanded(&self) -> TRational<GrothClass> {
        let ctx = self.equivariant_context();
        let mut out = TRational::zero();
        for &j in ctx.masks() {
            let mut sub = j;
            loop {
                let sign = if (j.count_ones() - sub.count_ones()) % 2 == 0 { 1 } else { -1 };
                let c = LaurentPoly::l_minus_one().pow(sub.count_ones()) * LaurentPoly::constant(sign);
                let g = GrothClass::term(c, ctx.complete(j));
                out = out.add(&TRational::term(g, 0, self.factors(&ctx, sub)));
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & j;
            }
        }
        out
    }

    /// `B = (L - T^-m L^n) / (T^-m L^n - 1)`.
    pub fn b_factor(f: DenomFactor) -> TRational<LaurentPoly> {
        let l = TRational::term(LaurentPoly::l(), 0, vec![f]);
        let r = TRational::term(LaurentPoly::l_pow(f.n as i64), -(f.m as i64), vec![f]);
        l.sub(&r)
    }

    /// `𝒮(f) = Σ_J [E_J] Π_{j∈J} B_j` in the complete basis.
    pub fn naive_zeta_complete(&self) -> TRational<GrothClass> {
        let ctx = self.naive_context();
        let mut out = TRational::zero();
        for &mask in ctx.masks() {
            let mut t = TRational::constant(GrothClass::symbol(ctx.complete(mask)));
            for f in self.factors(&ctx, mask) {
                t = t.mul(&Self::b_factor(f));
            }
            out = out.add(&t);
        }
        out
    }

    /// The data of `f^m`: multiplicities scaled by `m`.
    pub fn power_transform(&self, m: u64) -> Self {
        assert!(m >= 1, "power must be positive");
        let comps = self.components.iter().map(|c| Component::new(c.id.clone(), c.m * m, c.n)).collect();
        Self { d: self.d, components: comps }
    }

    /// The data of `f ∘ π` for the projection `π: X × A^k -> X`.
    pub fn pullback_affine(&self, k: u32) -> Self {
        Self { d: self.d + k, components: self.components.clone() }
    }

    /// `D ψ_f = L^{1-d} ψ_f`, checked in the complete basis.
    pub fn check_self_duality(&self) -> Result<IdentityReport, ResolutionError> {
        let ctx = self.equivariant_context();
        let psi = self.nearby_fiber()?;
        let dual = ctx.to_open_basis(&ctx.to_complete_basis(&psi)?.dualize()?)?;
        let rhs = psi.scale(&LaurentPoly::l_pow(1 - self.d as i64));
        let pass = dual == rhs;
        Ok(IdentityReport::new("D psi_f = L^(1-d) psi_f", dual.to_string(), rhs.to_string(), pass))
    }

    /// `D^P 𝒮(f) = L^{-d} 𝒮(f)`; also confirms the product form.
    pub fn check_functional_naive(&self) -> Result<IdentityReport, ResolutionError> {
        let ctx = self.naive_context();
        let s = self.naive_zeta().map_coeffs(|c| ctx.to_complete_basis(c))?;
        let product_form = self.naive_zeta_complete();
        let lhs = product_form.dualize_p()?;
        let rhs = product_form.scale(&LaurentPoly::l_pow(-(self.d as i64)));
        let pass = s.eq(&product_form) && lhs.eq(&rhs);
        Ok(IdentityReport::new(
            "D^P S_naive(f) = L^(-d) S_naive(f)",
            lhs.normalize().to_string(),
            rhs.normalize().to_string(),
            pass,
        ))
    }

    /// `D^P S'(f) = L^{-d} S'(f)`; also confirms the expanded form.
    pub fn check_functional_sprime(&self) -> Result<IdentityReport, ResolutionError> {
        let sp = self.s_prime()?;
        let lhs = sp.dualize_p()?;
        let rhs = sp.scale(&LaurentPoly::l_pow(-(self.d as i64)));
        let pass = sp.eq(&self.s_prime_expanded()) && lhs.eq(&rhs);
        Ok(IdentityReport::new(
            "D^P S'(f) = L^(-d) S'(f)",
            lhs.normalize().to_string(),
            rhs.normalize().to_string(),
            pass,
        ))
    }

    /// `S(f^m)(T) = Ind^(m) S(f)(T^m)`.
    pub fn check_power_rule(&self, m: u64) -> IdentityReport {
        let lhs = self.power_transform(m).equivariant_zeta();
        let rhs = self.equivariant_zeta().substitute_tm(m).induce(m);
        let pass = lhs.eq(&rhs);
        IdentityReport::new(
            &format!("S(f^{m})(T) = Ind^({m}) S(f)(T^{m})"),
            lhs.to_string(),
            rhs.to_string(),
            pass,
        )
    }
}
