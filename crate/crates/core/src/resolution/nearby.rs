//! The nearby cycle morphism on formal resolved generators.

use std::collections::BTreeMap;

use super::{IdentityReport, ResolutionData, ResolutionError};
use crate::grothring::{GrothClass, LaurentPoly, StratumSymbol};

/// A proper map `p: Y -> X` from a smooth connected `Y`, together with
/// resolution data for `f ∘ p`.
#[derive(Debug, Clone)]
pub struct ResolvedGenerator {
    pub label: String,
    pub data: ResolutionData,
    /// Base label the strata are pushed forward to.
    pub target_base: String,
    pub group_tags: Vec<String>,
}

impl ResolvedGenerator {
    pub fn new(label: impl Into<String>, data: ResolutionData) -> Self {
        Self { label: label.into(), data, target_base: "X0".into(), group_tags: Vec::new() }
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.group_tags.push(tag.into());
        self
    }

    /// `[Y]_X`: smooth, proper over `X`, of dimension `d`.
    pub fn symbol(&self) -> StratumSymbol {
        self.group_tags.iter().fold(
            StratumSymbol::new(self.label.clone(), "X").with_dim(self.data.d()).proper_smooth(true),
            |s, t| s.with_tag(t.clone()),
        )
    }

    fn push_forward(&self, s: &StratumSymbol) -> StratumSymbol {
        self.group_tags.iter().fold(
            s.clone().with_id(format!("{}:{}", self.label, s.id())).with_base(self.target_base.clone()),
            |s, t| s.with_tag(t.clone()),
        )
    }
}

/// `Ψ_f([Y]_X) := p_{0!}(ψ_{f p})`, extended linearly over `Z[L, L^-1]`.
#[derive(Debug, Clone, Default)]
pub struct NearbyMorphism {
    generators: BTreeMap<StratumSymbol, ResolvedGenerator>,
}

impl NearbyMorphism {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, g: ResolvedGenerator) -> Result<StratumSymbol, ResolutionError> {
        let sym = g.symbol();
        if self.generators.keys().any(|s| s.id() == sym.id()) {
            return Err(ResolutionError::InvalidData(format!("duplicate generator {}", g.label)));
        }
        self.generators.insert(sym.clone(), g);
        Ok(sym)
    }

    fn generator(&self, s: &StratumSymbol) -> Result<&ResolvedGenerator, ResolutionError> {
        self.generators.get(s).ok_or_else(|| ResolutionError::UnknownGenerator(s.to_string()))
    }

    fn apply_with(&self, input: &GrothClass, complete: bool) -> Result<GrothClass, ResolutionError> {
        input.try_expand(|s| {
            let g = self.generator(s)?;
            let psi = if complete { g.data.nearby_fiber_complete()? } else { g.data.nearby_fiber()? };
            Ok::<_, ResolutionError>(psi.map_symbols(|t| g.push_forward(t)))
        })
    }

    /// `Ψ_f` of a combination of registered generators, open-stratum basis.
    pub fn apply(&self, input: &GrothClass) -> Result<GrothClass, ResolutionError> {
        self.apply_with(input, false)
    }

    /// `Ψ_f` with every nearby fiber written in the complete basis.
    pub fn apply_complete(&self, input: &GrothClass) -> Result<GrothClass, ResolutionError> {
        self.apply_with(input, true)
    }

    /// `D Ψ_f = L Ψ_f D` on the given input.
    pub fn check_morphism_duality(&self, input: &GrothClass) -> Result<IdentityReport, ResolutionError> {
        for (s, _) in input.iter() {
            let g = self.generator(s)?;
            if !g.group_tags.is_empty() {
                return Err(ResolutionError::EquivariantDualityUnknown(g.label.clone()));
            }
        }
        let lhs = self.apply_complete(input)?.dualize()?;
        let rhs = self.apply_complete(&input.dualize()?)?.scale(&LaurentPoly::l());
        let pass = lhs == rhs;
        Ok(IdentityReport {
            identity: "D Psi_f = L Psi_f D".into(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            pass,
        })
    }
}

/// Passes to the quotient by a group acting through the tag `h`: the tag is
/// dropped and the base becomes `h\base`.
pub fn quotient_relabel(a: &GrothClass, h: &str) -> Result<GrothClass, ResolutionError> {
    a.try_map_symbols(|s| {
        if !s.group_tags().iter().any(|t| t == h) {
            return Err(ResolutionError::MissingTag(s.to_string()));
        }
        let base = format!("{h}\\{}", s.base());
        Ok(s.clone().without_tag(h).with_base(base))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolution::Component;

    fn morphism() -> (NearbyMorphism, StratumSymbol, StratumSymbol) {
        let mut psi = NearbyMorphism::new();
        let a =
            psi.register(ResolvedGenerator::new("Y", ResolutionData::monomial(1, &[3]).unwrap())).unwrap();
        let b = psi
            .register(ResolvedGenerator::new(
                "Z",
                ResolutionData::new(3, vec![Component::new("a", 2, 1), Component::new("b", 4, 3)]).unwrap(),
            ))
            .unwrap();
        (psi, a, b)
    }

    #[test]
    fn single_generator() {
        let (psi, a, _) = morphism();
        let out = psi.apply(&GrothClass::symbol(a)).unwrap();
        assert_eq!(out.to_string(), "[Y:Et_1_o/mu3]");
        let (s, _) = out.iter().next().unwrap();
        assert_eq!(s.base(), "X0");
        assert!(psi.apply(&GrothClass::zero()).unwrap().is_zero());
    }

    #[test]
    fn linearity() {
        let (psi, a, b) = morphism();
        let c = LaurentPoly::l() + LaurentPoly::constant(2);
        let x = GrothClass::term(c.clone(), a.clone());
        let y = GrothClass::symbol(b);
        let lhs = psi.apply(&(&x + &y)).unwrap();
        let rhs = &psi.apply(&GrothClass::symbol(a)).unwrap().scale(&c) + &psi.apply(&y).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn duality_commutes_up_to_l() {
        let (psi, a, b) = morphism();
        assert!(psi.check_morphism_duality(&GrothClass::zero()).unwrap().pass);
        let x = GrothClass::term(LaurentPoly::l_pow(-2) - LaurentPoly::one(), a) + GrothClass::symbol(b);
        let r = psi.check_morphism_duality(&x).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn unknown_and_tagged_generators() {
        let (mut psi, _, _) = morphism();
        let stray = GrothClass::symbol(StratumSymbol::new("W", "X").with_dim(1).proper_smooth(true));
        assert!(matches!(psi.apply(&stray), Err(ResolutionError::UnknownGenerator(_))));
        let t = psi
            .register(ResolvedGenerator::new("V", ResolutionData::monomial(2, &[2]).unwrap()).with_tag("H"))
            .unwrap();
        let err = psi.check_morphism_duality(&GrothClass::symbol(t.clone())).unwrap_err();
        assert!(matches!(err, ResolutionError::EquivariantDualityUnknown(_)));
        let out = psi.apply(&GrothClass::symbol(t)).unwrap();
        let q = quotient_relabel(&out, "H").unwrap();
        for (s, _) in q.iter() {
            assert!(s.group_tags().is_empty());
            assert_eq!(s.base(), "H\\X0");
        }
    }

    #[test]
    fn quotient_requires_tag() {
        let plain = GrothClass::symbol(StratumSymbol::new("A", "X"));
        assert!(matches!(quotient_relabel(&plain, "H"), Err(ResolutionError::MissingTag(_))));
        let tagged = StratumSymbol::new("A", "X").with_tag("H").with_tag("G");
        let q = quotient_relabel(&GrothClass::symbol(tagged), "H").unwrap();
        let (s, _) = q.iter().next().unwrap();
        assert_eq!(s.group_tags(), &["G".to_string()]);
        let x = GrothClass::symbol(StratumSymbol::new("A", "X").with_tag("H"));
        let y = GrothClass::symbol(StratumSymbol::new("B", "X").with_tag("H"));
        assert_eq!(
            quotient_relabel(&(&x + &y), "H").unwrap(),
            quotient_relabel(&x, "H").unwrap() + quotient_relabel(&y, "H").unwrap()
        );
    }
}
