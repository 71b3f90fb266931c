use std::collections::HashMap;

use num_integer::Integer;

use super::{GrothClass, GrothError, LaurentPoly, StratumSymbol};

/// Which stratum family a context describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum BasisFlavor {
    /// `E_I`, `E_I°` over `X`, including `I = ∅`.
    Naive,
    /// `Ẽ_I`, `Ẽ_I°` over `X_0` with `μ_{m_I}`-actions, `I ≠ ∅`.
    Equivariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StratumKind {
    Open,
    Complete,
}

/// The stratum lattice of an SNC divisor, indexed by bitmasks over the
/// components.
///
/// Subsets with more than `d` elements index empty strata and are left out,
/// which is harmless for the change of basis: the remaining family is closed
/// under taking subsets, so every superset interval stays intact.
#[derive(Debug, Clone)]
pub struct BasisContext {
    flavor: BasisFlavor,
    d: u32,
    ids: Vec<String>,
    mults: Vec<u64>,
    masks: Vec<u32>,
    index: HashMap<StratumSymbol, (u32, StratumKind)>,
}

impl BasisContext {
    /// Builds the context for components `(id, m_i)` in ambient dimension `d`.
    pub fn new(flavor: BasisFlavor, d: u32, components: &[(String, u64)]) -> Self {
        assert!(components.len() <= 24, "too many components for a mask basis");
        let mut ctx = Self {
            flavor,
            d,
            ids: components.iter().map(|(id, _)| id.clone()).collect(),
            mults: components.iter().map(|&(_, m)| m).collect(),
            masks: Vec::new(),
            index: HashMap::new(),
        };
        let k = components.len() as u32;
        let mut masks: Vec<u32> = (0..1u32 << k)
            .filter(|&mask| mask.count_ones() <= d)
            .filter(|&mask| mask != 0 || flavor == BasisFlavor::Naive)
            .collect();
        masks.sort_by_key(|&mask| (mask.count_ones(), std::cmp::Reverse(mask.reverse_bits())));
        for &mask in &masks {
            for kind in [StratumKind::Open, StratumKind::Complete] {
                ctx.index.insert(ctx.symbol(mask, kind), (mask, kind));
            }
        }
        ctx.masks = masks;
        ctx
    }

    pub fn flavor(&self) -> BasisFlavor {
        self.flavor
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn base(&self) -> &'static str {
        match self.flavor {
            BasisFlavor::Naive => "X",
            BasisFlavor::Equivariant => "X0",
        }
    }

    pub fn component_ids(&self) -> &[String] {
        &self.ids
    }

    /// Nonempty strata masks, ordered by size then by component order.
    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.masks.contains(&mask)
    }

    /// `m_I`, the gcd of the multiplicities in `I`; 1 for the empty set.
    pub fn mu_order(&self, mask: u32) -> u64 {
        let g = self.members(mask).fold(0u64, |g, i| g.gcd(&self.mults[i]));
        g.max(1)
    }

    pub fn members(&self, mask: u32) -> impl Iterator<Item = usize> {
        (0..self.ids.len()).filter(move |i| mask >> i & 1 == 1)
    }

    pub fn label(&self, mask: u32) -> String {
        if mask == 0 {
            return "empty".into();
        }
        let ids: Vec<&str> = self.members(mask).map(|i| self.ids[i].as_str()).collect();
        let sep = if ids.iter().all(|s| s.chars().count() == 1) { "" } else { "," };
        ids.join(sep)
    }

    pub fn symbol(&self, mask: u32, kind: StratumKind) -> StratumSymbol {
        let prefix = match self.flavor {
            BasisFlavor::Naive => "E",
            BasisFlavor::Equivariant => "Et",
        };
        let suffix = match kind {
            StratumKind::Open => "_o",
            StratumKind::Complete => "",
        };
        let dim = self.d - mask.count_ones();
        let mut sym = StratumSymbol::new(format!("{prefix}_{}{suffix}", self.label(mask)), self.base())
            .with_dim(dim)
            .proper_smooth(kind == StratumKind::Complete);
        if self.flavor == BasisFlavor::Equivariant {
            sym = sym.with_mu_order(self.mu_order(mask));
        }
        sym
    }

    pub fn open(&self, mask: u32) -> StratumSymbol {
        self.symbol(mask, StratumKind::Open)
    }

    pub fn complete(&self, mask: u32) -> StratumSymbol {
        self.symbol(mask, StratumKind::Complete)
    }

    pub fn lookup(&self, sym: &StratumSymbol) -> Option<(u32, StratumKind)> {
        self.index.get(sym).copied()
    }

    fn supersets(&self, mask: u32) -> impl Iterator<Item = u32> + '_ {
        self.masks.iter().copied().filter(move |&j| j & mask == mask)
    }

    fn convert(
        &self,
        a: &GrothClass,
        from: StratumKind,
        to: StratumKind,
        alternate: bool,
    ) -> Result<GrothClass, GrothError> {
        let mut out = GrothClass::zero();
        for (sym, c) in a.iter() {
            let mask = match self.lookup(sym) {
                Some((mask, kind)) if kind == from => mask,
                _ => return Err(GrothError::UnknownSymbol(format!("{sym:?}"))),
            };
            for j in self.supersets(mask) {
                let odd = alternate && (j.count_ones() - mask.count_ones()) % 2 == 1;
                let coeff = if odd { -c } else { c.clone() };
                out.add_term(coeff, self.symbol(j, to));
            }
        }
        Ok(out)
    }

    /// `[E°_I] = Σ_{J ⊇ I} (-1)^{|J|-|I|} [E_J]`.
    pub fn to_complete_basis(&self, a: &GrothClass) -> Result<GrothClass, GrothError> {
        self.convert(a, StratumKind::Open, StratumKind::Complete, true)
    }

    /// `[E_I] = Σ_{J ⊇ I} [E°_J]`.
    pub fn to_open_basis(&self, a: &GrothClass) -> Result<GrothClass, GrothError> {
        self.convert(a, StratumKind::Complete, StratumKind::Open, false)
    }

    /// The class `c * [stratum(mask)]`.
    pub fn term(&self, c: LaurentPoly, mask: u32, kind: StratumKind) -> GrothClass {
        GrothClass::term(c, self.symbol(mask, kind))
    }
}
