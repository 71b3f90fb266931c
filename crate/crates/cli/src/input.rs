use std::fs;
use std::path::Path;

use motivic_core::arcoracle::{ArcMode, MonomialFunction};
use motivic_core::covers::intmat::Mat;
use motivic_core::covers::CoverSpec;
use motivic_core::resolution::Component;
use motivic_core::toric::{SimplicialFan, Triangulation};
use motivic_core::ResolutionData;
use num_rational::BigRational;
use serde::Deserialize;

/// One JSON document per invocation, tagged by `kind`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InputDocument {
    Resolution(ResolutionInput),
    Monomial(MonomialInput),
    Triangulation(TriangulationInput),
    Fan(FanInput),
    Cover(CoverInput),
    ArcTask(ArcTaskInput),
    Sphere(SphereInput),
    FaceVector(FaceVectorInput),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionInput {
    pub d: u32,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialInput {
    pub d: u32,
    pub exps: Vec<u64>,
}

/// Vertices are barycentric coordinates given as `"num/den"` strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationInput {
    pub n: usize,
    pub vertices: Vec<Vec<String>>,
    pub maximal: Vec<Vec<usize>>,
}

/// A simplicial fan. When `cone` is present the fan is read as a
/// refinement of that cone.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanInput {
    pub rays: Vec<Vec<i64>>,
    #[serde(default)]
    pub maximal: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub cone: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverInput {
    pub d: u64,
    pub p: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcTaskInput {
    pub q: u32,
    /// Largest order compared; with `mode` set, the single order counted.
    pub n: u32,
    pub d: u32,
    pub exps: Vec<u64>,
    #[serde(default)]
    pub mode: Option<ArcMode>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereInput {
    pub facets: Vec<Vec<usize>>,
}

/// `f_0, ..., f_{m-1}`; `f_{-1} = 1` is implied.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceVectorInput {
    pub f: Vec<i64>,
}

impl InputDocument {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Resolution(_) => "resolution",
            Self::Monomial(_) => "monomial",
            Self::Triangulation(_) => "triangulation",
            Self::Fan(_) => "fan",
            Self::Cover(_) => "cover",
            Self::ArcTask(_) => "arc-task",
            Self::Sphere(_) => "sphere",
            Self::FaceVector(_) => "face-vector",
        }
    }

    fn wrong_kind(&self, expected: &str) -> String {
        format!("expected a {expected} document, got kind \"{}\"", self.kind())
    }

    pub fn resolution(&self) -> Result<ResolutionData, String> {
        let r = match self {
            Self::Resolution(r) => ResolutionData::new(r.d, r.components.clone()),
            Self::Monomial(m) => ResolutionData::monomial(m.d, &m.exps),
            _ => return Err(self.wrong_kind("resolution or monomial")),
        };
        r.map_err(|e| e.to_string())
    }

    pub fn triangulation(&self) -> Result<Triangulation, String> {
        let Self::Triangulation(t) = self else {
            return Err(self.wrong_kind("triangulation"));
        };
        let vertices = t
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Triangulation::new(t.n, vertices, t.maximal.clone()).map_err(|e| e.to_string())
    }

    pub fn fan(&self) -> Result<(SimplicialFan, Option<Mat>), String> {
        let Self::Fan(f) = self else {
            return Err(self.wrong_kind("fan"));
        };
        let dim = f.rays.first().map_or(0, Vec::len);
        let maximal = f.maximal.clone().unwrap_or_else(|| vec![(0..f.rays.len()).collect()]);
        let fan = SimplicialFan::new(dim, f.rays.clone(), maximal).map_err(|e| e.to_string())?;
        Ok((fan, f.cone.clone()))
    }

    pub fn cover(&self) -> Result<CoverSpec, String> {
        let Self::Cover(c) = self else {
            return Err(self.wrong_kind("cover"));
        };
        CoverSpec::new(c.d, c.p.clone()).map_err(|e| e.to_string())
    }

    pub fn arc_task(&self) -> Result<(ArcTaskInput, MonomialFunction), String> {
        let Self::ArcTask(a) = self else {
            return Err(self.wrong_kind("arc-task"));
        };
        let f = MonomialFunction::new(a.d, a.exps.clone()).map_err(|e| e.to_string())?;
        Ok((a.clone(), f))
    }

    pub fn facets(&self) -> Result<Vec<Vec<usize>>, String> {
        let Self::Sphere(s) = self else {
            return Err(self.wrong_kind("sphere"));
        };
        Ok(s.facets.clone())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let r = s.trim().parse::<BigRational>().map_err(|_| format!("not a rational number: {s:?}"))?;
    Ok(r)
}

/// A comma-separated list such as `0,2` or the empty string.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| x.trim().parse().map_err(|_| format!("bad list entry {x:?} in {s:?}"))).collect()
}
