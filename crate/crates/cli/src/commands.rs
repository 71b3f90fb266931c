use std::fmt::Write;

use motivic_core::arcoracle::{compare_zeta, enumerate_arcs, unit_twist_sweep, ArcCountTask, OracleError};
use motivic_core::covers::{
    component_decomposition, hilbert_basis, intmat, lattice_of_cover, restrict_lattice, restriction_action,
    unimodular_completion, CoverSpec, LatticeModel,
};
use motivic_core::resolution::{random_grid, run_checks, CheckKind, IdentityReport};
use motivic_core::toric::{
    check_toric_duality, dehn_sommerville, face_vector, p_poly, random_cones, stellar_refine, FaceVector,
    RefineStrategy,
};
use motivic_core::{par, Error, ExecMode, ResolutionData};
use serde_json::{json, Value};

use crate::input::{parse_list, InputDocument};

/// Rendered result of one command.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub json: Value,
    /// False when a checked identity does not hold.
    pub pass: bool,
}

impl Output {
    fn new(text: String, json: Value) -> Self {
        Self { text, json, pass: true }
    }

    fn checked(text: String, json: Value, pass: bool) -> Self {
        Self { text, json, pass }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Unreadable, malformed or mismatched input.
    Input(String),
    /// A computation did not fit its enumeration budget.
    Budget(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Budget(m) => m,
        }
    }
}

impl From<String> for Failure {
    fn from(m: String) -> Self {
        Failure::Input(m)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Oracle(e @ OracleError::BudgetExceeded { .. }) => Failure::Budget(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

fn core<T, E: Into<Error>>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::from(e.into()))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn split_sub(sub: &str) -> (&str, Option<&str>) {
    match sub.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (sub, None),
    }
}

fn render_face(face: &[usize]) -> String {
    let parts: Vec<String> = face.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(","))
}

fn render_rows<T: ToString>(rows: &[Vec<T>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(T::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn lattice_json(m: &LatticeModel) -> Value {
    let rows: Vec<Vec<String>> =
        m.rational_basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    json!({ "rank": m.rank(), "basis": rows, "index": m.index_over_integers() })
}

pub fn zeta(doc: &InputDocument, equivariant: bool) -> Result<Output, Failure> {
    let data = doc.resolution()?;
    let (flavor, z) =
        if equivariant { ("equivariant", data.equivariant_zeta()) } else { ("naive", data.naive_zeta()) };
    let text = z.render();
    Ok(Output::new(text.clone(), json!({ "flavor": flavor, "zeta": text })))
}

pub fn nearby(doc: &InputDocument, complete: bool) -> Result<Output, Failure> {
    let data = doc.resolution()?;
    let psi = if complete { data.nearby_fiber_complete() } else { data.nearby_fiber() };
    let text = core(psi)?.to_string();
    let basis = if complete { "complete" } else { "open" };
    Ok(Output::new(text.clone(), json!({ "basis": basis, "nearby": text })))
}

fn report_output(r: IdentityReport) -> Output {
    let text = format!("identity: {}\nlhs: {}\nrhs: {}\npass: {}", r.identity, r.lhs, r.rhs, yes_no(r.pass));
    let pass = r.pass;
    Output::checked(text, json!(r), pass)
}

pub fn check(doc: &InputDocument, identity: &str) -> Result<Output, Failure> {
    let data = doc.resolution()?;
    let report = match split_sub(identity) {
        ("selfdual", None) => core(data.check_self_duality())?,
        ("naive-feq", None) => core(data.check_functional_naive())?,
        ("sprime-feq", None) => core(data.check_functional_sprime())?,
        ("power", Some(m)) => {
            let m: u64 = m.parse().map_err(|_| format!("bad power {m:?}"))?;
            if m == 0 {
                return Err(Failure::Input("power must be positive".into()));
            }
            data.check_power_rule(m)
        }
        _ => {
            return Err(Failure::Input(format!(
                "unknown identity {identity:?}; expected selfdual, naive-feq, sprime-feq or power:m"
            )))
        }
    };
    Ok(report_output(report))
}

pub fn toric(doc: &InputDocument, sub: &str, strategy: RefineStrategy, seed: u64) -> Result<Output, Failure> {
    match split_sub(sub) {
        ("hpoly", None) => {
            let t = doc.triangulation()?;
            let h = t.h_poly().render_ascending("t");
            let pal = t.h_palindromic();
            let text = format!("h = {h}\npalindromic: {}", yes_no(pal));
            Ok(Output::checked(text, json!({ "h": h, "palindromic": pal }), pal))
        }
        ("gpoly", Some(tau)) => {
            let t = doc.triangulation()?;
            let tau: Vec<usize> = parse_list(tau)?;
            let g = core(t.g_poly(&tau))?.render_ascending("t");
            let pal = core(t.g_palindromic(&tau))?;
            let text = format!("g{} = {g}\npalindromic: {}", render_face(&tau), yes_no(pal));
            Ok(Output::checked(text, json!({ "tau": tau, "g": g, "palindromic": pal }), pal))
        }
        ("ds", None) => {
            let fv = match doc {
                InputDocument::FaceVector(f) => {
                    FaceVector::new(&f.f.iter().map(|&x| i128::from(x)).collect::<Vec<_>>())
                }
                _ => face_vector(&doc.facets()?),
            };
            let ds = dehn_sommerville(&fv);
            let h: Vec<String> = ds.h.iter().map(i128::to_string).collect();
            let text = format!("h = {} symmetric: {}", h.join(","), yes_no(ds.symmetric));
            let pass = ds.symmetric;
            Ok(Output::checked(text, json!({ "f": fv.entries(), "h": ds.h, "symmetric": pass }), pass))
        }
        ("ppoly", None) => ppoly(doc, strategy, seed),
        ("resolve", None) => {
            let (fan, _) = doc.fan()?;
            let refined = core(stellar_refine(&fan, strategy))?;
            let text = format!(
                "rays:\n{}\ncones:\n{}\nsmooth: {}",
                render_rows(refined.rays()),
                refined.maximal().iter().map(|c| render_face(c)).collect::<Vec<_>>().join("\n"),
                yes_no(refined.is_smooth())
            );
            Ok(Output::new(
                text,
                json!({ "rays": refined.rays(), "cones": refined.maximal(), "smooth": refined.is_smooth() }),
            ))
        }
        ("dual", None) => {
            let (fan, _) = doc.fan()?;
            if fan.maximal().len() != 1 || fan.maximal()[0].len() != fan.dim() {
                return Err(Failure::Input("dual needs a single full-dimensional cone".into()));
            }
            let r = core(check_toric_duality(fan.rays(), strategy))?;
            let mut text = format!(
                "rank: {}\nmultiplicity: {}\nrefinement: {} rays, {} cones\n",
                r.rank, r.multiplicity, r.refinement_rays, r.refinement_cones
            );
            for (face, p) in &r.p_polys {
                let _ = writeln!(text, "p(V_{face}) = {p}");
            }
            let _ = write!(
                text,
                "lhs: {}\nrhs: {}\ncones checked: {}\npass: {}",
                r.lhs,
                r.rhs,
                r.cones_checked,
                yes_no(r.pass)
            );
            if let Some(f) = &r.failure {
                let _ = write!(text, "\nfailure: {f}");
            }
            let pass = r.pass;
            Ok(Output::checked(text, json!(r), pass))
        }
        _ => Err(Failure::Input(format!(
            "unknown toric subcommand {sub:?}; expected hpoly, gpoly:τ, ds, ppoly, resolve or dual"
        ))),
    }
}

fn ppoly(doc: &InputDocument, strategy: RefineStrategy, seed: u64) -> Result<Output, Failure> {
    let (fan, cone) = doc.fan()?;
    let (sigma, cone) = match cone {
        Some(cone) => {
            core(fan.check_refines(&cone, 64, seed))?;
            (fan, cone)
        }
        None => {
            if fan.maximal().len() != 1 {
                return Err(Failure::Input(
                    "ppoly needs a single cone or a fan with a \"cone\" field".into(),
                ));
            }
            let cone = fan.rays().clone();
            (core(stellar_refine(&fan, strategy))?, cone)
        }
    };
    let k = cone.len();
    let mut faces: Vec<Vec<usize>> =
        (1u32..1 << k).map(|mask| (0..k).filter(|i| mask >> i & 1 == 1).collect()).collect();
    faces.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let mut text = String::new();
    let mut rows = Vec::new();
    for face in &faces {
        let p = core(p_poly(&sigma, &cone, face))?.render_ascending("t");
        let _ = writeln!(text, "p{} = {p}", render_face(face));
        rows.push(json!({ "face": face, "p": p }));
    }
    text.pop();
    Ok(Output::new(text, json!({ "rays": sigma.rays(), "cones": sigma.maximal(), "p": rows })))
}

pub fn cover(doc: &InputDocument, sub: &str) -> Result<Output, Failure> {
    let spec = doc.cover()?;
    let m = lattice_of_cover(&spec);
    match split_sub(sub) {
        ("lattice", None) => {
            let text = format!("{m}\nindex: {}", m.index_over_integers());
            Ok(Output::new(text, lattice_json(&m)))
        }
        ("restrict", Some(axis)) => {
            let axis: usize = axis.parse().map_err(|_| format!("bad axis {axis:?}"))?;
            let restricted = core(restrict_lattice(&m, axis))?;
            let reduced = core(spec.reduced_along(axis))?;
            let action = core(restriction_action(&spec, axis))?;
            let expected = lattice_of_cover(&reduced);
            let pass = restricted == expected;
            let text = format!(
                "{restricted}\nreduced spec: {reduced}\ngroup map: zeta -> zeta^{}\nmatches reduced spec: {}",
                action.exponent,
                yes_no(pass)
            );
            let j = json!({
                "lattice": lattice_json(&restricted),
                "reduced": reduced,
                "action": action,
                "matches": pass,
            });
            Ok(Output::checked(text, j, pass))
        }
        ("components", None) => {
            let (c, e, reduced) = component_decomposition(&spec);
            let text = format!("components: {c}\ndegree: {e}\nreduced spec: {reduced}");
            Ok(Output::new(text, json!({ "components": c, "degree": e, "reduced": reduced })))
        }
        ("hilbert", None) => {
            let basis = core(hilbert_basis(&m))?;
            let text = render_rows(&basis);
            let rows: Vec<Vec<String>> = basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            Ok(Output::new(text, json!({ "hilbert": rows })))
        }
        ("complete", alpha) => {
            let alpha: Vec<i64> = match alpha {
                Some(a) => parse_list(a)?,
                None => default_alpha(&spec),
            };
            let c = core(unimodular_completion(&alpha))?;
            let text = format!("{}\ndet: {}", render_rows(&c), intmat::det(&c));
            Ok(Output::new(text, json!({ "alpha": alpha, "matrix": c })))
        }
        _ => Err(Failure::Input(format!(
            "unknown cover subcommand {sub:?}; expected lattice, restrict:axis, components, hilbert or complete:α"
        ))),
    }
}

/// The primitive vector along the cover exponents.
fn default_alpha(spec: &CoverSpec) -> Vec<i64> {
    let p: Vec<i64> = spec.p.iter().map(|&x| x as i64).collect();
    intmat::primitive(&p)
}

pub fn arcs(doc: &InputDocument, exec: ExecMode) -> Result<Output, Failure> {
    let (task, f) = doc.arc_task()?;
    if let Some(mode) = task.mode {
        let t = ArcCountTask { q: task.q, n: task.n, mode, function: f };
        let count = core(enumerate_arcs(&t, exec))?;
        let text = format!("count: {count}");
        return Ok(Output::new(text, json!({ "task": t, "count": count })));
    }
    let cmp = core(compare_zeta(task.q, task.n, &f, exec))?;
    let rows: Vec<Value> = cmp
        .rows
        .iter()
        .map(|r| json!({ "n": r.n, "mode": r.mode, "lhs": r.predicted, "rhs": r.counted, "ok": r.ok }))
        .collect();
    let text = cmp.render_table().trim_end().to_string();
    let j = json!({ "q": cmp.q, "function": cmp.function, "rows": rows, "pass": cmp.pass });
    if cmp.pass && cmp.checked() < cmp.rows.len() {
        return Err(Failure::Budget(format!("{text}\nsome rows exceed the arc budget")));
    }
    Ok(Output::checked(text, j, cmp.pass))
}

pub fn twist(qs: &[u32], cubic: [i64; 4]) -> Output {
    let mut text = String::new();
    let mut rows = Vec::new();
    for (q, r) in unit_twist_sweep(qs, cubic) {
        match r {
            Ok(r) => {
                let _ = writeln!(
                    text,
                    "q = {q}: g = {}, #U = {}, untwisted {}, twisted {}, differ: {}",
                    r.cubic,
                    r.domain,
                    r.untwisted,
                    r.twisted,
                    yes_no(r.differ)
                );
                rows.push(json!(r));
            }
            Err(e) => {
                let _ = writeln!(text, "q = {q}: {e}");
                rows.push(json!({ "q": q, "error": e.to_string() }));
            }
        }
    }
    text.pop();
    Output::new(text, json!(rows))
}

pub struct SweepParams {
    pub seed: u64,
    pub count: usize,
    pub max_d: u32,
    pub max_k: usize,
    pub max_mn: u64,
    pub cones: usize,
}

pub fn sweep(p: &SweepParams, exec: ExecMode) -> Output {
    let grid: Vec<ResolutionData> = random_grid(p.seed, p.count, p.max_d, p.max_k, p.max_mn);
    let kinds = [
        ("selfdual", CheckKind::SelfDuality),
        ("naive-feq", CheckKind::FunctionalNaive),
        ("sprime-feq", CheckKind::FunctionalSPrime),
        ("power:2", CheckKind::PowerRule(2)),
        ("power:3", CheckKind::PowerRule(3)),
        ("nearby", CheckKind::NearbyConsistency),
    ];
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut pass = true;
    for (name, kind) in kinds {
        let s = run_checks(exec, &grid, kind);
        pass &= s.passed();
        let _ = writeln!(text, "{name:<12} {:>5} checked {:>3} failed", s.checked, s.failures.len());
        let first = s.failures.first().map(|(d, why)| format!("{d:?}: {why}"));
        rows.push(json!({ "check": name, "checked": s.checked, "failed": s.failures.len(), "first_failure": first }));
    }
    let cones = random_cones(p.seed, p.cones, 3, 4);
    let verdicts = par::map_collect(exec, &cones, |c| {
        check_toric_duality(c, RefineStrategy::MinSum).map(|r| r.pass).unwrap_or(false)
    });
    let failed = verdicts.iter().filter(|&&v| !v).count();
    pass &= failed == 0;
    let _ = write!(text, "{:<12} {:>5} checked {:>3} failed", "toric-dual", cones.len(), failed);
    rows.push(json!({ "check": "toric-dual", "checked": cones.len(), "failed": failed }));
    Output::checked(text, json!({ "seed": p.seed, "checks": rows, "pass": pass }), pass)
}
