//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails or overruns its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use motivic_core::arcoracle::{compare_zeta, strata_counts, unit_twist_experiment, MonomialFunction};
use motivic_core::covers::{check_spec, spec_grid};
use motivic_core::par::{self, ExecMode};
use motivic_core::resolution::{exhaustive_grid, random_grid, run_checks, CheckKind};
use motivic_core::toric::{
    check_toric_duality, cross_polytope_facets, dehn_sommerville, face_vector, random_cones,
    simplex_boundary_facets, stellar_refine, verify_aux_binomial, RefineStrategy, SimplicialFan,
    Triangulation,
};
use motivic_core::{LaurentPoly, ResolutionData};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn grid() -> Vec<ResolutionData> {
    let mut g = exhaustive_grid(3, 3, 3);
    g.extend(random_grid(2024, 200, 3, 5, 9));
    g
}

fn run_grid(g: &[ResolutionData], kinds: &[CheckKind]) -> Outcome {
    let mut checked = 0;
    for &kind in kinds {
        let s = run_checks(ExecMode::Parallel, g, kind);
        if let Some((data, why)) = s.failures.first() {
            return Err(format!("{kind:?} fails on {data:?}: {why} ({} failures)", s.failures.len()));
        }
        checked += s.checked;
    }
    Ok(format!("{checked} checks"))
}

fn zeta_vs_arcs() -> Outcome {
    let functions: [(u32, &[u64]); 6] =
        [(1, &[1]), (1, &[2]), (1, &[3]), (2, &[1, 1]), (2, &[2, 1]), (2, &[2, 3])];
    let mut rows = 0;
    let mut skipped = 0;
    for (d, exps) in functions {
        let f = MonomialFunction::new(d, exps.to_vec()).map_err(|e| e.to_string())?;
        for q in [2, 3, 5] {
            let r = compare_zeta(q, 6, &f, ExecMode::Parallel).map_err(|e| e.to_string())?;
            if !r.pass {
                return Err(format!("f = {exps:?}, q = {q}\n{}", r.render_table()));
            }
            rows += r.checked();
            skipped += r.rows.len() - r.checked();
        }
    }
    Ok(format!("{rows} exact matches, {skipped} rows over budget"))
}

fn power_rule() -> Outcome {
    run_grid(
        &grid(),
        &[CheckKind::PowerRule(1), CheckKind::PowerRule(2), CheckKind::PowerRule(3), CheckKind::PowerRule(4)],
    )
}

fn nearby_fiber() -> Outcome {
    let summary = run_grid(&grid(), &[CheckKind::NearbyConsistency])?;
    for m in 1..=6u64 {
        // a prime field containing the m-th roots of unity
        let q = (2..)
            .find(|&q: &u32| (2..q).all(|p| q % p != 0) && u64::from(q - 1) % m == 0)
            .expect("primes exist");
        let f = MonomialFunction::new(1, vec![m]).map_err(|e| e.to_string())?;
        let counts = strata_counts(q, &f).map_err(|e| e.to_string())?;
        let psi = f.resolution_data().nearby_fiber().map_err(|e| e.to_string())?;
        let euler = psi
            .specialize_count(1, |s| counts.get(s).map(|&c| BigInt::from(c)))
            .map_err(|e| e.to_string())?;
        if euler != BigInt::from(m) {
            return Err(format!("Euler value of psi for x^{m} is {euler}"));
        }
    }
    Ok(format!("{summary}; Euler values 1..6 for x^m"))
}

fn triangulations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    let mut simplices = 0;
    for n in 1..=3 {
        for i in 0..20 {
            let t = if i % 2 == 0 {
                Triangulation::random_subdivision(n, 1 + i % 5, &mut rng)
            } else {
                // iterated barycentric subdivision of random simplices
                let mut t = Triangulation::standard(n);
                for _ in 0..1 + i % 4 {
                    let faces: Vec<Vec<usize>> = t.simplices().filter(|s| s.len() > 1).cloned().collect();
                    let s = &faces[rng.gen_range(0..faces.len())];
                    t = t.barycentric_subdivide(s).map_err(|e| e.to_string())?;
                }
                t
            };
            t.check_cover(10, &mut rng)?;
            if !t.h_palindromic() {
                return Err(format!("h not palindromic: {}", t.h_poly().render_ascending("t")));
            }
            for s in t.simplices() {
                if !t.g_palindromic(s).map_err(|e| e.to_string())? {
                    return Err(format!("g not palindromic at {s:?}"));
                }
                simplices += 1;
            }
            count += 1;
        }
    }
    let half = BigRational::new(1.into(), 2.into());
    let mid = Triangulation::standard(1)
        .stellar_subdivide(&[0, 1], &[half.clone(), half])
        .map_err(|e| e.to_string())?;
    if mid.h_poly() != -LaurentPoly::l() {
        return Err(format!("midpoint h = {}", mid.h_poly().render_ascending("t")));
    }
    if !(0..=20).all(verify_aux_binomial) {
        return Err("binomial identity fails".into());
    }
    Ok(format!("{count} subdivisions, {simplices} stars; h(midpoint) = -t"))
}

fn dehn_sommerville_spheres() -> Outcome {
    let mut out = Vec::new();
    for m in 1..=5 {
        let s = dehn_sommerville(&face_vector(&simplex_boundary_facets(m)));
        if !s.symmetric {
            return Err(format!("simplex boundary m = {m}: h = {:?}", s.h));
        }
    }
    for m in 1..=4 {
        let s = dehn_sommerville(&face_vector(&cross_polytope_facets(m)));
        if !s.symmetric {
            return Err(format!("cross-polytope m = {m}: h = {:?}", s.h));
        }
        out.push(format!("{:?}", s.h));
    }
    Ok(format!("cross-polytope h-vectors {}", out.join(" ")))
}

fn toric_duality() -> Outcome {
    let cones = random_cones(8, 120, 3, 4);
    if cones.len() < 100 {
        return Err(format!("only {} inequivalent cones sampled", cones.len()));
    }
    let verdicts = par::map_collect(ExecMode::Parallel, &cones, |c| {
        let run = |s| check_toric_duality(c, s).map(|r| (r.pass, r.failure));
        let distinct = c.len() < 2 || {
            let fan = SimplicialFan::cone(c.clone()).expect("sampled cones are valid");
            stellar_refine(&fan, RefineStrategy::MinSum) != stellar_refine(&fan, RefineStrategy::MinMax)
        };
        (run(RefineStrategy::MinSum), run(RefineStrategy::MinMax), distinct)
    });
    for (c, (a, b, distinct)) in cones.iter().zip(&verdicts) {
        let (a, b) = match (a, b) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => return Err(format!("{c:?}: {e}")),
        };
        if a.0 != b.0 {
            return Err(format!("{c:?}: refinements disagree"));
        }
        if !a.0 {
            return Err(format!("{c:?}: {:?}", a.1));
        }
        if !distinct {
            return Err(format!("{c:?}: the two refinements coincide"));
        }
    }
    Ok(format!("{} cones, two refinements each", cones.len()))
}

fn cover_lattices() -> Outcome {
    let specs = spec_grid(8, 4, 8);
    let results = par::map_collect(ExecMode::Parallel, &specs, check_spec);
    if let Some(e) = results.into_iter().find_map(Result::err) {
        return Err(e);
    }
    Ok(format!("{} specs, every axis", specs.len()))
}

fn counterexample() -> Outcome {
    let r = unit_twist_experiment(7, [0, -1, 0, 1]).map_err(|e| e.to_string())?;
    if (r.untwisted, r.twisted, r.differ) != (8, 4, true) {
        return Err(format!("{r:?}"));
    }
    Ok(format!("q = 7: {} vs {}, differ", r.untwisted, r.twisted))
}

fn main() -> ExitCode {
    let grid_data = grid();
    let criteria: Vec<(&str, u64, Box<dyn Fn() -> Outcome>)> = vec![
        ("zeta functions against arc counts", 120, Box::new(zeta_vs_arcs)),
        ("self-duality of the nearby fiber", 30, Box::new(|| run_grid(&grid(), &[CheckKind::SelfDuality]))),
        (
            "functional equations",
            30,
            Box::new(move || {
                run_grid(&grid_data, &[CheckKind::FunctionalNaive, CheckKind::FunctionalSPrime])
            }),
        ),
        ("power rule", 30, Box::new(power_rule)),
        ("nearby fiber at infinity", 60, Box::new(nearby_fiber)),
        ("triangulation palindromy", 30, Box::new(triangulations)),
        ("Dehn-Sommerville symmetry", 5, Box::new(dehn_sommerville_spheres)),
        ("toric duality", 120, Box::new(toric_duality)),
        ("cover lattices", 60, Box::new(cover_lattices)),
        ("unit twist counterexample", 1, Box::new(counterexample)),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (verdict, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget}s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {verdict} {name} [{:.2}s] {detail}", i + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
