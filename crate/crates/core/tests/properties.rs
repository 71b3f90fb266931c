//! Cross-module properties of the public API, plus hand-derived values.

use motivic_core::arcoracle::{compare_zeta, count_by_order, MonomialFunction};
use motivic_core::covers::{check_spec, component_decomposition, lattice_of_cover, CoverSpec};
use motivic_core::resolution::Component;
use motivic_core::toric::{check_toric_duality, RefineStrategy, Triangulation};
use motivic_core::{ExecMode, LaurentPoly, ResolutionData};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn resolution() -> impl Strategy<Value = ResolutionData> {
    (1u32..=3, prop::collection::vec((1u64..=6, 1u64..=6), 0..=4)).prop_map(|(d, mn)| {
        let comps =
            mn.iter().enumerate().map(|(i, &(m, n))| Component::new(format!("{}", i + 1), m, n)).collect();
        ResolutionData::new(d, comps).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn identities_hold(data in resolution(), m in 1u64..=4) {
        prop_assert!(data.check_self_duality().unwrap().pass);
        prop_assert!(data.check_functional_naive().unwrap().pass);
        prop_assert!(data.check_functional_sprime().unwrap().pass);
        prop_assert!(data.check_power_rule(m).pass);
    }

    #[test]
    fn nearby_fiber_is_minus_value_at_infinity(data in resolution()) {
        prop_assert_eq!(data.nearby_fiber().unwrap(), data.nearby_fiber_formula());
    }

    #[test]
    fn cover_lattice_index(d in 1u64..=12, p in prop::collection::vec(1u64..=12, 1..=3)) {
        let spec = CoverSpec::new(d, p).unwrap();
        prop_assert!(check_spec(&spec).is_ok());
        let (c, e, _) = component_decomposition(&spec);
        prop_assert_eq!(c * e, d);
        prop_assert_eq!(lattice_of_cover(&spec).index_over_integers() as u64, e);
    }

    #[test]
    fn subdivisions_stay_palindromic(seed in any::<u64>(), n in 1usize..=3, steps in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = Triangulation::random_subdivision(n, steps, &mut rng);
        prop_assert!(t.h_palindromic());
        for s in t.simplices() {
            prop_assert!(t.g_palindromic(s).unwrap());
        }
    }

    #[test]
    fn small_cones_satisfy_duality(a in 1i64..=5, b in 0i64..5) {
        // every 2-dimensional simplicial cone is equivalent to one of these
        let cone = vec![vec![1, 0], vec![b % a, a]];
        let g = num_integer::gcd(b % a, a);
        prop_assume!(g == 1);
        for s in [RefineStrategy::MinSum, RefineStrategy::MinMax] {
            let r = check_toric_duality(&cone, s).unwrap();
            prop_assert!(r.pass, "{:?}", r.failure);
        }
    }

    #[test]
    fn zeta_predicts_small_arc_counts(d in 1u32..=2, e1 in 1u64..=3, e2 in 1u64..=3, q in prop::sample::select(vec![2u32, 3])) {
        let exps = if d == 1 { vec![e1] } else { vec![e1, e2] };
        let f = MonomialFunction::new(d, exps).unwrap();
        let cmp = compare_zeta(q, 2, &f, ExecMode::Sequential).unwrap();
        prop_assert!(cmp.pass, "{}", cmp.render_table());
        prop_assert_eq!(cmp.checked(), cmp.rows.len());
    }
}

#[test]
fn frozen_renderings() {
    let x = ResolutionData::monomial(1, &[1]).unwrap();
    assert_eq!(x.naive_zeta().render(), "[E_empty_o] + (L-1)*[E_1_o]/((T^-1 L^1 - 1))");
    let xy = ResolutionData::monomial(2, &[1, 1]).unwrap();
    // psi = [E1°] + [E2°] - (L-1)[E12°]
    assert_eq!(xy.nearby_fiber().unwrap().to_string(), "(-L+1)*[Et_12_o] + [Et_1_o] + [Et_2_o]");
}

#[test]
fn frozen_arc_counts() {
    // x^2 y mod t^2 over F_3: ord 0 needs units x, y (6 each); ord 1
    // forces ord x = 0, ord y = 1
    let f = MonomialFunction::new(2, vec![2, 1]).unwrap();
    let by_order = count_by_order(3, 1, &f, ExecMode::Sequential).unwrap();
    assert_eq!(by_order, [36, 12, 81 - 48]);
    let cmp = compare_zeta(3, 3, &f, ExecMode::Parallel).unwrap();
    let counted: Vec<u64> = cmp.rows.iter().map(|r| r.counted.unwrap()).collect();
    assert_eq!(counted, [4, 12, 6, 144, 72, 432, 216]);
}

#[test]
fn midpoint_h_polynomial() {
    let half = "1/2".parse().unwrap();
    let t = Triangulation::standard(1).stellar_subdivide(&[0, 1], &[half, "1/2".parse().unwrap()]).unwrap();
    assert_eq!(t.h_poly(), -LaurentPoly::l());
}
