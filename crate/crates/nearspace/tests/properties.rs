//! Property tests over randomly generated instances.

use nearspace::genclose::{generated_subgroup, lc_closure, mdim, seed_number};
use nearspace::nearfield::{DicksonPair, Nearfield};
use nearspace::nvspace::{scalar_act, scalar_product, CanonicalSubgroup};
use nearspace::{FieldElement, Vector};
use num_bigint::BigUint;
use proptest::prelude::*;
use std::sync::OnceLock;

fn order9() -> &'static Nearfield {
    static NF: OnceLock<Nearfield> = OnceLock::new();
    NF.get_or_init(|| Nearfield::dickson(DicksonPair::new(3, 2).unwrap()).unwrap())
}

fn arb_instance() -> impl Strategy<Value = (usize, Vec<Vec<u64>>)> {
    (1usize..=4).prop_flat_map(|n| {
        (
            Just(n),
            proptest::collection::vec(proptest::collection::vec(0u64..9, n), 0..=3),
        )
    })
}

fn to_vectors(nf: &Nearfield, raw: &[Vec<u64>]) -> Vec<Vector> {
    raw.iter()
        .map(|coords| Vector::from_indices(nf, coords).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generation_routes_agree((n, raw) in arb_instance()) {
        let nf = order9();
        let vectors = to_vectors(nf, &raw);
        let g = generated_subgroup(nf, n, &vectors).unwrap();
        let trace = lc_closure(nf, n, &vectors, 10_000).unwrap();
        prop_assert_eq!(g.subgroup.enumerate(nf, 10_000).unwrap(), trace.elements);
    }

    #[test]
    fn canonical_forms_round_trip_through_json((n, raw) in arb_instance()) {
        let nf = order9();
        let vectors = to_vectors(nf, &raw);
        let sub = generated_subgroup(nf, n, &vectors).unwrap().subgroup;
        let json = serde_json::to_string(&sub).unwrap();
        let back: CanonicalSubgroup = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.revalidate(nf).unwrap(), sub);
    }

    #[test]
    fn block_coordinates_round_trip((n, raw) in arb_instance(), w_raw in proptest::collection::vec(0u64..9, 0..=4)) {
        let nf = order9();
        let vectors = to_vectors(nf, &raw);
        let sub = generated_subgroup(nf, n, &vectors).unwrap().subgroup;
        let w = Vector::from_indices(nf, &w_raw[..sub.dim().min(w_raw.len())]).unwrap();
        prop_assume!(w.dim() == sub.dim());
        let member = sub.from_coords(nf, &w).unwrap();
        prop_assert!(sub.contains(nf, &member).unwrap());
        prop_assert_eq!(sub.to_coords(nf, &member).unwrap(), w);
    }

    #[test]
    fn scalar_product_is_additive_on_the_right(
        x_raw in proptest::collection::vec(0u64..9, 3),
        y_raw in proptest::collection::vec(0u64..9, 3),
        z_raw in proptest::collection::vec(0u64..9, 3),
    ) {
        let nf = order9();
        let x = Vector::from_indices(nf, &x_raw).unwrap();
        let y = Vector::from_indices(nf, &y_raw).unwrap();
        let z = Vector::from_indices(nf, &z_raw).unwrap();
        let sum = nearspace::nvspace::add(nf, &y, &z).unwrap();
        let lhs = scalar_product(nf, &x, &sum).unwrap();
        let rhs = nf.add(
            scalar_product(nf, &x, &y).unwrap(),
            scalar_product(nf, &x, &z).unwrap(),
        );
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_action_is_a_right_module_action(
        v_raw in proptest::collection::vec(0u64..9, 1..=4),
        r in 0u64..9,
        s in 0u64..9,
    ) {
        let nf = order9();
        let v = Vector::from_indices(nf, &v_raw).unwrap();
        let r = FieldElement(r as u32);
        let s = FieldElement(s as u32);
        // v ∘ (r + s) = v ∘ r + v ∘ s
        let lhs = scalar_act(nf, &v, nf.add(r, s));
        let rhs = nearspace::nvspace::add(
            nf,
            &scalar_act(nf, &v, r),
            &scalar_act(nf, &v, s),
        )
        .unwrap();
        prop_assert_eq!(lhs, rhs);
        // v ∘ (r ∘ s) = (v ∘ r) ∘ s
        prop_assert_eq!(
            scalar_act(nf, &v, nf.mul(r, s)),
            scalar_act(nf, &scalar_act(nf, &v, r), s)
        );
    }

    #[test]
    fn seed_number_stays_within_log_bounds(q in 3u64..100_000, l in 1u64..1_000_000_000) {
        let k = seed_number(q, l);
        let log = (l as f64).ln() / (q as f64).ln();
        prop_assert!(log <= k as f64 + 1e-9);
        prop_assert!((k as f64) <= 2.0 + log + 1e-9);
        // Definitional: mdim(q, k) >= l, and k is minimal.
        prop_assert!(mdim(q, k) >= BigUint::from(l));
        if k > 1 {
            prop_assert!(mdim(q, k - 1) < BigUint::from(l));
        }
    }
}
