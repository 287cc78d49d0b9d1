use std::collections::BTreeSet;

use verlinde_core::numeric::round_with_residual;
use verlinde_core::so_oracle::{self, OracleFamily, USet};
use verlinde_core::weights::{self, CenterSubgroupSpec};
use verlinde_core::{delta, n_so, Family, GroupType, RootSystem, Q, DEFAULT_PRECISION};

fn cases() -> Vec<(Family, OracleFamily, CenterSubgroupSpec, usize)> {
    let mut v = Vec::new();
    for s in 2..=5 {
        v.push((Family::B, OracleFamily::B, CenterSubgroupSpec::SoOdd, s));
    }
    for s in 3..=5 {
        v.push((Family::D, OracleFamily::D, CenterSubgroupSpec::SoEven, s));
    }
    v
}

#[test]
fn usets_are_exactly_the_quotient_weights() {
    for (family, ofam, spec, s) in cases() {
        for level in 0..=4 {
            let rs = RootSystem::build(GroupType::new(family, s).unwrap());
            let set = weights::enumerate_level_weights(&rs, level);
            let pprime = weights::restrict_to_quotient(&set, spec).unwrap();
            let from_weights: BTreeSet<Vec<Q>> = pprime
                .weights()
                .iter()
                .map(|w| weights::u_coords(&rs, w.vector()).unwrap().u)
                .collect();
            let from_search: BTreeSet<Vec<Q>> = so_oracle::all_usets(ofam, s, level)
                .unwrap()
                .into_iter()
                .map(|u| u.values().to_vec())
                .collect();
            assert_eq!(from_weights, from_search, "{rs} level {level}");

            let orbits = weights::orbit_decompose(&pprime, spec).unwrap();
            let reps = so_oracle::enumerate_usets(ofam, s, level).unwrap();
            let mut a: Vec<u32> = orbits.orbits.iter().map(|o| o.size).collect();
            let mut b: Vec<u32> = reps.iter().map(|o| o.orbit_size).collect();
            a.sort();
            b.sort();
            assert_eq!(a, b, "{rs} level {level}");
        }
    }
}

#[test]
fn pointwise_delta_at_levels_one_to_three() {
    for (family, ofam, spec, s) in cases() {
        for level in 1..=3 {
            let rs = RootSystem::build(GroupType::new(family, s).unwrap());
            let set = weights::enumerate_level_weights(&rs, level);
            let pprime = weights::restrict_to_quotient(&set, spec).unwrap();
            for w in pprime.weights() {
                let u = weights::u_coords(&rs, w.vector()).unwrap().u;
                let uset = USet::new(ofam, pprime.k(), u).unwrap();
                let a = so_oracle::delta_of(&uset, DEFAULT_PRECISION).unwrap();
                let b = delta(&rs, level, w.vector(), DEFAULT_PRECISION).unwrap();
                let diff = a.sub(&b).unwrap().abs().to_f64();
                assert!(diff < 1e-20, "{rs} level {level} {w}: {diff:e}");
            }
        }
    }
}

#[test]
fn oracle_matches_engine_on_every_default_pair() {
    for r in 5..=12 {
        for g in 1..=5 {
            let engine = n_so(r, g).unwrap();
            let oracle = so_oracle::n_so_oracle(r, g).unwrap();
            assert_eq!(engine.value, oracle.value, "r={r} g={g}");
            assert_eq!(engine.term_count, oracle.term_count, "r={r} g={g}");
        }
    }
}

#[test]
fn oracle_delta_is_gamma_invariant() {
    for (_, ofam, _, s) in cases() {
        for u in so_oracle::all_usets(ofam, s, 3).unwrap() {
            let a = so_oracle::delta_of(&u, 128).unwrap();
            let b = so_oracle::delta_of(&u.gamma(), 128).unwrap();
            let (na, _) = round_with_residual(&a.sub(&b).unwrap().abs()).unwrap();
            assert_eq!(na, 0u32.into(), "{u}");
        }
    }
}
