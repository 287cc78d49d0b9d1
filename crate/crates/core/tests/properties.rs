use num_bigint::BigUint;
use num_integer::binomial;
use proptest::prelude::*;

use verlinde_core::weights::{self, CenterSubgroupSpec};
use verlinde_core::{n_so, n_sp, theta_dim, Evaluator, Family, GroupType, RootSystem};

fn rs(family: Family, rank: usize) -> RootSystem {
    RootSystem::build(GroupType::new(family, rank).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn so_identity_holds(r in 3u32..=12, g in 1u32..=8) {
        prop_assert_eq!(n_so(r, g).unwrap().value, theta_dim(r, g));
    }

    #[test]
    fn sp_level_rank(r in 1u32..=3, s in 1u32..=3, g in 1u32..=5) {
        prop_assert_eq!(n_sp(r, s, g).unwrap().value, n_sp(s, r, g).unwrap().value);
    }

    // every comark is 1 for A_n and C_n, so |P_ℓ| counts monomials
    #[test]
    fn level_set_size_a_and_c(n in 1usize..=5, level in 0u32..=5, c in any::<bool>()) {
        let family = if c && n >= 2 { Family::C } else { Family::A };
        let root_system = rs(family, n);
        let set = weights::enumerate_level_weights(&root_system, level);
        prop_assert_eq!(set.len() as u64, binomial(n as u64 + level as u64, n as u64));
    }

    #[test]
    fn genus_one_counts_terms(family in prop_oneof![Just(Family::A), Just(Family::B), Just(Family::C), Just(Family::D)],
                              rank in 1usize..=4, level in 0u32..=3) {
        let rank = rank.max(family.min_rank());
        let v = Evaluator::default().sc(&rs(family, rank), level, 1).unwrap();
        prop_assert_eq!(v.value, BigUint::from(v.term_count));
    }

    #[test]
    fn quotient_orbits_partition(family in prop_oneof![Just(Family::B), Just(Family::D)], rank in 2usize..=5, level in 0u32..=4) {
        let rank = rank.max(family.min_rank());
        let rs = rs(family, rank);
        let spec = CenterSubgroupSpec::special_orthogonal(&rs).unwrap();
        let set = weights::enumerate_level_weights(&rs, level);
        let pprime = weights::restrict_to_quotient(&set, spec).unwrap();
        let orbits = weights::orbit_decompose(&pprime, spec).unwrap();
        prop_assert_eq!(orbits.total_size() as usize, pprime.len());
        for o in &orbits.orbits {
            prop_assert_eq!(o.members.len() as u32, o.size);
            prop_assert_eq!(&o.members[0], &o.representative);
        }
    }

    #[test]
    fn precision_does_not_change_values(r in 3u32..=10, g in 1u32..=4, extra in 1usize..=3) {
        let base = Evaluator::default().n_so(r, g).unwrap().value;
        let more = Evaluator::with_precision(192 + 64 * extra).unwrap().n_so(r, g).unwrap().value;
        prop_assert_eq!(base, more);
    }
}
