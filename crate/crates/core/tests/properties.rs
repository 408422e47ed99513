use proptest::prelude::*;
use roughtopo::oracle::{enum_lower, enum_upper};
use roughtopo::{ApproximationSpace, BinaryRelation, ElementSet, EnumerationCap, Tier, Universe};

fn space_strategy() -> impl Strategy<Value = ApproximationSpace> {
    (1usize..=6).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * n).prop_map(move |pairs| {
            let relation = BinaryRelation::new(n, pairs).unwrap();
            ApproximationSpace::new(
                Universe::numbered(n).unwrap(),
                relation,
                EnumerationCap::default(),
            )
            .unwrap()
        })
    })
}

fn subset(space: &ApproximationSpace, raw: u64) -> ElementSet {
    let n = space.size();
    ElementSet::from_bits(n, raw & ((1u64 << n) - 1)).unwrap()
}

proptest! {
    #[test]
    fn approximations_nest_across_tiers(space in space_strategy(), raw in any::<u64>()) {
        let s = subset(&space, raw);
        let lo = Tier::ALL.map(|t| space.lower(s, t));
        let up = Tier::ALL.map(|t| space.upper(s, t));
        prop_assert!(lo[0].subset_of(lo[1]) && lo[1].subset_of(lo[2]) && lo[2].subset_of(s));
        prop_assert!(s.subset_of(up[2]) && up[2].subset_of(up[1]) && up[1].subset_of(up[0]));
    }

    #[test]
    fn closed_forms_match_definitions(space in space_strategy(), raw in any::<u64>()) {
        let s = subset(&space, raw);
        for tier in Tier::ALL {
            prop_assert_eq!(space.lower(s, tier), enum_lower(&space, s, tier));
            prop_assert_eq!(space.upper(s, tier), enum_upper(&space, s, tier));
        }
    }

    #[test]
    fn lower_upper_duality(space in space_strategy(), raw in any::<u64>()) {
        let s = subset(&space, raw);
        for tier in Tier::ALL {
            prop_assert_eq!(space.lower(!s, tier), !space.upper(s, tier));
        }
    }

    #[test]
    fn accuracy_never_decreases(space in space_strategy(), raw in any::<u64>()) {
        let s = subset(&space, raw);
        prop_assume!(!s.is_empty());
        let acc = Tier::ALL.map(|t| space.accuracy(s, t).unwrap());
        prop_assert!(acc[0] <= acc[1] && acc[1] <= acc[2]);
    }

    #[test]
    fn regions_cover_boundaries(space in space_strategy(), raw in any::<u64>()) {
        let s = subset(&space, raw);
        let report = space.regions(s);
        prop_assert_eq!(report.iter().count(), 24);
        for tier in Tier::ALL {
            let b = space.upper(s, tier) - space.lower(s, tier);
            let pnb = space.positive_negative_boundary(s, tier);
            prop_assert_eq!(pnb.boundary, b);
        }
    }
}
