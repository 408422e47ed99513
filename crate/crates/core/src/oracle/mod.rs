//! Definition-level reference implementations.
//!
//! Nothing here uses minimal neighborhoods or closed forms: interiors are
//! unions of open subsets, closures are intersections of closed supersets,
//! and the δ-closure quantifies over every open set containing a point.
//! These are slow and meant for checking the fast paths on small spaces.

pub mod audit;

use crate::approx::{ApproximationSpace, Tier};
use crate::error::{Result, RoughError};
use crate::openfam::OpenFamilies;
use crate::sets::{full_mask, ElementSet, SetFamily, Universe};
use crate::topology::{BinaryRelation, TopologySpace};

/// `∅` and `X` are members, and the family is closed under pairwise union
/// and pairwise intersection.
pub fn axiom_check(family: &SetFamily) -> bool {
    let full = full_mask(family.width());
    let m = family.masks();
    if !family.contains_mask(0) || !family.contains_mask(full) {
        return false;
    }
    m.iter().enumerate().all(|(i, &a)| {
        m[i + 1..]
            .iter()
            .all(|&b| family.contains_mask(a | b) && family.contains_mask(a & b))
    })
}

pub fn interior(space: &TopologySpace, s: ElementSet) -> ElementSet {
    enum_union_within(space.opens(), s)
}

pub fn closure(space: &TopologySpace, s: ElementSet) -> ElementSet {
    enum_meet_above(space.closeds(), s)
}

fn enum_union_within(open: &SetFamily, s: ElementSet) -> ElementSet {
    let bits = open
        .masks()
        .iter()
        .filter(|&&v| v & !s.bits() == 0)
        .fold(0, |acc, &v| acc | v);
    ElementSet::from_raw(open.width(), bits)
}

fn enum_meet_above(closed: &SetFamily, s: ElementSet) -> ElementSet {
    let bits = closed
        .masks()
        .iter()
        .filter(|&&w| s.bits() & !w == 0)
        .fold(full_mask(closed.width()), |acc, &w| acc & w);
    ElementSet::from_raw(closed.width(), bits)
}

/// `int(cl(A))` for each open `A`, paired with `A`.
pub fn regular_opens(space: &TopologySpace) -> Vec<(ElementSet, ElementSet)> {
    space
        .opens()
        .iter()
        .map(|a| (a, interior(space, closure(space, a))))
        .collect()
}

/// `{ x : S ∩ int(cl(A)) ≠ ∅ for every open A ∋ x }`.
pub fn delta_closure(space: &TopologySpace, s: ElementSet) -> ElementSet {
    delta_closure_with(&regular_opens(space), space.size(), s)
}

pub(crate) fn delta_closure_with(
    regular: &[(ElementSet, ElementSet)],
    n: usize,
    s: ElementSet,
) -> ElementSet {
    let bits = (0..n)
        .filter(|&x| {
            regular
                .iter()
                .filter(|(a, _)| a.contains(x))
                .all(|(_, reg)| !reg.is_disjoint(s))
        })
        .fold(0u64, |acc, x| acc | 1 << x);
    ElementSet::from_raw(n, bits)
}

/// Preopen and δP-open families by testing every subset against the
/// literal operators.
pub fn families(space: &TopologySpace) -> OpenFamilies {
    let n = space.size();
    let regular = regular_opens(space);
    let mut preopen = Vec::new();
    let mut deltap = Vec::new();
    for bits in 0..=full_mask(n) {
        let s = ElementSet::from_raw(n, bits);
        if s.subset_of(interior(space, closure(space, s))) {
            preopen.push(bits);
        }
        if s.subset_of(interior(space, delta_closure_with(&regular, n, s))) {
            deltap.push(bits);
        }
    }
    let preopen = SetFamily::from_masks(n, preopen);
    let deltap_open = SetFamily::from_masks(n, deltap);
    OpenFamilies {
        preclosed: preopen.complements(),
        deltap_closed: deltap_open.complements(),
        preopen,
        deltap_open,
    }
}

/// Union of every member of the tier's open family contained in `s`.
pub fn enum_lower(space: &ApproximationSpace, s: ElementSet, tier: Tier) -> ElementSet {
    enum_union_within(space.open_family(tier), s)
}

/// Intersection of every member of the tier's closed family containing `s`.
pub fn enum_upper(space: &ApproximationSpace, s: ElementSet, tier: Tier) -> ElementSet {
    enum_meet_above(space.closed_family(tier), s)
}

/// Neighborhood-based operators `{x : xR ⊆ S}` and `{x : xR ∩ S ≠ ∅}`.
pub fn pawlak_neighborhood_ops(
    universe: &Universe,
    relation: &BinaryRelation,
    s: ElementSet,
) -> Result<(ElementSet, ElementSet)> {
    let n = universe.len();
    if s.width() != n {
        return Err(RoughError::WidthMismatch {
            left: n,
            right: s.width(),
        });
    }
    let neighborhoods = crate::topology::right_neighborhoods(universe, relation)?;
    let mut lower = 0u64;
    let mut upper = 0u64;
    for (x, nb) in neighborhoods.iter().enumerate() {
        if nb.subset_of(s) {
            lower |= 1 << x;
        }
        if !nb.is_disjoint(s) {
            upper |= 1 << x;
        }
    }
    Ok((
        ElementSet::from_raw(n, lower),
        ElementSet::from_raw(n, upper),
    ))
}
