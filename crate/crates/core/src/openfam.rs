//! Preopen and δ-preopen set families and their closure/interior operators.
//!
//! `x ∈ cl_δ(S)` iff every open `A ∋ x` has `S ∩ int(cl(A)) ≠ ∅`. Since
//! `int(cl(·))` is monotone and every open set containing `x` contains the
//! minimal neighborhood `U(x)`, the condition only has to be checked for
//! `A = U(x)`.

use rayon::prelude::*;

use crate::error::Result;
use crate::sets::{ElementSet, EnumerationCap, SetFamily};
use crate::topology::TopologySpace;

pub(crate) fn delta_closure_mask(space: &TopologySpace, s: u64) -> u64 {
    let mut out = 0u64;
    for (x, &reg) in space.regular_neighborhoods().iter().enumerate() {
        if reg & s != 0 {
            out |= 1 << x;
        }
    }
    out
}

pub(crate) fn delta_interior_mask(space: &TopologySpace, s: u64) -> u64 {
    let full = space.full_mask();
    !delta_closure_mask(space, !s & full) & full
}

pub(crate) fn is_preopen_mask(space: &TopologySpace, s: u64) -> bool {
    s & !space.interior_mask(space.closure_mask(s)) == 0
}

pub(crate) fn is_deltap_open_mask(space: &TopologySpace, s: u64) -> bool {
    s & !space.interior_mask(delta_closure_mask(space, s)) == 0
}

/// `S ⊆ int(cl(S))`.
pub fn is_preopen(space: &TopologySpace, s: ElementSet) -> bool {
    is_preopen_mask(space, s.bits())
}

pub fn delta_closure(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(delta_closure_mask(space, s.bits()))
}

/// `X \ cl_δ(X \ S)`.
pub fn delta_interior(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(delta_interior_mask(space, s.bits()))
}

/// `S ⊆ int(cl_δ(S))`.
pub fn is_deltap_open(space: &TopologySpace, s: ElementSet) -> bool {
    is_deltap_open_mask(space, s.bits())
}

pub(crate) fn p_interior_mask(space: &TopologySpace, s: u64) -> u64 {
    s & space.interior_mask(space.closure_mask(s))
}

pub(crate) fn p_closure_mask(space: &TopologySpace, s: u64) -> u64 {
    s | space.closure_mask(space.interior_mask(s))
}

pub(crate) fn p_interior_delta_mask(space: &TopologySpace, s: u64) -> u64 {
    s & space.interior_mask(delta_closure_mask(space, s))
}

pub(crate) fn p_closure_delta_mask(space: &TopologySpace, s: u64) -> u64 {
    s | space.closure_mask(delta_interior_mask(space, s))
}

/// Preopen interior, `S ∩ int(cl(S))`: the largest preopen subset of `S`.
pub fn p_interior(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(p_interior_mask(space, s.bits()))
}

/// Preclosure, `S ∪ cl(int(S))`: the smallest preclosed superset of `S`.
pub fn p_closure(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(p_closure_mask(space, s.bits()))
}

/// δP-interior in closed form, `S ∩ int(cl_δ(S))`.
pub fn p_interior_delta(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(p_interior_delta_mask(space, s.bits()))
}

/// δP-closure in closed form, `S ∪ cl(int_δ(S))`.
pub fn p_closure_delta(space: &TopologySpace, s: ElementSet) -> ElementSet {
    space.wrap(p_closure_delta_mask(space, s.bits()))
}

/// The preopen and δP-open families of a space, with their complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenFamilies {
    pub preopen: SetFamily,
    pub preclosed: SetFamily,
    pub deltap_open: SetFamily,
    pub deltap_closed: SetFamily,
}

const CHUNK: u64 = 1 << 12;

impl OpenFamilies {
    /// Classifies every subset of the universe.
    pub fn build(space: &TopologySpace, cap: EnumerationCap) -> Result<Self> {
        let n = space.size();
        cap.check(n)?;
        let total = 1u64 << n;
        let chunks = total.div_ceil(CHUNK);
        let parts: Vec<(Vec<u64>, Vec<u64>)> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut pre = Vec::new();
                let mut dp = Vec::new();
                for s in c * CHUNK..((c + 1) * CHUNK).min(total) {
                    if is_preopen_mask(space, s) {
                        pre.push(s);
                        dp.push(s);
                    } else if is_deltap_open_mask(space, s) {
                        dp.push(s);
                    }
                }
                (pre, dp)
            })
            .collect();
        let (mut preopen, mut deltap) = (Vec::new(), Vec::new());
        for (pre, dp) in parts {
            preopen.extend(pre);
            deltap.extend(dp);
        }
        let preopen = SetFamily::from_masks(n, preopen);
        let deltap_open = SetFamily::from_masks(n, deltap);
        Ok(Self {
            preclosed: preopen.complements(),
            deltap_closed: deltap_open.complements(),
            preopen,
            deltap_open,
        })
    }
}
