//! Topologies generated by a binary relation.
//!
//! The right neighborhoods `xR = { y : x R y }` form a subbase. Finite
//! intersections of the subbase give the base and unions of base members give
//! the open sets. In a finite space every point `x` has a smallest open
//! neighborhood `U(x)` (the intersection of the subbase members containing
//! `x`), so interior and closure reduce to one mask test per point:
//!
//! ```text
//! int(S) = { x : U(x) ⊆ S }        cl(S) = { x : U(x) ∩ S ≠ ∅ }
//! ```

use std::collections::{BTreeSet, HashSet};

use crate::error::{Result, RoughError};
use crate::sets::{full_mask, ElementSet, EnumerationCap, SetFamily, Universe};

/// A binary relation over the indices of one universe. No reflexivity,
/// symmetry or transitivity is assumed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRelation {
    size: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl BinaryRelation {
    pub fn new<I>(size: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (x, y) in pairs {
            for index in [x, y] {
                if index >= size {
                    return Err(RoughError::IndexOutOfRange { index, size });
                }
            }
            set.insert((x, y));
        }
        Ok(Self { size, pairs: set })
    }

    pub fn from_labels<'a, I>(universe: &Universe, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut indexed = Vec::new();
        for (x, y) in pairs {
            indexed.push((universe.index_of(x)?, universe.index_of(y)?));
        }
        Self::new(universe.len(), indexed)
    }

    pub fn empty(size: usize) -> Self {
        Self {
            size,
            pairs: BTreeSet::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        Self {
            size,
            pairs: (0..size).map(|i| (i, i)).collect(),
        }
    }

    /// Decodes relation number `code` among the `2^(n²)` relations on `n`
    /// points; bit `x * n + y` selects the pair `(x, y)`.
    pub fn from_code(size: usize, code: u64) -> Self {
        debug_assert!(size * size <= 64);
        let pairs = (0..size * size)
            .filter(|bit| code >> bit & 1 == 1)
            .map(|bit| (bit / size, bit % size))
            .collect();
        Self { size, pairs }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }
}

/// Right neighborhood `xR` of every element, in index order.
pub fn right_neighborhoods(
    universe: &Universe,
    relation: &BinaryRelation,
) -> Result<Vec<ElementSet>> {
    let n = universe.len();
    if relation.size() != n {
        return Err(RoughError::WidthMismatch {
            left: n,
            right: relation.size(),
        });
    }
    let mut masks = vec![0u64; n];
    for (x, y) in relation.pairs() {
        masks[x] |= 1u64 << y;
    }
    masks
        .into_iter()
        .map(|bits| ElementSet::from_bits(n, bits))
        .collect()
}

/// A finite topological space together with the data that generated it.
#[derive(Debug, Clone)]
pub struct TopologySpace {
    universe: Universe,
    relation: Option<BinaryRelation>,
    subbase: SetFamily,
    base: SetFamily,
    opens: SetFamily,
    closeds: SetFamily,
    /// Smallest open set containing each point.
    minimal_open: Vec<u64>,
    /// `int(cl(U(x)))` for each point.
    regular_open: Vec<u64>,
}

impl TopologySpace {
    /// Builds the topology whose subbase is the right neighborhoods of
    /// `relation`. Empty neighborhoods stay in the subbase.
    pub fn from_relation(
        universe: Universe,
        relation: BinaryRelation,
        cap: EnumerationCap,
    ) -> Result<Self> {
        let neighborhoods = right_neighborhoods(&universe, &relation)?;
        let subbase = SetFamily::canonicalize(universe.len(), neighborhoods)?;
        let mut space = generate_topology(universe, &subbase, cap)?;
        space.relation = Some(relation);
        Ok(space)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn relation(&self) -> Option<&BinaryRelation> {
        self.relation.as_ref()
    }

    pub fn size(&self) -> usize {
        self.universe.len()
    }

    pub fn subbase(&self) -> &SetFamily {
        &self.subbase
    }

    pub fn base(&self) -> &SetFamily {
        &self.base
    }

    pub fn opens(&self) -> &SetFamily {
        &self.opens
    }

    pub fn closeds(&self) -> &SetFamily {
        &self.closeds
    }

    pub fn minimal_open(&self, point: usize) -> ElementSet {
        ElementSet::from_raw(self.size(), self.minimal_open[point])
    }

    pub fn full(&self) -> ElementSet {
        self.universe.full_set()
    }

    pub fn empty(&self) -> ElementSet {
        self.universe.empty_set()
    }

    pub(crate) fn interior_mask(&self, s: u64) -> u64 {
        let mut out = 0;
        for (x, &u) in self.minimal_open.iter().enumerate() {
            if u & !s == 0 {
                out |= 1 << x;
            }
        }
        out
    }

    pub(crate) fn closure_mask(&self, s: u64) -> u64 {
        let mut out = 0;
        for (x, &u) in self.minimal_open.iter().enumerate() {
            if u & s != 0 {
                out |= 1 << x;
            }
        }
        out
    }

    pub(crate) fn regular_neighborhoods(&self) -> &[u64] {
        &self.regular_open
    }

    pub(crate) fn wrap(&self, bits: u64) -> ElementSet {
        ElementSet::from_raw(self.size(), bits)
    }

    pub(crate) fn full_mask(&self) -> u64 {
        full_mask(self.size())
    }

    /// Largest open set contained in `s`.
    pub fn interior(&self, s: ElementSet) -> ElementSet {
        self.wrap(self.interior_mask(s.bits()))
    }

    /// Smallest closed set containing `s`.
    pub fn closure(&self, s: ElementSet) -> ElementSet {
        self.wrap(self.closure_mask(s.bits()))
    }

    pub fn boundary(&self, s: ElementSet) -> ElementSet {
        self.wrap(self.closure_mask(s.bits()) & !self.interior_mask(s.bits()))
    }

    /// `true` iff the boundary is empty.
    pub fn is_exact(&self, s: ElementSet) -> bool {
        self.closure_mask(s.bits()) == self.interior_mask(s.bits())
    }

    pub fn is_open(&self, s: ElementSet) -> bool {
        self.opens.contains(s)
    }

    pub fn is_closed(&self, s: ElementSet) -> bool {
        self.closeds.contains(s)
    }
}

/// Generates the topology with the given subbase.
///
/// The intersection of no subbase members is the whole universe, so the base
/// always contains it; the union of no base members is `∅`.
pub fn generate_topology(
    universe: Universe,
    subbase: &SetFamily,
    cap: EnumerationCap,
) -> Result<TopologySpace> {
    let n = universe.len();
    cap.check(n)?;
    if subbase.width() != n {
        return Err(RoughError::WidthMismatch {
            left: n,
            right: subbase.width(),
        });
    }
    let full = full_mask(n);

    let mut base: HashSet<u64> = HashSet::from([full]);
    let mut frontier = vec![full];
    while let Some(b) = frontier.pop() {
        for &s in subbase.masks() {
            let meet = b & s;
            if base.insert(meet) {
                frontier.push(meet);
            }
        }
    }

    let minimal_open: Vec<u64> = (0..n)
        .map(|x| {
            subbase
                .masks()
                .iter()
                .filter(|&&s| s >> x & 1 == 1)
                .fold(full, |acc, &s| acc & s)
        })
        .collect();

    // Every open set is a union of minimal neighborhoods; grow from ∅ until
    // no union with a further neighborhood yields anything new.
    let mut opens: HashSet<u64> = HashSet::from([0]);
    let mut frontier = vec![0u64];
    while let Some(v) = frontier.pop() {
        for (x, &u) in minimal_open.iter().enumerate() {
            if v >> x & 1 == 0 {
                let grown = v | u;
                if opens.insert(grown) {
                    frontier.push(grown);
                }
            }
        }
    }

    let opens = SetFamily::from_masks(n, opens.into_iter().collect());
    let closeds = opens.complements();
    let mut space = TopologySpace {
        universe,
        relation: None,
        subbase: subbase.clone(),
        base: SetFamily::from_masks(n, base.into_iter().collect()),
        opens,
        closeds,
        minimal_open,
        regular_open: Vec::new(),
    };
    space.regular_open = space
        .minimal_open
        .iter()
        .map(|&u| space.interior_mask(space.closure_mask(u)))
        .collect();
    #[cfg(debug_assertions)]
    if space.opens.len() <= 2048 {
        debug_assert!(crate::oracle::axiom_check(&space.opens));
    }
    Ok(space)
}
