//! Finite universes, bitmask subsets, and canonical set families.
//!
//! Every subset of a universe of `n ≤ 64` elements is a single `u64` mask;
//! bit `i` is element `i` in the universe's label order.

use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use crate::error::{Result, RoughError};

/// Hard limit on universe size: one machine word per subset.
pub const MAX_UNIVERSE: usize = 64;

/// Default limit for operations that enumerate the whole powerset.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

#[inline]
pub(crate) fn full_mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

/// Upper bound on universe size for powerset-enumerating operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnumerationCap(usize);

impl EnumerationCap {
    pub fn new(cap: usize) -> Result<Self> {
        if cap == 0 || cap > 32 {
            return Err(RoughError::InvalidCap(cap));
        }
        Ok(Self(cap))
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, size: usize) -> Result<()> {
        if size > self.0 {
            Err(RoughError::EnumerationCapExceeded { size, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

impl Default for EnumerationCap {
    fn default() -> Self {
        Self(DEFAULT_ENUMERATION_CAP)
    }
}

/// An ordered list of distinct element labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(RoughError::EmptyUniverse);
        }
        if labels.len() > MAX_UNIVERSE {
            return Err(RoughError::UniverseTooLarge {
                size: labels.len(),
                limit: MAX_UNIVERSE,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(RoughError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// Universe `{u1, …, un}`.
    pub fn numbered(size: usize) -> Result<Self> {
        Self::new((1..=size).map(|i| format!("u{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| RoughError::UnknownLabel(label.to_string()))
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn set_of<'a, I>(&self, labels: I) -> Result<ElementSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut bits = 0u64;
        for label in labels {
            bits |= 1u64 << self.index_of(label)?;
        }
        Ok(ElementSet::from_raw(self.len(), bits))
    }

    /// Parses `{a,b}`, `{}`, `all` or `empty`.
    pub fn parse_set(&self, expr: &str) -> Result<ElementSet> {
        let trimmed = expr.trim();
        match trimmed {
            "all" => return Ok(self.full_set()),
            "empty" => return Ok(self.empty_set()),
            _ => {}
        }
        let inner = trimmed
            .strip_prefix('{')
            .and_then(|rest| rest.strip_suffix('}'))
            .ok_or_else(|| RoughError::SetExpression(expr.to_string()))?;
        if inner.trim().is_empty() {
            return Ok(self.empty_set());
        }
        let mut labels = Vec::new();
        for part in inner.split(',') {
            let label = part.trim();
            if label.is_empty() {
                return Err(RoughError::SetExpression(expr.to_string()));
            }
            labels.push(label);
        }
        self.set_of(labels)
    }

    pub fn set_labels(&self, set: &ElementSet) -> Vec<&str> {
        set.iter().map(|i| self.labels[i].as_str()).collect()
    }

    /// Renders a subset in brace notation, e.g. `{u1,u3}`.
    pub fn format_set(&self, set: &ElementSet) -> String {
        format!("{{{}}}", self.set_labels(set).join(","))
    }
}

/// A subset of a universe of `width` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet {
    width: u8,
    bits: u64,
}

impl ElementSet {
    pub(crate) fn from_raw(width: usize, bits: u64) -> Self {
        debug_assert!(width <= MAX_UNIVERSE);
        debug_assert_eq!(bits & !full_mask(width), 0);
        Self {
            width: width as u8,
            bits,
        }
    }

    pub fn empty(width: usize) -> Self {
        Self::from_raw(width, 0)
    }

    pub fn full(width: usize) -> Self {
        Self::from_raw(width, full_mask(width))
    }

    pub fn from_bits(width: usize, bits: u64) -> Result<Self> {
        if width > MAX_UNIVERSE {
            return Err(RoughError::UniverseTooLarge {
                size: width,
                limit: MAX_UNIVERSE,
            });
        }
        let stray = bits & !full_mask(width);
        if stray != 0 {
            return Err(RoughError::IndexOutOfRange {
                index: stray.trailing_zeros() as usize,
                size: width,
            });
        }
        Ok(Self::from_raw(width, bits))
    }

    pub fn singleton(width: usize, index: usize) -> Result<Self> {
        Self::from_indices(width, [index])
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Result<Self> {
        let mut bits = 0u64;
        for index in indices {
            if index >= width {
                return Err(RoughError::IndexOutOfRange { index, size: width });
            }
            bits |= 1u64 << index;
        }
        Self::from_bits(width, bits)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width as usize
    }

    pub fn len(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == full_mask(self.width())
    }

    pub fn contains(self, index: usize) -> bool {
        index < self.width() && self.bits >> index & 1 == 1
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn complement(self) -> Self {
        Self::from_raw(self.width(), !self.bits & full_mask(self.width()))
    }

    fn same_width(self, other: Self) -> Result<()> {
        if self.width == other.width {
            Ok(())
        } else {
            Err(RoughError::WidthMismatch {
                left: self.width(),
                right: other.width(),
            })
        }
    }

    pub fn union(self, other: Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self::from_raw(self.width(), self.bits | other.bits))
    }

    pub fn intersection(self, other: Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self::from_raw(self.width(), self.bits & other.bits))
    }

    pub fn difference(self, other: Self) -> Result<Self> {
        self.same_width(other)?;
        Ok(Self::from_raw(self.width(), self.bits & !other.bits))
    }

    pub fn is_subset(self, other: Self) -> Result<bool> {
        self.same_width(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    /// Subset test for sets already known to share a width.
    pub fn subset_of(self, other: Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.bits & other.bits == 0
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// The operator forms panic on width mismatch; the named methods report it.

impl BitOr for ElementSet {
    type Output = ElementSet;
    fn bitor(self, rhs: Self) -> Self {
        self.union(rhs).expect("set width mismatch")
    }
}

impl BitAnd for ElementSet {
    type Output = ElementSet;
    fn bitand(self, rhs: Self) -> Self {
        self.intersection(rhs).expect("set width mismatch")
    }
}

impl Sub for ElementSet {
    type Output = ElementSet;
    fn sub(self, rhs: Self) -> Self {
        self.difference(rhs).expect("set width mismatch")
    }
}

impl Not for ElementSet {
    type Output = ElementSet;
    fn not(self) -> Self {
        self.complement()
    }
}

/// A duplicate-free family of subsets, sorted by mask value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    width: u8,
    members: Vec<u64>,
}

impl SetFamily {
    pub fn canonicalize<I>(width: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = ElementSet>,
    {
        let mut members = Vec::new();
        for set in raw {
            if set.width() != width {
                return Err(RoughError::WidthMismatch {
                    left: width,
                    right: set.width(),
                });
            }
            members.push(set.bits);
        }
        Ok(Self::from_masks(width, members))
    }

    pub(crate) fn from_masks(width: usize, mut members: Vec<u64>) -> Self {
        members.sort_unstable();
        members.dedup();
        debug_assert!(members.iter().all(|m| m & !full_mask(width) == 0));
        Self {
            width: width as u8,
            members,
        }
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementSet> + '_ {
        let width = self.width();
        self.members
            .iter()
            .map(move |&bits| ElementSet::from_raw(width, bits))
    }

    pub fn contains(&self, set: ElementSet) -> bool {
        set.width() == self.width() && self.contains_mask(set.bits)
    }

    pub(crate) fn contains_mask(&self, bits: u64) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    pub fn complements(&self) -> SetFamily {
        let full = full_mask(self.width());
        Self::from_masks(
            self.width(),
            self.members.iter().map(|m| !m & full).collect(),
        )
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.width == other.width && self.members.iter().all(|&m| other.contains_mask(m))
    }
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_universe() -> Universe {
        Universe::new(["u1", "u2", "u3", "u4"]).unwrap()
    }

    #[test]
    fn universe_construction() {
        assert_eq!(example_universe().len(), 4);
        assert_eq!(Universe::new(["a"]).unwrap().len(), 1);
        assert_eq!(
            Universe::new(["x", "x"]),
            Err(RoughError::DuplicateLabel("x".into()))
        );
        assert_eq!(
            Universe::new(Vec::<String>::new()),
            Err(RoughError::EmptyUniverse)
        );
        assert!(matches!(
            Universe::numbered(65),
            Err(RoughError::UniverseTooLarge { size: 65, .. })
        ));
        assert_eq!(Universe::numbered(64).unwrap().full_set().bits(), u64::MAX);
    }

    #[test]
    fn set_algebra() {
        let u = example_universe();
        let a = u.set_of(["u1", "u2"]).unwrap();
        let b = u.set_of(["u2", "u3"]).unwrap();
        assert_eq!(a | b, u.set_of(["u1", "u2", "u3"]).unwrap());
        assert_eq!(
            u.set_of(["u3", "u4"]).unwrap().complement(),
            u.set_of(["u1", "u2"]).unwrap()
        );
        assert!(u
            .set_of(["u3"])
            .unwrap()
            .is_subset(u.set_of(["u3", "u4"]).unwrap())
            .unwrap());
        assert_eq!((a & b).len(), 1);
        assert_eq!(a - b, u.set_of(["u1"]).unwrap());
    }

    #[test]
    fn width_mismatch_is_reported() {
        let a = ElementSet::full(3);
        let b = ElementSet::full(4);
        assert_eq!(
            a.union(b),
            Err(RoughError::WidthMismatch { left: 3, right: 4 })
        );
        assert!(a.is_subset(b).is_err());
        assert!(SetFamily::canonicalize(3, [a, b]).is_err());
    }

    #[test]
    fn stray_bits_rejected() {
        assert!(ElementSet::from_bits(3, 0b1000).is_err());
        assert!(ElementSet::from_indices(3, [3]).is_err());
    }

    #[test]
    fn canonicalize_dedupes_and_orders() {
        let u = example_universe();
        let u3 = u.set_of(["u3"]).unwrap();
        let fam = SetFamily::canonicalize(4, [u3, u3, u.empty_set()]).unwrap();
        assert_eq!(fam.iter().collect::<Vec<_>>(), vec![u.empty_set(), u3]);
        assert!(SetFamily::canonicalize(4, []).unwrap().is_empty());
    }

    #[test]
    fn complements_of_example_topology() {
        let u = example_universe();
        let tau = [
            u.empty_set(),
            u.full_set(),
            u.parse_set("{u3}").unwrap(),
            u.parse_set("{u4}").unwrap(),
            u.parse_set("{u3,u4}").unwrap(),
            u.parse_set("{u1,u2,u3}").unwrap(),
        ];
        let closed = SetFamily::canonicalize(4, tau).unwrap().complements();
        assert_eq!(closed.len(), 6);
        assert!(closed.contains(u.parse_set("{u1,u2}").unwrap()));
        assert!(closed.contains(u.parse_set("{u4}").unwrap()));
    }

    #[test]
    fn set_expressions() {
        let u = example_universe();
        assert_eq!(u.parse_set("all").unwrap(), u.full_set());
        assert_eq!(u.parse_set("empty").unwrap(), u.empty_set());
        assert_eq!(u.parse_set("{}").unwrap(), u.empty_set());
        assert_eq!(u.parse_set(" { u1 , u3 } ").unwrap().bits(), 0b101);
        assert_eq!(
            u.parse_set("{u9}"),
            Err(RoughError::UnknownLabel("u9".into()))
        );
        assert!(matches!(
            u.parse_set("u1,u2"),
            Err(RoughError::SetExpression(_))
        ));
        assert!(u.parse_set("{u1,,u2}").is_err());
        assert_eq!(u.format_set(&u.parse_set("{u3,u1}").unwrap()), "{u1,u3}");
    }

    #[test]
    fn enumeration_cap() {
        let cap = EnumerationCap::default();
        assert_eq!(cap.get(), 20);
        assert!(cap.check(20).is_ok());
        assert_eq!(
            cap.check(25),
            Err(RoughError::EnumerationCapExceeded { size: 25, cap: 20 })
        );
        assert!(EnumerationCap::new(0).is_err());
        assert!(EnumerationCap::new(33).is_err());
    }

    proptest! {
        #[test]
        fn complement_cardinality(width in 1usize..=64, raw in any::<u64>()) {
            let s = ElementSet::from_bits(width, raw & full_mask(width)).unwrap();
            prop_assert_eq!(s.len() + s.complement().len(), width);
            prop_assert_eq!(s.complement().complement(), s);
        }

        #[test]
        fn canonicalize_is_idempotent_and_order_insensitive(
            mut raw in proptest::collection::vec(0u64..256, 0..40)
        ) {
            let sets = |v: &[u64]| v.iter().map(|&b| ElementSet::from_bits(8, b).unwrap()).collect::<Vec<_>>();
            let fam = SetFamily::canonicalize(8, sets(&raw)).unwrap();
            let again = SetFamily::canonicalize(8, fam.iter()).unwrap();
            prop_assert_eq!(&fam, &again);
            raw.reverse();
            raw.extend_from_slice(&raw.clone());
            prop_assert_eq!(&fam, &SetFamily::canonicalize(8, sets(&raw)).unwrap());
            prop_assert!(fam.masks().windows(2).all(|w| w[0] < w[1]));
        }
    }
}
