//! Lower/upper approximations over the three tiers of open sets.
//!
//! | tier  | open family | lower(S)           | upper(S)            |
//! |-------|-------------|--------------------|---------------------|
//! | `Tau` | τ           | `int(S)`           | `cl(S)`             |
//! | `P`   | PO(X)       | `S ∩ int(cl(S))`   | `S ∪ cl(int(S))`    |
//! | `Dp`  | δPO(X)      | `S ∩ int(cl_δ(S))` | `S ∪ cl(int_δ(S))`  |
//!
//! Each closed form equals the union of the tier's open subsets of `S`
//! (resp. the intersection of its closed supersets); the `oracle` module
//! recomputes them by scanning the families.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RoughError};
use crate::openfam::{self, OpenFamilies};
use crate::sets::{ElementSet, EnumerationCap, SetFamily, Universe};
use crate::topology::{BinaryRelation, TopologySpace};

/// Exact accuracy value `|lower| / |upper|`.
pub type Accuracy = Ratio<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Tau,
    P,
    Dp,
}

impl Tier {
    pub const ALL: [Tier; 3] = [Tier::Tau, Tier::P, Tier::Dp];

    pub fn name(self) -> &'static str {
        match self {
            Tier::Tau => "tau",
            Tier::P => "p",
            Tier::Dp => "dp",
        }
    }

    /// Prefix used in region and class names (`""`, `"P"`, `"δP"`).
    pub fn prefix(self) -> &'static str {
        match self {
            Tier::Tau => "",
            Tier::P => "P",
            Tier::Dp => "δP",
        }
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tier {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tau" => Ok(Tier::Tau),
            "p" => Ok(Tier::P),
            "dp" => Ok(Tier::Dp),
            other => Err(format!("unknown tier `{other}` (expected tau, p or dp)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TierApproximation {
    pub tier: Tier,
    pub subject: ElementSet,
    pub lower: ElementSet,
    pub upper: ElementSet,
    /// `None` when the subject is empty.
    pub accuracy: Option<Accuracy>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositiveNegativeBoundary {
    pub positive: ElementSet,
    pub negative: ElementSet,
    pub boundary: ElementSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Definability {
    /// Roughly definable: lower ≠ ∅, upper ≠ X.
    Rd,
    /// Internally undefinable: lower = ∅, upper ≠ X.
    Iud,
    /// Externally undefinable: lower ≠ ∅, upper = X.
    Eud,
    /// Totally undefinable: lower = ∅, upper = X.
    Tud,
}

impl Definability {
    pub const ALL: [Definability; 4] = [
        Definability::Rd,
        Definability::Iud,
        Definability::Eud,
        Definability::Tud,
    ];

    pub fn from_bounds(lower: ElementSet, upper: ElementSet) -> Self {
        match (lower.is_empty(), upper.is_full()) {
            (false, false) => Definability::Rd,
            (true, false) => Definability::Iud,
            (false, true) => Definability::Eud,
            (true, true) => Definability::Tud,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Definability::Rd => "RD",
            Definability::Iud => "IUD",
            Definability::Eud => "EUD",
            Definability::Tud => "TUD",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DefinabilityClass {
    pub tier: Tier,
    pub class: Definability,
    /// lower = upper.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipMode {
    Strong,
    Weak,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoughInclusion {
    pub bottom: bool,
    pub top: bool,
    pub full: bool,
}

/// The 24 areas into which the three tiers cut the universe for a subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Area {
    InternalEdge,
    PInternalEdge,
    DpInternalEdge,
    ExternalEdge,
    PExternalEdge,
    DpExternalEdge,
    Boundary,
    PBoundary,
    DpBoundary,
    Exterior,
    PExterior,
    DpExterior,
    UpperTauMinusLowerP,
    UpperTauMinusLowerDp,
    UpperTauMinusUpperDp,
    UpperPMinusLowerTau,
    UpperPMinusLowerDp,
    UpperPMinusUpperDp,
    LowerPMinusLowerTau,
    UpperDpMinusLowerP,
    UpperDpMinusLowerTau,
    LowerDpMinusLowerP,
    LowerDpMinusLowerTau,
    UpperTauMinusUpperP,
}

impl Area {
    pub const ALL: [Area; 24] = [
        Area::InternalEdge,
        Area::PInternalEdge,
        Area::DpInternalEdge,
        Area::ExternalEdge,
        Area::PExternalEdge,
        Area::DpExternalEdge,
        Area::Boundary,
        Area::PBoundary,
        Area::DpBoundary,
        Area::Exterior,
        Area::PExterior,
        Area::DpExterior,
        Area::UpperTauMinusLowerP,
        Area::UpperTauMinusLowerDp,
        Area::UpperTauMinusUpperDp,
        Area::UpperPMinusLowerTau,
        Area::UpperPMinusLowerDp,
        Area::UpperPMinusUpperDp,
        Area::LowerPMinusLowerTau,
        Area::UpperDpMinusLowerP,
        Area::UpperDpMinusLowerTau,
        Area::LowerDpMinusLowerP,
        Area::LowerDpMinusLowerTau,
        Area::UpperTauMinusUpperP,
    ];

    /// 1-based area number.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Machine-readable key.
    pub fn key(self) -> &'static str {
        match self {
            Area::InternalEdge => "internal_edge",
            Area::PInternalEdge => "p_internal_edge",
            Area::DpInternalEdge => "dp_internal_edge",
            Area::ExternalEdge => "external_edge",
            Area::PExternalEdge => "p_external_edge",
            Area::DpExternalEdge => "dp_external_edge",
            Area::Boundary => "boundary",
            Area::PBoundary => "p_boundary",
            Area::DpBoundary => "dp_boundary",
            Area::Exterior => "exterior",
            Area::PExterior => "p_exterior",
            Area::DpExterior => "dp_exterior",
            Area::UpperTauMinusLowerP => "upper_tau_minus_lower_p",
            Area::UpperTauMinusLowerDp => "upper_tau_minus_lower_dp",
            Area::UpperTauMinusUpperDp => "upper_tau_minus_upper_dp",
            Area::UpperPMinusLowerTau => "upper_p_minus_lower_tau",
            Area::UpperPMinusLowerDp => "upper_p_minus_lower_dp",
            Area::UpperPMinusUpperDp => "upper_p_minus_upper_dp",
            Area::LowerPMinusLowerTau => "lower_p_minus_lower_tau",
            Area::UpperDpMinusLowerP => "upper_dp_minus_lower_p",
            Area::UpperDpMinusLowerTau => "upper_dp_minus_lower_tau",
            Area::LowerDpMinusLowerP => "lower_dp_minus_lower_p",
            Area::LowerDpMinusLowerTau => "lower_dp_minus_lower_tau",
            Area::UpperTauMinusUpperP => "upper_tau_minus_upper_p",
        }
    }

    /// Conventional symbol (`Edg_`, `PEdg¯`, `δPb`, ...), or the key for the
    /// unnamed difference areas.
    pub fn symbol(self) -> &'static str {
        match self {
            Area::InternalEdge => "Edg_(S)",
            Area::PInternalEdge => "PEdg_(S)",
            Area::DpInternalEdge => "δPEdg_(S)",
            Area::ExternalEdge => "Edg¯(S)",
            Area::PExternalEdge => "PEdg¯(S)",
            Area::DpExternalEdge => "δPEdg¯(S)",
            Area::Boundary => "b(S)",
            Area::PBoundary => "Pb(S)",
            Area::DpBoundary => "δPb(S)",
            Area::Exterior => "ext(S)",
            Area::PExterior => "Pext(S)",
            Area::DpExterior => "δPext(S)",
            other => other.key(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegionReport {
    pub subject: ElementSet,
    areas: [ElementSet; 24],
}

impl RegionReport {
    pub fn get(&self, area: Area) -> ElementSet {
        self.areas[area as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Area, ElementSet)> + '_ {
        Area::ALL.iter().map(move |&a| (a, self.get(a)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassViolation {
    pub subset: u64,
    pub class: Definability,
    pub lower_tier: Tier,
    pub higher_tier: Tier,
}

/// Class sizes per tier over every subset, plus any breaks in the
/// inclusion chains (RD grows with the tier; IUD, EUD, TUD shrink).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInclusionReport {
    /// `counts[tier][class]`, indexed by `Tier as usize` and `Definability as usize`.
    pub counts: [[u64; 4]; 3],
    pub violations: Vec<ClassViolation>,
}

impl ClassInclusionReport {
    pub fn count(&self, tier: Tier, class: Definability) -> u64 {
        self.counts[tier as usize][class as usize]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyRow {
    pub subset: ElementSet,
    /// Indexed by `Tier as usize`.
    pub accuracy: [Accuracy; 3],
}

/// A topology generated from a relation with its derived open families.
#[derive(Debug, Clone)]
pub struct ApproximationSpace {
    topology: TopologySpace,
    families: OpenFamilies,
}

impl ApproximationSpace {
    pub fn new(universe: Universe, relation: BinaryRelation, cap: EnumerationCap) -> Result<Self> {
        let topology = TopologySpace::from_relation(universe, relation, cap)?;
        Self::from_topology(topology, cap)
    }

    pub fn from_topology(topology: TopologySpace, cap: EnumerationCap) -> Result<Self> {
        let families = OpenFamilies::build(&topology, cap)?;
        Ok(Self { topology, families })
    }

    pub fn topology(&self) -> &TopologySpace {
        &self.topology
    }

    pub fn families(&self) -> &OpenFamilies {
        &self.families
    }

    pub fn universe(&self) -> &Universe {
        self.topology.universe()
    }

    pub fn size(&self) -> usize {
        self.topology.size()
    }

    /// Open sets of a tier: τ, PO(X) or δPO(X).
    pub fn open_family(&self, tier: Tier) -> &SetFamily {
        match tier {
            Tier::Tau => self.topology.opens(),
            Tier::P => &self.families.preopen,
            Tier::Dp => &self.families.deltap_open,
        }
    }

    pub fn closed_family(&self, tier: Tier) -> &SetFamily {
        match tier {
            Tier::Tau => self.topology.closeds(),
            Tier::P => &self.families.preclosed,
            Tier::Dp => &self.families.deltap_closed,
        }
    }

    pub(crate) fn lower_mask(&self, s: u64, tier: Tier) -> u64 {
        let t = &self.topology;
        match tier {
            Tier::Tau => t.interior_mask(s),
            Tier::P => openfam::p_interior_mask(t, s),
            Tier::Dp => openfam::p_interior_delta_mask(t, s),
        }
    }

    pub(crate) fn upper_mask(&self, s: u64, tier: Tier) -> u64 {
        let t = &self.topology;
        match tier {
            Tier::Tau => t.closure_mask(s),
            Tier::P => openfam::p_closure_mask(t, s),
            Tier::Dp => openfam::p_closure_delta_mask(t, s),
        }
    }

    /// Union of the tier's open sets contained in `s`.
    pub fn lower(&self, s: ElementSet, tier: Tier) -> ElementSet {
        self.topology.wrap(self.lower_mask(s.bits(), tier))
    }

    /// Intersection of the tier's closed sets containing `s`.
    pub fn upper(&self, s: ElementSet, tier: Tier) -> ElementSet {
        self.topology.wrap(self.upper_mask(s.bits(), tier))
    }

    pub fn accuracy(&self, s: ElementSet, tier: Tier) -> Result<Accuracy> {
        if s.is_empty() {
            return Err(RoughError::EmptySubject);
        }
        let lower = self.lower(s, tier).len() as u32;
        let upper = self.upper(s, tier).len() as u32;
        Ok(Ratio::new(lower, upper))
    }

    pub fn approximate(&self, s: ElementSet, tier: Tier) -> TierApproximation {
        TierApproximation {
            tier,
            subject: s,
            lower: self.lower(s, tier),
            upper: self.upper(s, tier),
            accuracy: self.accuracy(s, tier).ok(),
        }
    }

    pub fn positive_negative_boundary(
        &self,
        s: ElementSet,
        tier: Tier,
    ) -> PositiveNegativeBoundary {
        let lower = self.lower(s, tier);
        let upper = self.upper(s, tier);
        PositiveNegativeBoundary {
            positive: lower,
            negative: upper.complement(),
            boundary: upper - lower,
        }
    }

    pub fn regions(&self, s: ElementSet) -> RegionReport {
        let [lt, lp, ld] = Tier::ALL.map(|t| self.lower(s, t));
        let [ut, up, ud] = Tier::ALL.map(|t| self.upper(s, t));
        let areas = [
            s - lt,
            s - lp,
            s - ld,
            ut - s,
            up - s,
            ud - s,
            ut - lt,
            up - lp,
            ud - ld,
            ut.complement(),
            up.complement(),
            ud.complement(),
            ut - lp,
            ut - ld,
            ut - ud,
            up - lt,
            up - ld,
            up - ud,
            lp - lt,
            ud - lp,
            ud - lt,
            ld - lp,
            ld - lt,
            ut - up,
        ];
        RegionReport { subject: s, areas }
    }

    pub fn membership(
        &self,
        x: usize,
        s: ElementSet,
        tier: Tier,
        mode: MembershipMode,
    ) -> Result<bool> {
        if x >= self.size() {
            return Err(RoughError::IndexOutOfRange {
                index: x,
                size: self.size(),
            });
        }
        let bound = match mode {
            MembershipMode::Strong => self.lower(s, tier),
            MembershipMode::Weak => self.upper(s, tier),
        };
        Ok(bound.contains(x))
    }

    pub fn rough_inclusion(&self, s: ElementSet, n: ElementSet, tier: Tier) -> RoughInclusion {
        let bottom = self.lower(s, tier).subset_of(self.lower(n, tier));
        let top = self.upper(s, tier).subset_of(self.upper(n, tier));
        RoughInclusion {
            bottom,
            top,
            full: bottom && top,
        }
    }

    pub fn classify(&self, s: ElementSet, tier: Tier) -> DefinabilityClass {
        let lower = self.lower(s, tier);
        let upper = self.upper(s, tier);
        DefinabilityClass {
            tier,
            class: Definability::from_bounds(lower, upper),
            exact: lower == upper,
        }
    }

    pub fn class_inclusion_report(&self) -> ClassInclusionReport {
        let mut counts = [[0u64; 4]; 3];
        let mut violations = Vec::new();
        for bits in 0..1u64 << self.size() {
            let s = self.topology.wrap(bits);
            let classes = Tier::ALL.map(|t| self.classify(s, t).class);
            for (t, class) in classes.iter().enumerate() {
                counts[t][*class as usize] += 1;
            }
            for (lo, hi) in [(Tier::Tau, Tier::P), (Tier::P, Tier::Dp)] {
                let (below, above) = (classes[lo as usize], classes[hi as usize]);
                let broken = match (below, above) {
                    (Definability::Rd, above) if above != Definability::Rd => {
                        Some(Definability::Rd)
                    }
                    (below, above) if above != Definability::Rd && below != above => Some(above),
                    _ => None,
                };
                if let Some(class) = broken {
                    violations.push(ClassViolation {
                        subset: bits,
                        class,
                        lower_tier: lo,
                        higher_tier: hi,
                    });
                }
            }
        }
        ClassInclusionReport { counts, violations }
    }

    /// Every δP-open set is also δP-closed.
    pub fn deltap_open_sets_are_closed(&self) -> bool {
        self.families
            .deltap_open
            .is_subfamily_of(&self.families.deltap_closed)
    }

    /// Distinct δP-upper approximations of the singletons. Requires every
    /// δP-open set to be δP-closed, in which case the blocks partition X.
    pub fn point_closure_partition(&self) -> Result<SetFamily> {
        if let Some(bad) = self
            .families
            .deltap_open
            .iter()
            .find(|&v| !self.families.deltap_closed.contains(v))
        {
            return Err(RoughError::PreconditionFailed(format!(
                "δP-open set {} is not δP-closed",
                self.universe().format_set(&bad)
            )));
        }
        let n = self.size();
        let blocks = (0..n).map(|x| self.upper(self.topology.wrap(1 << x), Tier::Dp));
        SetFamily::canonicalize(n, blocks)
    }

    /// One row per nonempty proper subset, ordered by size and then
    /// lexicographically by element index. With `small_subsets`, only subsets
    /// of one to three elements.
    pub fn accuracy_rows(&self, small_subsets: bool) -> Vec<AccuracyRow> {
        let full = self.topology.full_mask();
        let mut subsets: Vec<ElementSet> = (1..full)
            .map(|b| self.topology.wrap(b))
            .filter(|s| !small_subsets || s.len() <= 3)
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
        subsets
            .into_iter()
            .map(|s| AccuracyRow {
                subset: s,
                accuracy: Tier::ALL.map(|t| self.accuracy(s, t).expect("nonempty subset")),
            })
            .collect()
    }
}

/// `0`, `1`, or `p/q` in lowest terms.
pub fn format_accuracy(a: &Accuracy) -> String {
    a.to_string()
}
