//! Rough-set approximations over topologies generated by binary relations.
//!
//! A relation on a finite universe yields a topology whose subbase is the
//! family of right neighborhoods. From it the crate derives the preopen and
//! δ-preopen families and compares three tiers of lower/upper
//! approximations, region decompositions and definability classes.
//!
//! ```
//! use roughtopo::{ApproximationSpace, BinaryRelation, EnumerationCap, Tier, Universe};
//!
//! let u = Universe::numbered(4).unwrap();
//! let r = BinaryRelation::from_labels(
//!     &u,
//!     [("u1", "u1"), ("u1", "u2"), ("u1", "u3"), ("u2", "u3"), ("u3", "u4")],
//! )
//! .unwrap();
//! let space = ApproximationSpace::new(u, r, EnumerationCap::default()).unwrap();
//! let s = space.universe().parse_set("{u2,u4}").unwrap();
//! assert_eq!(space.accuracy(s, Tier::Dp).unwrap().to_string(), "1");
//! ```

pub mod approx;
pub mod document;
pub mod error;
pub mod openfam;
pub mod oracle;
pub mod sets;
pub mod topology;

#[cfg(test)]
pub(crate) mod testing;

pub use approx::{
    format_accuracy, Accuracy, AccuracyRow, ApproximationSpace, Area, ClassInclusionReport,
    ClassViolation, Definability, DefinabilityClass, MembershipMode, PositiveNegativeBoundary,
    RegionReport, RoughInclusion, Tier, TierApproximation,
};
pub use document::{parse_space, FamilyListing, ParsedSpace, SpaceDocument};
pub use error::{Result, RoughError};
pub use openfam::OpenFamilies;
pub use oracle::audit::{
    audit, replay, AuditConfig, AuditFinding, AuditReport, Corpus, Law, LawKind, LawStats,
};
pub use sets::{ElementSet, EnumerationCap, SetFamily, Universe, DEFAULT_ENUMERATION_CAP};
pub use topology::{BinaryRelation, TopologySpace};
