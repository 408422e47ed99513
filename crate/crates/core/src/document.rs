//! JSON space descriptions and family listings.

use serde::{Deserialize, Serialize};

use crate::approx::ApproximationSpace;
use crate::error::{Result, RoughError};
use crate::sets::{ElementSet, EnumerationCap, SetFamily, Universe};
use crate::topology::BinaryRelation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub universe: Vec<String>,
    pub relation: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSpace {
    pub document: SpaceDocument,
    pub universe: Universe,
    pub relation: BinaryRelation,
    /// Pairs listed more than once, reported once each.
    pub duplicate_pairs: Vec<[String; 2]>,
}

impl ParsedSpace {
    pub fn build(&self, cap: EnumerationCap) -> Result<ApproximationSpace> {
        ApproximationSpace::new(self.universe.clone(), self.relation.clone(), cap)
    }
}

fn syntax(err: serde_json::Error) -> RoughError {
    RoughError::Syntax {
        line: err.line(),
        column: err.column(),
        message: err.to_string(),
    }
}

pub fn parse_space(text: &str) -> Result<ParsedSpace> {
    let document: SpaceDocument = serde_json::from_str(text).map_err(syntax)?;
    let universe = Universe::new(document.universe.iter().map(String::as_str))?;
    let mut seen = std::collections::BTreeSet::new();
    let mut duplicate_pairs = Vec::new();
    let mut pairs = Vec::with_capacity(document.relation.len());
    for [from, to] in &document.relation {
        let pair = (universe.index_of(from)?, universe.index_of(to)?);
        if !seen.insert(pair) {
            let dup = [from.clone(), to.clone()];
            if !duplicate_pairs.contains(&dup) {
                duplicate_pairs.push(dup);
            }
        }
        pairs.push(pair);
    }
    let relation = BinaryRelation::new(universe.len(), pairs)?;
    Ok(ParsedSpace {
        document,
        universe,
        relation,
        duplicate_pairs,
    })
}

/// Members ordered by size, then lexicographically by element index.
pub fn display_order(family: &SetFamily) -> Vec<ElementSet> {
    let mut sets: Vec<ElementSet> = family.iter().collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    sets
}

/// Serializable listing of one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyListing {
    pub kind: String,
    pub count: usize,
    pub sets: Vec<Vec<String>>,
}

impl FamilyListing {
    pub fn new(universe: &Universe, kind: &str, family: &SetFamily) -> Self {
        let sets = display_order(family)
            .iter()
            .map(|s| {
                universe
                    .set_labels(s)
                    .into_iter()
                    .map(str::to_string)
                    .collect()
            })
            .collect();
        Self {
            kind: kind.to_string(),
            count: family.len(),
            sets,
        }
    }

    pub fn to_family(&self, universe: &Universe) -> Result<SetFamily> {
        let sets = self
            .sets
            .iter()
            .map(|labels| universe.set_of(labels.iter().map(String::as_str)))
            .collect::<Result<Vec<_>>>()?;
        SetFamily::canonicalize(universe.len(), sets)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(syntax)
    }
}
