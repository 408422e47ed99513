//! Property audit over corpora of generated spaces.
//!
//! Every law is evaluated on every space of a corpus: space-level laws once,
//! unary laws on every subset `S`, binary laws on every pair `(S, N)` (or on
//! a seeded sample of pairs). Laws are either *guaranteed* (a violation is a
//! defect in this crate) or *audited* (claims whose counterexamples are
//! collected as findings).

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{delta_closure_with, enum_lower, enum_upper, regular_opens};
use crate::approx::{ApproximationSpace, MembershipMode, Tier};
use crate::error::{Result, RoughError};
use crate::openfam;
use crate::sets::{full_mask, ElementSet, EnumerationCap, SetFamily, Universe};
use crate::topology::BinaryRelation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Guaranteed,
    Audited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Law {
    TopologyAxioms,
    FamilyChain,
    UnionClosure,
    OracleFamilies,
    OracleInteriorClosure,
    OracleDeltaClosure,
    OracleLowerUpper,
    ClosedFormDpUpper,
    ClosedFormDpLower,
    DpUpperOfLower,
    DpLowerOfUpper,
    TierChain,
    Bounds,
    FixedPoints,
    Monotone,
    Duality,
    Idempotence,
    Nesting,
    UnionIntersection,
    EdgeDecomposition,
    PointClosureEquality,
    ClopenPointSymmetry,
    ClopenPartition,
    MembershipChain,
    ClassChains,
    ExactnessTransfer,
    AccuracyMonotone,
    ExactLowerUnion,
    ExactUpperIntersection,
    ClosedUpperUnion,
    OpenLowerIntersection,
}

impl Law {
    pub const ALL: [Law; 31] = [
        Law::TopologyAxioms,
        Law::FamilyChain,
        Law::UnionClosure,
        Law::OracleFamilies,
        Law::OracleInteriorClosure,
        Law::OracleDeltaClosure,
        Law::OracleLowerUpper,
        Law::ClosedFormDpUpper,
        Law::ClosedFormDpLower,
        Law::DpUpperOfLower,
        Law::DpLowerOfUpper,
        Law::TierChain,
        Law::Bounds,
        Law::FixedPoints,
        Law::Monotone,
        Law::Duality,
        Law::Idempotence,
        Law::Nesting,
        Law::UnionIntersection,
        Law::EdgeDecomposition,
        Law::PointClosureEquality,
        Law::ClopenPointSymmetry,
        Law::ClopenPartition,
        Law::MembershipChain,
        Law::ClassChains,
        Law::ExactnessTransfer,
        Law::AccuracyMonotone,
        Law::ExactLowerUnion,
        Law::ExactUpperIntersection,
        Law::ClosedUpperUnion,
        Law::OpenLowerIntersection,
    ];

    pub fn guaranteed() -> Vec<Law> {
        Self::ALL
            .into_iter()
            .filter(|l| l.kind() == LawKind::Guaranteed)
            .collect()
    }

    pub fn audited() -> Vec<Law> {
        Self::ALL
            .into_iter()
            .filter(|l| l.kind() == LawKind::Audited)
            .collect()
    }

    pub fn id(self) -> &'static str {
        match self {
            Law::TopologyAxioms => "topology_axioms",
            Law::FamilyChain => "family_chain",
            Law::UnionClosure => "union_closure",
            Law::OracleFamilies => "oracle_families",
            Law::OracleInteriorClosure => "oracle_interior_closure",
            Law::OracleDeltaClosure => "oracle_delta_closure",
            Law::OracleLowerUpper => "oracle_lower_upper",
            Law::ClosedFormDpUpper => "closed_form_dp_upper",
            Law::ClosedFormDpLower => "closed_form_dp_lower",
            Law::DpUpperOfLower => "dp_upper_of_lower",
            Law::DpLowerOfUpper => "dp_lower_of_upper",
            Law::TierChain => "tier_chain",
            Law::Bounds => "bounds",
            Law::FixedPoints => "fixed_points",
            Law::Monotone => "monotone",
            Law::Duality => "duality",
            Law::Idempotence => "idempotence",
            Law::Nesting => "nesting",
            Law::UnionIntersection => "union_intersection",
            Law::EdgeDecomposition => "edge_decomposition",
            Law::PointClosureEquality => "point_closure_equality",
            Law::ClopenPointSymmetry => "clopen_point_symmetry",
            Law::ClopenPartition => "clopen_partition",
            Law::MembershipChain => "membership_chain",
            Law::ClassChains => "class_chains",
            Law::ExactnessTransfer => "exactness_transfer",
            Law::AccuracyMonotone => "accuracy_monotone",
            Law::ExactLowerUnion => "exact_lower_union",
            Law::ExactUpperIntersection => "exact_upper_intersection",
            Law::ClosedUpperUnion => "closed_upper_union",
            Law::OpenLowerIntersection => "open_lower_intersection",
        }
    }

    pub fn from_id(id: &str) -> Option<Law> {
        Self::ALL.into_iter().find(|l| l.id() == id)
    }

    pub fn kind(self) -> LawKind {
        match self {
            Law::ExactLowerUnion
            | Law::ExactUpperIntersection
            | Law::ClosedUpperUnion
            | Law::OpenLowerIntersection => LawKind::Audited,
            _ => LawKind::Guaranteed,
        }
    }

    /// Number of subsets the law is instantiated with.
    pub fn arity(self) -> usize {
        match self {
            Law::TopologyAxioms
            | Law::FamilyChain
            | Law::UnionClosure
            | Law::OracleFamilies
            | Law::FixedPoints
            | Law::PointClosureEquality
            | Law::ClopenPointSymmetry
            | Law::ClopenPartition
            | Law::ClassChains => 0,
            Law::Monotone
            | Law::UnionIntersection
            | Law::ExactLowerUnion
            | Law::ExactUpperIntersection
            | Law::ClosedUpperUnion
            | Law::OpenLowerIntersection => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One relation of a corpus. `seed` is the corpus seed for sampled corpora.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceSpec {
    pub index: usize,
    pub seed: Option<u64>,
    pub relation: BinaryRelation,
    /// `None`: every pair of subsets; `Some(k)`: `k` seeded random pairs.
    pub pair_samples: Option<usize>,
}

/// Edge probabilities used when sampling relations, cycled per instance.
pub const EDGE_PROBABILITIES: [f64; 3] = [0.2, 0.5, 0.8];

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    specs: Vec<SpaceSpec>,
}

impl Corpus {
    /// All `2^(n²)` relations on `n` points. Sizes above 3 need `allow_four`;
    /// sizes above 4 are refused.
    pub fn exhaustive(n: usize, allow_four: bool) -> Result<Self> {
        let limit = if allow_four { 4 } else { 3 };
        if n == 0 || n > limit {
            return Err(RoughError::EnumerationCapExceeded {
                size: n,
                cap: limit,
            });
        }
        let specs = (0..1u64 << (n * n))
            .map(|code| SpaceSpec {
                index: code as usize,
                seed: None,
                relation: BinaryRelation::from_code(n, code),
                pair_samples: None,
            })
            .collect();
        Ok(Self { specs })
    }

    /// `count` seeded random relations, instance `i` of size
    /// `sizes[i % sizes.len()]` with edge probability
    /// `EDGE_PROBABILITIES[i % 3]`.
    pub fn sampled(seed: u64, count: usize, sizes: &[usize], pair_samples: Option<usize>) -> Self {
        assert!(!sizes.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let specs = (0..count)
            .map(|i| {
                let n = sizes[i % sizes.len()];
                let p = EDGE_PROBABILITIES[i % EDGE_PROBABILITIES.len()];
                let pairs: Vec<(usize, usize)> = (0..n * n)
                    .filter(|_| rng.random_bool(p))
                    .map(|bit| (bit / n, bit % n))
                    .collect();
                SpaceSpec {
                    index: i,
                    seed: Some(seed),
                    relation: BinaryRelation::new(n, pairs).expect("indices in range"),
                    pair_samples,
                }
            })
            .collect();
        Self { specs }
    }

    /// Concatenates corpora, renumbering instances.
    pub fn chain(mut self, other: Corpus) -> Self {
        let offset = self.specs.len();
        self.specs.extend(other.specs.into_iter().map(|mut s| {
            s.index += offset;
            s
        }));
        self
    }

    pub fn specs(&self) -> &[SpaceSpec] {
        &self.specs
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }
}

/// A law violation, replayable from the relation and witnesses alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditFinding {
    pub property_id: String,
    pub kind: LawKind,
    pub seed: Option<u64>,
    pub instance: usize,
    pub n: usize,
    pub relation: Vec<[usize; 2]>,
    /// Element indices of `S` (and `N` for binary laws).
    pub witnesses: Vec<Vec<usize>>,
    pub lhs: Vec<usize>,
    pub rhs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LawStats {
    pub checks: u64,
    pub violations: u64,
}

#[derive(Debug, Clone)]
pub struct AuditConfig {
    pub laws: Vec<Law>,
    /// Findings stored per (space, law); further violations are only counted.
    pub witness_limit: usize,
    pub cap: EnumerationCap,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            laws: Law::ALL.to_vec(),
            witness_limit: 4,
            cap: EnumerationCap::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub spaces: usize,
    pub stats: BTreeMap<Law, LawStats>,
    /// Ordered by instance, then law, then witness enumeration order.
    pub findings: Vec<AuditFinding>,
}

impl AuditReport {
    pub fn guaranteed_failures(&self) -> impl Iterator<Item = &AuditFinding> {
        self.findings
            .iter()
            .filter(|f| f.kind == LawKind::Guaranteed)
    }

    pub fn audited_findings(&self) -> impl Iterator<Item = &AuditFinding> {
        self.findings.iter().filter(|f| f.kind == LawKind::Audited)
    }

    pub fn violations(&self, law: Law) -> u64 {
        self.stats.get(&law).map_or(0, |s| s.violations)
    }

    pub fn passed(&self) -> bool {
        self.stats
            .iter()
            .all(|(law, s)| law.kind() == LawKind::Audited || s.violations == 0)
    }

    /// One JSON object per line, in report order.
    pub fn findings_jsonl(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&serde_json::to_string(f).expect("finding serializes"));
            out.push('\n');
        }
        out
    }
}

pub fn audit(corpus: &Corpus, config: &AuditConfig) -> Result<AuditReport> {
    for spec in corpus.specs() {
        config.cap.check(spec.relation.size())?;
    }
    let outcomes: Vec<SpaceOutcome> = corpus
        .specs()
        .par_iter()
        .map(|spec| check_space(spec, config))
        .collect::<Result<_>>()?;
    let mut stats: BTreeMap<Law, LawStats> = config
        .laws
        .iter()
        .map(|&l| (l, LawStats::default()))
        .collect();
    let mut findings = Vec::new();
    for outcome in outcomes {
        for (law, s) in outcome.stats {
            let entry = stats.entry(law).or_default();
            entry.checks += s.checks;
            entry.violations += s.violations;
        }
        findings.extend(outcome.findings);
    }
    Ok(AuditReport {
        spaces: corpus.len(),
        stats,
        findings,
    })
}

/// Re-evaluates a finding; `true` iff the same discrepancy is produced.
pub fn replay(finding: &AuditFinding, cap: EnumerationCap) -> Result<bool> {
    let law = Law::from_id(&finding.property_id).ok_or_else(|| {
        RoughError::PreconditionFailed(format!("unknown law {}", finding.property_id))
    })?;
    let relation = BinaryRelation::new(finding.n, finding.relation.iter().map(|&[x, y]| (x, y)))?;
    let space = ApproximationSpace::new(Universe::numbered(finding.n)?, relation, cap)?;
    let ctx = Context::new(&space);
    let mut witnesses = Vec::new();
    for w in &finding.witnesses {
        witnesses.push(ElementSet::from_indices(finding.n, w.iter().copied())?.bits());
    }
    let lhs = ElementSet::from_indices(finding.n, finding.lhs.iter().copied())?.bits();
    let rhs = ElementSet::from_indices(finding.n, finding.rhs.iter().copied())?.bits();
    Ok(ctx.eval(law, &witnesses) == Some((lhs, rhs)))
}

struct SpaceOutcome {
    stats: Vec<(Law, LawStats)>,
    findings: Vec<AuditFinding>,
}

fn indices(n: usize, bits: u64) -> Vec<usize> {
    ElementSet::from_raw(n, bits).iter().collect()
}

fn pair_seed(seed: u64, index: usize) -> u64 {
    seed.rotate_left(17) ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn check_space(spec: &SpaceSpec, config: &AuditConfig) -> Result<SpaceOutcome> {
    let n = spec.relation.size();
    let space = ApproximationSpace::new(Universe::numbered(n)?, spec.relation.clone(), config.cap)?;
    let ctx = Context::new(&space);
    let full = full_mask(n);

    let pairs: Vec<[u64; 2]> = match spec.pair_samples {
        None => (0..=full)
            .flat_map(|s| (0..=full).map(move |t| [s, t]))
            .collect(),
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(pair_seed(spec.seed.unwrap_or(0), spec.index));
            (0..k)
                .map(|_| [rng.random_range(0..=full), rng.random_range(0..=full)])
                .collect()
        }
    };

    let relation: Vec<[usize; 2]> = spec.relation.pairs().map(|(x, y)| [x, y]).collect();
    let mut stats = Vec::with_capacity(config.laws.len());
    let mut findings = Vec::new();
    for &law in &config.laws {
        let mut st = LawStats::default();
        let mut stored = 0usize;
        let mut record = |w: &[u64], (lhs, rhs): (u64, u64)| {
            st.violations += 1;
            if stored < config.witness_limit {
                stored += 1;
                findings.push(AuditFinding {
                    property_id: law.id().to_string(),
                    kind: law.kind(),
                    seed: spec.seed,
                    instance: spec.index,
                    n,
                    relation: relation.clone(),
                    witnesses: w.iter().map(|&b| indices(n, b)).collect(),
                    lhs: indices(n, lhs),
                    rhs: indices(n, rhs),
                });
            }
        };
        match law.arity() {
            0 => {
                st.checks += 1;
                if let Some(v) = ctx.eval(law, &[]) {
                    record(&[], v);
                }
            }
            1 => {
                for s in 0..=full {
                    st.checks += 1;
                    if let Some(v) = ctx.eval(law, &[s]) {
                        record(&[s], v);
                    }
                }
            }
            _ => {
                for p in &pairs {
                    st.checks += 1;
                    if let Some(v) = ctx.eval(law, p) {
                        record(p, v);
                    }
                }
            }
        }
        stats.push((law, st));
    }
    Ok(SpaceOutcome { stats, findings })
}

/// Precomputed fast-path tables plus the literal regular-open list.
struct Context<'a> {
    space: &'a ApproximationSpace,
    n: usize,
    full: u64,
    lower: [Vec<u64>; 3],
    upper: [Vec<u64>; 3],
    regular: Vec<(ElementSet, ElementSet)>,
}

/// First `(a, b)` in the chain with `a ⊄ b`.
fn chain_break(chain: &[u64]) -> Option<(u64, u64)> {
    chain
        .windows(2)
        .find(|w| w[0] & !w[1] != 0)
        .map(|w| (w[0], w[1]))
}

fn mismatch(lhs: u64, rhs: u64) -> Option<(u64, u64)> {
    (lhs != rhs).then_some((lhs, rhs))
}

fn not_subset(a: u64, b: u64) -> Option<(u64, u64)> {
    (a & !b != 0).then_some((a, b))
}

fn first_family_difference(a: &SetFamily, b: &SetFamily) -> Option<(u64, u64)> {
    if a == b {
        return None;
    }
    a.masks()
        .iter()
        .find(|&&m| !b.masks().contains(&m))
        .map(|&m| (m, 0))
        .or_else(|| {
            b.masks()
                .iter()
                .find(|&&m| !a.masks().contains(&m))
                .map(|&m| (0, m))
        })
        .or(Some((0, 0)))
}

fn union_break(family: &SetFamily) -> Option<(u64, u64)> {
    let m = family.masks();
    for (i, &a) in m.iter().enumerate() {
        for &b in &m[i + 1..] {
            if m.binary_search(&(a | b)).is_err() {
                return Some((a, b));
            }
        }
    }
    None
}

impl<'a> Context<'a> {
    fn new(space: &'a ApproximationSpace) -> Self {
        let n = space.size();
        let full = full_mask(n);
        let table = |f: &dyn Fn(u64) -> u64| (0..=full).map(f).collect::<Vec<_>>();
        let lower = Tier::ALL.map(|t| table(&|s| space.lower_mask(s, t)));
        let upper = Tier::ALL.map(|t| table(&|s| space.upper_mask(s, t)));
        Self {
            space,
            n,
            full,
            lower,
            upper,
            regular: regular_opens(space.topology()),
        }
    }

    fn set(&self, bits: u64) -> ElementSet {
        ElementSet::from_raw(self.n, bits)
    }

    fn lo(&self, t: Tier, s: u64) -> u64 {
        self.lower[t as usize][s as usize]
    }

    fn up(&self, t: Tier, s: u64) -> u64 {
        self.upper[t as usize][s as usize]
    }

    fn enum_lo(&self, t: Tier, s: u64) -> u64 {
        enum_lower(self.space, self.set(s), t).bits()
    }

    fn enum_up(&self, t: Tier, s: u64) -> u64 {
        enum_upper(self.space, self.set(s), t).bits()
    }

    fn literal_delta_closure(&self, s: u64) -> u64 {
        delta_closure_with(&self.regular, self.n, self.set(s)).bits()
    }

    fn literal_interior(&self, s: u64) -> u64 {
        super::interior(self.space.topology(), self.set(s)).bits()
    }

    fn literal_closure(&self, s: u64) -> u64 {
        super::closure(self.space.topology(), self.set(s)).bits()
    }

    fn per_tier(&self, f: impl Fn(Tier) -> Option<(u64, u64)>) -> Option<(u64, u64)> {
        Tier::ALL.into_iter().find_map(f)
    }

    /// `Some((lhs, rhs))` when the law fails on the given witnesses.
    fn eval(&self, law: Law, w: &[u64]) -> Option<(u64, u64)> {
        let topo = self.space.topology();
        let fam = self.space.families();
        let full = self.full;
        match law {
            Law::TopologyAxioms => {
                let opens = topo.opens();
                if super::axiom_check(opens) {
                    None
                } else {
                    union_break(opens)
                        .or_else(|| (!opens.contains_mask(0)).then_some((0, 0)))
                        .or_else(|| (!opens.contains_mask(full)).then_some((full, full)))
                        .or(Some((0, 0)))
                }
            }
            Law::FamilyChain => {
                let chain = [topo.opens(), &fam.preopen, &fam.deltap_open];
                for pair in chain.windows(2) {
                    if let Some(&m) = pair[0].masks().iter().find(|&&m| !pair[1].contains_mask(m)) {
                        return Some((m, 0));
                    }
                }
                for f in chain {
                    if !f.contains_mask(0) || !f.contains_mask(full) {
                        return Some((0, full));
                    }
                }
                first_family_difference(&fam.preclosed, &fam.preopen.complements())
                    .or_else(|| {
                        first_family_difference(&fam.deltap_closed, &fam.deltap_open.complements())
                    })
                    .or_else(|| {
                        first_family_difference(topo.closeds(), &topo.opens().complements())
                    })
            }
            Law::UnionClosure => {
                union_break(&fam.preopen).or_else(|| union_break(&fam.deltap_open))
            }
            Law::OracleFamilies => {
                let literal = super::families(topo);
                first_family_difference(&fam.preopen, &literal.preopen)
                    .or_else(|| first_family_difference(&fam.deltap_open, &literal.deltap_open))
            }
            Law::OracleInteriorClosure => {
                let s = w[0];
                mismatch(topo.interior_mask(s), self.literal_interior(s))
                    .or_else(|| mismatch(topo.closure_mask(s), self.literal_closure(s)))
            }
            Law::OracleDeltaClosure => {
                let s = w[0];
                mismatch(
                    openfam::delta_closure_mask(topo, s),
                    self.literal_delta_closure(s),
                )
            }
            Law::OracleLowerUpper => {
                let s = w[0];
                self.per_tier(|t| {
                    mismatch(self.lo(t, s), self.enum_lo(t, s))
                        .or_else(|| mismatch(self.up(t, s), self.enum_up(t, s)))
                })
            }
            Law::ClosedFormDpUpper => {
                let s = w[0];
                mismatch(
                    openfam::p_closure_delta_mask(topo, s),
                    self.enum_up(Tier::Dp, s),
                )
            }
            Law::ClosedFormDpLower => {
                let s = w[0];
                mismatch(
                    openfam::p_interior_delta_mask(topo, s),
                    self.enum_lo(Tier::Dp, s),
                )
            }
            Law::DpUpperOfLower => {
                let s = w[0];
                let pint = self.enum_lo(Tier::Dp, s);
                let delta_int = !self.literal_delta_closure(!s & full) & full;
                mismatch(
                    self.enum_up(Tier::Dp, pint),
                    pint | self.literal_closure(delta_int),
                )
            }
            Law::DpLowerOfUpper => {
                let s = w[0];
                let pcl = self.enum_up(Tier::Dp, s);
                mismatch(
                    self.enum_lo(Tier::Dp, pcl),
                    pcl & self.literal_interior(self.literal_delta_closure(s)),
                )
            }
            Law::TierChain => {
                let s = w[0];
                chain_break(&[
                    self.lo(Tier::Tau, s),
                    self.lo(Tier::P, s),
                    self.lo(Tier::Dp, s),
                    s,
                    self.up(Tier::Dp, s),
                    self.up(Tier::P, s),
                    self.up(Tier::Tau, s),
                ])
            }
            Law::Bounds => {
                let s = w[0];
                self.per_tier(|t| chain_break(&[self.lo(t, s), s, self.up(t, s)]))
            }
            Law::FixedPoints => self.per_tier(|t| {
                mismatch(self.lo(t, 0), 0)
                    .or_else(|| mismatch(self.up(t, 0), 0))
                    .or_else(|| mismatch(self.lo(t, full), full))
                    .or_else(|| mismatch(self.up(t, full), full))
            }),
            Law::Monotone => {
                let (s, n) = (w[0], w[1]);
                if s & !n != 0 {
                    return None;
                }
                self.per_tier(|t| {
                    not_subset(self.lo(t, s), self.lo(t, n))
                        .or_else(|| not_subset(self.up(t, s), self.up(t, n)))
                })
            }
            Law::Duality => {
                let s = w[0];
                let c = !s & full;
                self.per_tier(|t| {
                    mismatch(self.lo(t, c), !self.up(t, s) & full)
                        .or_else(|| mismatch(self.up(t, c), !self.lo(t, s) & full))
                })
            }
            Law::Idempotence => {
                let s = w[0];
                self.per_tier(|t| {
                    mismatch(self.lo(t, self.lo(t, s)), self.lo(t, s))
                        .or_else(|| mismatch(self.up(t, self.up(t, s)), self.up(t, s)))
                })
            }
            Law::Nesting => {
                let s = w[0];
                self.per_tier(|t| {
                    let (l, u) = (self.lo(t, s), self.up(t, s));
                    not_subset(self.lo(t, l), self.up(t, l))
                        .or_else(|| not_subset(self.lo(t, u), self.up(t, u)))
                })
            }
            Law::UnionIntersection => {
                let (s, n) = (w[0], w[1]);
                self.per_tier(|t| {
                    not_subset(self.lo(t, s) | self.lo(t, n), self.lo(t, s | n))
                        .or_else(|| not_subset(self.up(t, s) | self.up(t, n), self.up(t, s | n)))
                        .or_else(|| not_subset(self.lo(t, s & n), self.lo(t, s) & self.lo(t, n)))
                        .or_else(|| not_subset(self.up(t, s & n), self.up(t, s) & self.up(t, n)))
                })
            }
            Law::EdgeDecomposition => {
                use crate::approx::Area::*;
                let r = self.space.regions(self.set(w[0]));
                [
                    (Boundary, InternalEdge, ExternalEdge),
                    (PBoundary, PInternalEdge, PExternalEdge),
                    (DpBoundary, DpInternalEdge, DpExternalEdge),
                ]
                .into_iter()
                .find_map(|(b, inner, outer)| {
                    mismatch(r.get(b).bits(), (r.get(inner) | r.get(outer)).bits())
                })
            }
            Law::PointClosureEquality => {
                let single = |x: usize| self.up(Tier::Dp, 1 << x);
                for c in 0..self.n {
                    for d in 0..self.n {
                        let (uc, ud) = (single(c), single(d));
                        if uc >> d & 1 == 1 && ud >> c & 1 == 1 && uc != ud {
                            return Some((uc, ud));
                        }
                    }
                }
                None
            }
            Law::ClopenPointSymmetry => {
                if !self.space.deltap_open_sets_are_closed() {
                    return None;
                }
                let single = |x: usize| self.up(Tier::Dp, 1 << x);
                for c in 0..self.n {
                    for d in 0..self.n {
                        if single(c) >> d & 1 == 1 && single(d) >> c & 1 == 0 {
                            return Some((single(c), single(d)));
                        }
                    }
                }
                None
            }
            Law::ClopenPartition => {
                let clopen = self.space.deltap_open_sets_are_closed();
                match (clopen, self.space.point_closure_partition()) {
                    (true, Ok(blocks)) => {
                        let m = blocks.masks();
                        let cover = m.iter().fold(0, |a, &b| a | b);
                        for (i, &a) in m.iter().enumerate() {
                            if let Some(&b) = m[i + 1..].iter().find(|&&b| a & b != 0) {
                                return Some((a, b));
                            }
                        }
                        mismatch(cover, full)
                    }
                    (false, Err(RoughError::PreconditionFailed(_))) => None,
                    _ => Some((0, full)),
                }
            }
            Law::MembershipChain => {
                let s = self.set(w[0]);
                let member = |x, t, mode| self.space.membership(x, s, t, mode).unwrap_or(false);
                for x in 0..self.n {
                    let strong = Tier::ALL.map(|t| member(x, t, MembershipMode::Strong));
                    let weak = Tier::ALL.map(|t| member(x, t, MembershipMode::Weak));
                    let broken = (strong[0] && !strong[1])
                        || (strong[1] && !strong[2])
                        || (weak[2] && !weak[1])
                        || (weak[1] && !weak[0]);
                    if broken {
                        return Some((1 << x, w[0]));
                    }
                }
                None
            }
            Law::ClassChains => self
                .space
                .class_inclusion_report()
                .violations
                .first()
                .map(|v| (v.subset, 0)),
            Law::ExactnessTransfer => {
                let s = w[0];
                let exact = |t| self.lo(t, s) == self.up(t, s);
                let p_exact_not_dp = exact(Tier::P) && !exact(Tier::Dp);
                let dp_rough_not_p = !exact(Tier::Dp) && exact(Tier::P);
                (p_exact_not_dp || dp_rough_not_p)
                    .then(|| (self.lo(Tier::Dp, s), self.up(Tier::Dp, s)))
            }
            Law::AccuracyMonotone => {
                let s = self.set(w[0]);
                if s.is_empty() {
                    return None;
                }
                let acc = Tier::ALL.map(|t| self.space.accuracy(s, t).expect("nonempty"));
                Tier::ALL.windows(2).find_map(|p| {
                    let (a, b) = (p[0] as usize, p[1] as usize);
                    (acc[a] > acc[b]).then(|| (self.lo(p[0], w[0]), self.lo(p[1], w[0])))
                })
            }
            Law::ExactLowerUnion => {
                let (s, n) = (w[0], w[1]);
                if self.lo(Tier::Dp, s) != self.up(Tier::Dp, s) {
                    return None;
                }
                mismatch(
                    self.lo(Tier::Dp, s | n),
                    self.lo(Tier::Dp, s) | self.lo(Tier::Dp, n),
                )
            }
            Law::ExactUpperIntersection => {
                let (s, n) = (w[0], w[1]);
                if self.lo(Tier::Dp, s) != self.up(Tier::Dp, s) {
                    return None;
                }
                mismatch(
                    self.up(Tier::Dp, s & n),
                    self.up(Tier::Dp, s) & self.up(Tier::Dp, n),
                )
            }
            Law::ClosedUpperUnion => {
                let (s, n) = (w[0], w[1]);
                let cl = topo.closure_mask(s);
                mismatch(self.up(Tier::Dp, cl | n), cl | self.up(Tier::Dp, n))
            }
            Law::OpenLowerIntersection => {
                let (s, n) = (w[0], w[1]);
                let int = topo.interior_mask(s);
                mismatch(self.lo(Tier::Dp, int & n), int & self.lo(Tier::Dp, n))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_ids_round_trip() {
        for law in Law::ALL {
            assert_eq!(Law::from_id(law.id()), Some(law));
        }
        assert_eq!(Law::audited().len(), 4);
        assert_eq!(Law::guaranteed().len() + 4, Law::ALL.len());
    }

    #[test]
    fn exhaustive_corpus_sizes() {
        assert_eq!(Corpus::exhaustive(2, false).unwrap().len(), 16);
        assert_eq!(Corpus::exhaustive(3, false).unwrap().len(), 512);
        assert!(Corpus::exhaustive(4, false).is_err());
        assert!(Corpus::exhaustive(5, true).is_err());
    }

    #[test]
    fn sampled_corpus_is_seeded() {
        let a = Corpus::sampled(7, 20, &[5], Some(10));
        let b = Corpus::sampled(7, 20, &[5], Some(10));
        let c = Corpus::sampled(8, 20, &[5], Some(10));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn two_point_exhaustive_duality_holds() {
        let corpus = Corpus::exhaustive(2, false).unwrap();
        let config = AuditConfig {
            laws: vec![Law::Duality],
            ..AuditConfig::default()
        };
        let report = audit(&corpus, &config).unwrap();
        assert_eq!(report.violations(Law::Duality), 0);
        assert_eq!(report.stats[&Law::Duality].checks, 16 * 4);
    }

    #[test]
    fn findings_replay() {
        let corpus = Corpus::sampled(11, 30, &[5], None);
        let config = AuditConfig {
            laws: Law::audited(),
            ..AuditConfig::default()
        };
        let report = audit(&corpus, &config).unwrap();
        assert!(report.passed());
        for f in report.findings.iter().take(20) {
            assert!(replay(f, EnumerationCap::default()).unwrap(), "{f:?}");
            let line = serde_json::to_string(f).unwrap();
            let back: AuditFinding = serde_json::from_str(&line).unwrap();
            assert_eq!(&back, f);
        }
    }

    #[test]
    fn chain_break_reports_first_pair() {
        assert_eq!(chain_break(&[0b1, 0b11, 0b10]), Some((0b11, 0b10)));
        assert_eq!(chain_break(&[0, 0b1, 0b11]), None);
    }
}
