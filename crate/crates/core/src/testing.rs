use crate::approx::ApproximationSpace;
use crate::sets::{EnumerationCap, Universe};
use crate::topology::{BinaryRelation, TopologySpace};

pub(crate) const SAMPLE_PAIRS: [(&str, &str); 5] = [
    ("u1", "u1"),
    ("u1", "u2"),
    ("u1", "u3"),
    ("u2", "u3"),
    ("u3", "u4"),
];

fn parts() -> (Universe, BinaryRelation) {
    let u = Universe::numbered(4).unwrap();
    let r = BinaryRelation::from_labels(&u, SAMPLE_PAIRS).unwrap();
    (u, r)
}

pub(crate) fn sample_space() -> TopologySpace {
    let (u, r) = parts();
    TopologySpace::from_relation(u, r, EnumerationCap::default()).unwrap()
}

pub(crate) fn sample_approx() -> ApproximationSpace {
    let (u, r) = parts();
    ApproximationSpace::new(u, r, EnumerationCap::default()).unwrap()
}
