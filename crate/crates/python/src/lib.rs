use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use roughtopo::{
    audit, format_accuracy, parse_space, Accuracy, ApproximationSpace, AuditConfig, BinaryRelation,
    Corpus, ElementSet, EnumerationCap, MembershipMode, RoughError, SetFamily, Tier, Universe,
};

fn to_py(err: RoughError) -> PyErr {
    match err {
        RoughError::EnumerationCapExceeded { .. } | RoughError::UniverseTooLarge { .. } => {
            PyOverflowError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn cap(max_enum: usize) -> PyResult<EnumerationCap> {
    EnumerationCap::new(max_enum).map_err(to_py)
}

fn tier(name: &str) -> PyResult<Tier> {
    name.parse().map_err(PyValueError::new_err)
}

/// A set given either as an expression (`"{u1,u3}"`, `"all"`, `"empty"`)
/// or as a list of labels.
#[derive(FromPyObject)]
enum SetArg {
    Expr(String),
    Labels(Vec<String>),
}

fn fraction<'py>(py: Python<'py>, a: Accuracy) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((*a.numer(), *a.denom()))
}

/// Approximation space generated by a relation on labelled points.
#[pyclass(frozen, module = "roughtopo_py")]
struct Space {
    inner: ApproximationSpace,
}

impl Space {
    fn set(&self, arg: SetArg) -> PyResult<ElementSet> {
        let u = self.inner.universe();
        match arg {
            SetArg::Expr(e) => u.parse_set(&e),
            SetArg::Labels(l) => u.set_of(l.iter().map(String::as_str)),
        }
        .map_err(to_py)
    }

    fn labels(&self, s: ElementSet) -> Vec<String> {
        self.inner
            .universe()
            .set_labels(&s)
            .into_iter()
            .map(str::to_string)
            .collect()
    }

    fn listing(&self, family: &SetFamily) -> Vec<Vec<String>> {
        roughtopo::document::display_order(family)
            .into_iter()
            .map(|s| self.labels(s))
            .collect()
    }
}

#[pymethods]
impl Space {
    #[new]
    #[pyo3(signature = (universe, relation, max_enum = 20))]
    fn new(
        universe: Vec<String>,
        relation: Vec<(String, String)>,
        max_enum: usize,
    ) -> PyResult<Self> {
        let u = Universe::new(universe).map_err(to_py)?;
        let r =
            BinaryRelation::from_labels(&u, relation.iter().map(|(a, b)| (a.as_str(), b.as_str())))
                .map_err(to_py)?;
        let inner = ApproximationSpace::new(u, r, cap(max_enum)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Builds a space from a JSON document with `universe` and `relation`.
    #[staticmethod]
    #[pyo3(signature = (text, max_enum = 20))]
    fn from_json(text: &str, max_enum: usize) -> PyResult<Self> {
        let parsed = parse_space(text).map_err(to_py)?;
        let inner = parsed.build(cap(max_enum)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn universe(&self) -> Vec<String> {
        self.inner.universe().labels().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.size()
    }

    fn __repr__(&self) -> String {
        format!(
            "Space(size={}, open_sets={})",
            self.inner.size(),
            self.inner.topology().opens().len()
        )
    }

    /// `kind` is one of `subbase`, `base`, `tau`, `pre`, `deltap`.
    fn family(&self, kind: &str) -> PyResult<Vec<Vec<String>>> {
        let t = self.inner.topology();
        let f = self.inner.families();
        let family = match kind {
            "subbase" => t.subbase(),
            "base" => t.base(),
            "tau" => t.opens(),
            "pre" => &f.preopen,
            "deltap" => &f.deltap_open,
            other => return Err(PyValueError::new_err(format!("unknown family `{other}`"))),
        };
        Ok(self.listing(family))
    }

    #[pyo3(signature = (s, tier = "dp"))]
    fn lower(&self, s: SetArg, tier: &str) -> PyResult<Vec<String>> {
        let t = self::tier(tier)?;
        Ok(self.labels(self.inner.lower(self.set(s)?, t)))
    }

    #[pyo3(signature = (s, tier = "dp"))]
    fn upper(&self, s: SetArg, tier: &str) -> PyResult<Vec<String>> {
        let t = self::tier(tier)?;
        Ok(self.labels(self.inner.upper(self.set(s)?, t)))
    }

    /// `fractions.Fraction`, or `None` for the empty set.
    #[pyo3(signature = (s, tier = "dp"))]
    fn accuracy<'py>(
        &self,
        py: Python<'py>,
        s: SetArg,
        tier: &str,
    ) -> PyResult<Option<Bound<'py, PyAny>>> {
        let t = self::tier(tier)?;
        match self.inner.accuracy(self.set(s)?, t) {
            Ok(a) => fraction(py, a).map(Some),
            Err(RoughError::EmptySubject) => Ok(None),
            Err(e) => Err(to_py(e)),
        }
    }

    /// `(class, exact)` with class one of `RD`, `IUD`, `EUD`, `TUD`.
    #[pyo3(signature = (s, tier = "dp"))]
    fn classify(&self, s: SetArg, tier: &str) -> PyResult<(String, bool)> {
        let c = self.inner.classify(self.set(s)?, self::tier(tier)?);
        Ok((c.class.name().to_string(), c.exact))
    }

    /// `(bottom, top, full)` rough inclusion of `s` in `within`.
    #[pyo3(signature = (s, within, tier = "dp"))]
    fn rough_inclusion(
        &self,
        s: SetArg,
        within: SetArg,
        tier: &str,
    ) -> PyResult<(bool, bool, bool)> {
        let r = self
            .inner
            .rough_inclusion(self.set(s)?, self.set(within)?, self::tier(tier)?);
        Ok((r.bottom, r.top, r.full))
    }

    #[pyo3(signature = (label, s, tier = "dp", strong = true))]
    fn is_member(&self, label: &str, s: SetArg, tier: &str, strong: bool) -> PyResult<bool> {
        let x = self.inner.universe().index_of(label).map_err(to_py)?;
        let mode = if strong {
            MembershipMode::Strong
        } else {
            MembershipMode::Weak
        };
        self.inner
            .membership(x, self.set(s)?, self::tier(tier)?, mode)
            .map_err(to_py)
    }

    /// Area key to member labels, in area order.
    fn regions<'py>(&self, py: Python<'py>, s: SetArg) -> PyResult<Bound<'py, PyDict>> {
        let report = self.inner.regions(self.set(s)?);
        let out = PyDict::new(py);
        for (area, set) in report.iter() {
            out.set_item(area.key(), self.labels(set))?;
        }
        Ok(out)
    }

    /// Raises `ValueError` when some δP-open set is not δP-closed.
    fn partition(&self) -> PyResult<Vec<Vec<String>>> {
        let blocks = self.inner.point_closure_partition().map_err(to_py)?;
        Ok(self.listing(&blocks))
    }

    /// Rows `(labels, tau, p, dp)` with accuracies as `p/q` strings.
    #[pyo3(signature = (small_subsets = false))]
    fn accuracy_table(&self, small_subsets: bool) -> Vec<(Vec<String>, String, String, String)> {
        self.inner
            .accuracy_rows(small_subsets)
            .into_iter()
            .map(|r| {
                let [a, b, c] = r.accuracy.map(|x| format_accuracy(&x));
                (self.labels(r.subset), a, b, c)
            })
            .collect()
    }
}

/// Seeded audit over `count` random relations on `n` points. Returns
/// `(passed, findings_jsonl)`.
#[pyfunction]
#[pyo3(signature = (seed, count, n, max_enum = 20))]
fn audit_sample(
    py: Python<'_>,
    seed: u64,
    count: usize,
    n: usize,
    max_enum: usize,
) -> PyResult<(bool, String)> {
    let cap = cap(max_enum)?;
    cap.check(n).map_err(to_py)?;
    let pairs = (n > 6).then_some(4096);
    let report = py
        .detach(|| {
            let corpus = Corpus::sampled(seed, count, &[n], pairs);
            audit(
                &corpus,
                &AuditConfig {
                    cap,
                    ..AuditConfig::default()
                },
            )
        })
        .map_err(to_py)?;
    Ok((report.passed(), report.findings_jsonl()))
}

#[pymodule]
fn roughtopo_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Space>()?;
    m.add_function(wrap_pyfunction!(audit_sample, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = include_str!("../../../fixtures/four_point.json");

    #[test]
    fn space_methods() {
        Python::attach(|py| {
            let space = Space::from_json(EXAMPLE, 20).unwrap();
            assert_eq!(space.family("tau").unwrap().len(), 6);
            assert_eq!(space.family("deltap").unwrap().len(), 16);
            assert!(space.family("nope").is_err());
            let acc = space
                .accuracy(py, SetArg::Expr("{u1,u3,u4}".into()), "p")
                .unwrap()
                .unwrap();
            assert_eq!(acc.str().unwrap().to_string(), "3/4");
            assert!(space
                .accuracy(py, SetArg::Expr("empty".into()), "dp")
                .unwrap()
                .is_none());
            assert_eq!(
                space
                    .classify(SetArg::Labels(vec!["u2".into()]), "p")
                    .unwrap(),
                ("IUD".to_string(), false)
            );
            assert_eq!(space.accuracy_table(true).len(), 14);
            assert_eq!(space.partition().unwrap().len(), 4);
        });
    }

    #[test]
    fn errors_map_to_python_exceptions() {
        Python::attach(|py| {
            let err = Space::from_json(r#"{"universe":["a"],"relation":[["a","z"]]}"#, 20)
                .err()
                .unwrap();
            assert!(err.is_instance_of::<PyValueError>(py));
            let big: Vec<String> = (0..21).map(|i| format!("x{i}")).collect();
            let err = Space::new(big, vec![], 20).err().unwrap();
            assert!(err.is_instance_of::<PyOverflowError>(py));
        });
    }
}
