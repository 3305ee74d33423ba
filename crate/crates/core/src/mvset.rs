//! Algebra-valued sets and relations over finite index sets.
//!
//! An [`AValuedSet`] is a map from a finite index set into a truth-value
//! algebra; an [`ARelation`] is a map from a pair of index sets. Subsethood
//! between two sets over the same index is the meet of pointwise residua, and
//! relations lift sets across themselves in two directions (see
//! [`ARelation::lift_to_domain`] and [`ARelation::lift_to_codomain`]); these
//! two liftings generate every Galois map and modal operator downstream.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_algebra, TruthAlgebra, TruthValue};
use crate::error::Error;

/// A finite, ordered set of labelled positions.
///
/// Cloning is cheap (shared handle). Equality compares label sequences, so
/// two independently built sets with the same labels are interchangeable.
///
/// An index set may carry product structure: the pairs `(α, z)` of an algebra
/// element and a position of a base set, ordered with the algebra index
/// ascending and the base position varying fastest within each block.
#[derive(Clone)]
pub struct IndexSet(Arc<IndexInner>);

struct IndexInner {
    labels: Vec<String>,
    product: Option<(Arc<TruthAlgebra>, IndexSet)>,
}

impl PartialEq for IndexSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.labels == other.0.labels
    }
}

impl Eq for IndexSet {}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IndexSet({:?})", self.0.labels)
    }
}

impl IndexSet {
    /// A plain index set from distinct labels.
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(IndexSet(Arc::new(IndexInner {
            labels,
            product: None,
        })))
    }

    /// The product of an algebra carrier with a base index set: positions are
    /// the pairs `(α, z)` with the carrier index major and the base position
    /// minor, so position `(α, z)` sits at `α·|base| + z`.
    pub fn product(algebra: Arc<TruthAlgebra>, base: &IndexSet) -> Self {
        let mut labels = Vec::with_capacity(algebra.len() * base.len());
        for v in algebra.values() {
            for z in base.labels() {
                labels.push(format!("({}, {})", algebra.name(v), z));
            }
        }
        IndexSet(Arc::new(IndexInner {
            labels,
            product: Some((algebra, base.clone())),
        }))
    }

    /// Number of positions.
    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    /// True when there are no positions.
    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    /// Label of a position.
    pub fn label(&self, i: usize) -> &str {
        &self.0.labels[i]
    }

    /// All labels in order.
    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Position of a label.
    pub fn position(&self, label: &str) -> Result<usize, Error> {
        self.0
            .labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel {
                label: label.to_string(),
            })
    }

    /// For a product set, the base set it was built over.
    pub fn base(&self) -> Option<&IndexSet> {
        self.0.product.as_ref().map(|(_, base)| base)
    }

    /// For a product set, decompose a position into its `(α, base)` pair.
    pub fn pair(&self, i: usize) -> Option<(TruthValue, usize)> {
        let (algebra, base) = self.0.product.as_ref()?;
        debug_assert!(i < self.len());
        let _ = algebra;
        Some((
            crate::algebra::TruthValue((i / base.len()) as u32),
            i % base.len(),
        ))
    }

    /// For a product set, the position of the pair `(α, z)`.
    pub fn pair_position(&self, alpha: TruthValue, base_position: usize) -> Option<usize> {
        let (_, base) = self.0.product.as_ref()?;
        debug_assert!(base_position < base.len());
        Some(alpha.index() * base.len() + base_position)
    }
}

/// A set valued in a truth algebra: a total map from an index set's positions
/// into the algebra's carrier.
#[derive(Clone)]
pub struct AValuedSet {
    algebra: Arc<TruthAlgebra>,
    index: IndexSet,
    values: Vec<TruthValue>,
}

impl PartialEq for AValuedSet {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.index == other.index
            && self.values == other.values
    }
}

impl Eq for AValuedSet {}

impl fmt::Debug for AValuedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AValuedSet[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}: {}", self.index.label(i), self.algebra.name(*v))?;
        }
        write!(f, "]")
    }
}

impl AValuedSet {
    /// A set from explicit values, one per position.
    pub fn new(
        algebra: Arc<TruthAlgebra>,
        index: IndexSet,
        values: Vec<TruthValue>,
    ) -> Result<Self, Error> {
        if values.len() != index.len() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "set over {} positions given {} values",
                    index.len(),
                    values.len()
                ),
            });
        }
        for &v in &values {
            algebra.value(v.index())?;
        }
        Ok(AValuedSet {
            algebra,
            index,
            values,
        })
    }

    /// The constant map to `value`.
    pub fn constant(
        algebra: Arc<TruthAlgebra>,
        index: IndexSet,
        value: TruthValue,
    ) -> Result<Self, Error> {
        algebra.value(value.index())?;
        let values = vec![value; index.len()];
        Ok(AValuedSet {
            algebra,
            index,
            values,
        })
    }

    /// The singleton `{α/w}`: `α` at position `w`, bottom elsewhere.
    pub fn singleton(
        algebra: Arc<TruthAlgebra>,
        index: IndexSet,
        position: usize,
        alpha: TruthValue,
    ) -> Result<Self, Error> {
        if position >= index.len() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "singleton position {position} out of range for {} positions",
                    index.len()
                ),
            });
        }
        let mut set = Self::constant(algebra, index, TruthValue(0))?;
        let bottom = set.algebra.bottom();
        for v in set.values.iter_mut() {
            *v = bottom;
        }
        set.values[position] = alpha;
        set.algebra.value(alpha.index())?;
        Ok(set)
    }

    pub fn algebra(&self) -> &Arc<TruthAlgebra> {
        &self.algebra
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    /// Value at a position.
    pub fn get(&self, i: usize) -> TruthValue {
        self.values[i]
    }

    /// All values in position order.
    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    /// A copy with one value replaced; used to perturb a set.
    pub fn with_value(&self, position: usize, value: TruthValue) -> Result<Self, Error> {
        self.algebra.value(value.index())?;
        if position >= self.index.len() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "position {position} out of range for {} positions",
                    self.index.len()
                ),
            });
        }
        let mut copy = self.clone();
        copy.values[position] = value;
        Ok(copy)
    }

    fn compatible(&self, other: &Self, context: &'static str) -> Result<(), Error> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch { context });
        }
        if self.index != other.index {
            return Err(Error::IndexMismatch { context });
        }
        Ok(())
    }

    /// Graded subsethood `S(f, g) = ⋀_z (f(z) → g(z))`.
    pub fn subsethood(&self, other: &Self) -> Result<TruthValue, Error> {
        self.compatible(other, "subsethood")?;
        let a = &self.algebra;
        let mut acc = a.top();
        for (f, g) in self.values.iter().zip(&other.values) {
            acc = a.meet(acc, a.residuum(*f, *g));
        }
        Ok(acc)
    }

    /// Full inclusion: subsethood equals 1, equivalently pointwise order.
    pub fn subseteq(&self, other: &Self) -> Result<bool, Error> {
        self.compatible(other, "inclusion")?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(f, g)| self.algebra.leq(*f, *g)))
    }

    /// Pointwise meet.
    pub fn meet(&self, other: &Self) -> Result<Self, Error> {
        self.compatible(other, "pointwise meet")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(f, g)| self.algebra.meet(*f, *g))
            .collect();
        Ok(AValuedSet {
            algebra: self.algebra.clone(),
            index: self.index.clone(),
            values,
        })
    }

    /// Pointwise join.
    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        self.compatible(other, "pointwise join")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(f, g)| self.algebra.join(*f, *g))
            .collect();
        Ok(AValuedSet {
            algebra: self.algebra.clone(),
            index: self.index.clone(),
            values,
        })
    }
}

/// A relation valued in a truth algebra: a total map from
/// `domain × codomain` positions into the carrier, stored row-major with the
/// domain position major.
#[derive(Clone)]
pub struct ARelation {
    algebra: Arc<TruthAlgebra>,
    domain: IndexSet,
    codomain: IndexSet,
    values: Vec<TruthValue>,
}

impl PartialEq for ARelation {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.domain == other.domain
            && self.codomain == other.codomain
            && self.values == other.values
    }
}

impl Eq for ARelation {}

impl fmt::Debug for ARelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ARelation({}×{})",
            self.domain.len(),
            self.codomain.len()
        )
    }
}

impl ARelation {
    /// A relation from explicit row-major values.
    pub fn new(
        algebra: Arc<TruthAlgebra>,
        domain: IndexSet,
        codomain: IndexSet,
        values: Vec<TruthValue>,
    ) -> Result<Self, Error> {
        if values.len() != domain.len() * codomain.len() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "relation over {}×{} positions given {} values",
                    domain.len(),
                    codomain.len(),
                    values.len()
                ),
            });
        }
        for &v in &values {
            algebra.value(v.index())?;
        }
        Ok(ARelation {
            algebra,
            domain,
            codomain,
            values,
        })
    }

    /// A relation from rows (one per domain position).
    pub fn from_rows(
        algebra: Arc<TruthAlgebra>,
        domain: IndexSet,
        codomain: IndexSet,
        rows: &[Vec<TruthValue>],
    ) -> Result<Self, Error> {
        if rows.len() != domain.len() || rows.iter().any(|r| r.len() != codomain.len()) {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "relation needs {} rows of {} values",
                    domain.len(),
                    codomain.len()
                ),
            });
        }
        Self::new(
            algebra,
            domain,
            codomain,
            rows.iter().flatten().copied().collect(),
        )
    }

    /// The constant relation.
    pub fn constant(
        algebra: Arc<TruthAlgebra>,
        domain: IndexSet,
        codomain: IndexSet,
        value: TruthValue,
    ) -> Result<Self, Error> {
        algebra.value(value.index())?;
        let values = vec![value; domain.len() * codomain.len()];
        Ok(ARelation {
            algebra,
            domain,
            codomain,
            values,
        })
    }

    /// The crisp identity relation on an index set: 1 on the diagonal,
    /// 0 elsewhere.
    pub fn delta(algebra: Arc<TruthAlgebra>, index: &IndexSet) -> Self {
        let n = index.len();
        let mut values = vec![algebra.bottom(); n * n];
        for i in 0..n {
            values[i * n + i] = algebra.top();
        }
        ARelation {
            algebra,
            domain: index.clone(),
            codomain: index.clone(),
            values,
        }
    }

    pub fn algebra(&self) -> &Arc<TruthAlgebra> {
        &self.algebra
    }

    pub fn domain(&self) -> &IndexSet {
        &self.domain
    }

    pub fn codomain(&self) -> &IndexSet {
        &self.codomain
    }

    /// Value at a `(domain, codomain)` position pair.
    pub fn get(&self, a: usize, x: usize) -> TruthValue {
        self.values[a * self.codomain.len() + x]
    }

    /// A copy with one cell replaced; used to perturb a relation.
    pub fn with_value(&self, a: usize, x: usize, value: TruthValue) -> Result<Self, Error> {
        self.algebra.value(value.index())?;
        if a >= self.domain.len() || x >= self.codomain.len() {
            return Err(Error::ShapeMismatch {
                context: format!(
                    "cell ({a}, {x}) out of range for a {}×{} relation",
                    self.domain.len(),
                    self.codomain.len()
                ),
            });
        }
        let mut copy = self.clone();
        copy.values[a * self.codomain.len() + x] = value;
        Ok(copy)
    }

    /// The converse relation: `R˘(x, a) = R(a, x)`.
    pub fn converse(&self) -> Self {
        let (na, nx) = (self.domain.len(), self.codomain.len());
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..nx {
            for a in 0..na {
                values.push(self.get(a, x));
            }
        }
        ARelation {
            algebra: self.algebra.clone(),
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            values,
        }
    }

    /// Whether every diagonal value is 1. Errors unless the relation is
    /// square (domain and codomain coincide).
    pub fn is_reflexive(&self) -> Result<bool, Error> {
        if self.domain != self.codomain {
            return Err(Error::IndexMismatch {
                context: "reflexivity of a non-square relation",
            });
        }
        Ok((0..self.domain.len()).all(|i| self.get(i, i) == self.algebra.top()))
    }

    /// Pointwise inclusion of two relations with the same shape.
    pub fn subseteq(&self, other: &Self) -> Result<bool, Error> {
        if !same_algebra(&self.algebra, &other.algebra) {
            return Err(Error::AlgebraMismatch {
                context: "relation inclusion",
            });
        }
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::IndexMismatch {
                context: "relation inclusion",
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| self.algebra.leq(*a, *b)))
    }

    /// Lifts a set over the codomain to a set over the domain:
    /// `R⁽⁰⁾[u](a) = ⋀_x (u(x) → R(a, x))`.
    pub fn lift_to_domain(&self, u: &AValuedSet) -> Result<AValuedSet, Error> {
        if !same_algebra(&self.algebra, u.algebra()) {
            return Err(Error::AlgebraMismatch {
                context: "lifting to domain",
            });
        }
        if *u.index() != self.codomain {
            return Err(Error::IndexMismatch {
                context: "lifting to domain (set must live over the codomain)",
            });
        }
        let alg = &self.algebra;
        let values = (0..self.domain.len())
            .map(|a| {
                let mut acc = alg.top();
                for x in 0..self.codomain.len() {
                    acc = alg.meet(acc, alg.residuum(u.get(x), self.get(a, x)));
                }
                acc
            })
            .collect();
        AValuedSet::new(alg.clone(), self.domain.clone(), values)
    }

    /// Lifts a set over the domain to a set over the codomain:
    /// `R⁽¹⁾[f](x) = ⋀_a (f(a) → R(a, x))`.
    pub fn lift_to_codomain(&self, f: &AValuedSet) -> Result<AValuedSet, Error> {
        if !same_algebra(&self.algebra, f.algebra()) {
            return Err(Error::AlgebraMismatch {
                context: "lifting to codomain",
            });
        }
        if *f.index() != self.domain {
            return Err(Error::IndexMismatch {
                context: "lifting to codomain (set must live over the domain)",
            });
        }
        let alg = &self.algebra;
        let values = (0..self.codomain.len())
            .map(|x| {
                let mut acc = alg.top();
                for a in 0..self.domain.len() {
                    acc = alg.meet(acc, alg.residuum(f.get(a), self.get(a, x)));
                }
                acc
            })
            .collect();
        AValuedSet::new(alg.clone(), self.codomain.clone(), values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::TruthAlgebra;

    fn v(k: usize) -> TruthValue {
        TruthValue(k as u32)
    }

    fn two_nodes() -> IndexSet {
        IndexSet::new(["z0", "z1"]).unwrap()
    }

    #[test]
    fn duplicate_labels_are_rejected() {
        assert!(matches!(
            IndexSet::new(["a", "a"]),
            Err(Error::DuplicateLabel { .. })
        ));
    }

    #[test]
    fn lifting_to_domain_matches_hand_computation() {
        // Łukasiewicz-3, R = [[1, 1/2], [0, 1]], u = (1, 1/2):
        // row z0: (1 → 1) ∧ (1/2 → 1/2) = 1; row z1: (1 → 0) ∧ (1/2 → 1) = 0.
        let a = TruthAlgebra::lukasiewicz(3).unwrap();
        let z = two_nodes();
        let r = ARelation::from_rows(
            a.clone(),
            z.clone(),
            z.clone(),
            &[vec![v(2), v(1)], vec![v(0), v(2)]],
        )
        .unwrap();
        let u = AValuedSet::new(a.clone(), z.clone(), vec![v(2), v(1)]).unwrap();
        let lifted = r.lift_to_domain(&u).unwrap();
        assert_eq!(lifted.values(), &[v(2), v(0)]);
    }

    #[test]
    fn subsethood_matches_hand_computation() {
        // Łukasiewicz-11, f = (1.0, 0.5), g = (0.5, 0.5): S(f, g) = 0.5.
        let a = TruthAlgebra::lukasiewicz(11).unwrap();
        let z = two_nodes();
        let f = AValuedSet::new(a.clone(), z.clone(), vec![v(10), v(5)]).unwrap();
        let g = AValuedSet::new(a.clone(), z.clone(), vec![v(5), v(5)]).unwrap();
        assert_eq!(f.subsethood(&g).unwrap(), v(5));
        assert_eq!(f.subsethood(&f).unwrap(), a.top());
        assert!(!f.subseteq(&g).unwrap());
        assert!(g.subseteq(&f).unwrap());
    }

    #[test]
    fn inclusion_agrees_with_subsethood_being_top() {
        let a = TruthAlgebra::lukasiewicz(4).unwrap();
        let z = two_nodes();
        for f0 in 0..4 {
            for f1 in 0..4 {
                for g0 in 0..4 {
                    for g1 in 0..4 {
                        let f = AValuedSet::new(a.clone(), z.clone(), vec![v(f0), v(f1)]).unwrap();
                        let g = AValuedSet::new(a.clone(), z.clone(), vec![v(g0), v(g1)]).unwrap();
                        assert_eq!(
                            f.subseteq(&g).unwrap(),
                            f.subsethood(&g).unwrap() == a.top()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn singleton_subsethood_is_a_residuum() {
        // S({α/w}, g) = α → g(w) on a chain: the other positions contribute
        // 0 → g = 1.
        let a = TruthAlgebra::lukasiewicz(5).unwrap();
        let z = two_nodes();
        let g = AValuedSet::new(a.clone(), z.clone(), vec![v(1), v(3)]).unwrap();
        for alpha in a.values() {
            for w in 0..2 {
                let s = AValuedSet::singleton(a.clone(), z.clone(), w, alpha).unwrap();
                assert_eq!(s.subsethood(&g).unwrap(), a.residuum(alpha, g.get(w)));
            }
        }
    }

    #[test]
    fn converse_and_reflexivity() {
        let a = TruthAlgebra::lukasiewicz(3).unwrap();
        let z = two_nodes();
        let r = ARelation::from_rows(
            a.clone(),
            z.clone(),
            z.clone(),
            &[vec![v(2), v(1)], vec![v(0), v(2)]],
        )
        .unwrap();
        let c = r.converse();
        assert_eq!(c.get(0, 1), v(0));
        assert_eq!(c.get(1, 0), v(1));
        assert_eq!(c.converse(), r);
        assert!(r.is_reflexive().unwrap());
        assert!(!r.with_value(1, 1, v(1)).unwrap().is_reflexive().unwrap());
        let delta = ARelation::delta(a.clone(), &z);
        assert!(delta.is_reflexive().unwrap());
        assert_eq!(delta.get(0, 1), a.bottom());

        let rect = ARelation::constant(
            a.clone(),
            z.clone(),
            IndexSet::new(["w0"]).unwrap(),
            a.top(),
        )
        .unwrap();
        assert!(matches!(
            rect.is_reflexive(),
            Err(Error::IndexMismatch { .. })
        ));
    }

    #[test]
    fn liftings_are_antitone() {
        let a = TruthAlgebra::lukasiewicz(3).unwrap();
        let z = two_nodes();
        let r = ARelation::from_rows(
            a.clone(),
            z.clone(),
            z.clone(),
            &[vec![v(2), v(1)], vec![v(1), v(2)]],
        )
        .unwrap();
        let small = AValuedSet::new(a.clone(), z.clone(), vec![v(1), v(0)]).unwrap();
        let large = AValuedSet::new(a.clone(), z.clone(), vec![v(2), v(1)]).unwrap();
        assert!(small.subseteq(&large).unwrap());
        assert!(r
            .lift_to_domain(&large)
            .unwrap()
            .subseteq(&r.lift_to_domain(&small).unwrap())
            .unwrap());
        assert!(r
            .lift_to_codomain(&large)
            .unwrap()
            .subseteq(&r.lift_to_codomain(&small).unwrap())
            .unwrap());
    }

    #[test]
    fn mismatches_are_reported() {
        let a3 = TruthAlgebra::lukasiewicz(3).unwrap();
        let a4 = TruthAlgebra::lukasiewicz(4).unwrap();
        let z = two_nodes();
        let w = IndexSet::new(["w0", "w1"]).unwrap();
        let f = AValuedSet::constant(a3.clone(), z.clone(), a3.top()).unwrap();
        let g = AValuedSet::constant(a4.clone(), z.clone(), a4.top()).unwrap();
        let h = AValuedSet::constant(a3.clone(), w.clone(), a3.top()).unwrap();
        assert!(matches!(
            f.subsethood(&g),
            Err(Error::AlgebraMismatch { .. })
        ));
        assert!(matches!(f.subsethood(&h), Err(Error::IndexMismatch { .. })));
        assert!(matches!(
            AValuedSet::new(a3.clone(), z.clone(), vec![v(0)]),
            Err(Error::ShapeMismatch { .. })
        ));
        assert!(matches!(
            AValuedSet::new(a3.clone(), z.clone(), vec![v(3), v(0)]),
            Err(Error::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn product_index_orders_algebra_major() {
        let a = TruthAlgebra::lukasiewicz(3).unwrap();
        let z = two_nodes();
        let p = IndexSet::product(a.clone(), &z);
        assert_eq!(p.len(), 6);
        assert_eq!(p.label(0), "(0/2, z0)");
        assert_eq!(p.label(1), "(0/2, z1)");
        assert_eq!(p.label(2), "(1/2, z0)");
        assert_eq!(p.label(5), "(2/2, z1)");
        assert_eq!(p.pair(3), Some((v(1), 1)));
        assert_eq!(p.pair_position(v(2), 0), Some(4));
        assert_eq!(p.base(), Some(&z));
        assert_eq!(z.pair(0), None);
    }
}
