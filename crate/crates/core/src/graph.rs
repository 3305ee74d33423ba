//! Reflexive graphs valued in a truth algebra, the polarity they induce, and
//! graph-based frames with labelled modal relations.
//!
//! A graph `(Z, E)` with `E` reflexive induces a polarity whose objects are
//! the pairs `(α, z)` of a truth value and a node, whose attributes are the
//! nodes, and whose incidence is `I_E((α, z), z') = E(z, z') → α`. Any
//! node-to-node relation `R` lifts the same way into a box relation
//! (pairs × nodes) or, transposed around the arrow, into a diamond relation
//! (nodes × pairs); a [`GraphFrame`] bundles the graph with labelled pairs of
//! such relations whose liftings are compatible with the induced polarity.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::algebra::{same_algebra, TruthAlgebra};
use crate::error::Error;
use crate::mvset::{ARelation, AValuedSet, IndexSet};
use crate::polarity::{APolarity, CompatibilityReport, Concept, EnrichedPolarity};

/// A reflexive graph valued in a truth algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGraph {
    edges: ARelation,
    pairs: IndexSet,
    polarity: APolarity,
}

impl AGraph {
    /// Wraps a square, reflexive edge relation and precomputes the induced
    /// polarity. A non-reflexive relation is rejected with the first bad
    /// diagonal entry as witness.
    pub fn new(edges: ARelation) -> Result<Self, Error> {
        if edges.domain() != edges.codomain() {
            return Err(Error::IndexMismatch {
                context: "graph edges must be a square relation",
            });
        }
        let alg = edges.algebra().clone();
        if let Some(z) = (0..edges.domain().len()).find(|&z| edges.get(z, z) != alg.top()) {
            return Err(Error::NotReflexive {
                node: edges.domain().label(z).to_string(),
                value: alg.name(edges.get(z, z)).to_string(),
            });
        }
        let pairs = IndexSet::product(alg.clone(), edges.domain());
        let incidence = lift_pairs_to_nodes(&alg, &pairs, &edges)?;
        Ok(AGraph {
            polarity: APolarity::new(incidence),
            pairs,
            edges,
        })
    }

    pub fn algebra(&self) -> &Arc<TruthAlgebra> {
        self.edges.algebra()
    }

    pub fn nodes(&self) -> &IndexSet {
        self.edges.domain()
    }

    pub fn edges(&self) -> &ARelation {
        &self.edges
    }

    /// The object side of the induced polarity: all `(α, z)` pairs.
    pub fn pairs(&self) -> &IndexSet {
        &self.pairs
    }

    /// The polarity induced by the edge relation.
    pub fn polarity(&self) -> &APolarity {
        &self.polarity
    }

    fn expect_square(&self, r: &ARelation, context: &'static str) -> Result<(), Error> {
        if !same_algebra(self.algebra(), r.algebra()) {
            return Err(Error::AlgebraMismatch { context });
        }
        if r.domain() != self.nodes() || r.codomain() != self.nodes() {
            return Err(Error::IndexMismatch { context });
        }
        Ok(())
    }

    /// Lifts a node relation into a box relation of the induced polarity:
    /// `I_R((α, z), z') = R(z, z') → α` over pairs × nodes.
    pub fn box_lifting(&self, r: &ARelation) -> Result<ARelation, Error> {
        self.expect_square(r, "box lifting of a node relation")?;
        lift_pairs_to_nodes(self.algebra(), &self.pairs, r)
    }

    /// Lifts a node relation into a diamond relation of the induced polarity:
    /// `J_R(z, (α, z')) = R(z, z') → α` over nodes × pairs.
    pub fn dia_lifting(&self, r: &ARelation) -> Result<ARelation, Error> {
        self.expect_square(r, "diamond lifting of a node relation")?;
        let alg = self.algebra();
        let nodes = self.nodes();
        let mut values = Vec::with_capacity(nodes.len() * self.pairs.len());
        for z in 0..nodes.len() {
            for p in 0..self.pairs.len() {
                let (alpha, zp) = self.pairs.pair(p).expect("pairs is a product set");
                values.push(alg.residuum(r.get(z, zp), alpha));
            }
        }
        ARelation::new(alg.clone(), nodes.clone(), self.pairs.clone(), values)
    }

    /// Checks whether a pair of node relations is compatible with the graph:
    /// the liftings of all point singletons along the lifted box and diamond
    /// relations must be Galois-stable in the induced polarity.
    pub fn compatibility_report(
        &self,
        rbox: &ARelation,
        rdia: &ARelation,
    ) -> Result<CompatibilityReport, Error> {
        let enriched = EnrichedPolarity::new_unchecked(
            self.polarity.clone(),
            self.box_lifting(rbox)?,
            self.dia_lifting(rdia)?,
        )?;
        enriched.check_compatibility()
    }
}

/// Shared formula for the induced incidence and box liftings:
/// `(pairs, node) ↦ R(z_of_pair, node) → α_of_pair`.
fn lift_pairs_to_nodes(
    alg: &Arc<TruthAlgebra>,
    pairs: &IndexSet,
    r: &ARelation,
) -> Result<ARelation, Error> {
    let nodes = r.domain();
    let mut values = Vec::with_capacity(pairs.len() * nodes.len());
    for p in 0..pairs.len() {
        let (alpha, z) = pairs.pair(p).expect("pairs is a product set");
        for zp in 0..nodes.len() {
            values.push(alg.residuum(r.get(z, zp), alpha));
        }
    }
    ARelation::new(alg.clone(), pairs.clone(), nodes.clone(), values)
}

/// One labelled modal relation pair of a frame, with its lifted enrichment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRelation {
    rbox: ARelation,
    rdia: ARelation,
    enriched: EnrichedPolarity,
}

impl FrameRelation {
    /// The node-to-node box relation.
    pub fn rbox(&self) -> &ARelation {
        &self.rbox
    }

    /// The node-to-node diamond relation.
    pub fn rdia(&self) -> &ARelation {
        &self.rdia
    }

    /// The enriched polarity formed by the liftings of the two relations.
    pub fn enriched(&self) -> &EnrichedPolarity {
        &self.enriched
    }
}

/// A reflexive graph together with labelled compatible relation pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFrame {
    graph: AGraph,
    relations: IndexMap<String, FrameRelation>,
}

impl fmt::Display for GraphFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "frame with {} node(s), {} relation label(s)",
            self.nodes().len(),
            self.relations.len()
        )
    }
}

impl GraphFrame {
    /// Builds a frame, rejecting any labelled pair that is not compatible
    /// with the graph. A missing diamond matrix defaults to the converse of
    /// the box matrix, which keeps the pair compatible whenever the box
    /// relation alone is.
    pub fn new<I>(graph: AGraph, relations: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (String, ARelation, Option<ARelation>)>,
    {
        Self::build(graph, relations, true)
    }

    /// Builds a frame checking only shapes, not compatibility; for
    /// counterexample fixtures.
    pub fn new_unchecked<I>(graph: AGraph, relations: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (String, ARelation, Option<ARelation>)>,
    {
        Self::build(graph, relations, false)
    }

    fn build<I>(graph: AGraph, relations: I, check: bool) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (String, ARelation, Option<ARelation>)>,
    {
        let mut map = IndexMap::new();
        for (label, rbox, rdia) in relations {
            let rdia = rdia.unwrap_or_else(|| rbox.converse());
            let enriched = EnrichedPolarity::new_unchecked(
                graph.polarity().clone(),
                graph.box_lifting(&rbox)?,
                graph.dia_lifting(&rdia)?,
            )?;
            if check {
                let report = enriched.check_compatibility()?;
                if !report.passed() {
                    return Err(Error::IncompatibleRelation { label, report });
                }
            }
            if map
                .insert(
                    label.clone(),
                    FrameRelation {
                        rbox,
                        rdia,
                        enriched,
                    },
                )
                .is_some()
            {
                return Err(Error::DuplicateLabel { label });
            }
        }
        Ok(GraphFrame {
            graph,
            relations: map,
        })
    }

    pub fn graph(&self) -> &AGraph {
        &self.graph
    }

    pub fn algebra(&self) -> &Arc<TruthAlgebra> {
        self.graph.algebra()
    }

    pub fn nodes(&self) -> &IndexSet {
        self.graph.nodes()
    }

    pub fn polarity(&self) -> &APolarity {
        self.graph.polarity()
    }

    /// Relation labels in insertion order.
    pub fn labels(&self) -> impl ExactSizeIterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    /// The labelled relation pair, or an unknown-label error.
    pub fn relation(&self, label: &str) -> Result<&FrameRelation, Error> {
        self.relations.get(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
        })
    }

    /// Resolves an optional label: a named label must exist; an absent label
    /// binds the frame's sole relation and errors otherwise.
    pub fn resolve_label(&self, label: Option<&str>) -> Result<&str, Error> {
        match label {
            Some(l) => self.relation(l).map(|_| self.relations.get_key_value(l).unwrap().0.as_str()),
            None => {
                if self.relations.len() == 1 {
                    Ok(self.relations.keys().next().unwrap())
                } else {
                    Err(Error::AmbiguousLabel {
                        count: self.relations.len(),
                    })
                }
            }
        }
    }

    /// Box operator of a labelled relation on a concept of the induced
    /// polarity.
    pub fn frame_box(&self, label: &str, c: &Concept) -> Result<Concept, Error> {
        self.relation(label)?.enriched.box_concept(c)
    }

    /// Diamond operator of a labelled relation on a concept of the induced
    /// polarity.
    pub fn frame_dia(&self, label: &str, c: &Concept) -> Result<Concept, Error> {
        self.relation(label)?.enriched.dia_concept(c)
    }

    /// E-reflexivity of a labelled relation: pointwise `E ≤ R_□`.
    pub fn e_reflexive(&self, label: &str) -> Result<bool, Error> {
        self.graph.edges().subseteq(self.relation(label)?.rbox())
    }

    /// Recomputed compatibility report for every label, in label order.
    pub fn compatibility_reports(
        &self,
    ) -> Result<Vec<(String, CompatibilityReport)>, Error> {
        self.relations
            .iter()
            .map(|(label, rel)| Ok((label.clone(), rel.enriched.check_compatibility()?)))
            .collect()
    }

    /// A constant-value extent over the pair side, shared by tests and
    /// valuation plumbing.
    pub fn constant_extent(&self, value: crate::algebra::TruthValue) -> Result<AValuedSet, Error> {
        AValuedSet::constant(self.algebra().clone(), self.graph.pairs().clone(), value)
    }
}
