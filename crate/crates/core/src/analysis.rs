//! Frame conditions for the four basic modal axioms, the harness that
//! compares axiom validity against those conditions, and the three
//! equivalent formulations of relation compatibility.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{TruthAlgebra, TruthValue};
use crate::error::Error;
use crate::graph::{AGraph, GraphFrame};
use crate::logic::{frame_valid, Formula, Sequent};
use crate::mvset::{ARelation, AValuedSet, IndexSet};

/// The four modal axioms whose first-order frame conditions the checker
/// knows how to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomId {
    /// `[] bot |- bot`.
    BoxBotBot,
    /// `top |- <> top`.
    TopDiaTop,
    /// `[] p |- p`.
    BoxT,
    /// `p |- <> p`.
    DiaT,
}

impl AxiomId {
    /// All four axioms in display order.
    pub const ALL: [AxiomId; 4] = [
        AxiomId::BoxBotBot,
        AxiomId::TopDiaTop,
        AxiomId::BoxT,
        AxiomId::DiaT,
    ];

    /// The sequent the axiom asserts, with its modality tagged by `label`.
    pub fn sequent(self, label: Option<&str>) -> Sequent {
        match self {
            AxiomId::BoxBotBot => {
                Sequent::new(Formula::boxed(label, Formula::Bottom), Formula::Bottom)
            }
            AxiomId::TopDiaTop => Sequent::new(Formula::Top, Formula::dia(label, Formula::Top)),
            AxiomId::BoxT => {
                Sequent::new(Formula::boxed(label, Formula::atom("p")), Formula::atom("p"))
            }
            AxiomId::DiaT => {
                Sequent::new(Formula::atom("p"), Formula::dia(label, Formula::atom("p")))
            }
        }
    }

    /// Whether the axiom mentions no atoms (the two modal-constant axioms).
    pub fn is_constant(self) -> bool {
        matches!(self, AxiomId::BoxBotBot | AxiomId::TopDiaTop)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sequent(None))
    }
}

/// Outcome of evaluating a frame condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionVerdict {
    /// Whether the condition holds everywhere.
    pub holds: bool,
    /// Location and values of the first violation, when it does not.
    pub witness: Option<String>,
}

impl ConditionVerdict {
    fn pass() -> Self {
        ConditionVerdict {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        ConditionVerdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for ConditionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "holds"),
            Some(w) => write!(f, "fails {w}"),
        }
    }
}

/// Evaluates the literal frame condition of one axiom for one labelled
/// relation pair:
///
/// - `BoxBotBot`: for every `β` and `z`,
///   `⋀_{z'} (R_box(z,z') → β)  ≤  ⋀_{z'} (E(z,z') → β)`;
/// - `TopDiaTop`: for every `z`,
///   `⋀_{(α,z')} (R_dia(z,z') → α)  ≤  ⋀_{(α,z')} (E(z',z) → α)`;
/// - `BoxT`: `E ⊆ R_box` pointwise;
/// - `DiaT`: `E ⊆ R_dia˘` pointwise (converse of the diamond relation).
pub fn check_condition(
    frame: &GraphFrame,
    label: &str,
    axiom: AxiomId,
) -> Result<ConditionVerdict, Error> {
    let relation = frame.relation(label)?;
    let alg = frame.algebra().clone();
    let edges = frame.graph().edges();
    let nodes = frame.nodes();
    let n = nodes.len();
    match axiom {
        AxiomId::BoxBotBot => {
            let rbox = relation.rbox();
            for beta in alg.values() {
                for z in 0..n {
                    let left =
                        alg.big_meet((0..n).map(|zp| alg.residuum(rbox.get(z, zp), beta)))?;
                    let right =
                        alg.big_meet((0..n).map(|zp| alg.residuum(edges.get(z, zp), beta)))?;
                    if !alg.leq(left, right) {
                        return Ok(ConditionVerdict::fail(format!(
                            "at (β, z) = ({}, {}): left meet {} is not below right meet {}",
                            alg.name(beta),
                            nodes.label(z),
                            alg.name(left),
                            alg.name(right),
                        )));
                    }
                }
            }
            Ok(ConditionVerdict::pass())
        }
        AxiomId::TopDiaTop => {
            let rdia = relation.rdia();
            let pairs = frame.graph().pairs();
            for z in 0..n {
                let left = alg.big_meet((0..pairs.len()).map(|p| {
                    let (alpha, zp) = pairs.pair(p).expect("pairs is a product set");
                    alg.residuum(rdia.get(z, zp), alpha)
                }))?;
                let right = alg.big_meet((0..pairs.len()).map(|p| {
                    let (alpha, zp) = pairs.pair(p).expect("pairs is a product set");
                    alg.residuum(edges.get(zp, z), alpha)
                }))?;
                if !alg.leq(left, right) {
                    return Ok(ConditionVerdict::fail(format!(
                        "at z = {}: left meet {} is not below right meet {}",
                        nodes.label(z),
                        alg.name(left),
                        alg.name(right),
                    )));
                }
            }
            Ok(ConditionVerdict::pass())
        }
        AxiomId::BoxT => Ok(inclusion_verdict(
            &alg,
            nodes,
            edges,
            relation.rbox(),
            "box relation",
        )),
        AxiomId::DiaT => Ok(inclusion_verdict(
            &alg,
            nodes,
            edges,
            &relation.rdia().converse(),
            "converse diamond relation",
        )),
    }
}

/// Pointwise inclusion `E ⊆ larger` with a cell witness on failure.
fn inclusion_verdict(
    alg: &TruthAlgebra,
    nodes: &IndexSet,
    edges: &ARelation,
    larger: &ARelation,
    larger_name: &str,
) -> ConditionVerdict {
    for z in 0..nodes.len() {
        for zp in 0..nodes.len() {
            let e = edges.get(z, zp);
            let r = larger.get(z, zp);
            if !alg.leq(e, r) {
                return ConditionVerdict::fail(format!(
                    "at (z, z') = ({}, {}): E = {} is not below {} = {}",
                    nodes.label(z),
                    nodes.label(zp),
                    alg.name(e),
                    larger_name,
                    alg.name(r),
                ));
            }
        }
    }
    ConditionVerdict::pass()
}

/// Whether the algebra's order is total.
pub fn is_chain(alg: &TruthAlgebra) -> bool {
    alg.values()
        .all(|a| alg.values().all(|b| alg.leq(a, b) || alg.leq(b, a)))
}

/// The simplified criterion for the two modal-constant axioms, sound on
/// totally ordered algebras only:
///
/// - `BoxBotBot`: every `(β, z)` has some `z'` with `R_box(z,z') → β ≤ β`;
/// - `TopDiaTop`: every `z` has some `(α, z')` with `R_dia(z,z') → α = 0`.
///
/// Agrees with [`check_condition`] whenever both apply.
pub fn check_condition_finite_chain(
    frame: &GraphFrame,
    label: &str,
    axiom: AxiomId,
) -> Result<bool, Error> {
    let alg = frame.algebra();
    if !is_chain(alg) {
        return Err(Error::Unsupported {
            context: "the finite-chain criterion needs a totally ordered algebra",
        });
    }
    let relation = frame.relation(label)?;
    let n = frame.nodes().len();
    match axiom {
        AxiomId::BoxBotBot => {
            let rbox = relation.rbox();
            for beta in alg.values() {
                for z in 0..n {
                    let attained =
                        (0..n).any(|zp| alg.leq(alg.residuum(rbox.get(z, zp), beta), beta));
                    if !attained {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        AxiomId::TopDiaTop => {
            let rdia = relation.rdia();
            let bottom = alg.bottom();
            for z in 0..n {
                let attained = alg.values().any(|alpha| {
                    (0..n).any(|zp| alg.residuum(rdia.get(z, zp), alpha) == bottom)
                });
                if !attained {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        AxiomId::BoxT | AxiomId::DiaT => Err(Error::Unsupported {
            context: "the finite-chain criterion covers only the modal-constant axioms",
        }),
    }
}

/// One axiom's semantic-validity-vs-frame-condition comparison.
#[derive(Clone, Debug)]
pub struct CorrespondenceRow {
    /// The axiom under test.
    pub axiom: AxiomId,
    /// The frame condition's verdict.
    pub condition: ConditionVerdict,
    /// Validity of the axiom's sequent over every concept valuation;
    /// `None` when the search budget ran out (untested, not passed).
    pub semantic: Option<bool>,
    /// The finite-chain criterion, on chain algebras for the two
    /// modal-constant axioms.
    pub chain_criterion: Option<bool>,
}

impl CorrespondenceRow {
    /// `Some(agree)` once both sides were computed; `None` while the
    /// semantic side is untested.
    pub fn agreement(&self) -> Option<bool> {
        self.semantic.map(|valid| valid == self.condition.holds)
    }
}

/// Compares axiom validity against the axiom's frame condition for one
/// labelled relation pair.
pub fn correspondence_row(
    frame: &Arc<GraphFrame>,
    label: &str,
    axiom: AxiomId,
    budget: u64,
) -> Result<CorrespondenceRow, Error> {
    let condition = check_condition(frame, label, axiom)?;
    let semantic = match frame_valid(frame, &axiom.sequent(Some(label)), budget) {
        Ok(verdict) => Some(verdict.is_valid()),
        Err(Error::BudgetExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let chain_criterion = if axiom.is_constant() && is_chain(frame.algebra()) {
        Some(check_condition_finite_chain(frame, label, axiom)?)
    } else {
        None
    };
    Ok(CorrespondenceRow {
        axiom,
        condition,
        semantic,
        chain_criterion,
    })
}

/// Runs [`correspondence_row`] for all four axioms on one label.
pub fn correspondence_report(
    frame: &Arc<GraphFrame>,
    label: &str,
    budget: u64,
) -> Result<Vec<CorrespondenceRow>, Error> {
    AxiomId::ALL
        .iter()
        .map(|&axiom| correspondence_row(frame, label, axiom, budget))
        .collect()
}

/// The three readings of relation compatibility, each computed
/// independently; they are provably equivalent, so [`all_agree`] holding
/// on every tested instance is the checkable content of that fact.
///
/// [`all_agree`]: FormulationsReport::all_agree
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormulationsReport {
    /// (i) Liftings of all point singletons are Galois-stable.
    pub singletons_stable: bool,
    /// (ii) Liftings of every A-valued set are Galois-stable.
    pub all_liftings_stable: bool,
    /// (iii) Lifting a singleton's Galois closure returns the same set as
    /// lifting the singleton itself.
    pub closure_invariant: bool,
}

impl FormulationsReport {
    /// Whether the three readings reached one verdict.
    pub fn all_agree(&self) -> bool {
        self.singletons_stable == self.all_liftings_stable
            && self.all_liftings_stable == self.closure_invariant
    }
}

/// Computes the three compatibility formulations for a box/diamond pair of
/// node relations over a reflexive graph. Formulation (ii) enumerates every
/// A-valued set on both sides of the induced polarity, so it needs
/// `n^|Z| + n^(n·|Z|)` steps within `budget`.
pub fn compatibility_formulations(
    graph: &AGraph,
    rbox: &ARelation,
    rdia: &ARelation,
    budget: u64,
) -> Result<FormulationsReport, Error> {
    let alg = graph.algebra().clone();
    let rbox_l = graph.box_lifting(rbox)?;
    let rdia_l = graph.dia_lifting(rdia)?;
    let polarity = graph.polarity();
    let nodes = graph.nodes();
    let pairs = graph.pairs();

    let singletons_stable = graph.compatibility_report(rbox, rdia)?.passed();

    let needed = count_sets(&alg, nodes).saturating_add(count_sets(&alg, pairs));
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "lifting enumeration",
            needed,
            budget,
        });
    }
    let mut all_liftings_stable = true;
    for u in SetEnumerator::new(alg.clone(), nodes.clone()) {
        if !polarity.is_stable_extent(&rbox_l.lift_to_domain(&u)?)?
            || !polarity.is_stable_extent(&rdia_l.lift_to_codomain(&u)?)?
        {
            all_liftings_stable = false;
            break;
        }
    }
    if all_liftings_stable {
        for f in SetEnumerator::new(alg.clone(), pairs.clone()) {
            if !polarity.is_stable_intent(&rbox_l.lift_to_codomain(&f)?)?
                || !polarity.is_stable_intent(&rdia_l.lift_to_domain(&f)?)?
            {
                all_liftings_stable = false;
                break;
            }
        }
    }

    let mut closure_invariant = true;
    'search: for beta in alg.values() {
        for x in 0..nodes.len() {
            let s = AValuedSet::singleton(alg.clone(), nodes.clone(), x, beta)?;
            let closed = polarity.close_intent(&s)?;
            if rbox_l.lift_to_domain(&closed)? != rbox_l.lift_to_domain(&s)?
                || rdia_l.lift_to_codomain(&closed)? != rdia_l.lift_to_codomain(&s)?
            {
                closure_invariant = false;
                break 'search;
            }
        }
        for a in 0..pairs.len() {
            let s = AValuedSet::singleton(alg.clone(), pairs.clone(), a, beta)?;
            let closed = polarity.close_extent(&s)?;
            if rbox_l.lift_to_codomain(&closed)? != rbox_l.lift_to_codomain(&s)?
                || rdia_l.lift_to_domain(&closed)? != rdia_l.lift_to_domain(&s)?
            {
                closure_invariant = false;
                break 'search;
            }
        }
    }

    Ok(FormulationsReport {
        singletons_stable,
        all_liftings_stable,
        closure_invariant,
    })
}

/// Number of A-valued sets over an index set, saturating at `u128::MAX`.
fn count_sets(alg: &TruthAlgebra, index: &IndexSet) -> u128 {
    (alg.len() as u128)
        .checked_pow(index.len() as u32)
        .unwrap_or(u128::MAX)
}

/// Iterates every A-valued set over an index set in odometer order.
struct SetEnumerator {
    algebra: Arc<TruthAlgebra>,
    index: IndexSet,
    digits: Option<Vec<u32>>,
}

impl SetEnumerator {
    fn new(algebra: Arc<TruthAlgebra>, index: IndexSet) -> Self {
        let digits = Some(vec![0; index.len()]);
        SetEnumerator {
            algebra,
            index,
            digits,
        }
    }
}

impl Iterator for SetEnumerator {
    type Item = AValuedSet;

    fn next(&mut self) -> Option<AValuedSet> {
        let digits = self.digits.as_mut()?;
        let values = digits.iter().map(|&d| TruthValue(d)).collect();
        let set = AValuedSet::new(self.algebra.clone(), self.index.clone(), values)
            .expect("enumerated values are in range");
        let n = self.algebra.len() as u32;
        let mut pos = digits.len();
        let mut exhausted = true;
        while pos > 0 {
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < n {
                exhausted = false;
                break;
            }
            digits[pos] = 0;
        }
        if exhausted {
            self.digits = None;
        }
        Some(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::AGraph;

    fn v(i: u32) -> TruthValue {
        TruthValue(i)
    }

    /// Boolean two-node identity graph whose sole relation pair is empty.
    fn zero_relation_frame() -> Arc<GraphFrame> {
        let alg = TruthAlgebra::lukasiewicz(2).unwrap();
        let nodes = IndexSet::new(["z0", "z1"]).unwrap();
        let graph = AGraph::new(ARelation::delta(alg.clone(), &nodes)).unwrap();
        let zero =
            ARelation::constant(alg.clone(), nodes.clone(), nodes.clone(), alg.bottom()).unwrap();
        Arc::new(GraphFrame::new(graph, [("r".to_string(), zero.clone(), Some(zero))]).unwrap())
    }

    /// Łukasiewicz-3 two-node frame whose box relation is the edge relation.
    fn chain_frame() -> Arc<GraphFrame> {
        let alg = TruthAlgebra::lukasiewicz(3).unwrap();
        let nodes = IndexSet::new(["z0", "z1"]).unwrap();
        let edges = ARelation::from_rows(
            alg.clone(),
            nodes.clone(),
            nodes.clone(),
            &[vec![v(2), v(1)], vec![v(0), v(2)]],
        )
        .unwrap();
        let graph = AGraph::new(edges.clone()).unwrap();
        Arc::new(GraphFrame::new(graph, [("e".to_string(), edges, None)]).unwrap())
    }

    #[test]
    fn axiom_sequents_print_as_expected() {
        assert_eq!(AxiomId::BoxBotBot.to_string(), "[] bot |- bot");
        assert_eq!(AxiomId::TopDiaTop.to_string(), "top |- <> top");
        assert_eq!(
            AxiomId::BoxT.sequent(Some("e")).to_string(),
            "[]_e p |- p"
        );
        assert_eq!(AxiomId::DiaT.sequent(None).to_string(), "p |- <> p");
    }

    #[test]
    fn empty_relation_fails_all_conditions_with_witnesses() {
        let frame = zero_relation_frame();
        for axiom in AxiomId::ALL {
            let verdict = check_condition(&frame, "r", axiom).unwrap();
            assert!(!verdict.holds, "{axiom} condition should fail");
            assert!(verdict.witness.is_some());
        }
        let box_t = check_condition(&frame, "r", AxiomId::BoxT).unwrap();
        assert_eq!(
            box_t.witness.as_deref(),
            Some("at (z, z') = (z0, z0): E = 1/1 is not below box relation = 0/1"),
        );
    }

    #[test]
    fn conditions_match_semantic_validity_on_fixtures() {
        for frame in [zero_relation_frame(), chain_frame()] {
            let label = frame.labels().next().unwrap().to_string();
            for row in correspondence_report(&frame, &label, 100_000).unwrap() {
                assert_eq!(
                    row.agreement(),
                    Some(true),
                    "axiom {} disagrees on label {label}",
                    row.axiom,
                );
                if let Some(chain) = row.chain_criterion {
                    assert_eq!(chain, row.condition.holds, "chain criterion for {}", row.axiom);
                }
            }
        }
    }

    #[test]
    fn edge_relation_satisfies_every_condition() {
        let frame = chain_frame();
        for axiom in AxiomId::ALL {
            let verdict = check_condition(&frame, "e", axiom).unwrap();
            assert!(verdict.holds, "{axiom} should hold when the box relation is E");
        }
        assert!(frame.e_reflexive("e").unwrap());
    }

    #[test]
    fn chain_criterion_rejects_non_chain_algebras_and_atom_axioms() {
        let frame = chain_frame();
        assert!(matches!(
            check_condition_finite_chain(&frame, "e", AxiomId::BoxT),
            Err(Error::Unsupported { .. }),
        ));
        assert!(is_chain(frame.algebra()));
    }

    #[test]
    fn formulations_agree_on_compatible_and_incompatible_pairs() {
        let frame = chain_frame();
        let graph = frame.graph();
        let relation = frame.relation("e").unwrap();
        let report =
            compatibility_formulations(graph, relation.rbox(), relation.rdia(), 100_000).unwrap();
        assert!(report.all_agree());
        assert!(report.singletons_stable);

        let alg = frame.algebra().clone();
        let nodes = frame.nodes().clone();
        let zero =
            ARelation::constant(alg.clone(), nodes.clone(), nodes.clone(), alg.bottom()).unwrap();
        let report = compatibility_formulations(graph, &zero, &zero, 100_000).unwrap();
        assert!(report.all_agree());
    }

    #[test]
    fn formulation_enumeration_respects_budget() {
        let frame = chain_frame();
        let relation = frame.relation("e").unwrap();
        let err = compatibility_formulations(frame.graph(), relation.rbox(), relation.rdia(), 10)
            .unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { needed: 738, .. }));
    }
}
