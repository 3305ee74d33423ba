//! Property-based tests for the Galois connection, the relational liftings,
//! the complex-algebra operators, and the evaluator.

use std::sync::Arc;

use indexmap::IndexMap;
use proptest::prelude::*;

use mvgraph::analysis::{check_condition, AxiomId};
use mvgraph::logic::ValuationMode;
use mvgraph::parser::parse_formula;
use mvgraph::{
    AGraph, APolarity, ARelation, AValuedSet, Formula, GraphFrame, IndexSet, Model, Sequent,
    TruthAlgebra, TruthValue,
};

fn chain_algebra() -> impl Strategy<Value = Arc<TruthAlgebra>> {
    (2usize..=4, any::<bool>()).prop_map(|(n, lukasiewicz)| {
        if lukasiewicz {
            TruthAlgebra::lukasiewicz(n).unwrap()
        } else {
            TruthAlgebra::goedel(n).unwrap()
        }
    })
}

fn index_set(count: usize, prefix: &str) -> IndexSet {
    IndexSet::new((0..count).map(|i| format!("{prefix}{i}"))).unwrap()
}

fn to_values(alg: &Arc<TruthAlgebra>, raw: &[usize]) -> Vec<TruthValue> {
    raw.iter().map(|&v| alg.value(v % alg.len()).unwrap()).collect()
}

/// A polarity over small index sets plus raw material for three sets:
/// two over the objects, one over the attributes.
fn polarity_instance(
) -> impl Strategy<Value = (APolarity, AValuedSet, AValuedSet, AValuedSet)> {
    (chain_algebra(), 1usize..=3, 1usize..=3).prop_flat_map(|(alg, m, k)| {
        let cells = m * k + 2 * m + k;
        prop::collection::vec(0usize..alg.len(), cells).prop_map(move |raw| {
            let objects = index_set(m, "a");
            let attributes = index_set(k, "x");
            let values = to_values(&alg, &raw[..m * k]);
            let polarity = APolarity::new(
                ARelation::new(alg.clone(), objects.clone(), attributes.clone(), values)
                    .unwrap(),
            );
            let f = AValuedSet::new(
                alg.clone(),
                objects.clone(),
                to_values(&alg, &raw[m * k..m * k + m]),
            )
            .unwrap();
            let g = AValuedSet::new(
                alg.clone(),
                objects,
                to_values(&alg, &raw[m * k + m..m * k + 2 * m]),
            )
            .unwrap();
            let u = AValuedSet::new(
                alg.clone(),
                attributes,
                to_values(&alg, &raw[m * k + 2 * m..]),
            )
            .unwrap();
            (polarity, f, g, u)
        })
    })
}

/// A reflexive graph over 1–3 nodes plus one extra square relation on the
/// same nodes.
fn graph_instance() -> impl Strategy<Value = (AGraph, ARelation)> {
    (chain_algebra(), 1usize..=3).prop_flat_map(|(alg, n)| {
        prop::collection::vec(0usize..alg.len(), 2 * n * n).prop_map(move |raw| {
            let nodes = index_set(n, "z");
            let mut edges = ARelation::new(
                alg.clone(),
                nodes.clone(),
                nodes.clone(),
                to_values(&alg, &raw[..n * n]),
            )
            .unwrap();
            for i in 0..n {
                edges = edges.with_value(i, i, alg.top()).unwrap();
            }
            let extra = ARelation::new(
                alg.clone(),
                nodes.clone(),
                nodes,
                to_values(&alg, &raw[n * n..]),
            )
            .unwrap();
            (AGraph::new(edges).unwrap(), extra)
        })
    })
}

/// The frame whose box relation is the edge relation itself (diamond its
/// converse); always compatible.
fn edge_frame(graph: AGraph) -> Arc<GraphFrame> {
    let edges = graph.edges().clone();
    let converse = edges.converse();
    Arc::new(
        GraphFrame::new(graph, [("e".to_string(), edges, Some(converse))]).unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn galois_maps_form_an_adjunction((polarity, f, _, u) in polarity_instance()) {
        let down_u = polarity.down(&u).unwrap();
        let up_f = polarity.up(&f).unwrap();
        prop_assert_eq!(
            f.subsethood(&down_u).unwrap(),
            u.subsethood(&up_f).unwrap()
        );
    }

    #[test]
    fn closures_are_extensive_idempotent_monotone((polarity, f, g, u) in polarity_instance()) {
        let cf = polarity.close_extent(&f).unwrap();
        prop_assert!(f.subseteq(&cf).unwrap());
        let ccf = polarity.close_extent(&cf).unwrap();
        prop_assert_eq!(ccf.values(), cf.values());
        if f.subseteq(&g).unwrap() {
            prop_assert!(cf.subseteq(&polarity.close_extent(&g).unwrap()).unwrap());
        }
        let cu = polarity.close_intent(&u).unwrap();
        prop_assert!(u.subseteq(&cu).unwrap());
        let ccu = polarity.close_intent(&cu).unwrap();
        prop_assert_eq!(ccu.values(), cu.values());
    }

    #[test]
    fn galois_maps_are_antitone_and_turn_joins_into_meets(
        (polarity, f, g, _) in polarity_instance()
    ) {
        if f.subseteq(&g).unwrap() {
            prop_assert!(polarity.up(&g).unwrap().subseteq(&polarity.up(&f).unwrap()).unwrap());
        }
        let join = f.join(&g).unwrap();
        let lhs = polarity.up(&join).unwrap();
        let rhs = polarity.up(&f).unwrap().meet(&polarity.up(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs.values(), rhs.values());
    }

    #[test]
    fn sets_decompose_into_singletons((polarity, f, _, _) in polarity_instance()) {
        let alg = polarity.algebra().clone();
        let index = f.index().clone();
        let mut rebuilt = AValuedSet::constant(alg.clone(), index.clone(), alg.bottom()).unwrap();
        for w in 0..index.len() {
            let single = AValuedSet::singleton(alg.clone(), index.clone(), w, f.get(w)).unwrap();
            // Subsethood from a singleton is one residuation step.
            prop_assert_eq!(
                single.subsethood(&f).unwrap(),
                alg.residuum(f.get(w), f.get(w))
            );
            rebuilt = rebuilt.join(&single).unwrap();
        }
        prop_assert_eq!(rebuilt.values(), f.values());
    }

    #[test]
    fn concepts_are_stable_pairs((polarity, f, _, u) in polarity_instance()) {
        let from_extent = polarity.concept_from_extent(&f).unwrap();
        let down_intent = polarity.down(from_extent.intent()).unwrap();
        prop_assert_eq!(down_intent.values(), from_extent.extent().values());
        let up_extent = polarity.up(from_extent.extent()).unwrap();
        prop_assert_eq!(up_extent.values(), from_extent.intent().values());
        let from_intent = polarity.concept_from_intent(&u).unwrap();
        let up_extent = polarity.up(from_intent.extent()).unwrap();
        prop_assert_eq!(up_extent.values(), from_intent.intent().values());
    }

    #[test]
    fn edge_pair_is_compatible_and_acts_as_identity((graph, _) in graph_instance()) {
        let edges = graph.edges().clone();
        let report = graph.compatibility_report(&edges, &edges.converse()).unwrap();
        prop_assert!(report.passed(), "{}", report);

        let frame = edge_frame(graph);
        let concepts = frame.polarity().enumerate_concepts(1_000_000).unwrap();
        for c in &concepts {
            let boxed = frame.frame_box("e", c).unwrap();
            prop_assert_eq!(boxed.extent().values(), c.extent().values());
            let diaed = frame.frame_dia("e", c).unwrap();
            prop_assert_eq!(diaed.extent().values(), c.extent().values());
        }
    }

    #[test]
    fn modal_operators_are_monotone((graph, _) in graph_instance()) {
        let frame = edge_frame(graph);
        let polarity = frame.polarity();
        let concepts = polarity.enumerate_concepts(1_000_000).unwrap();
        for c in &concepts {
            for d in &concepts {
                let meet = polarity.concept_meet(c, d).unwrap();
                let box_meet = frame.frame_box("e", &meet).unwrap();
                let box_d = frame.frame_box("e", d).unwrap();
                prop_assert!(polarity.concept_leq(&box_meet, &box_d).unwrap());
                let dia_meet = frame.frame_dia("e", &meet).unwrap();
                let dia_d = frame.frame_dia("e", d).unwrap();
                prop_assert!(polarity.concept_leq(&dia_meet, &dia_d).unwrap());
            }
        }
    }

    #[test]
    fn growing_the_box_relation_preserves_the_two_constant_conditions(
        (graph, extra) in graph_instance()
    ) {
        // A box relation that dominates E satisfies the condition for
        // `[] bot |- bot`, and its converse-diamond twin the one for
        // `top |- <> top`; both are checked through an unchecked frame so
        // incompatible samples still exercise the condition reader.
        let alg = graph.algebra().clone();
        let nodes = graph.nodes().clone();
        let n = nodes.len();
        let mut rbox = graph.edges().clone();
        for i in 0..n {
            for j in 0..n {
                let grown = alg.join(rbox.get(i, j), extra.get(i, j));
                rbox = rbox.with_value(i, j, grown).unwrap();
            }
        }
        let rdia = rbox.converse();
        let frame = GraphFrame::new_unchecked(
            graph,
            [("r".to_string(), rbox, Some(rdia))],
        )
        .unwrap();
        prop_assert!(check_condition(&frame, "r", AxiomId::BoxBotBot).unwrap().holds);
        prop_assert!(check_condition(&frame, "r", AxiomId::TopDiaTop).unwrap().holds);
        prop_assert!(check_condition(&frame, "r", AxiomId::BoxT).unwrap().holds);
        prop_assert!(check_condition(&frame, "r", AxiomId::DiaT).unwrap().holds);
    }

    #[test]
    fn evaluation_agrees_with_support_and_refutation_queries(
        (graph, extra) in graph_instance(),
        beta_raw in 0usize..4,
        alpha_raw in 0usize..4
    ) {
        let alg = graph.algebra().clone();
        let frame = edge_frame(graph);
        let pairs = frame.graph().pairs().clone();
        let n = frame.nodes().len();
        let table = AValuedSet::new(
            alg.clone(),
            pairs,
            (0..alg.len() * n)
                .map(|i| extra.get(i % n, (i / n) % n))
                .collect(),
        )
        .unwrap();
        let mut atoms = IndexMap::new();
        atoms.insert("p".to_string(), table);
        let model =
            Model::from_extent_tables(frame.clone(), atoms, ValuationMode::Close).unwrap();

        let formula = parse_formula("[] p & (p | <> top)").unwrap();
        let concept = model.eval(&formula).unwrap();
        let beta = alg.value(beta_raw % alg.len()).unwrap();
        let alpha = alg.value(alpha_raw % alg.len()).unwrap();
        for z in 0..n {
            let node = frame.nodes().label(z).to_string();
            let pair = frame.graph().pairs().pair_position(beta, z).unwrap();
            let extent_value = concept.extent().get(pair);
            prop_assert_eq!(model.support_degree(beta, &node, &formula).unwrap(), extent_value);
            prop_assert_eq!(
                model.supports(beta, &node, alpha, &formula).unwrap(),
                alg.leq(alpha, extent_value)
            );
            let intent_value = concept.intent().get(z);
            prop_assert_eq!(model.refutation_degree(&node, &formula).unwrap(), intent_value);
            prop_assert_eq!(
                model.refutes(&node, alpha, &formula).unwrap(),
                alg.leq(alpha, intent_value)
            );
        }

        // Sequent truth is extent inclusion, and box respects it.
        let p = Formula::atom("p");
        let box_p = Formula::boxed(None, p.clone());
        if model.sequent_true(&Sequent::new(p.clone(), box_p.clone())).unwrap() {
            let lhs = model.eval(&p).unwrap();
            let rhs = model.eval(&box_p).unwrap();
            prop_assert!(lhs.extent().subseteq(rhs.extent()).unwrap());
            prop_assert!(rhs.intent().subseteq(lhs.intent()).unwrap());
        }
    }

    #[test]
    fn printed_formulas_reparse_to_themselves(formula in formula_strategy()) {
        let printed = formula.to_string();
        let reparsed = parse_formula(&printed).unwrap();
        prop_assert_eq!(reparsed, formula);
    }
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        Just(Formula::Bottom),
        "[a-z][a-z0-9_]{0,5}".prop_filter("reserved words", |s| s != "top" && s != "bot")
            .prop_map(Formula::Atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        let label = prop_oneof![
            Just(None),
            "[A-Za-z][A-Za-z0-9_]{0,3}".prop_map(Some),
        ];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (label.clone(), inner.clone())
                .prop_map(|(l, f)| Formula::boxed(l.as_deref(), f)),
            (label, inner).prop_map(|(l, f)| Formula::dia(l.as_deref(), f)),
        ]
    })
}
