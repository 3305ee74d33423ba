//! Built-in worked example: an 11-valued Łukasiewicz frame over three
//! database nodes with three labelled relations and two atoms, plus the
//! frozen tables its evaluation must reproduce bit-exactly.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::error::Error;
use crate::graph::GraphFrame;
use crate::io::{realize, to_json, AlgebraSpec, FrameFile, LoadedFrame, RelationSpec};
use crate::logic::{Formula, Model};
use crate::mvset::AValuedSet;

/// Node labels in matrix order.
pub const NODES: [&str; 3] = ["z_A", "z_M", "z_H"];

/// Edge matrix; also the box matrix of relation `A`.
const E: [[&str; 3]; 3] = [
    ["1.0", "0.2", "0.6"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "0.4", "1.0"],
];

/// Box matrix of relation `M`: every pair related to degree 1.
const R_M: [[&str; 3]; 3] = [
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
];

/// Box matrix of relation `H`.
const R_H: [[&str; 3]; 3] = [
    ["1.0", "0.3", "0.9"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "0.5", "1.0"],
];

/// Extent table of atom `phi`: rows carrier-ascending, columns by node.
const PHI: [[&str; 3]; 11] = [
    ["0.5", "0.5", "0.5"],
    ["0.6", "0.6", "0.6"],
    ["0.7", "0.7", "0.7"],
    ["0.8", "0.8", "0.8"],
    ["0.9", "0.9", "0.9"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
];

/// Extent table of atom `psi`.
const PSI: [[&str; 3]; 11] = [
    ["0.8", "0.4", "0.8"],
    ["0.9", "0.5", "0.9"],
    ["1.0", "0.6", "1.0"],
    ["1.0", "0.7", "1.0"],
    ["1.0", "0.8", "1.0"],
    ["1.0", "0.9", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
];

/// Frozen expected extent table of `[]_M psi`.
const BOX_M_PSI: [[&str; 3]; 11] = [
    ["0.4", "0.4", "0.4"],
    ["0.5", "0.5", "0.5"],
    ["0.6", "0.6", "0.6"],
    ["0.7", "0.7", "0.7"],
    ["0.8", "0.8", "0.8"],
    ["0.9", "0.9", "0.9"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
    ["1.0", "1.0", "1.0"],
];

fn matrix(rows: &[[&str; 3]]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect()
}

/// The bundle in frame-file form.
pub fn frame_file() -> FrameFile {
    let mut relations = IndexMap::new();
    for (label, rows) in [("A", &E), ("M", &R_M), ("H", &R_H)] {
        relations.insert(
            label.to_string(),
            RelationSpec {
                box_matrix: matrix(rows),
                dia_matrix: None,
            },
        );
    }
    let mut valuations = IndexMap::new();
    valuations.insert("phi".to_string(), matrix(&PHI));
    valuations.insert("psi".to_string(), matrix(&PSI));
    FrameFile {
        algebra: AlgebraSpec::Lukasiewicz { size: 11 },
        nodes: NODES.iter().map(|s| s.to_string()).collect(),
        edges: matrix(&E),
        relations,
        valuations,
        close: false,
    }
}

/// The bundle serialized as JSON.
pub fn json() -> String {
    to_json(&frame_file())
}

/// The bundle realized into live structures.
pub fn load() -> LoadedFrame {
    realize(frame_file()).expect("the embedded bundle is valid")
}

/// The frozen expected extent table of `[]_M psi`.
pub fn expected_box_m_psi() -> Vec<Vec<String>> {
    matrix(&BOX_M_PSI)
}

/// A single mismatching cell in a recomputed table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellDiff {
    /// Label of the mismatching position.
    pub cell: String,
    /// What the frozen data requires there.
    pub expected: String,
    /// What was recomputed.
    pub actual: String,
}

/// One recomputed identity, table, or inequality.
#[derive(Clone, Debug)]
pub struct CaseStudyCheck {
    /// What was recomputed.
    pub name: String,
    /// Cell-level mismatches; empty when the check passed.
    pub diffs: Vec<CellDiff>,
}

impl CaseStudyCheck {
    /// Whether the recomputation matched.
    pub fn passed(&self) -> bool {
        self.diffs.is_empty()
    }
}

/// Full recomputation report over the embedded bundle.
#[derive(Clone, Debug)]
pub struct CaseStudyReport {
    /// The four table identities.
    pub table_checks: Vec<CaseStudyCheck>,
    /// The two pointwise inequalities.
    pub inequality_checks: Vec<CaseStudyCheck>,
}

impl CaseStudyReport {
    /// All checks in report order.
    pub fn checks(&self) -> impl Iterator<Item = &CaseStudyCheck> {
        self.table_checks.iter().chain(&self.inequality_checks)
    }

    /// Whether every check matched bit-exactly.
    pub fn passed(&self) -> bool {
        self.checks().all(CaseStudyCheck::passed)
    }

    /// One-line outcome.
    pub fn summary(&self) -> String {
        if self.passed() {
            format!(
                "{} identities/tables verified, {} inequalities verified",
                self.table_checks.len(),
                self.inequality_checks.len(),
            )
        } else {
            let failed = self.checks().filter(|c| !c.passed()).count();
            let total = self.table_checks.len() + self.inequality_checks.len();
            format!("{failed} of {total} checks failed")
        }
    }
}

/// Recomputes the four tables and two inequalities from the embedded
/// bundle and diffs them against the frozen expectations.
pub fn verify() -> Result<CaseStudyReport, Error> {
    let loaded = load();
    let frame = &loaded.frame;
    let model = &loaded.model;

    let phi = Formula::atom("phi");
    let psi = Formula::atom("psi");
    let box_m_psi = Formula::boxed(Some("M"), psi.clone());

    let expected_table = parse_table(frame, &matrix(&BOX_M_PSI))?;
    let actual = model.eval(&box_m_psi)?;
    let table_checks = vec![
        diff_tables(
            frame,
            "extent of []_M psi matches its frozen table",
            &expected_table,
            actual.extent(),
        ),
        identity_check(model, "[]_H phi equals phi", "H", &phi)?,
        identity_check(model, "[]_H psi equals psi", "H", &psi)?,
        identity_check(model, "[]_M phi equals phi", "M", &phi)?,
    ];

    let inequality_checks = vec![
        inequality_check(model, "extent of []_M psi lies below phi", &box_m_psi, &phi)?,
        inequality_check(model, "extent of []_M psi lies below psi", &box_m_psi, &psi)?,
    ];

    Ok(CaseStudyReport {
        table_checks,
        inequality_checks,
    })
}

/// Parses a carrier × node table into an extent over the frame's pairs.
fn parse_table(frame: &Arc<GraphFrame>, rows: &[Vec<String>]) -> Result<AValuedSet, Error> {
    let alg = frame.algebra();
    let mut values = Vec::new();
    for row in rows {
        for cell in row {
            values.push(alg.parse_value(cell)?);
        }
    }
    AValuedSet::new(alg.clone(), frame.graph().pairs().clone(), values)
}

fn diff_tables(
    frame: &Arc<GraphFrame>,
    name: &str,
    expected: &AValuedSet,
    actual: &AValuedSet,
) -> CaseStudyCheck {
    let alg = frame.algebra();
    let diffs = (0..expected.index().len())
        .filter(|&i| expected.get(i) != actual.get(i))
        .map(|i| CellDiff {
            cell: expected.index().label(i).to_string(),
            expected: alg.name(expected.get(i)).to_string(),
            actual: alg.name(actual.get(i)).to_string(),
        })
        .collect();
    CaseStudyCheck {
        name: name.to_string(),
        diffs,
    }
}

/// Diffs `[]_label inner` against `inner` itself.
fn identity_check(
    model: &Model,
    name: &str,
    label: &str,
    inner: &Formula,
) -> Result<CaseStudyCheck, Error> {
    let boxed = model.eval(&Formula::boxed(Some(label), inner.clone()))?;
    let plain = model.eval(inner)?;
    Ok(diff_tables(
        model.frame(),
        name,
        plain.extent(),
        boxed.extent(),
    ))
}

/// Pointwise `lhs ≤ rhs` on extents, with the offending cells on failure.
fn inequality_check(
    model: &Model,
    name: &str,
    lhs: &Formula,
    rhs: &Formula,
) -> Result<CaseStudyCheck, Error> {
    let alg = model.frame().algebra().clone();
    let lhs = model.eval(lhs)?;
    let rhs = model.eval(rhs)?;
    let diffs = (0..lhs.extent().index().len())
        .filter(|&i| !alg.leq(lhs.extent().get(i), rhs.extent().get(i)))
        .map(|i| CellDiff {
            cell: lhs.extent().index().label(i).to_string(),
            expected: format!("at most {}", alg.name(rhs.extent().get(i))),
            actual: alg.name(lhs.extent().get(i)).to_string(),
        })
        .collect();
    Ok(CaseStudyCheck {
        name: name.to_string(),
        diffs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Sequent;

    #[test]
    fn bundle_loads_with_expected_shape() {
        let loaded = load();
        assert_eq!(loaded.frame.nodes().labels(), NODES);
        assert_eq!(
            loaded.frame.labels().collect::<Vec<_>>(),
            ["A", "M", "H"]
        );
        assert_eq!(loaded.model.valuation().len(), 2);

        let alg = loaded.frame.algebra();
        let h = loaded.frame.relation("H").unwrap();
        assert_eq!(h.rdia(), &h.rbox().converse());
        assert_eq!(alg.name(h.rdia().get(2, 0)), "0.9");
    }

    #[test]
    fn verify_reports_all_green() {
        let report = verify().unwrap();
        assert!(report.passed(), "summary: {}", report.summary());
        assert_eq!(
            report.summary(),
            "4 identities/tables verified, 2 inequalities verified",
        );
    }

    #[test]
    fn atoms_are_incomparable_in_the_model() {
        let model = load().model;
        let phi_psi = Sequent::new(Formula::atom("phi"), Formula::atom("psi"));
        let psi_phi = Sequent::new(Formula::atom("psi"), Formula::atom("phi"));
        assert!(!model.sequent_true(&phi_psi).unwrap());
        assert!(!model.sequent_true(&psi_phi).unwrap());
    }

    #[test]
    fn refutation_degrees_match_the_printed_intents() {
        let model = load().model;
        let alg = model.frame().algebra().clone();
        let phi = Formula::atom("phi");
        let psi = Formula::atom("psi");
        for node in NODES {
            assert_eq!(
                alg.name(model.refutation_degree(node, &phi).unwrap()),
                "0.5",
            );
            assert_eq!(
                alg.name(model.refutation_degree(node, &Formula::Top).unwrap()),
                "0.0",
            );
        }
        let psi_intent: Vec<&str> = NODES
            .iter()
            .map(|node| alg.name(model.refutation_degree(node, &psi).unwrap()))
            .collect();
        assert_eq!(psi_intent, ["0.2", "0.6", "0.2"]);
    }

    #[test]
    fn concept_lattice_size_is_frozen() {
        let loaded = load();
        let concepts = loaded
            .frame
            .polarity()
            .enumerate_concepts(10_000)
            .unwrap();
        assert_eq!(concepts.len(), 205);
    }
}
