//! JSON frame files: the schema types, loading with semantic validation,
//! and lossless saving.
//!
//! A frame file fixes one algebra, a reflexive edge matrix over named
//! nodes, labelled box/diamond relation matrices, and per-atom valuation
//! tables (rows carrier-ascending, columns in node order). Semantic errors
//! point at the offending value with a JSON-pointer path such as
//! `/relations/H/box/0/2`.

use std::path::Path;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraKind, TruthAlgebra, TruthValue};
use crate::error::Error;
use crate::graph::{AGraph, GraphFrame};
use crate::logic::{Model, ValuationMode};
use crate::mvset::{ARelation, AValuedSet, IndexSet};

/// Top-level schema of a frame file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    /// Truth-value algebra the whole file lives over.
    pub algebra: AlgebraSpec,
    /// Node labels, fixing row/column order for every matrix.
    pub nodes: Vec<String>,
    /// Edge matrix, rows indexed by source node.
    #[serde(rename = "E")]
    pub edges: Vec<Vec<String>>,
    /// Modal relation matrices per label.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub relations: IndexMap<String, RelationSpec>,
    /// Valuation tables per atom.
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub valuations: IndexMap<String, Vec<Vec<String>>>,
    /// Close unstable valuation tables instead of rejecting them.
    #[serde(default, skip_serializing_if = "is_false")]
    pub close: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Algebra description: a named chain family or explicit finite tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AlgebraSpec {
    /// Łukasiewicz chain with `size` elements.
    Lukasiewicz { size: usize },
    /// Gödel chain with `size` elements.
    Goedel { size: usize },
    /// Explicit finite residuated lattice: a carrier, a list of order
    /// pairs (closed under reflexivity and transitivity on load), and the
    /// two operation tables.
    Table {
        carrier: Vec<String>,
        order: Vec<(String, String)>,
        otimes: Vec<Vec<String>>,
        residuum: Vec<Vec<String>>,
    },
}

/// One labelled relation: a box matrix and an optional diamond matrix.
/// A missing diamond matrix defaults to the converse of the box matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationSpec {
    #[serde(rename = "box")]
    pub box_matrix: Vec<Vec<String>>,
    #[serde(rename = "dia", default, skip_serializing_if = "Option::is_none")]
    pub dia_matrix: Option<Vec<Vec<String>>>,
}

/// A frame file realized into live structures.
#[derive(Clone, Debug)]
pub struct LoadedFrame {
    /// The file as parsed.
    pub file: FrameFile,
    /// The realized graph frame.
    pub frame: Arc<GraphFrame>,
    /// The model over `frame` interpreting the file's atoms.
    pub model: Model,
}

/// Parses and realizes a frame file from a JSON string.
pub fn frame_from_json(json: &str) -> Result<LoadedFrame, Error> {
    let file: FrameFile = serde_json::from_str(json)?;
    realize(file)
}

/// Reads `path` and realizes the frame file it contains.
pub fn load_frame(path: impl AsRef<Path>) -> Result<LoadedFrame, Error> {
    let text = std::fs::read_to_string(path)?;
    frame_from_json(&text)
}

/// Serializes a frame file as pretty-printed JSON with a final newline.
pub fn to_json(file: &FrameFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("frame files serialize");
    s.push('\n');
    s
}

/// Writes a frame file to `path`.
pub fn save_frame(path: impl AsRef<Path>, file: &FrameFile) -> Result<(), Error> {
    Ok(std::fs::write(path, to_json(file))?)
}

/// Validates a parsed frame file and builds the algebra, graph, frame and
/// model it describes.
pub fn realize(file: FrameFile) -> Result<LoadedFrame, Error> {
    realize_impl(file, true)
}

/// Like [`realize`] but skips the relation-compatibility gate, so frames
/// with incompatible relations can still be loaded and reported on.
pub fn realize_unchecked(file: FrameFile) -> Result<LoadedFrame, Error> {
    realize_impl(file, false)
}

fn realize_impl(file: FrameFile, check: bool) -> Result<LoadedFrame, Error> {
    let algebra = build_algebra(&file.algebra)?;
    if file.nodes.is_empty() {
        return Err(pointer_err("/nodes", "at least one node is required"));
    }
    let nodes = IndexSet::new(file.nodes.iter().cloned())
        .map_err(|e| pointer_err("/nodes", &e.to_string()))?;
    let edges = parse_matrix(&algebra, &nodes, &file.edges, "/E")?;
    let graph = AGraph::new(edges)?;

    let mut relations = Vec::new();
    for (label, spec) in &file.relations {
        let rbox = parse_matrix(
            &algebra,
            &nodes,
            &spec.box_matrix,
            &format!("/relations/{label}/box"),
        )?;
        let rdia = match &spec.dia_matrix {
            Some(m) => Some(parse_matrix(
                &algebra,
                &nodes,
                m,
                &format!("/relations/{label}/dia"),
            )?),
            None => None,
        };
        relations.push((label.clone(), rbox, rdia));
    }
    let frame = if check {
        Arc::new(GraphFrame::new(graph, relations)?)
    } else {
        Arc::new(GraphFrame::new_unchecked(graph, relations)?)
    };

    let mut tables = IndexMap::new();
    for (atom, rows) in &file.valuations {
        let pointer = format!("/valuations/{atom}");
        let table = parse_valuation(&frame, rows, &pointer)?;
        tables.insert(atom.clone(), table);
    }
    let mode = if file.close {
        ValuationMode::Close
    } else {
        ValuationMode::Strict
    };
    let model = Model::from_extent_tables(frame.clone(), tables, mode)?;

    Ok(LoadedFrame { file, frame, model })
}

/// Renders a loaded frame back into schema form with canonical value
/// names. A diamond matrix equal to the converse of its box matrix is
/// omitted, matching the loader's default; a table algebra's order lists
/// every related pair.
pub fn export_frame_file(frame: &GraphFrame, model: &Model, close: bool) -> FrameFile {
    let alg = frame.algebra();
    let nodes = frame.nodes();
    let edges = matrix_strings(alg, frame.graph().edges());

    let mut relations = IndexMap::new();
    for label in frame.labels() {
        let rel = frame.relation(label).expect("label comes from the frame");
        let dia_matrix = if rel.rdia() == &rel.rbox().converse() {
            None
        } else {
            Some(matrix_strings(alg, rel.rdia()))
        };
        relations.insert(
            label.to_string(),
            RelationSpec {
                box_matrix: matrix_strings(alg, rel.rbox()),
                dia_matrix,
            },
        );
    }

    let mut valuations = IndexMap::new();
    for (atom, concept) in model.valuation() {
        let extent = concept.extent();
        let rows = (0..alg.len())
            .map(|r| {
                (0..nodes.len())
                    .map(|c| alg.name(extent.get(r * nodes.len() + c)).to_string())
                    .collect()
            })
            .collect();
        valuations.insert(atom.clone(), rows);
    }

    FrameFile {
        algebra: algebra_spec(alg),
        nodes: nodes.labels().to_vec(),
        edges,
        relations,
        valuations,
        close,
    }
}

fn build_algebra(spec: &AlgebraSpec) -> Result<Arc<TruthAlgebra>, Error> {
    match spec {
        AlgebraSpec::Lukasiewicz { size } => TruthAlgebra::lukasiewicz(*size),
        AlgebraSpec::Goedel { size } => TruthAlgebra::goedel(*size),
        AlgebraSpec::Table {
            carrier,
            order,
            otimes,
            residuum,
        } => TruthAlgebra::from_tables(carrier.clone(), order, otimes, residuum),
    }
}

fn algebra_spec(alg: &TruthAlgebra) -> AlgebraSpec {
    match alg.kind() {
        AlgebraKind::Lukasiewicz { size } => AlgebraSpec::Lukasiewicz { size: *size },
        AlgebraKind::Goedel { size } => AlgebraSpec::Goedel { size: *size },
        AlgebraKind::Table => {
            let mut order = Vec::new();
            for a in alg.values() {
                for b in alg.values() {
                    if alg.leq(a, b) {
                        order.push((alg.name(a).to_string(), alg.name(b).to_string()));
                    }
                }
            }
            AlgebraSpec::Table {
                carrier: alg.names().to_vec(),
                order,
                otimes: op_table(alg, |a, b| alg.product(a, b)),
                residuum: op_table(alg, |a, b| alg.residuum(a, b)),
            }
        }
    }
}

/// Renders a binary operation as a full table of canonical names.
fn op_table(
    alg: &TruthAlgebra,
    f: impl Fn(TruthValue, TruthValue) -> TruthValue,
) -> Vec<Vec<String>> {
    alg.values()
        .map(|a| {
            alg.values()
                .map(|b| alg.name(f(a, b)).to_string())
                .collect()
        })
        .collect()
}

fn pointer_err(pointer: &str, message: &str) -> Error {
    Error::FrameFile {
        pointer: pointer.to_string(),
        message: message.to_string(),
    }
}

/// Parses a square node matrix of value names.
fn parse_matrix(
    algebra: &Arc<TruthAlgebra>,
    nodes: &IndexSet,
    rows: &[Vec<String>],
    pointer: &str,
) -> Result<ARelation, Error> {
    let n = nodes.len();
    if rows.len() != n {
        return Err(pointer_err(
            pointer,
            &format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    let mut values = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(pointer_err(
                &format!("{pointer}/{i}"),
                &format!("expected {n} columns, found {}", row.len()),
            ));
        }
        for (j, cell) in row.iter().enumerate() {
            let v = algebra
                .parse_value(cell)
                .map_err(|e| pointer_err(&format!("{pointer}/{i}/{j}"), &e.to_string()))?;
            values.push(v);
        }
    }
    ARelation::new(algebra.clone(), nodes.clone(), nodes.clone(), values)
}

/// Parses one valuation table (carrier rows × node columns) into an extent
/// over the frame's pair side. Pair order is carrier-major, so the
/// flattened table is already in pair order.
fn parse_valuation(
    frame: &Arc<GraphFrame>,
    rows: &[Vec<String>],
    pointer: &str,
) -> Result<AValuedSet, Error> {
    let alg = frame.algebra();
    let n = frame.nodes().len();
    if rows.len() != alg.len() {
        return Err(pointer_err(
            pointer,
            &format!("expected {} rows, found {}", alg.len(), rows.len()),
        ));
    }
    let mut values = Vec::with_capacity(alg.len() * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(pointer_err(
                &format!("{pointer}/{i}"),
                &format!("expected {n} columns, found {}", row.len()),
            ));
        }
        for (j, cell) in row.iter().enumerate() {
            let v = alg
                .parse_value(cell)
                .map_err(|e| pointer_err(&format!("{pointer}/{i}/{j}"), &e.to_string()))?;
            values.push(v);
        }
    }
    AValuedSet::new(alg.clone(), frame.graph().pairs().clone(), values)
}

/// Renders a relation as rows of canonical value names.
fn matrix_strings(alg: &TruthAlgebra, r: &ARelation) -> Vec<Vec<String>> {
    (0..r.domain().len())
        .map(|i| {
            (0..r.codomain().len())
                .map(|j| alg.name(r.get(i, j)).to_string())
                .collect()
        })
        .collect()
}
