//! Polarities, the Galois connection they induce, formal concepts, and
//! enriched polarities carrying modal relations.
//!
//! A polarity is a relation `I` between objects and attributes valued in a
//! truth algebra. It induces an antitone Galois connection between sets over
//! the two sides: `up` sends object sets to attribute sets and `down` sends
//! attribute sets back. A formal concept is a Galois-stable pair
//! (extent, intent); concepts form a complete lattice.
//!
//! An [`EnrichedPolarity`] adds a box relation `R_□` (objects × attributes)
//! and a diamond relation `R_◇` (attributes × objects). The pair is
//! *compatible* with the polarity when the liftings of all point singletons
//! along both relations are Galois-stable; compatibility is exactly what
//! makes the derived box and diamond operators land on concepts.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{same_algebra, TruthAlgebra, TruthValue};
use crate::error::Error;
use crate::mvset::{ARelation, AValuedSet, IndexSet};

/// A polarity: objects, attributes, and an incidence relation between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct APolarity {
    incidence: ARelation,
}

impl APolarity {
    /// Wraps an incidence relation; its domain becomes the object side and
    /// its codomain the attribute side.
    pub fn new(incidence: ARelation) -> Self {
        APolarity { incidence }
    }

    pub fn algebra(&self) -> &Arc<TruthAlgebra> {
        self.incidence.algebra()
    }

    pub fn objects(&self) -> &IndexSet {
        self.incidence.domain()
    }

    pub fn attributes(&self) -> &IndexSet {
        self.incidence.codomain()
    }

    pub fn incidence(&self) -> &ARelation {
        &self.incidence
    }

    /// Galois map from object sets to attribute sets:
    /// `f↑(x) = ⋀_a (f(a) → I(a, x))`.
    pub fn up(&self, f: &AValuedSet) -> Result<AValuedSet, Error> {
        self.incidence.lift_to_codomain(f)
    }

    /// Galois map from attribute sets to object sets:
    /// `u↓(a) = ⋀_x (u(x) → I(a, x))`.
    pub fn down(&self, u: &AValuedSet) -> Result<AValuedSet, Error> {
        self.incidence.lift_to_domain(u)
    }

    /// Closure on the object side: `down(up(f))`.
    pub fn close_extent(&self, f: &AValuedSet) -> Result<AValuedSet, Error> {
        self.down(&self.up(f)?)
    }

    /// Closure on the attribute side: `up(down(u))`.
    pub fn close_intent(&self, u: &AValuedSet) -> Result<AValuedSet, Error> {
        self.up(&self.down(u)?)
    }

    /// Whether an object set equals its closure.
    pub fn is_stable_extent(&self, f: &AValuedSet) -> Result<bool, Error> {
        Ok(self.close_extent(f)? == *f)
    }

    /// Whether an attribute set equals its closure.
    pub fn is_stable_intent(&self, u: &AValuedSet) -> Result<bool, Error> {
        Ok(self.close_intent(u)? == *u)
    }

    /// First position where the closure of an object set differs from the
    /// set, with the set's value and the closure's value there. `None` means
    /// the set is stable.
    pub fn extent_instability_witness(
        &self,
        f: &AValuedSet,
    ) -> Result<Option<(usize, TruthValue, TruthValue)>, Error> {
        let closed = self.close_extent(f)?;
        Ok((0..f.index().len())
            .find(|&i| f.get(i) != closed.get(i))
            .map(|i| (i, f.get(i), closed.get(i))))
    }

    /// Intent-side analogue of [`APolarity::extent_instability_witness`].
    pub fn intent_instability_witness(
        &self,
        u: &AValuedSet,
    ) -> Result<Option<(usize, TruthValue, TruthValue)>, Error> {
        let closed = self.close_intent(u)?;
        Ok((0..u.index().len())
            .find(|&i| u.get(i) != closed.get(i))
            .map(|i| (i, u.get(i), closed.get(i))))
    }

    /// The concept generated by an object set: its extent is the closure of
    /// the set.
    pub fn concept_from_extent(&self, f: &AValuedSet) -> Result<Concept, Error> {
        let intent = self.up(f)?;
        let extent = self.down(&intent)?;
        Ok(Concept { extent, intent })
    }

    /// The concept generated by an attribute set: its intent is the closure
    /// of the set.
    pub fn concept_from_intent(&self, u: &AValuedSet) -> Result<Concept, Error> {
        let extent = self.down(u)?;
        let intent = self.up(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// The greatest concept: full extent.
    pub fn top_concept(&self) -> Concept {
        let full = AValuedSet::constant(
            self.algebra().clone(),
            self.objects().clone(),
            self.algebra().top(),
        )
        .expect("top is in range");
        self.concept_from_extent(&full)
            .expect("sets are over the polarity's own sides")
    }

    /// The least concept: full intent.
    pub fn bottom_concept(&self) -> Concept {
        let full = AValuedSet::constant(
            self.algebra().clone(),
            self.attributes().clone(),
            self.algebra().top(),
        )
        .expect("top is in range");
        self.concept_from_intent(&full)
            .expect("sets are over the polarity's own sides")
    }

    /// Lattice meet of two concepts: extents meet pointwise, the intent is
    /// recomputed. The pointwise meet of stable extents is stable.
    pub fn concept_meet(&self, c: &Concept, d: &Concept) -> Result<Concept, Error> {
        let extent = c.extent.meet(&d.extent)?;
        let intent = self.up(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// Lattice join of two concepts: intents meet pointwise, the extent is
    /// recomputed.
    pub fn concept_join(&self, c: &Concept, d: &Concept) -> Result<Concept, Error> {
        let intent = c.intent.meet(&d.intent)?;
        let extent = self.down(&intent)?;
        Ok(Concept { extent, intent })
    }

    /// Lattice order of two concepts: extent inclusion (equivalently,
    /// reversed intent inclusion).
    pub fn concept_leq(&self, c: &Concept, d: &Concept) -> Result<bool, Error> {
        c.extent.subseteq(&d.extent)
    }

    /// Every concept of the polarity, sorted by extent value vector.
    ///
    /// Enumeration walks all carrier vectors over the smaller side and keeps
    /// the Galois-stable ones, so the number of candidates is
    /// `|carrier|^min(|objects|, |attributes|)`; if that exceeds `budget` an
    /// error is returned instead.
    pub fn enumerate_concepts(&self, budget: u64) -> Result<Vec<Concept>, Error> {
        let n = self.algebra().len();
        let via_intents = self.attributes().len() <= self.objects().len();
        let side = if via_intents {
            self.attributes()
        } else {
            self.objects()
        };
        let needed = (n as u128)
            .checked_pow(side.len() as u32)
            .unwrap_or(u128::MAX);
        if needed > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "concept enumeration",
                needed,
                budget,
            });
        }

        let mut concepts = Vec::new();
        let mut digits = vec![0usize; side.len()];
        loop {
            let candidate = AValuedSet::new(
                self.algebra().clone(),
                side.clone(),
                digits
                    .iter()
                    .map(|&k| self.algebra().value(k))
                    .collect::<Result<_, _>>()?,
            )?;
            if via_intents {
                if self.is_stable_intent(&candidate)? {
                    let extent = self.down(&candidate)?;
                    concepts.push(Concept {
                        extent,
                        intent: candidate,
                    });
                }
            } else if self.is_stable_extent(&candidate)? {
                let intent = self.up(&candidate)?;
                concepts.push(Concept {
                    extent: candidate,
                    intent,
                });
            }

            // Odometer over carrier digits, last position fastest.
            let mut pos = side.len();
            loop {
                if pos == 0 {
                    return Ok(finish_sorted(concepts));
                }
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < n {
                    break;
                }
                digits[pos] = 0;
            }
        }
    }
}

fn finish_sorted(mut concepts: Vec<Concept>) -> Vec<Concept> {
    concepts.sort_by(|c, d| {
        let ck = c.extent.values().iter().map(|v| v.index());
        let dk = d.extent.values().iter().map(|v| v.index());
        ck.cmp(dk)
    });
    concepts
}

/// A formal concept: a Galois-stable (extent, intent) pair.
///
/// Equality compares intents; the extent is determined by the intent within
/// one polarity, and the intent carries its algebra and index set, so this is
/// full structural equality.
#[derive(Clone, Debug)]
pub struct Concept {
    extent: AValuedSet,
    intent: AValuedSet,
}

impl PartialEq for Concept {
    fn eq(&self, other: &Self) -> bool {
        self.intent == other.intent
    }
}

impl Eq for Concept {}

impl Concept {
    /// Object-side component (how much each object belongs).
    pub fn extent(&self) -> &AValuedSet {
        &self.extent
    }

    /// Attribute-side component (how much each attribute describes).
    pub fn intent(&self) -> &AValuedSet {
        &self.intent
    }
}

/// Which singleton-lifting family a compatibility failure belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompatibilityFamily {
    /// Box relation lifted from attribute singletons (an extent must be stable).
    BoxExtent,
    /// Box relation lifted from object singletons (an intent must be stable).
    BoxIntent,
    /// Diamond relation lifted from attribute singletons (an extent must be stable).
    DiaExtent,
    /// Diamond relation lifted from object singletons (an intent must be stable).
    DiaIntent,
}

impl fmt::Display for CompatibilityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CompatibilityFamily::BoxExtent => "box/attribute-singleton (extent)",
            CompatibilityFamily::BoxIntent => "box/object-singleton (intent)",
            CompatibilityFamily::DiaExtent => "diamond/attribute-singleton (extent)",
            CompatibilityFamily::DiaIntent => "diamond/object-singleton (intent)",
        };
        f.write_str(s)
    }
}

/// One unstable singleton lifting: the family, the singleton's value `β` and
/// carrier position, and the cell where the lifting differs from its closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibilityFailure {
    pub family: CompatibilityFamily,
    /// Printed value of the singleton's height β.
    pub beta: String,
    /// Label of the position carrying the singleton.
    pub at: String,
    /// Label of the cell where the lifting is not closed.
    pub cell: String,
    /// Printed lifted value at that cell.
    pub value: String,
    /// Printed closure value at that cell.
    pub closure: String,
}

impl fmt::Display for CompatibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family {} at β = {}, singleton {}: cell {} has value {} but closure {}",
            self.family, self.beta, self.at, self.cell, self.value, self.closure
        )
    }
}

/// Outcome of a compatibility check: empty means compatible.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub failures: Vec<CompatibilityFailure>,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for CompatibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "compatible");
        }
        write!(f, "{} unstable singleton lifting(s); first: {}", self.failures.len(), self.failures[0])
    }
}

/// A polarity together with a compatible pair of modal relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichedPolarity {
    base: APolarity,
    rbox: ARelation,
    rdia: ARelation,
}

impl EnrichedPolarity {
    /// Builds an enriched polarity, rejecting incompatible relations with a
    /// report of every unstable singleton lifting.
    pub fn new(base: APolarity, rbox: ARelation, rdia: ARelation) -> Result<Self, Error> {
        let this = Self::new_unchecked(base, rbox, rdia)?;
        let report = this.check_compatibility()?;
        if report.passed() {
            Ok(this)
        } else {
            Err(Error::Incompatible { report })
        }
    }

    /// Builds an enriched polarity checking only shapes, not compatibility.
    /// The modal operators still compute, but need not land on concepts.
    pub fn new_unchecked(base: APolarity, rbox: ARelation, rdia: ARelation) -> Result<Self, Error> {
        if !same_algebra(base.algebra(), rbox.algebra())
            || !same_algebra(base.algebra(), rdia.algebra())
        {
            return Err(Error::AlgebraMismatch {
                context: "enriched polarity",
            });
        }
        if rbox.domain() != base.objects() || rbox.codomain() != base.attributes() {
            return Err(Error::IndexMismatch {
                context: "box relation must go objects × attributes",
            });
        }
        if rdia.domain() != base.attributes() || rdia.codomain() != base.objects() {
            return Err(Error::IndexMismatch {
                context: "diamond relation must go attributes × objects",
            });
        }
        Ok(EnrichedPolarity { base, rbox, rdia })
    }

    pub fn base(&self) -> &APolarity {
        &self.base
    }

    pub fn rbox(&self) -> &ARelation {
        &self.rbox
    }

    pub fn rdia(&self) -> &ARelation {
        &self.rdia
    }

    /// Checks that the liftings of every point singleton along both relations
    /// are Galois-stable, reporting each failure.
    pub fn check_compatibility(&self) -> Result<CompatibilityReport, Error> {
        let alg = self.base.algebra();
        let objects = self.base.objects();
        let attributes = self.base.attributes();
        let mut failures = Vec::new();

        let mut record = |family: CompatibilityFamily,
                          beta: TruthValue,
                          at: &str,
                          side: &IndexSet,
                          witness: (usize, TruthValue, TruthValue)| {
            failures.push(CompatibilityFailure {
                family,
                beta: alg.name(beta).to_string(),
                at: at.to_string(),
                cell: side.label(witness.0).to_string(),
                value: alg.name(witness.1).to_string(),
                closure: alg.name(witness.2).to_string(),
            });
        };

        for beta in alg.values() {
            for x in 0..attributes.len() {
                let s = AValuedSet::singleton(alg.clone(), attributes.clone(), x, beta)?;
                let f = self.rbox.lift_to_domain(&s)?;
                if let Some(w) = self.base.extent_instability_witness(&f)? {
                    record(CompatibilityFamily::BoxExtent, beta, attributes.label(x), objects, w);
                }
                let g = self.rdia.lift_to_codomain(&s)?;
                if let Some(w) = self.base.extent_instability_witness(&g)? {
                    record(CompatibilityFamily::DiaExtent, beta, attributes.label(x), objects, w);
                }
            }
            for a in 0..objects.len() {
                let s = AValuedSet::singleton(alg.clone(), objects.clone(), a, beta)?;
                let u = self.rbox.lift_to_codomain(&s)?;
                if let Some(w) = self.base.intent_instability_witness(&u)? {
                    record(CompatibilityFamily::BoxIntent, beta, objects.label(a), attributes, w);
                }
                let t = self.rdia.lift_to_domain(&s)?;
                if let Some(w) = self.base.intent_instability_witness(&t)? {
                    record(CompatibilityFamily::DiaIntent, beta, objects.label(a), attributes, w);
                }
            }
        }
        Ok(CompatibilityReport { failures })
    }

    /// The box operator on concepts: the new extent is the box relation's
    /// lifting of the intent, the new intent its Galois image.
    pub fn box_concept(&self, c: &Concept) -> Result<Concept, Error> {
        let extent = self.rbox.lift_to_domain(c.intent())?;
        let intent = self.base.up(&extent)?;
        Ok(Concept { extent, intent })
    }

    /// The diamond operator on concepts: the new intent is the diamond
    /// relation's lifting of the extent, the new extent its Galois image.
    pub fn dia_concept(&self, c: &Concept) -> Result<Concept, Error> {
        let intent = self.rdia.lift_to_domain(c.extent())?;
        let extent = self.base.down(&intent)?;
        Ok(Concept { extent, intent })
    }
}
