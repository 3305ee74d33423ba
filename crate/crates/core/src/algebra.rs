//! Finite residuated truth-value algebras.
//!
//! An algebra here is a finite lattice with top `1` and bottom `0`, a
//! commutative associative product `⊗` with unit `1`, and a residuum `→`
//! adjoint to it: `a ⊗ b ≤ c` iff `a ≤ b → c`. All operations are stored as
//! lookup tables over carrier indices, so every computation is exact integer
//! arithmetic.
//!
//! Chain constructors are provided for the Łukasiewicz and Gödel families;
//! arbitrary finite algebras can be built from explicit tables, which are
//! exhaustively checked against the laws before the algebra is accepted.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// An element of a [`TruthAlgebra`], identified by its carrier index.
///
/// Values are plain indices; all structure (order, operations, printing)
/// lives in the algebra. On chain algebras the index is the numerator of the
/// element `k/d`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TruthValue(pub(crate) u32);

impl TruthValue {
    /// Carrier index of this value.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// How an algebra was constructed. Printing and serialization use this;
/// equality of algebras does not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Łukasiewicz chain with `size` elements `0/d .. d/d`, `d = size - 1`.
    Lukasiewicz { size: usize },
    /// Gödel chain with `size` elements `0/d .. d/d`, `d = size - 1`.
    Goedel { size: usize },
    /// Built from explicit tables.
    Table,
}

/// A finite residuated lattice of truth values.
///
/// Construct via [`TruthAlgebra::lukasiewicz`], [`TruthAlgebra::goedel`], or
/// [`TruthAlgebra::from_tables`]; algebras are shared behind [`Arc`] because
/// every set, relation, and frame keeps a handle to its algebra.
pub struct TruthAlgebra {
    kind: AlgebraKind,
    names: Vec<String>,
    n: usize,
    leq: Vec<bool>,
    meets: Vec<u32>,
    joins: Vec<u32>,
    products: Vec<u32>,
    residua: Vec<u32>,
    bottom: u32,
    top: u32,
}

impl PartialEq for TruthAlgebra {
    /// Structural equality: same carrier names, order, and operation tables.
    /// The construction kind is deliberately ignored, so a table copy of a
    /// chain compares equal to the chain.
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
            && self.leq == other.leq
            && self.products == other.products
            && self.residua == other.residua
    }
}

impl Eq for TruthAlgebra {}

impl fmt::Debug for TruthAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthAlgebra({:?}, {} elements)", self.kind, self.n)
    }
}

/// Returns true when two algebra handles denote the same algebra, comparing
/// cheaply by pointer first and structurally otherwise.
pub fn same_algebra(a: &Arc<TruthAlgebra>, b: &Arc<TruthAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl TruthAlgebra {
    // ----- constructors -----

    /// The Łukasiewicz chain with `n ≥ 2` elements: carrier `{0, 1/d, ..., 1}`
    /// with `d = n - 1`, `a ⊗ b = max(0, a + b - 1)`, `a → b = min(1, 1 - a + b)`.
    pub fn lukasiewicz(n: usize) -> Result<Arc<Self>, Error> {
        Self::chain(n, AlgebraKind::Lukasiewicz { size: n })
    }

    /// The Gödel chain with `n ≥ 2` elements: `a ⊗ b = min(a, b)`,
    /// `a → b = 1` if `a ≤ b` else `b`.
    pub fn goedel(n: usize) -> Result<Arc<Self>, Error> {
        Self::chain(n, AlgebraKind::Goedel { size: n })
    }

    fn chain(n: usize, kind: AlgebraKind) -> Result<Arc<Self>, Error> {
        if n < 2 {
            return Err(Error::InvalidAlgebraSize { size: n });
        }
        let d = n - 1;
        let names = (0..n).map(|k| chain_element_name(k, d)).collect();
        let mut alg = TruthAlgebra {
            kind,
            names,
            n,
            leq: vec![false; n * n],
            meets: vec![0; n * n],
            joins: vec![0; n * n],
            products: vec![0; n * n],
            residua: vec![0; n * n],
            bottom: 0,
            top: d as u32,
        };
        for a in 0..n {
            for b in 0..n {
                let i = a * n + b;
                alg.leq[i] = a <= b;
                alg.meets[i] = a.min(b) as u32;
                alg.joins[i] = a.max(b) as u32;
                let (p, r) = match alg.kind {
                    AlgebraKind::Lukasiewicz { .. } => {
                        ((a + b).saturating_sub(d), d.min(d - a + b))
                    }
                    AlgebraKind::Goedel { .. } => (a.min(b), if a <= b { d } else { b }),
                    AlgebraKind::Table => unreachable!(),
                };
                alg.products[i] = p as u32;
                alg.residua[i] = r as u32;
            }
        }
        Ok(Arc::new(alg))
    }

    /// Builds an algebra from explicit data: element names, order generators
    /// (pairs `a ≤ b`, closed reflexively and transitively), and full product
    /// and residuum tables in carrier order.
    ///
    /// The order must form a lattice with a least and greatest element, and
    /// the tables must satisfy every law checked by [`TruthAlgebra::validate`];
    /// otherwise the algebra is rejected with a report naming the first
    /// violated law and a witness.
    pub fn from_tables(
        names: Vec<String>,
        order: &[(String, String)],
        product: &[Vec<String>],
        residuum: &[Vec<String>],
    ) -> Result<Arc<Self>, Error> {
        let n = names.len();
        if n < 2 {
            return Err(Error::InvalidAlgebraSize { size: n });
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::DuplicateLabel {
                    label: name.clone(),
                });
            }
        }
        let position = |name: &str| -> Result<usize, Error> {
            names
                .iter()
                .position(|m| m == name)
                .ok_or_else(|| Error::UnknownElement {
                    name: name.to_string(),
                })
        };

        // Reflexive-transitive closure of the order generators.
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for (a, b) in order {
            leq[position(a)? * n + position(b)?] = true;
        }
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    if leq[a * n + k] && leq[k * n + b] {
                        leq[a * n + b] = true;
                    }
                }
            }
        }

        let reject = |law: &str, witness: String| -> Error {
            Error::AlgebraRejected {
                report: ValidationReport {
                    laws: vec![LawCheck {
                        law: law.to_string(),
                        witness: Some(witness),
                    }],
                },
            }
        };

        for a in 0..n {
            for b in 0..n {
                if a != b && leq[a * n + b] && leq[b * n + a] {
                    return Err(reject(
                        "order is antisymmetric",
                        format!("{} ≤ {} and {} ≤ {}", names[a], names[b], names[b], names[a]),
                    ));
                }
            }
        }

        // Derive meet and join as greatest lower / least upper bounds; the
        // order must give a unique one for every pair.
        let mut meets = vec![0u32; n * n];
        let mut joins = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n)
                    .filter(|&c| leq[c * n + a] && leq[c * n + b])
                    .collect();
                match lower.iter().find(|&&c| lower.iter().all(|&d| leq[d * n + c])) {
                    Some(&c) => meets[a * n + b] = c as u32,
                    None => {
                        return Err(reject(
                            "every pair has a meet",
                            format!("({}, {})", names[a], names[b]),
                        ))
                    }
                }
                let upper: Vec<usize> = (0..n)
                    .filter(|&c| leq[a * n + c] && leq[b * n + c])
                    .collect();
                match upper.iter().find(|&&c| upper.iter().all(|&d| leq[c * n + d])) {
                    Some(&c) => joins[a * n + b] = c as u32,
                    None => {
                        return Err(reject(
                            "every pair has a join",
                            format!("({}, {})", names[a], names[b]),
                        ))
                    }
                }
            }
        }
        let bottom = (0..n).find(|&a| (0..n).all(|b| leq[a * n + b]));
        let top = (0..n).find(|&a| (0..n).all(|b| leq[b * n + a]));
        let (bottom, top) = match (bottom, top) {
            (Some(b), Some(t)) => (b as u32, t as u32),
            _ => {
                return Err(reject(
                    "the order has a least and a greatest element",
                    "none found".to_string(),
                ))
            }
        };

        let parse_table = |table: &[Vec<String>], what: &str| -> Result<Vec<u32>, Error> {
            if table.len() != n || table.iter().any(|row| row.len() != n) {
                return Err(Error::ShapeMismatch {
                    context: format!("{what} table must be {n}×{n}"),
                });
            }
            let mut out = Vec::with_capacity(n * n);
            for row in table {
                for cell in row {
                    out.push(position(cell)? as u32);
                }
            }
            Ok(out)
        };
        let products = parse_table(product, "product")?;
        let residua = parse_table(residuum, "residuum")?;

        let alg = TruthAlgebra {
            kind: AlgebraKind::Table,
            names,
            n,
            leq,
            meets,
            joins,
            products,
            residua,
            bottom,
            top,
        };
        let report = alg.validate();
        if report.passed() {
            Ok(Arc::new(alg))
        } else {
            Err(Error::AlgebraRejected { report })
        }
    }

    // ----- basic accessors -----

    /// Number of carrier elements.
    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: algebras have at least two elements.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// How this algebra was constructed.
    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    /// All carrier elements in ascending index order.
    pub fn values(&self) -> impl ExactSizeIterator<Item = TruthValue> {
        (0..self.n as u32).map(TruthValue)
    }

    /// The element with the given carrier index.
    pub fn value(&self, index: usize) -> Result<TruthValue, Error> {
        if index < self.n {
            Ok(TruthValue(index as u32))
        } else {
            Err(Error::ValueOutOfRange {
                index,
                carrier: self.n,
            })
        }
    }

    /// Least element.
    pub fn bottom(&self) -> TruthValue {
        TruthValue(self.bottom)
    }

    /// Greatest element (also the product unit).
    pub fn top(&self) -> TruthValue {
        TruthValue(self.top)
    }

    /// Canonical printed name of an element.
    pub fn name(&self, v: TruthValue) -> &str {
        &self.names[v.index()]
    }

    /// All canonical element names in carrier order.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Resolves a string to an element. Canonical names always match; on
    /// chain algebras any exact rational spelling of an element also matches
    /// (`"0.5"`, `"1/2"`, `"5/10"`, `"1"` all denote the same element of a
    /// chain whose denominator admits them).
    pub fn parse_value(&self, s: &str) -> Result<TruthValue, Error> {
        if let Some(ix) = self.names.iter().position(|name| name == s) {
            return Ok(TruthValue(ix as u32));
        }
        let d = match self.kind {
            AlgebraKind::Lukasiewicz { size } | AlgebraKind::Goedel { size } => size - 1,
            AlgebraKind::Table => {
                return Err(Error::UnknownElement { name: s.to_string() })
            }
        };
        // Exact rational parse: "k/m" or a decimal string, no floats.
        let rational: Option<(u64, u64)> = if let Some((num, den)) = s.split_once('/') {
            match (num.parse::<u64>(), den.parse::<u64>()) {
                (Ok(num), Ok(den)) if den > 0 => Some((num, den)),
                _ => None,
            }
        } else if let Some((whole, frac)) = s.split_once('.') {
            let digits_ok = !frac.is_empty()
                && frac.len() <= 9
                && frac.bytes().all(|b| b.is_ascii_digit());
            match (whole.parse::<u64>(), digits_ok) {
                (Ok(w), true) => {
                    let den = 10u64.pow(frac.len() as u32);
                    let num = w * den + frac.parse::<u64>().unwrap();
                    Some((num, den))
                }
                _ => None,
            }
        } else {
            s.parse::<u64>().ok().map(|w| (w, 1))
        };
        match rational {
            // k/d == num/den  iff  num·d is divisible by den with quotient k ≤ d.
            Some((num, den)) if (num * d as u64).is_multiple_of(den) => {
                let k = (num * d as u64) / den;
                if k <= d as u64 {
                    Ok(TruthValue(k as u32))
                } else {
                    Err(Error::UnknownElement { name: s.to_string() })
                }
            }
            _ => Err(Error::UnknownElement { name: s.to_string() }),
        }
    }

    fn check(&self, v: TruthValue) -> Result<(), Error> {
        if v.index() < self.n {
            Ok(())
        } else {
            Err(Error::ValueOutOfRange {
                index: v.index(),
                carrier: self.n,
            })
        }
    }

    // ----- operations -----
    //
    // The binary operations index straight into the tables and panic on a
    // value from a larger algebra; sets and relations validate their values
    // once at construction, and the fallible entry points below are the
    // checked surface for raw values.

    /// Lattice order.
    pub fn leq(&self, a: TruthValue, b: TruthValue) -> bool {
        self.leq[a.index() * self.n + b.index()]
    }

    /// Lattice meet.
    pub fn meet(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        TruthValue(self.meets[a.index() * self.n + b.index()])
    }

    /// Lattice join.
    pub fn join(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        TruthValue(self.joins[a.index() * self.n + b.index()])
    }

    /// Monoidal product `⊗`.
    pub fn product(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        TruthValue(self.products[a.index() * self.n + b.index()])
    }

    /// Residuum `→`, right adjoint to the product.
    pub fn residuum(&self, a: TruthValue, b: TruthValue) -> TruthValue {
        TruthValue(self.residua[a.index() * self.n + b.index()])
    }

    /// Meet of arbitrarily many values; the empty meet is the top element.
    /// Rejects values whose index lies outside this algebra's carrier.
    pub fn big_meet<I>(&self, values: I) -> Result<TruthValue, Error>
    where
        I: IntoIterator<Item = TruthValue>,
    {
        let mut acc = self.top();
        for v in values {
            self.check(v)?;
            acc = self.meet(acc, v);
        }
        Ok(acc)
    }

    /// Join of arbitrarily many values; the empty join is the bottom element.
    /// Rejects values whose index lies outside this algebra's carrier.
    pub fn big_join<I>(&self, values: I) -> Result<TruthValue, Error>
    where
        I: IntoIterator<Item = TruthValue>,
    {
        let mut acc = self.bottom();
        for v in values {
            self.check(v)?;
            acc = self.join(acc, v);
        }
        Ok(acc)
    }

    // ----- validation -----

    /// Exhaustively checks every residuated-lattice law over the whole
    /// carrier and reports each law with pass/fail and, on failure, a
    /// witness tuple. [`TruthAlgebra::from_tables`] rejects any algebra whose
    /// report does not pass; the chain constructors are covered by tests.
    pub fn validate(&self) -> ValidationReport {
        let n = self.n;
        let name = |v: TruthValue| self.name(v).to_string();
        let vals: Vec<TruthValue> = self.values().collect();
        let mut laws = Vec::new();
        let mut law = |label: &str, witness: Option<String>| {
            laws.push(LawCheck {
                law: label.to_string(),
                witness,
            });
        };

        // Find the first witness violating a binary law.
        let first2 = |pred: &dyn Fn(TruthValue, TruthValue) -> bool| -> Option<String> {
            for &a in &vals {
                for &b in &vals {
                    if !pred(a, b) {
                        return Some(format!("(a, b) = ({}, {})", name(a), name(b)));
                    }
                }
            }
            None
        };
        let first3 = |pred: &dyn Fn(TruthValue, TruthValue, TruthValue) -> bool| -> Option<String> {
            for &a in &vals {
                for &b in &vals {
                    for &c in &vals {
                        if !pred(a, b, c) {
                            return Some(format!(
                                "(a, b, c) = ({}, {}, {})",
                                name(a),
                                name(b),
                                name(c)
                            ));
                        }
                    }
                }
            }
            None
        };
        let first1 = |pred: &dyn Fn(TruthValue) -> bool| -> Option<String> {
            vals.iter()
                .find(|&&a| !pred(a))
                .map(|&a| format!("a = {}", name(a)))
        };

        law(
            "order is reflexive",
            first1(&|a| self.leq(a, a)),
        );
        law(
            "order is transitive",
            first3(&|a, b, c| !(self.leq(a, b) && self.leq(b, c)) || self.leq(a, c)),
        );
        law(
            "order is antisymmetric",
            first2(&|a, b| !(self.leq(a, b) && self.leq(b, a)) || a == b),
        );
        law(
            "meet is the greatest lower bound",
            first3(&|a, b, c| {
                let m = self.meet(a, b);
                self.leq(m, a)
                    && self.leq(m, b)
                    && (!(self.leq(c, a) && self.leq(c, b)) || self.leq(c, m))
            }),
        );
        law(
            "join is the least upper bound",
            first3(&|a, b, c| {
                let j = self.join(a, b);
                self.leq(a, j)
                    && self.leq(b, j)
                    && (!(self.leq(a, c) && self.leq(b, c)) || self.leq(j, c))
            }),
        );
        law(
            "bottom is least",
            first1(&|a| self.leq(self.bottom(), a)),
        );
        law(
            "top is greatest",
            first1(&|a| self.leq(a, self.top())),
        );
        law(
            "product is commutative",
            first2(&|a, b| self.product(a, b) == self.product(b, a)),
        );
        law(
            "product is associative",
            first3(&|a, b, c| {
                self.product(self.product(a, b), c) == self.product(a, self.product(b, c))
            }),
        );
        law(
            "top is the product unit",
            first1(&|a| self.product(self.top(), a) == a),
        );
        law(
            "residuum from top is identity",
            first1(&|a| self.residuum(self.top(), a) == a),
        );
        law(
            "residuation: a ⊗ b ≤ c iff a ≤ b → c",
            first3(&|a, b, c| {
                self.leq(self.product(a, b), c) == self.leq(a, self.residuum(b, c))
            }),
        );
        law(
            "product distributes over join",
            first3(&|a, b, c| {
                self.product(a, self.join(b, c))
                    == self.join(self.product(a, b), self.product(a, c))
            }),
        );
        law(
            "product with bottom is bottom",
            first1(&|a| self.product(a, self.bottom()) == self.bottom()),
        );
        law(
            "residuum turns joins in the first argument into meets",
            first3(&|a, b, c| {
                self.residuum(self.join(a, b), c)
                    == self.meet(self.residuum(a, c), self.residuum(b, c))
            }),
        );
        law(
            "residuum preserves meets in the second argument",
            first3(&|a, b, c| {
                self.residuum(c, self.meet(a, b))
                    == self.meet(self.residuum(c, a), self.residuum(c, b))
            }),
        );
        law(
            "residuum from bottom is top",
            first1(&|a| self.residuum(self.bottom(), a) == self.top()),
        );
        law(
            "residuum into top is top",
            first1(&|a| self.residuum(a, self.top()) == self.top()),
        );

        let _ = n;
        ValidationReport { laws }
    }
}

/// Canonical chain element names: one decimal digit for denominator 10
/// (`0.0 .. 1.0`), otherwise explicit fractions `k/d`.
fn chain_element_name(k: usize, d: usize) -> String {
    if d == 10 {
        format!("{}.{}", k / 10, k % 10)
    } else {
        format!("{k}/{d}")
    }
}

/// One checked law: its description and, when violated, a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    /// `None` when the law holds.
    pub witness: Option<String>,
}

/// Outcome of validating an algebra against the residuated-lattice laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub laws: Vec<LawCheck>,
}

impl ValidationReport {
    /// True when every law holds.
    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.witness.is_none())
    }

    /// The violated laws, in check order.
    pub fn failures(&self) -> impl Iterator<Item = &LawCheck> {
        self.laws.iter().filter(|l| l.witness.is_some())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut failures = self.failures().peekable();
        if failures.peek().is_none() {
            return write!(f, "all {} laws hold", self.laws.len());
        }
        let parts: Vec<String> = failures
            .map(|l| format!("law `{}` fails at {}", l.law, l.witness.as_deref().unwrap_or("")))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}
