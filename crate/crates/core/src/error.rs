use thiserror::Error;

/// Every way a construction or check can be refused.
///
/// Mathematical *failures* (a counterexample to a checked property) are not
/// errors; they are reported as `Fail` outcomes in the relevant report type.
/// Errors mean the input did not satisfy a precondition, a cap was hit, or
/// an internal invariant that valid input cannot break was violated.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("antisymmetry violation: {0} <= {1} and {1} <= {0} but {0} != {1}")]
    AntisymmetryViolation(String, String),
    #[error("transitivity violation: {0} <= {1} <= {2} but not {0} <= {2}")]
    TransitivityViolation(String, String, String),
    #[error("monotonicity violation: {0} <= {1} but f({0}) <= f({1}) fails")]
    MonotonicityViolation(String, String),
    #[error("poset has no bottom element")]
    NoBottom,
    #[error("poset has no top element")]
    NoTop,
    #[error("no maximum element in {0}")]
    NoMaximum(String),
    #[error("not a complete lattice: subset {{{0}}} has no join")]
    NotACompleteLattice(String),
    #[error("monoid unit is not the bottom of its carrier")]
    UnitNotBottom,
    #[error("monoid law violation: {0}")]
    MonoidLawViolation(String),
    #[error("map is not strict: maps bottom {0} to non-bottom {1}")]
    NotStrict(String, String),
    #[error("square does not commute at {0}: g(h(x)) = {1} but h(f(x)) = {2}")]
    SquareDoesNotCommute(String, String, String),
    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: String,
        needed: u128,
        cap: u128,
    },
    #[error("map is not a monomorphism: {0} and {1} collide at {2}")]
    NotMono(String, String, String),
    #[error("map is not an isomorphism")]
    NotIso,
    #[error("diagram is not functorial: edge {i}->{k} disagrees with composite via {j}")]
    NotFunctorial { i: String, j: String, k: String },
    #[error("index or family is not directed: {0} and {1} have no upper bound inside it")]
    NotDirected(String, String),
    #[error("empty family or diagram where a directed (hence nonempty) one is required")]
    EmptyDiagram,
    #[error("functor law violation: {0}")]
    LawViolation(String),
    #[error("functor specs do not match")]
    FunctorMismatch,
    #[error("structure map has wrong domain or codomain: {0}")]
    StructureMismatch(String),
    #[error("coalgebra is not well-founded: cycle {0:?}")]
    NotWellFounded(Vec<String>),
    #[error("edge {edge} is not a coalgebra homomorphism at {at}")]
    NotHomomorphism { edge: String, at: String },
    #[error("chain did not converge within budget")]
    NotConverged,
    #[error("cocone does not commute with the diagram at edge {0}")]
    NotACocone(String),
    #[error("enrichment equation fails: {0}")]
    EnrichmentViolation(String),
    #[error("functor is not locally monotone: {0}")]
    NotLocallyMonotone(String),
    #[error("subset {0} is not an embedding-subobject (no greatest member below {1})")]
    NotEmbeddingSubobject(String, String),
    #[error("map is not non-expanding: d({0},{1}) grows from {2} to {3}")]
    NotNonExpanding(String, String, String, String),
    #[error("metric axiom fails: {0}")]
    NotAMetric(String),
    #[error("certificate does not match inputs: {0}")]
    HashMismatch(String),
    #[error("malformed instance: {0}")]
    Schema(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),
}

impl Error {
    /// Exit-code classification used by the CLI: cap/budget exhaustion is
    /// `Unknown` (2), malformed input is an input error (3).
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::NotConverged)
    }
}
