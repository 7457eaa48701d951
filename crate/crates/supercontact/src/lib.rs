//! Exact symbolic calculus on the superline with two odd variables.
//!
//! The crate implements, over exact rational arithmetic:
//!
//! * Grassmann-polynomial superfunctions in one even variable `x` and two
//!   odd variables `t1`, `t2`, with the odd derivations `d/dt_i` and
//!   `eta_i = d/dt_i - t_i d/dx` ([`superfield`]);
//! * contact vector fields `X_F`, the contact bracket, the eight-generator
//!   orthosymplectic basis, and weighted density modules ([`contact`]);
//! * normal-form differential operators between density modules, their
//!   composition, the module action of contact fields, and the splitting
//!   isomorphisms between the two-theta and one-theta pictures ([`diffop`]);
//! * the Chevalley-Eilenberg differential in degrees 0 and 1, absolute and
//!   relative cocycle tests, exact coboundary solving with machine-checkable
//!   nontriviality certificates, and truncated first-cohomology dimension
//!   reports ([`cohomology`]);
//! * constructors for the distinguished cocycle families and the relative
//!   coboundary generators ([`catalog`]);
//! * exact classification of invariant bilinear differential operators
//!   ([`invariant`]);
//! * the verification suite used by the CLI and the acceptance tests
//!   ([`verify`]).
//!
//! All values are immutable and all operations are pure functions, so the
//! whole API is safe to drive from multiple threads.

pub mod catalog;
pub mod cohomology;
pub mod contact;
pub mod corpus;
pub mod diffop;
pub mod invariant;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod superfield;
pub mod verify;

pub use catalog::{
    make, relative_coboundary_generators, CatalogEntry, CatalogName, ClaimedStatus,
};
pub use cohomology::{
    cochain2_pairs, cochain_basis, coboundary_solve, certify_span, cocycle_check,
    default_truncation, delta0, delta1, h1_dimension, invariant_module_elements, is_cocycle,
    is_relative_cochain, CoboundaryOutcome, Cochain1, Cochain2, CocycleCheck, EquationCoord,
    H1Report, NontrivialityCertificate, SpanOutcome, Truncation,
};
pub use contact::{
    basis_of, contact_bracket, expand_in_basis, field_apply, structure_constants,
    weighted_action, Algebra, ContactField, Density, GeneratorId, HBasisElement, HKind,
    StructureConstants, Variables,
};
pub use invariant::{
    check_closed_form, classify, closed_form, constraint_polynomial, scan_constraint_variety,
    BilinearOp, BilinearTerm, ClassificationResult, FWord, HWord, MuRule, VarietyCell,
};
pub use diffop::{
    from_action, lie_derivative, module_action, op_apply, op_apply_density, op_compose,
    phi_join, phi_split, pi_twist, psi_components, psi_transport, weight_of, OpKey,
    ParityShiftTag, SuperDiffOp,
};
pub use corpus::{corpus_rng, random_homogeneous, random_mixed, random_operator, random_scalar};
pub use poly::Poly;
pub use scalar::Scalar;
pub use verify::{run_all, CaseResult, VerificationReport};
pub use superfield::{eta_bar, parity_of, partial_theta, partial_x, sf_mul, Parity, SuperFunction};

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A parity-sensitive operation received a mixed-parity input.
    #[error("mixed-parity input where a homogeneous element is required: {0}")]
    MixedParity(String),
    /// Source/target density weights do not line up.
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    /// A one-theta value was required but a two-theta value was supplied,
    /// or vice versa.
    #[error("variable-set violation: {0}")]
    VariableMismatch(String),
    /// A bracket left the span of the requested generator basis.
    #[error("bracket leaves the generator span: {0}")]
    SpanEscape(String),
    /// A constructor parameter is outside its documented validity range.
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    /// The operator has x-dependent coefficients where constants are required.
    #[error("x-dependent coefficients: {0}")]
    XDependence(String),
    /// The operator is not an eigenvector of the Euler weight grading.
    #[error("weight-inhomogeneous operator: {0}")]
    WeightInhomogeneous(String),
    /// The requested source space is not stable under the requested algebra.
    #[error("source space not stable under the algebra: {0}")]
    UnstableSource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
