//! Exact verification toolkit for conditional Ingleton inequalities on four
//! binary random variables `X, Y, Z, U`.
//!
//! The crate is organized bottom-up:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`vars`] | variables, subsets of `{X,Y,Z,U}` as 4-bit masks, atom indexing |
//! | [`dist`] | exact rational joint tables, marginals, the reference distribution |
//! | [`entropy`] | entropy vectors, linear functionals, exact sign certificates |
//! | [`ci`] | the 24 elementary CI statements, exact CI testing by minors |
//! | [`ingleton`] | Ingleton functionals, mask identities, circuit enumeration |
//! | [`model`] | the support-constrained parametrization, rational point search, scores |
//! | [`essential`] | ε-curve families, log-linear power series, essential conditionality |
//! | [`inference`] | antecedent databases, symmetry orbits, lattice coverage scans |
//!
//! All exact arithmetic runs on arbitrary-precision integers; floats only
//! appear in entropy evaluation, the heatmap and the local optimizer.

pub mod ci;
pub mod dist;
pub mod entropy;
pub mod error;
pub mod essential;
pub mod inference;
pub mod ingleton;
pub mod model;
pub mod vars;

pub use ci::{ci_structure, enumerate_elementary, holds_exact, CIStatement, CIStructure};
pub use dist::{paper_example, JointTable, MarginalTable, Rational};
pub use entropy::{entropy_vector, exact_sign, is_polymatroid, EntropyVector, LinFunctional, SignCertificate};
pub use error::{Error, Result};
pub use vars::{Subset, Var};
