//! Twisted Alexander modules and polynomials of links in the 3-sphere.
//!
//! The pipeline runs diagram (PD code) -> Wirtinger presentation -> Fox
//! calculus under a representation tensored with the abelianization ->
//! Smith normal form over `Q[t, t^-1]`. On top of that sit the family-level
//! audits (unknot, Hopf link, trefoil/figure-8, split and trivial links) and
//! the search for permutation representations that feeds them.

pub mod algebra;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod fox;
pub mod invariants;
pub mod reps;

pub use algebra::{LaurentPoly, PolyMatrix, QMatrix, Rational};
pub use diagram::{parse_pd, LinkDiagram};
pub use error::{AlgebraError, DiagramError, InvariantError, RepError};
pub use fox::{FreeWord, GroupPresentation};
pub use invariants::{report, InvariantReport};
pub use reps::{MatrixRep, PermAssignment};
