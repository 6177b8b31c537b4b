//! Exact arithmetic: Laurent polynomials over Q, matrices over them, and
//! Smith normal form over the Laurent ring.

mod laurent;
mod matrix;
mod smith;

pub use laurent::{parse_rational, LaurentPoly, Rational};
pub use matrix::{PolyMatrix, QMatrix};
pub use smith::{
    express_in_basis, invariant_factors, kernel_basis, minors_gcd, module_invariants, rank,
    smith_normal_form, Kernel, ModuleInvariants, SmithForm,
};
