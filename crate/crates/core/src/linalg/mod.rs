//! Exact linear algebra over the integers and over `Z/m`.
//!
//! Integer work (Smith normal form, kernels, integral solving) runs on
//! arbitrary-precision integers. Modular work splits the modulus into prime
//! powers and runs a canonical echelon form over each local ring `Z/p^k`.

mod abelian;
mod matrix;
mod modular;
mod smith;

pub use abelian::FinAbGroup;
pub use matrix::IntMatrix;
pub(crate) use modular::{factorize, kernel_dense, kernel_rows};
pub use modular::{
    howell_form, kernel_mod, solve_mod, span_contains, subquotient, subquotient_invariants, ModSpan, Subquotient,
};
pub use smith::{abelian_invariants, int_kernel, int_solve, lattice_quotient, smith_normal_form, Smith};
