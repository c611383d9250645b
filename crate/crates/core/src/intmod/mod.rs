//! Exact linear algebra over Z and Z/n and finitely presented modules.

mod homsys;
mod matrix;
mod module;
mod ring;
mod snf;
mod solve;

pub use homsys::{HomSystem, PreparedSystem, SystemBuilder, Term, TermSpec};
pub use matrix::Matrix;
pub use module::{
    describe_factors, hom_cokernel, hom_from_columns, hom_image, hom_kernel, sum_injection, sum_projection,
    FpModule, ModuleHom,
};
pub use ring::{ext_gcd, mod_inverse, BaseRing, Int};
pub use snf::{smith_normal_form, verify_snf, Snf};
pub use solve::{solve_linear, LinearSolver};
