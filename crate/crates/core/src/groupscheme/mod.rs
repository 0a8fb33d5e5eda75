//! Tensor powers of bracket extensions, their constants, and the finite
//! bialgebras found among them.

pub mod bialgebra;
pub mod recognize;
pub mod tensor;

pub use bialgebra::{alpha_frobenius_kernel, check_bialgebra, group_algebra_z2, height, BialgebraData, BialgebraReport};
pub use recognize::{recognize_power_sums, Recognition};
pub use tensor::{check_primitive, constants_search, Constants, Primitivity, Tensor, TensorSpace};
