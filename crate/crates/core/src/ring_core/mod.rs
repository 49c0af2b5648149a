//! Exact linear algebra over the supported principal ideal domains.

mod exact;
mod matrix;
mod normal_form;
mod ring;

pub use exact::{check_short_exact, check_split_short_exact, SesDefect};
pub use matrix::Matrix;
pub use normal_form::{
    determinant, hermite_column_basis, inverse, is_injective, is_invertible, is_surjective, kernel_basis, rank,
    smith_normal_form, solve, solve_with, span_contains, split_surjection, LinearError, SmithForm,
};
pub use ring::{is_prime, Integers, PrimeField, Rationals, Ring, RingDescriptor, RingError};
