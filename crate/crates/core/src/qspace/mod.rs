//! Diagonal quadratic forms over multiquadratic fields.

mod form;
mod matrix;

pub use form::{
    diagonalize, globally_isometric, is_admissible, transfer, transfer_generator, FormInvariants,
    FormJson, QuadraticForm,
};
pub use matrix::{congruence_diagonal, row_rank, Matrix};

#[cfg(test)]
mod tests;
