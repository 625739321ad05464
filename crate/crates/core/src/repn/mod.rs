//! Series taxonomy, truncated Lie-algebra generators, representation
//! matrices along flow paths, Gram forms, the circle-evaluation oracle and
//! the reducible sum `D⁻_{2−λ} ⊕ D⁺_λ`.
//!
//! Matrices are written in the monomial basis `f_n(z) = zⁿ` (or `g_n` for
//! the reducible sum); column `n` is the image of `f_n`.

mod generators;
mod oracle;
mod params;

pub use generators::{
    generator_matrix, gram, reducible_generator_matrix, reducible_gram, reducible_rep_matrix, rep_matrix,
    rep_matrix_sharp, unitarity_defect, LieElement, RepModel,
};
pub use oracle::{circle_rep_matrix, circle_rep_oracle, default_grid_size, CoefficientVector};
pub use params::{classify_series, RepnParams, SeriesTag, SERIES_TOL};
