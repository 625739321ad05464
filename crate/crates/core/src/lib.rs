//! Finite truncations of the unitary representations of the universal cover
//! of the Möbius group, the homogeneous weighted shifts they carry, and
//! numerical certificates for the identities relating the two.
//!
//! Operators are dense complex matrices indexed by a [`TruncationWindow`] of
//! basis indices. Every identity is checked on the *interior* of the window,
//! away from the rows and columns where truncation distorts the infinite
//! model.
//!
//! Module map:
//!
//! * [`numkernel`]: matrix exponential, linear solves, interior norms, FFT.
//! * [`specialfn`]: complex gamma and the Gram norm sequence.
//! * [`mobius`]: disc automorphisms, flow paths in the universal cover, the
//!   star automorphism.
//! * [`repn`]: series taxonomy, generator matrices, representation matrices,
//!   the circle-evaluation oracle and the reducible sum.
//! * [`shifts`]: canonical shifts, weight sequences, basis change.
//! * [`homogeneity`]: Möbius functional calculus and homogeneity defects.
//! * [`inductive`]: isotypic decomposition and the inductive-algebra lemmas.
//! * [`cli`]: command implementations behind the `homshift` binary.

pub mod cli;
pub mod error;
pub mod homogeneity;
pub mod inductive;
pub mod mobius;
pub mod numkernel;
pub mod repn;
pub mod shifts;
pub mod specialfn;

pub use error::{Error, Result};
pub use numkernel::{Basis, ComplexScalar, IndexSet, OperatorMatrix, TruncationWindow};
