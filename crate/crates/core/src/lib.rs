//! Exact trace invariants of tuples of nilpotent 2×2 and 3×3 matrices.
//!
//! Evaluates the generating and separating sets `S_{2,d}`, `S_{3,2}`,
//! `S_{3,3}` and `P_{3,3}`, decides separation, reduces tuples to canonical
//! forms under conjugation, replays the minimality witnesses and checks
//! indecomposability with an evaluation-based span oracle.

pub mod canon;
pub mod cli;
pub mod document;
pub mod error;
pub mod eval;
pub mod fuzz;
pub mod indecomposable;
pub mod linalg;
pub mod matrix;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod sets;
pub mod span;
pub mod tuple;
pub mod witnesses;
pub mod word;

pub use error::{Coefficient, Error, Result};
pub use eval::{all_words_agree, eval_word, evaluate_set, permute_tuple, separate};
pub use matrix::{conjugate, trace_product, SmallMatrix};
pub use scalar::Scalar;
pub use sets::{builtin_set, InvariantSet, SetName};
pub use tuple::NilTuple;
pub use word::{Permutation, TraceWord};
