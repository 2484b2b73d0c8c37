//! Exact symbolic toolkit for the SL₂ trace calculus.
//!
//! The crate reduces traces of arbitrary free-group words to canonical
//! polynomials in the trace coordinates `t[S]` (tuples of up to three
//! generator indices), and uses that calculus to materialize and probe the
//! character varieties of free groups, the 2-torus, and the genus-2 surface:
//! hypersurface equations, singular-point analysis, transcendence bases,
//! finite-field point counts, and E-polynomial bookkeeping.
//!
//! Everything is exact: rational arithmetic over `Q`, modular arithmetic over
//! prime fields, and matrix oracles that verify every symbolic identity.

pub mod count;
pub mod field;
pub mod geometry;
pub mod poly;
pub mod sl2;
pub mod trace;
pub mod word;

pub use field::{Field, PrimeField, Rationals};
pub use poly::{EPoly, Poly, TraceVar, Var};
pub use word::{parse_word, Word};
