//! Symbolic core: words of the free algebra, trace-algebra polynomials, and
//! their text syntax.

mod format;
mod parse;
mod poly;
mod word;

pub use format::format_expression;
pub use parse::parse_expression;
pub use poly::{random_trace_poly, Monomial, TraceFactor, TracePoly};
pub use word::{all_words, canonical_cycle, necklaces, Word};
