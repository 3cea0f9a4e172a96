//! Decision procedures for continuous trace on graph algebras.
//!
//! The library answers one question in several guises: given a finitely
//! presented directed graph, a Bratteli diagram, or a rank-2 graph, does the
//! associated algebra have continuous trace? The combinatorial criteria are
//! entrance-freeness of cycles and finiteness of minimal cycle-free ancestry
//! pairs, plus their rank-2 analogues. Every verdict carries a
//! machine-checkable certificate, and a brute-force groupoid oracle
//! cross-checks the structural lemmas the fast paths rely on.

pub mod ancestry;
pub mod automaton;
pub mod bratteli;
pub mod cycles;
pub mod desingular;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod parse;
pub mod path;
pub mod verdict;
pub mod window;

pub use error::{AnalysisError, ParseError};
pub use graph::GraphPresentation;
pub use verdict::{Answer, Certificate, Depth, Report, Verdict};
