//! Engine for generalized disjunctive paraconsistent relations.
//!
//! Relations in this model carry two kinds of facts: positive tuple sets,
//! each read as "at least one of these tuples is in the relation", and
//! negative tuple sets, each read as "at least one of these tuples is not".
//! No closed-world assumption is made anywhere: a tuple mentioned nowhere is
//! simply unknown, and negation is always explicit data.
//!
//! The crate is layered:
//!
//! * [`model`] — schemes, tuples, tuple sets, the three relation levels, and
//!   the enumeration/extension/projection primitives.
//! * [`dp`] — algebra on disjunctive paraconsistent relations (positive
//!   disjunctions, definite negative tuples).
//! * [`gdp`] — algebra on generalized disjunctive paraconsistent relations
//!   (disjunctions on both sides) with the six operators.
//! * [`formula`] / [`query`] — the selection-formula and query languages.
//! * [`storage`] — the text database format and canonical renderers.
//! * [`oracle`] — random instance generation, possible-worlds flattening,
//!   and the differential checks behind `gdpr fuzz`.

pub mod error;
pub mod model;
pub mod formula;
pub mod dp;
pub mod gdp;
pub mod oracle;
pub mod query;
pub mod storage;

mod lex;

pub use error::{Error, Result};
pub use model::DEFAULT_CAP;
