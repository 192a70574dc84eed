//! Knot diagrams, their invariants, and unknotting-sequence certificates.

pub mod atlas;
pub mod certify;
pub mod diagram;
pub mod invariants;
pub mod moves;
mod linalg;
pub mod quandle;
pub mod search;
pub mod notation;
pub mod poly;

pub use atlas::{identify, Chirality, Identification, KnotTable, KnotTableEntry, NoMatch, UnknottingNumber};
pub use diagram::{CrossingRef, DiagramError, PlanarDiagram};
pub use invariants::{determinant, fingerprint, jones, kauffman_bracket, murasugi_lower_bound, signature, Fingerprint, InvariantError};
pub use notation::{dt_to_diagram, emit_dt, parse_dt, DtCode, NotationError, NotationErrorKind};
pub use poly::LaurentPolynomial;
