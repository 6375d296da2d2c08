//! Finite projective planes PG(2,q) for q <= 13 and exhaustive,
//! isomorph-free classification of t-semiarcs.
//!
//! A t-semiarc is a nonempty point set with exactly t tangent lines at
//! each of its points. The crate provides:
//!
//! * exact GF(p^h) arithmetic with lookup tables ([`gf`]),
//! * the incidence structure of PG(2,q) with fast bitset queries ([`plane`]),
//! * the collineation groups PGL(3,q) and PGammaL(3,q): equivalence
//!   testing, canonical forms and set stabilizers ([`collineation`]),
//! * tangent/secant analysis of point sets ([`semiarc`]),
//! * number-theoretic and counting filters on admissible sizes and
//!   secant distributions ([`constraints`]),
//! * a hybrid orderly/backtracking classification engine with a
//!   brute-force oracle for small planes ([`search`]),
//! * report serialization and coordinate parsing ([`report`]).

pub mod bits;
pub mod collineation;
pub mod constraints;
pub mod gf;
pub mod groups;
pub mod plane;
pub mod report;
pub mod search;
pub mod semiarc;

pub use bits::Mask;
pub use collineation::{are_equivalent, canonical_form, group_order, stabilizer, Collineation, GroupKind, StabilizerReport};
pub use gf::{Field, FieldElement, FieldError, FieldSpec};
pub use plane::Plane;
pub use search::{brute_force_classify, classify, generate_admissible_tree, ClassificationReport, SearchConfig};
pub use semiarc::SecantDistribution;
