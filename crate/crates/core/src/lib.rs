//! Combinatorics of flag simple polytopes through their facet compatibility
//! graphs: generalized associahedra of types A and D, nestohedra, f-, h- and
//! γ-vectors, direct products and codimension-2 shavings.

pub mod canon;
pub mod cliques;
pub mod complex;
pub mod error;
pub mod iso;
pub mod nestohedra;
pub mod polygon;
pub mod polynomial;
pub mod surgery;
pub mod vectors;

pub use canon::{canonical_form, canonical_form_colored};
pub use complex::{
    clique_f_vector, decompose, face_graph, product, simplicity_check, CompatibilityGraph, FVector, FacetLabel,
};
pub use error::{Error, Result};
pub use iso::is_isomorphic;
pub use polygon::{build_type_a, build_type_d};
pub use polynomial::IntPolynomial;
pub use vectors::{f_to_h, gal_check, h_to_gamma};
