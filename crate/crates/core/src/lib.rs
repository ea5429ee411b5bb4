pub mod embedding;
pub mod error;
pub mod forms;
pub mod genset;
pub mod geometry;
pub mod gf;
pub mod linalg;

pub use error::{Error, Result};
pub use forms::{FormKind, FormSpace, FormSpec, Transvection, WittComplement};
pub use geometry::{enumerate, Geometry, RelationCode};
pub use gf::{make_field, Elem, Field, FieldSpec};
pub use linalg::{plucker, rank_over, rref, PluckerVector, Subspace, Vector};
