//! Exact-arithmetic library for the Pfaffian geometry of the Grassmannian
//! G(2,6): the quadro-quadric Cremona transformation of P^14, Macaulay
//! apolarity for cubic forms in six variables, a compact Groebner engine
//! over exact fields, and the constructive pipeline that presents the
//! apolar cubic fourfold of a genus-8 K3 surface as a sum of 10 cubes.

pub mod apolarity;
pub mod error;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod pluecker;
pub mod poly;
pub mod report;
pub mod unipoly;
pub mod vsp;

pub use error::Error;
pub use field::{Elem, FieldCtx};
