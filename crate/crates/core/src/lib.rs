//! Orbit census for the action of PGL2(F_q) and PΓL2(F_q) on monic
//! irreducible polynomials over F_q = GF(2^n), the brute-force oracles that
//! check it, and the irreducible binary Goppa codes it counts.

pub mod arith;
pub mod census;
pub mod error;
pub mod gf2;
pub mod goppa;
pub mod linmap;
pub mod oracle;
pub mod pgl;
pub mod poly;

pub use census::{Census, CensusReport};
pub use error::{Error, Result};
pub use gf2::{Embedding, FieldCtx, FieldElem};
pub use goppa::{BinaryCode, GoppaSpec};
pub use oracle::{DeltaTable, Group, Limits, OrbitPartition};
pub use pgl::{binary_matrices, ConjClass, Family, Pgl, ProjMat, SemiLinear};
pub use poly::{iter_irreducible, IrreducibleIter, IrreducibleSet, Poly, PolyRing};
