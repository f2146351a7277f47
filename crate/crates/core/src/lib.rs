pub mod error;
pub mod field;
pub mod fpoly;
pub mod intmat;
pub mod lattice;
pub mod poly;
pub mod principal;

pub use error::{Error, Result};
pub use field::{Field, FieldElement, FieldSpec};
pub use lattice::ZLattice;
pub mod ideal;
pub mod quotient;
pub mod expr;
pub mod factor;
pub mod fields;
pub mod order;
pub mod corpus;
pub mod props;
pub mod pseries;
pub mod units;
