//! Exact sheaf cohomology of decomposable bundles on products of projective
//! spaces and smooth quadrics, together with the block collections, the
//! regularity notion built from them, and splitting criteria.

pub mod arith;
pub mod bundle;
pub mod cohomology;
pub mod collections;
pub mod criteria;
pub mod dsl;
pub mod error;
pub mod regularity;
pub mod space;

pub use bundle::{BundleExpr, FactorBundle, PsiRanks, SpinorKind, Term};
pub use cohomology::{cohomology, ext, CohomTable};
pub use error::{Error, Result};
pub use space::{Factor, FactorKind, Space};
