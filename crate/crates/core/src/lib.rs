//! Exact computations for cross-t-intersecting uniform set families.
//!
//! Hirschorn pairs and their optimum, a brute-force optimum over
//! left-compressed families, analytic upper bounds, and the two
//! counterexample constructions to the Hirschorn conjecture.

pub mod bounds;
pub mod counterex;
pub mod error;
pub mod exactmath;
pub mod hirschorn;
pub mod oracle;
pub mod par;
pub mod setfam;
pub mod verify;

pub use error::{Error, Result};
pub use exactmath::{binomial, shannon_h, BigCount, BinomialTable, LogValue};
pub use hirschorn::{hirschorn_optimum, Functional, HirschornOptimum, HirschornPair};
pub use oracle::{oracle, OracleCaps, OracleResult, SearchMode};
pub use setfam::{Family, InstanceParams, SetMask};
