//! Essential ideal graphs of `Z_n`: construction, metric dimension and
//! Zagreb indices.
//!
//! A proper nonzero ideal of `Z_n` is `<d>` for a divisor `1 < d < n`, stored
//! as its exponent vector against the factorization of `n`. Two such ideals
//! are adjacent in the essential ideal graph when their sum is essential,
//! which happens exactly when no prime carries its full exponent in both.

pub mod arithmetic;
pub mod error;
pub mod graph;
pub mod ideals;
pub mod metricdim;
pub mod zagreb;

pub use arithmetic::{factor, Caps, FactoredInteger};
pub use error::{Error, Result};
pub use graph::{build_aig, build_essential_graph, DistanceMatrix, IdealGraph};
pub use ideals::{class_partition, enumerate_vertices, ClassPartition, Ideal, IndexSet};
pub use metricdim::{DimMethod, DimReport};
pub use zagreb::ZagrebReport;
