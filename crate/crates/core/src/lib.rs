//! Counting Del Pezzo surfaces of degree 2 over finite fields of odd
//! characteristic by the conjugacy class of Frobenius in `W(E7)` and by its
//! trace on the Picard group.
//!
//! - [`picard`]: the lattice `Z L + Z E1 + ... + Z E7` and its 126 roots.
//! - [`weyl`]: `W(E7)` as a matrix group, its enumeration and 60 classes.
//! - [`class_data`]: the class and trace polynomials.
//! - [`counting`]: evaluation, existence exceptions, the aggregation identity.
//! - [`field`] and [`oracle`]: brute-force point configurations over `F_q`.

pub mod class_data;
pub mod counting;
pub mod error;
pub mod field;
pub mod oracle;
pub mod picard;
pub mod poly;
pub mod weyl;

pub use class_data::{ClassData, ConjClassRecord, CountingPolynomial, TraceRecord, POSSIBLE_TRACES};
pub use counting::{
    aggregation_check, count_by_trace, evaluate_class_count, existence_exceptions, named_classes,
    odd_prime_powers_up_to, surface_point_count, zero_sets, AggregationReport, Exceptions, NameResolution,
    OddPrimePower, ZeroSets,
};
pub use error::{Error, Result};
pub use field::{FiniteField, Fe};
pub use oracle::{CycleType, OracleRun, ProjectivePoint};
pub use picard::{PicVector, RootSystem};
pub use poly::IntPoly;
pub use weyl::{ClassReport, ClassTable, WeylElement, WeylGroup};
