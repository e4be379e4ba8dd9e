//! Finite groups, gauge functions and exact cyclotomic scalars.

pub mod gauge;
pub mod matrix;
pub mod group;
pub mod scalar;

pub use gauge::{gauge_compose, GaugeError, GaugeFunction};
pub use matrix::Matrix;
pub use group::{group_from_table, Element, FiniteGroup, GroupError};
pub use scalar::{Field, Scalar, ScalarError};
