//! Exact modified Turaev–Viro state sums for G-decorated closed 3-manifolds,
//! together with the surface combinatorics they rest on.

pub mod catdata;
pub mod decor;
pub mod gcore;
pub mod graphval;
pub mod statesum;
pub mod tricomplex;
