//! Normalized Laplacian spectra of joined unions of regular graphs and of
//! power graphs of finite cyclic groups.
//!
//! Every structural result can be checked against a brute-force oracle:
//! materialize the graph, assemble its normalized Laplacian and run the dense
//! Jacobi eigensolver in [`spectra`].

pub mod error;
pub mod families;
pub mod graph;
pub mod joined_union;
pub mod numtheory;
pub mod par;
pub mod power_graph;
pub mod power_report;
pub mod spectra;
pub mod verify;

pub use error::{Error, Result};
