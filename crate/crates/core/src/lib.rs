//! Total (dual) entropy of quantum states and the entanglement measures built
//! on it.
//!
//! The total entropy adds to the von Neumann entropy its complementary dual,
//! `S^t(rho) = -Tr[rho log2 rho + (1 - rho) log2 (1 - rho)]`. This crate
//! provides the state primitives, the entropy family, the derived bipartite
//! measures and their convex-roof extension, monogamy and polygon
//! diagnostics, and exact spin-chain dynamics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod measures;
pub mod monogamy;
pub mod network;
pub mod random;
pub mod roof;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, C64};
pub use state::{DensityMatrix, PureState, SchmidtDecomposition, Spectrum};
