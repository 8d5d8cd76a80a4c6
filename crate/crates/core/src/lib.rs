//! Symplectic and spin tomography of quantum states, the quantum probability
//! measures attached to them, a tomographic star product and tomogram time
//! evolution for quadratic Hamiltonians.
//!
//! Conventions: `hbar = 1`, unit mass and frequency. The Wigner function is
//! normalized as `(1/2pi) * integral W dq dp = 1`, so the vacuum has
//! `W(q, p) = 2 exp(-q^2 - p^2)`.

pub mod ctomo;
pub mod error;
pub mod evolution;
pub mod export;
pub mod linalg;
pub mod measures;
pub mod quad;
pub mod special;
pub mod spin;
pub mod starprod;
pub mod states;

pub use error::{Result, TomoError};
pub use linalg::{CMatrix, C64};
