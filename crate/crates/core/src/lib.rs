//! Complex symmetric conference matrices of odd prime-power order built
//! from the quadratic character of GF(q), the Seidel matrices of plane
//! symmetries they induce, and the maximal equi-isoclinic plane tuples
//! those certify in odd dimension.
//!
//! For q = 2k - 1 = p^alpha with q = 1 mod 4:
//!
//! - [`conference::build_conference`] gives `C(omega)` with
//!   `C C^* = (2k - 2) I` at the critical omega,
//! - [`seidel::build_seidel`] gives `S` with `S^2 = (2k - 2) I`,
//! - [`planes::equi_isoclinic_planes`] factors `I + S / sqrt(2k - 2)` into
//!   `2k - 1` planes in `R^(2k - 1)` with parameter `1/(2k - 2)`,
//! - [`hadamard::double`] turns `C` into a complex Hadamard matrix of order `2q`.

pub mod admissible;
pub mod cli;
pub mod conference;
pub mod error;
pub mod export;
pub mod gf;
pub mod hadamard;
pub mod linalg;
pub mod planes;
pub mod seidel;

pub use error::{Error, Result};
