//! Z_M-linear multidimensional QAM index codes for the Gaussian broadcast
//! channel with receiver side information.
//!
//! - [`modring`]: arithmetic over `Z_M` with zero-centred representatives.
//! - [`indexcode`]: codes, encoding, expurgated subcodes and ML decoding.
//! - [`lattice`]: Construction-A lattices, HNF, LLL and exact shortest
//!   vectors, giving the subcode distances `d_S`.
//! - [`gain`]: rates and the side-information gain `Γ`.
//! - [`search`]: exhaustive search over circulant encoding matrices.
//! - [`awgnsim`]: seeded Monte-Carlo simulation and capacity limits.

pub mod awgnsim;
pub mod error;
pub mod gain;
pub mod indexcode;
pub mod lattice;
pub mod modring;
pub mod search;
pub mod subset;

pub use error::{Error, Result};
pub use gain::{gamma, GainReport};
pub use indexcode::{CodeRecord, IndexCode, SideInfo};
pub use modring::Modulus;
pub use subset::Subset;
