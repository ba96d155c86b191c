//! Limited-magnitude rank-modulation Gray codes.
//!
//! Permutation Gray codes under push-to-the-top transitions whose codewords are
//! pairwise far apart in the ℓ∞ metric, together with their auxiliary building
//! blocks, a linear-time decoder, ranking, rate curves and Kendall-τ snakes.

pub mod aux;
pub mod complete;
pub mod decode;
pub mod error;
pub mod gray;
pub mod io;
pub mod lmrm;
pub mod perm;
pub mod rates;
pub mod sim;
pub mod snake;

pub use aux::{AuxCatalog, AuxCode, AuxFamily};
pub use complete::CompleteCode;
pub use decode::{decode, quantize};
pub use error::{Error, Result};
pub use gray::GrayCode;
pub use lmrm::{construct, CodeParams, LmrmCode};
pub use perm::{Parity, Permutation, Transition};
