//! Exact-arithmetic toolkit for so(8), the octonions and triality.
//!
//! Everything is computed over the rationals; identities are checked by
//! exact equality, never by tolerance.

pub mod error;
pub mod exact;
pub mod invariants;
pub mod octonion;
pub mod report;
pub mod so8;
pub mod triality;
pub mod verify;

pub use error::{Error, Result};
