//! Exact cyclotomic periods of order 2^m over finite fields of characteristic
//! p = 3 or 5 (mod 8): brute-force ground truth, closed forms, and the weight
//! enumerators of the associated irreducible cyclic codes.

pub mod closedform;
pub mod codes;
pub mod cycloint;
pub mod error;
pub mod ffield;
pub mod par;
pub mod periods;
pub mod quadpart;
pub mod verify;

pub use error::{Error, Result};
pub use par::Strategy;
