//! Exact computer algebra for nonplanarity questions about matrix-monomial
//! manifolds `ψ(X_1, …, X_r) = p_1(X) ⊕ ⋯ ⊕ p_n(X)`.

pub mod error;
pub mod exactlinalg;
pub mod exponents;
pub mod groebner;
pub mod multiset;
pub mod paths;
pub mod plucker;
pub mod polyring;
pub mod strongcheck;
pub mod weakcheck;
pub mod words;

pub use error::{Error, Result};
