//! Block-matrix linear algebra and a numerical inequality harness.
//!
//! The library works with dense complex square matrices ([`dense::ComplexMat`])
//! and block-structured views of them ([`block::BlockMat`], an `nk x nk` matrix
//! read as an `n x n` array of `k x k` blocks). On top of those it provides
//!
//! * partial traces and partial determinants of block matrices, the block
//!   realignment map and its commutation permutation ([`block`]),
//! * Kronecker/tensor powers, compound (minor) powers, determinants and a
//!   Hermitian eigensolver ([`dense`]),
//! * seeded generators for positive semidefinite test matrices ([`psd`]),
//! * a catalog of determinantal inequality checks with signed margins and a
//!   batch suite runner ([`catalog`]),
//! * deliberately naive brute-force reference implementations used to
//!   cross-validate the fast paths ([`oracle`]).
//!
//! Everything is a pure function of its inputs; all types are `Send + Sync`
//! and safe for concurrent read-only use.
//!
//! ```
//! use partialmat::block::Side;
//! use partialmat::catalog::check_thompson;
//! use partialmat::psd::{generate, Ensemble, GenSpec};
//! use partialmat::Tolerance;
//!
//! // a 2x2 array of 3x3 blocks, PSD by construction, reproducible by seed
//! let h = generate(&GenSpec::new(Ensemble::Ginibre, 2, 3, 7)).unwrap();
//!
//! // det [det H_ij] >= det H, with the signed slack reported
//! let result = check_thompson(&h, Side::Two, &Tolerance::default()).unwrap();
//! assert!(result.pass && result.margin >= 0.0);
//! ```

pub mod block;
pub mod catalog;
pub mod dense;
pub mod oracle;
pub mod psd;
pub mod tol;

pub use tol::Tolerance;
