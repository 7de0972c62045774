//! Core numerics for zeta-regularized determinants and eta invariants of
//! model Dirac-type operators on intervals, circles, and product cylinders.
//!
//! Everything here is pure computation over immutable inputs; the companion
//! `detlab` crate carries IO, the experiment CLI, and the file formats.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cylinder;
pub mod error;
pub mod mat2;
pub mod quad;
pub mod roots;
pub mod special;
pub mod zeta;
pub mod spectrum;
pub mod sum;

pub use error::{Error, Result};
