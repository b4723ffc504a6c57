//! Exact finite-scale computation with algebraic theories.
//!
//! The crate is organised bottom-up:
//!
//! * [`fincat`]: finite categories, functors, presheaves, natural
//!   transformations, finite limits and colimits, Kan extensions, ends and
//!   coends.
//! * [`site`]: finite sites, the truncated extensive site of finite sets, the
//!   sheaf condition and sheafification.
//! * [`theory`]: theories presented as identity-on-objects functors out of a
//!   site, their models, free models, modelification and congruence quotients
//!   of finite algebras.
//! * [`dayconv`]: Day convolution and internal homs, commutative theories and
//!   tensor products of models.
//! * [`fibered`]: linear bundles over finite sets, base change, the
//!   Beck–Chevalley condition, the projection formula and the correspondence
//!   between multiplicative and Linton models over a base object.
//! * [`kernels`]: finitely supported signed measures and kernels between
//!   finite based spaces.
//!
//! Everything is exact: set-valued data is stored as dense integer tables and
//! linear data over `ℚ` or a prime field. The crate is `no_std` and only needs
//! `alloc`.

#![no_std]
#![allow(clippy::needless_range_loop)]
#![allow(clippy::too_many_arguments)]

extern crate alloc;

pub mod arith;
pub mod dayconv;
pub mod dsu;
pub mod error;
pub mod fibered;
pub mod fincat;
pub mod kernels;
pub mod linalg;
pub mod site;
pub mod theory;

pub use error::{Error, Result};
