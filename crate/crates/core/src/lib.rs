//! Exact computations with quasimorphisms, conjugation-invariant norms and
//! (mixed) commutator lengths on finitely generated groups.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is pure:
//! IO, spec languages and certificate files live in the `qmorph` crate.
//!
//! Module map:
//!
//! * [`word`] and [`group`]: reduced words in free groups, the [`Group`]
//!   trait, direct products and ball enumeration.
//! * [`perm`]: permutations and finite groups (permutation groups,
//!   multiplication tables).
//! * [`braid`]: braid groups via the Garside left normal form, the index sum
//!   homomorphism and the splitting `P₃ ≅ F₂ × ℤ`.
//! * [`quasimorphism`]: Brooks counting quasimorphisms, homogenization,
//!   pullbacks, defect bounds and invariance checks.
//! * [`norms`]: conjugation-invariant norms, fragmentation norms and
//!   partial quasimorphisms.
//! * [`scl`]: commutator decompositions, length searches and bound
//!   certificates.
//! * [`extension`]: extending invariant quasimorphisms along a section.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod braid;
pub mod extension;
pub mod group;
pub mod norms;
pub mod perm;
pub mod quasimorphism;
pub mod rational;
pub mod sample;
pub mod scl;
pub mod word;

pub use group::{Group, Homomorphism};
pub use rational::{Interval, Rational};
pub use word::{FreeGroup, Letter, Word};
