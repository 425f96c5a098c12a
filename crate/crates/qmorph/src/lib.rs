//! Command line tools, spec languages and certificate files on top of
//! `qmorph-core`.
//!
//! * [`context`]: the `--group` syntax and a single element type.
//! * [`qmspec`]: quasimorphism and section specs.
//! * [`certificate`]: scl bound certificates and their verifier.
//! * [`finite`]: finite groups from text and fragmentation norm reports.
//! * [`extend`]: extension along a section, with its checks.
//! * [`suite`]: the reproduction suite behind `verify-paper`.
//! * [`output`], [`cli`]: rendering, atomic writes, argument handling.

pub mod certificate;
pub mod cli;
pub mod context;
pub mod extend;
pub mod finite;
pub mod output;
pub mod qmspec;
pub mod suite;

pub use qmorph_core as core;
