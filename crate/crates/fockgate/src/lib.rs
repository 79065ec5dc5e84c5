//! Few-photon simulator for linear-optical networks with post-selection.
//!
//! Beam-splitter networks conserve total photon number but redistribute
//! photons between modes. Preparing ancilla modes in photon-number states and
//! keeping only runs where detectors register a chosen outcome induces a
//! non-unitary effective operator on the remaining signal modes; that
//! conditional nonlinearity is strong enough to build two-photon gates from
//! passive linear optics alone. This crate computes those effective operators
//! exactly (to double precision) on a cutoff Fock basis:
//!
//! - [`fock`]: occupation-number bases and state vectors;
//! - [`elements`]: beam splitters, phase shifters, polarizing beam splitters
//!   and mode permutations, as M×M unitaries on the mode operators;
//! - [`lift`]: the induced operator on the multi-photon basis, computed by
//!   two independent algorithms (multinomial expansion and matrix
//!   permanents) that cross-validate each other;
//! - [`postselect`]: ancilla projection, success probabilities and detection
//!   outcome distributions;
//! - [`gates`]: built-in devices (nonlinear sign element, two-photon
//!   polarization filter, post-selected phase gate) verified against their
//!   exact reference matrices;
//! - [`circuit`] and [`dsl`]: a validated circuit model and its `.lop` text
//!   format;
//! - [`cli`]: the `fockgate` command-line front end.
//!
//! With the default `parallel` feature, per-column basis lifting runs on a
//! rayon pool; disable default features for a fully sequential build. The
//! output is bit-identical either way.

pub mod circuit;
pub mod cli;
pub mod dsl;
pub mod elements;
mod error;
pub mod fock;
pub mod gates;
pub mod lift;
pub mod postselect;

pub use error::{Error, Result};
