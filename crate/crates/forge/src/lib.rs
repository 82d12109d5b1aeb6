//! Workbench for finitary equational theories and the finite-set monads they
//! present.
//!
//! The crate is organised around three representations of the same
//! mathematics and the bridges between them:
//!
//! * **Syntax** ([`theory`]): signatures, terms in context, equational
//!   theories, and the sum/tensor constructions on them.
//! * **Free models** ([`free`]): bounded term enumeration quotiented by
//!   ground congruence closure, giving finite approximations of free
//!   algebras, plus finite algebras presented by explicit operation tables.
//! * **Semantics** ([`monad`], [`tensor`]): monads on finite sets as Kleisli
//!   triples with executable unit and extension, Eilenberg-Moore algebra
//!   structures, and the tensor law connecting a pair of them.
//!
//! [`metalang`] is a small typed do-notation language evaluated against any
//! of the built-in monads; [`subsume`] is a self-contained decision procedure
//! for a subsumption order on eventually-periodic sequences, used by the
//! counterexample machinery. [`report`] carries the JSON report envelope
//! shared by the `forge` binary.
//!
//! Most capabilities have a runnable demonstration under `examples/`.

pub mod cli;
pub mod free;
pub mod metalang;
pub mod model;
pub mod monad;
pub mod report;
pub mod subsume;
pub mod tensor;
pub mod theory;
pub mod value;

/// Default budget for term enumeration and other combinatorial searches.
pub const DEFAULT_TERM_BUDGET: usize = 200_000;

/// Default seed for every randomised check. Fixed so reports replay.
pub const DEFAULT_SEED: u64 = 7;
