//! Numerical verification engine for the geometry of almost complex
//! manifolds with Norden metric.
//!
//! The crate evaluates chart-defined structures (a metric `g` and an almost
//! complex structure `J` given as expression matrices) with exact truncated
//! Taylor arithmetic, and certifies conjugate-connection and
//! statistical-structure identities point by point.
//!
//! Modules, bottom up:
//!
//! * [`jet`] — truncated Taylor scalars: exact derivatives to order 3.
//! * [`expr`] — the small analytic expression language charts are written in.
//! * [`tensor`] — dense pointwise tensor algebra over a neutral metric.
//! * [`manifold`] — charts, Norden axioms, the fundamental tensor `F`,
//!   Lie forms, curvature of the Levi-Civita connections, classification.
//! * [`connection`] — linear connections as first-class values: conjugation
//!   with respect to either Norden metric or to `J`, averages, curvature,
//!   the Lichnerowicz connection, and the two statistical families.
//! * [`lab`] — named check suites producing deterministic reports.
//!
//! The core is `no_std` + `alloc`; IO, file formats and the CLI live in the
//! companion `norden-cli` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod connection;
pub mod expr;
pub mod jet;
pub mod lab;
pub(crate) mod linalg;
pub mod manifold;
pub(crate) mod rng;
pub mod tensor;

pub use connection::{ConnectionField, QFamily, StatStructure};
pub use expr::Expression;
pub use jet::Jet;
pub use lab::{CheckReport, Hypothesis, RunConfig, Status, SuiteId};
pub use manifold::{Chart, ClassReport, Frame, MetricKind};
pub use tensor::{MetricPair, Tensor, Variance};
