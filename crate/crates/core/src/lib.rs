//! A finite laboratory for commutative monads and their Kleisli categories.
//!
//! Finite sets, finite measurable spaces and finite topological spaces carry
//! six concrete monads (distribution, finite Giry, finite sub-Giry, maybe,
//! read-only state, lower Vietoris) plus a bounded name-generation monad.
//! On top of them the crate classifies Kleisli morphisms (pure, thunkable,
//! copyable, discardable, deterministic), builds the sobrification submonad,
//! tests observational equivalence by repeated sampling, and interprets a
//! small effectful language into Kleisli morphisms.

pub mod dsl;
pub mod corpus;
pub mod error;
pub mod kleisli;
pub mod monads;
pub mod namegen;
pub mod observe;
pub mod rational;
pub mod report;
pub mod sample;
pub mod sobrify;
pub mod space;
pub mod suites;

pub use error::{LabError, Result};
pub use kleisli::{kleisli_compose, Classification, KleisliMorphism};
pub use monads::{Closed, Measure, Monad, MonadOps, Obj, TElem};
pub use rational::Rational;
pub use report::{CheckRecord, Mode, Report, Verdict};
pub use space::{BaseMap, FinSpace, Kind, Point};
