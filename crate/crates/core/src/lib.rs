//! Canonical tensor product subfactors at desk scale.
//!
//! Works over concrete unitary fusion categories given by F- and R-symbols:
//! builds Q-systems from explicit coefficient formulas, verifies Longo's
//! relations, computes alpha-induction coupling matrices, and checks modular
//! invariance, locality and normality.

#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::type_complexity)]

pub mod alpha;
pub mod bundle;
pub mod catalog;
pub mod category;
pub mod checks;
pub mod cli;
pub mod ctps;
pub mod error;
pub mod fusion;
pub mod linalg;
pub mod modular;
pub mod morphism;
pub mod qsystem;

pub use category::CategoryModel;
pub use error::{Error, Result};
pub use fusion::{FusionData, Label};
pub use morphism::{Morphism, ObjectWord, SumObject};
