#![allow(clippy::needless_range_loop)]

pub mod char_p;
pub mod derivations;
pub mod error;
pub mod groupscheme;
pub mod ide;
pub mod linalg;
pub mod pipelines;
pub mod report;
pub mod ring;
pub mod series;
pub mod systems;
pub mod towers;

pub use char_p::{lucas_binom, multi_binom, MultiIndex, PAdicDigits, Prime};
pub use error::{Error, Result};
