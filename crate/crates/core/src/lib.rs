pub mod adjacent;
pub mod error;
pub mod format;
pub mod graphs;
pub mod instance;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod qspp;
pub mod reductions;
pub mod solver;

pub use error::{Error, Result};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub mod readme {}

#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/neighborhoods.md")]
    pub mod neighborhoods {}
    #[doc = include_str!("../../../book/src/costs.md")]
    pub mod costs {}
    #[doc = include_str!("../../../book/src/reductions.md")]
    pub mod reductions {}
    #[doc = include_str!("../../../book/src/solvers.md")]
    pub mod solvers {}
    #[doc = include_str!("../../../book/src/hardness.md")]
    pub mod hardness {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
