#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod admissibility;
pub mod diffusion;
pub mod error;
pub mod kernels;
pub mod quad;
pub mod specfun;
pub mod transforms;

pub use error::{Error, Result};

/// Guide chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/mittag-leffler.md")]
    pub mod mittag_leffler {}
    #[doc = include_str!("../../../book/src/kernels.md")]
    pub mod kernels {}
    #[doc = include_str!("../../../book/src/inverse-laplace.md")]
    pub mod inverse_laplace {}
    #[doc = include_str!("../../../book/src/admissibility.md")]
    pub mod admissibility {}
    #[doc = include_str!("../../../book/src/diffusion.md")]
    pub mod diffusion {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
