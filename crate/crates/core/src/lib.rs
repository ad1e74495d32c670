//! Exact fusion products of Virasoro and Heisenberg modules.
//!
//! Modules are built from a [`module::ModuleSpec`], fused at a chosen depth with
//! [`fusion::fuse`], and checked against the functional construction in
//! [`dual`]. All arithmetic is over [`linalg::Rat`].
//!
//! ```
//! use fusion_core::fusion::{fuse, FuseOptions};
//! use fusion_core::linalg::Rat;
//! use fusion_core::module::{Module, ModuleSpec};
//!
//! let m = Module::new(ModuleSpec::virasoro(Rat::from(-2), Rat::new(-1, 8)).with_singular_level(2).unwrap());
//! let r = fuse(&m, &m, &FuseOptions::new(0)).unwrap();
//! assert_eq!(r.dimension, 2);
//! ```

pub mod algebra;
pub mod coproduct;
pub mod linalg;
pub mod module;
pub mod fusion;
pub mod dual;
pub mod report;

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/modules.md")]
    mod modules {}
    #[doc = include_str!("../../../book/src/coproducts.md")]
    mod coproducts {}
    #[doc = include_str!("../../../book/src/fusion.md")]
    mod fusion {}
    #[doc = include_str!("../../../book/src/dual.md")]
    mod dual {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
