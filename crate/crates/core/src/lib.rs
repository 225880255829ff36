//! Exact computer algebra for the local invariants of Jacobians that enter the
//! Birch and Swinnerton-Dyer formula: Tamagawa numbers from combinatorial
//! special-fibre data, and real periods from a big period matrix plus regular
//! model charts.
//!
//! The crate is organised bottom-up:
//!
//! - [`polyring`]: sparse polynomials over ℤ, ℤ/p^e, 𝔽_p, 𝔽_{p^k}
//! - [`groebner`]: strong Gröbner bases and ideal operations
//! - [`vanishing`]: orders of vanishing along fibre components
//! - [`compgroup`]: component groups and Tamagawa numbers
//! - [`periods`]: the real-period pipeline
//! - [`fieldtower`]: number fields with p inert and the subfield property
//! - [`model`]: the JSON model-file format
//!
//! The guide in `book/` walks through each of these with runnable examples.

pub mod arith;
pub mod compgroup;
pub mod error;
pub mod fieldtower;
pub mod finite_field;
pub mod groebner;
pub mod model;
pub mod periods;
pub mod polyring;
pub mod vanishing;

pub use error::{Error, Result};

// the guide's snippets run as doctests
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/groebner.md")]
    mod groebner {}
    #[doc = include_str!("../../../book/src/vanishing.md")]
    mod vanishing {}
    #[doc = include_str!("../../../book/src/tamagawa.md")]
    mod tamagawa {}
    #[doc = include_str!("../../../book/src/periods.md")]
    mod periods {}
    #[doc = include_str!("../../../book/src/field-towers.md")]
    mod field_towers {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
