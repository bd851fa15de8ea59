//! Descartes configurations, Apollonian packings and their symmetry groups,
//! in exact arithmetic where possible.
//!
//! A circle is an [`circle::AccRow`], four mutually tangent circles are an
//! [`config::AccMatrix`], and the Apollonian, dual and super-Apollonian
//! groups act on them from the left through [`group::Generator`] words.
//! [`packing::generate`] sweeps out an orbit. Möbius maps act from the right
//! ([`moebius`]), and [`schottky`] covers a free parabolic subgroup of the
//! gasket's symmetries together with its limit set.
//!
//! ```
//! use apollonian::config::AccMatrix;
//! use apollonian::limits::Limits;
//! use apollonian::packing::{generate, PackingKind};
//!
//! let p = generate(&AccMatrix::unit_gasket(), PackingKind::Apollonian, 5, &Limits::default()).unwrap();
//! assert_eq!(p.circle_count(), 488);
//! ```
//!
//! The guide in `book/` walks through each module; its code blocks run as
//! doctests of this crate.

pub mod circle;
pub mod cli;
pub mod config;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod group;
pub mod limits;
pub mod matrix;
pub mod moebius;
pub mod packing;
pub mod rational;
pub mod render;
pub mod schottky;

// mdbook cannot link against this crate, so each chapter is compiled here.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/forms.md")]
    pub mod forms {}
    #[doc = include_str!("../../../book/src/circles.md")]
    pub mod circles {}
    #[doc = include_str!("../../../book/src/configurations.md")]
    pub mod configurations {}
    #[doc = include_str!("../../../book/src/groups.md")]
    pub mod groups {}
    #[doc = include_str!("../../../book/src/packings.md")]
    pub mod packings {}
    #[doc = include_str!("../../../book/src/moebius.md")]
    pub mod moebius {}
    #[doc = include_str!("../../../book/src/schottky.md")]
    pub mod schottky {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
