//! Construction and classification of finite nilpotent Lie rings.
//!
//! The crate is layered bottom-up:
//!
//! - [`gfplin`]: linear algebra over GF(p), subspace enumeration and orbits;
//! - [`liering`]: rings given by structure constants, series, quotients;
//! - [`presentation`]: the bracket-word presentation language, a nilpotent
//!   quotient that turns presentations into rings, and the built-in catalogs;
//! - [`generation`]: p-covers, automorphism groups and immediate descendants;
//! - [`classify`]: counting formulas, parameter equivalences, isomorphism
//!   testing and the order-`p^8` maximal-class pipeline.
//!
//! ```
//! use liegen::generation::{immediate_descendants, DescendantFilter};
//! use liegen::presentation::{instantiate, parse, Binding};
//!
//! # fn main() -> liegen::Result<()> {
//! let m = instantiate(&parse("<a,b | bab, ba^3b, pa, pb, class 6>")?, 5, &Binding::new())?;
//! let ds = immediate_descendants(&m, 8, DescendantFilter::MaximalClass)?;
//! assert_eq!(ds.len(), 22);
//! # Ok(())
//! # }
//! ```

pub mod classify;
pub mod error;
pub mod generation;
pub mod gfplin;
pub mod liering;
pub mod presentation;

pub use error::{Error, Result};
pub use liering::{Definition, Ideal, LieRing, RingBuilder};
