//! Exact computational engine for the stable module category of a basic
//! self-injective algebra over a prime field.
//!
//! The crate builds a finite-dimensional algebra from a quiver presentation,
//! manipulates its finite-dimensional right modules as quiver representations,
//! and works in the stable category: stable Hom spaces, triangles, simple-minded
//! systems and their left/right mutations, and two-term (Okuyama-style) tilting
//! complexes of projectives together with Aihara–Iyama silting mutation of the
//! regular module.
//!
//! Everything is exact linear algebra over F_p; there is no floating point
//! anywhere, and every randomized step draws from an explicit seeded generator.

pub mod algebra;
pub mod cli;
pub mod endo;
pub mod error;
pub mod field;
pub mod io;
pub mod rep;
pub mod rng;
pub mod sms;
pub mod stable;
pub mod tilt;

pub use error::Error;
pub use field::{Fp, Mat, Subspace};
pub use rng::DetRng;
