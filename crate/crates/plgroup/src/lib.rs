//! Exact arithmetic for the groups G(I;A,P) of finitary piecewise-linear
//! homeomorphisms of the real line with breaks in A and slopes in P.

pub mod breakhom;
pub mod construct;
pub mod error;
pub mod io;
pub mod lattice;
pub mod plmap;
pub mod rational;
pub mod ring;
pub mod subdivide;
pub mod svg;
pub mod tails;
pub mod words;

pub use error::{Error, Result};
pub use rational::Q;
