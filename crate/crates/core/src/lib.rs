pub mod arith;
pub mod bipartite;
pub mod configuration;
pub mod error;
pub mod orientation;
pub mod par;
pub mod poly;
pub mod presentation;
pub mod quiver;
pub mod tropical;
pub mod verify;
pub mod ysystem;

pub use arith::{Rational, RationalMatrix};
pub use error::{Error, Result};
