//! Invariant algebraic curves of planar polynomial vector fields, exterior
//! calculus on rational forms, and a Lotka-Volterra analysis suite, all over
//! exact rational parameter fields.

#[macro_use]
mod macros;

pub mod algebra;
pub mod error;
pub mod forms;
pub mod cli;
pub mod darboux;
pub mod lv;
pub mod minimality;
pub mod numeric;
pub mod symbol;
pub mod vectorfield;

pub use error::{Error, Result};
pub use symbol::Symbol;
