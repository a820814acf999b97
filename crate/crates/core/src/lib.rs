pub mod cli;
pub mod dsl;
pub mod error;
pub mod grid;
pub mod scalar;
pub mod resolvent;
pub mod star;
pub mod validation;
