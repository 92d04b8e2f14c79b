//! Social dilemmas, self-interest levels, and minimal reward transfer matrices
//! for binary-action normal-form games.

pub mod cli;
pub mod error;
pub mod examples;
pub mod game;
pub mod games;
pub mod io;
pub mod lp;
pub mod self_interest;
pub mod transfer;

pub use error::{Error, Result};
