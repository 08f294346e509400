//! Mechanized proof that the repetition threshold for Rote words is 5/2.
//!
//! The crate has three layers:
//!
//! * [`word`] and [`search`]: finite-word combinatorics, brute-force oracles,
//!   and the bounded tree search behind the lower bound.
//! * [`automata`] and [`numeration`]: multi-track automata over digit
//!   tuples, Dumont-Thomas numeration systems built from morphisms, and
//!   synthesized addition automata.
//! * [`logic`]: a first-order formula language over a numeration system,
//!   compiled to automata, with linear representations for counting.
//!
//! [`checks`] binds everything into named reproducible checks.

pub mod automata;
pub mod checks;
pub mod error;
pub mod logic;
pub mod numeration;
pub mod search;
pub mod word;

pub use error::{Error, Result};
