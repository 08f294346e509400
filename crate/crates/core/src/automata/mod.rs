//! Deterministic automata reading tuples of digits, one digit per track,
//! most significant digit first.

mod alphabet;
mod dfa;
mod dfao;
mod minimize;
mod nfa;
mod text;

pub use alphabet::TrackAlphabet;
pub use dfa::{product_of, zip_tracks, BoolOp, MultiTrackDfa, Part, DEAD};
pub use dfao::Dfao;
pub use nfa::Nfa;

pub(crate) use text::{dfao_from_parsed, hex_digest, parse as parse_text};

#[cfg(test)]
mod tests;
