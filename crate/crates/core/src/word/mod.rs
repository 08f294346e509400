//! Finite words, morphisms, and brute-force combinatorial oracles.

mod finite;
mod morphism;
mod rational;
pub mod stats;

pub use finite::{Alphabet, FiniteWord};
pub use morphism::{standard, Morphism};
pub use rational::ExactRational;
pub use stats::{
    abelian_complexity, critical_exponent, exponent_stats, factor_complexity, is_rote,
    max_recurrence_gap, p_prefix, q_prefix, q_prefix_via_inflation, reversible_factors,
    RecurrenceGap, Repetition,
};
