//! Dumont-Thomas numeration systems: representations of integers as paths
//! in the addressing automaton of a morphism, the sequences that give each
//! digit its weight, and the automata built on top of them.

mod addition;
mod format;
mod recurrence;
mod system;

pub use addition::AdditionConfig;
pub use format::{DT_H_SPEC, DT_Q_SPEC};
pub use recurrence::{IncidenceMatrix, Recurrence};
pub use system::{digits_from_str, digits_to_string, NumerationSystem, SeqTransition};
