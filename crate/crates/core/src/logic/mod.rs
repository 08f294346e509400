//! First-order formulas over a numeration system, decided by automata.

mod compile;
mod linrep;
mod script;
mod syntax;

#[cfg(test)]
mod tests;

pub use compile::{instantiate, Engine, Predicate, Relation};
pub use linrep::{count_representation, linrep_equal, LinearRepresentation};
pub use script::{parse_script, Command, Outcome};
pub use syntax::{parse, CmpOp, Formula, SeqOperand, Term};
