//! Exact ramification calculus for towers of local-field extensions and the
//! finite p-group machinery behind it.
//!
//! * [`herbrand`]: piecewise-linear Herbrand functions over the rationals.
//! * [`pc`]: power-commutator presentations, collection, subgroups, series.
//! * [`filtration`]: lower and upper ramification filtrations on a finite group.
//! * [`planner`]: break sequences of infinite towers and their verdicts.

pub mod filtration;
pub mod herbrand;
pub mod pc;
pub mod planner;
pub mod rat;

pub use rat::Rat;
