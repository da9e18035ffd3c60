//! Unification, matching, subsumption and equivalence for the description
//! logic EL, with and without acyclic TBoxes.
//!
//! Two decision procedures are provided for flat problems: a guess-and-check
//! search over acyclic assignments ([`guess`]) and a goal-oriented rule
//! system ([`goal`]). [`solve::solve`] flattens arbitrary problems first.

pub mod analysis;
pub mod error;
pub mod goal;
pub mod guess;
pub mod problem;
pub mod semantics;
pub mod slmo;
pub mod solve;
pub mod substitution;
pub mod subsumption;
pub mod symbol;
pub mod tbox;
pub mod term;

pub use analysis::{is_instance, type_zero_chain, verify_chain, ChainReport, UnifierChain};
pub use error::{Error, Result};
pub use goal::{solve_goal, GoalConfig};
pub use guess::{enumerate_unifiers, solve_guess, GuessConfig, Outcome};
pub use problem::{flatten, Equation, FlatEquation, FlatProblem, Flattening, FreshNames, UnificationProblem};
pub use semantics::{evaluate, is_model, random_interpretation, Interpretation, Signature};
pub use slmo::{from_slmo, slmo_word_problem, to_slmo, RoleIndex, SLTerm};
pub use solve::{solve, solve_all, Algorithm, SolveConfig};
pub use substitution::{
    compare_ground, is_unifier, substitution_of_assignment, Assignment, Form, GroundOrder, Substitution,
};
pub use subsumption::{
    equivalent, equivalent_via_reduction, equivalent_wrt_tbox, is_reduced, reduce, strictly_subsumes, subsumes,
    subsumes_wrt_tbox, TBoxReasoner,
};
pub use symbol::{ConceptName, NameKind, Role, Symbol, RESERVED_PREFIX};
pub use tbox::{
    depends_on, expand, is_acyclic, is_dag_solved, problem_of_tbox, reduce_problem_mod_tbox, sigma_of_dag_solved,
    Definition, TBox,
};
pub use term::{ac_equal, ac_normalize, Atom, Concept, RawConcept};
