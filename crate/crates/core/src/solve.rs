//! Solving arbitrary (not necessarily flat) problems: flatten, run one of
//! the two solvers, and project the unifier back to the input variables.

use crate::error::Result;
use crate::goal::{solve_goal_with_stats, GoalConfig};
use crate::guess::{enumerate_unifiers, solve_guess, GuessConfig, Outcome};
use crate::problem::{flatten, UnificationProblem};
use crate::substitution::Substitution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Algorithm {
    Guess,
    #[default]
    Goal,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub algorithm: Algorithm,
    /// Node budget for the goal solver, assignment budget for guessing.
    pub max_nodes: Option<u64>,
    pub trace: bool,
    pub jobs: usize,
    /// Keep the variables introduced by flattening in the result.
    pub keep_fresh: bool,
}

impl Default for SolveConfig {
    fn default() -> SolveConfig {
        SolveConfig { algorithm: Algorithm::Goal, max_nodes: None, trace: false, jobs: 1, keep_fresh: false }
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub outcome: Outcome,
    pub trace: Vec<String>,
}

pub fn solve(g: &UnificationProblem, cfg: &SolveConfig) -> Result<Solved> {
    let fl = flatten(g);
    let flat = fl.problem.to_problem();
    let (outcome, trace) = match cfg.algorithm {
        Algorithm::Guess => {
            let gc = GuessConfig { max_assignments: cfg.max_nodes, enumerate_all: false, jobs: cfg.jobs };
            (solve_guess(&flat, &gc)?, Vec::new())
        }
        Algorithm::Goal => {
            let gc = GoalConfig { max_nodes: cfg.max_nodes, trace: cfg.trace };
            let (o, stats) = solve_goal_with_stats(&flat, &gc)?;
            (o, stats.trace)
        }
    };
    let outcome = match outcome {
        Outcome::Sat(s) if !cfg.keep_fresh => Outcome::Sat(s.restrict(&fl.original_variables)),
        other => other,
    };
    Ok(Solved { outcome, trace })
}

/// All assignment-induced unifiers of the flattened problem, projected.
pub fn solve_all(g: &UnificationProblem, cfg: &SolveConfig) -> Result<Vec<Substitution>> {
    let fl = flatten(g);
    let gc = GuessConfig { max_assignments: cfg.max_nodes, enumerate_all: true, jobs: cfg.jobs };
    let all = enumerate_unifiers(&fl.problem.to_problem(), &gc)?;
    Ok(if cfg.keep_fresh { all } else { all.into_iter().map(|s| s.restrict(&fl.original_variables)).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::is_unifier;
    use crate::subsumption::equivalent;
    use crate::symbol::ConceptName;
    use crate::term::Concept;

    #[test]
    fn non_flat_problem_is_projected() {
        let x = Concept::variable("X");
        let g = UnificationProblem::from_pairs([(
            Concept::some("r", Concept::and([Concept::constant("A"), Concept::constant("B")])),
            Concept::some("r", x.clone()),
        )])
        .unwrap();
        for algorithm in [Algorithm::Guess, Algorithm::Goal] {
            let out = solve(&g, &SolveConfig { algorithm, ..SolveConfig::default() }).unwrap();
            let s = out.outcome.substitution().unwrap();
            assert_eq!(s.bindings().len(), 1);
            assert!(is_unifier(s, &g));
            let img = s.expanded_image(&ConceptName::variable("X"));
            assert!(equivalent(&img, &Concept::and([Concept::constant("A"), Concept::constant("B")])));
        }
    }
}
