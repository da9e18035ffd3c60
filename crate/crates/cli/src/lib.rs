//! Command-line front end for the `el-unification` crate.
//!
//! Exit codes: 0 solvable or true, 1 unsolvable or false, 2 usage or parse
//! error, 3 budget or size limit exceeded.

pub mod syntax;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use el_unification::analysis::verify_chain_with_budget;
use el_unification::{
    expand, random_interpretation, reduce, reduce_problem_mod_tbox, solve, solve_all, subsumes_wrt_tbox, to_slmo,
    type_zero_chain, Algorithm, Concept, ConceptName, Equation, Outcome, RoleIndex, Signature, SolveConfig,
    Substitution, TBox, UnificationProblem,
};

pub use syntax::{parse_problem, print_problem, ParseError, Pos, ProblemFile};

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}:{source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Core(#[from] el_unification::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(el_unification::Error::BudgetExceeded) | CliError::TooLarge(_) => EXIT_BUDGET,
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "elunif", version, about = "Unification, matching and subsumption in the description logic EL")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum AlgorithmArg {
    Guess,
    Goal,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide solvability of the `unify` equations (modulo the `define`s) and print a unifier.
    Solve {
        #[arg(long, value_enum, default_value = "goal")]
        algorithm: AlgorithmArg,
        /// Print every unifier induced by an acyclic assignment.
        #[arg(long)]
        all: bool,
        /// Print fully expanded images instead of the dag form.
        #[arg(long)]
        expand: bool,
        /// Largest expanded image `--expand` will print.
        #[arg(long, default_value_t = 100_000)]
        expand_limit: u128,
        /// Search budget: rule applications for goal, assignments for guess.
        #[arg(long)]
        max_nodes: Option<u64>,
        /// Print the rule applications of the goal solver as comments.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also print bindings of variables introduced by flattening.
        #[arg(long)]
        keep_fresh: bool,
        file: PathBuf,
    },
    /// Is the first term of the single `unify` subsumed by the second?
    Subsume { file: PathBuf },
    /// Are the two terms of the single `unify` equivalent?
    Equiv { file: PathBuf },
    /// Print the file with every term in reduced form.
    Reduce { file: PathBuf },
    /// Translate the equations into semilattice terms with monotone operators.
    TranslateSlmo { file: PathBuf },
    /// Build and verify a strictly descending chain of unifiers of X ⊓ ∃r.Y ≡? ∃r.Y.
    DemoTypeZero {
        #[arg(long, default_value_t = 3)]
        steps: usize,
        /// Node budget for each matching check.
        #[arg(long)]
        budget: Option<u64>,
        /// Print `key=value` records instead of the readable report.
        #[arg(long)]
        key_value: bool,
    },
    /// Check each ground equation against random finite interpretations.
    Eval {
        #[arg(long, default_value_t = 100)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_domain: usize,
        file: PathBuf,
    },
}

pub fn load(path: &Path) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_problem(&text).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io { path: "<stdout>".into(), source: e }
}

/// Runs one command, writing its report to `out`. Returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve { algorithm, all, expand, expand_limit, max_nodes, trace, jobs, keep_fresh, file } => {
            let f = load(&file)?;
            let algorithm = match algorithm {
                AlgorithmArg::Guess => Algorithm::Guess,
                AlgorithmArg::Goal => Algorithm::Goal,
            };
            let cfg = SolveConfig { algorithm, max_nodes, trace, jobs: jobs.max(1), keep_fresh };
            let printer = Printer { user: f.variables.clone(), expand, expand_limit, keep_fresh };
            let g = plain_problem(&f)?;
            if all {
                let unifiers = solve_all(&g, &cfg)?;
                for (i, s) in unifiers.iter().enumerate() {
                    writeln!(out, "; unifier {}", i).map_err(io)?;
                    printer.print(s, out)?;
                }
                if unifiers.is_empty() {
                    writeln!(out, "; unsolvable").map_err(io)?;
                    return Ok(EXIT_FALSE);
                }
                return Ok(EXIT_TRUE);
            }
            let solved = solve(&g, &cfg)?;
            for line in &solved.trace {
                writeln!(out, "; {}", line).map_err(io)?;
            }
            match solved.outcome {
                Outcome::Sat(s) => {
                    printer.print(&s, out)?;
                    Ok(EXIT_TRUE)
                }
                Outcome::Unsat => {
                    writeln!(out, "; unsolvable").map_err(io)?;
                    Ok(EXIT_FALSE)
                }
                Outcome::BudgetExceeded => Err(el_unification::Error::BudgetExceeded.into()),
            }
        }
        Command::Subsume { file } => query(&file, out, |t, c, d| subsumes_wrt_tbox(t, c, d)),
        Command::Equiv { file } => {
            query(&file, out, |t, c, d| Ok(subsumes_wrt_tbox(t, c, d)? && subsumes_wrt_tbox(t, d, c)?))
        }
        Command::Reduce { file } => {
            let mut f = load(&file)?;
            let defs = f
                .tbox
                .definitions()
                .iter()
                .map(|d| el_unification::Definition::new(d.lhs.clone(), reduce(&d.rhs)))
                .collect();
            f.tbox = TBox::new(defs)?;
            for eq in &mut f.equations {
                *eq = Equation::new(reduce(&eq.lhs), reduce(&eq.rhs));
            }
            write!(out, "{}", print_problem(&f)).map_err(io)?;
            Ok(EXIT_TRUE)
        }
        Command::TranslateSlmo { file } => {
            let f = load(&file)?;
            let g = plain_problem(&f)?;
            let index = RoleIndex::for_roles(g.roles());
            for (i, r) in index.iter() {
                writeln!(out, "; f{} = {}", i, r).map_err(io)?;
            }
            for eq in g.equations() {
                writeln!(out, "{} =? {}", to_slmo(&eq.lhs, &index)?, to_slmo(&eq.rhs, &index)?).map_err(io)?;
            }
            Ok(EXIT_TRUE)
        }
        Command::DemoTypeZero { steps, budget, key_value } => {
            if steps == 0 {
                return Err(CliError::Usage("--steps must be at least 1".into()));
            }
            let report = verify_chain_with_budget(&type_zero_chain(steps), budget);
            if key_value {
                write!(out, "{}", report.key_value()).map_err(io)?;
            } else {
                writeln!(out, "{}", report).map_err(io)?;
            }
            Ok(if report.passed() {
                EXIT_TRUE
            } else if report.inconclusive() {
                EXIT_BUDGET
            } else {
                EXIT_FALSE
            })
        }
        Command::Eval { samples, seed, max_domain, file } => {
            if !(1..=el_unification::semantics::MAX_DOMAIN).contains(&max_domain) {
                return Err(CliError::Usage(format!(
                    "--max-domain must be between 1 and {}",
                    el_unification::semantics::MAX_DOMAIN
                )));
            }
            let f = load(&file)?;
            let mut refuted_any = false;
            for (k, eq) in f.equations.iter().enumerate() {
                let c = expand(&eq.lhs, &f.tbox)?;
                let d = expand(&eq.rhs, &f.tbox)?;
                let sig = Signature::of_terms([&c, &d]);
                let mut refuted = None;
                for i in 0..samples {
                    let interp = random_interpretation(&sig, max_domain, seed.wrapping_add(i));
                    let (x, y) = (interp.evaluate(&c)?, interp.evaluate(&d)?);
                    if x != y {
                        refuted = Some((i, x, y));
                        break;
                    }
                }
                let equiv = el_unification::equivalent(&c, &d);
                match refuted {
                    Some((i, x, y)) => {
                        refuted_any = true;
                        writeln!(
                            out,
                            "equation={} equivalent={} refuted_by_sample={} lhs={:?} rhs={:?}",
                            k,
                            equiv,
                            i,
                            x.elements(),
                            y.elements()
                        )
                        .map_err(io)?;
                    }
                    None => writeln!(out, "equation={} equivalent={} samples={} refuted=none", k, equiv, samples)
                        .map_err(io)?,
                }
            }
            Ok(if refuted_any { EXIT_FALSE } else { EXIT_TRUE })
        }
    }
}

/// The file's equations, with the TBox folded in as extra equations.
fn plain_problem(f: &ProblemFile) -> Result<UnificationProblem, CliError> {
    let g = f.problem();
    if f.has_tbox() {
        Ok(reduce_problem_mod_tbox(&g, &f.tbox)?)
    } else {
        Ok(g)
    }
}

fn query(
    file: &Path,
    out: &mut dyn Write,
    decide: impl Fn(&TBox, &Concept, &Concept) -> el_unification::Result<bool>,
) -> Result<i32, CliError> {
    let f = load(file)?;
    let [eq] = f.equations.as_slice() else {
        return Err(CliError::Usage(format!("expected exactly one `unify`, found {}", f.equations.len())));
    };
    if let Some(v) = eq.lhs.variables().into_iter().chain(eq.rhs.variables()).next() {
        return Err(CliError::Usage(format!("query mentions variable `{}`", v)));
    }
    let verdict = decide(&f.tbox, &eq.lhs, &eq.rhs)?;
    writeln!(out, "{}", verdict).map_err(io)?;
    Ok(if verdict { EXIT_TRUE } else { EXIT_FALSE })
}

struct Printer {
    user: BTreeSet<ConceptName>,
    expand: bool,
    expand_limit: u128,
    keep_fresh: bool,
}

impl Printer {
    fn print(&self, s: &Substitution, out: &mut dyn Write) -> Result<(), CliError> {
        let s = if self.keep_fresh { s.clone() } else { s.restrict(&self.user) };
        for (x, image) in s.bindings() {
            let image = if self.expand {
                let size = s.expanded_size(x);
                if size > self.expand_limit {
                    return Err(CliError::TooLarge(format!(
                        "expansion of `{}` has size {} (limit {})",
                        x, size, self.expand_limit
                    )));
                }
                s.expanded_image(x)
            } else {
                image.clone()
            };
            writeln!(out, "(define {} {})", x, reduce(&image)).map_err(io)?;
        }
        Ok(())
    }
}
