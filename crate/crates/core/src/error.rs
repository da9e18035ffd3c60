use thiserror::Error;

use crate::symbol::{ConceptName, Symbol};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("concept name `{0}` is defined more than once")]
    DuplicateDefinition(ConceptName),
    #[error("terminological cycle through `{0}`")]
    CyclicTBox(ConceptName),
    #[error("`{0}` is used both as a variable and as a constant")]
    KindClash(Symbol),
    #[error("problem is not in dag-solved form: {0}")]
    NotDagSolved(String),
    #[error("problem is not flat: equation {0} has a non-flat side")]
    NotFlat(usize),
    #[error("substitution is cyclic through `{0}`")]
    CyclicSubstitution(ConceptName),
    #[error("substitution is not ground on `{0}`")]
    NotGround(ConceptName),
    #[error("term contains variable `{0}`; interpretations only give meaning to constants")]
    VariableInTerm(ConceptName),
    #[error("role `{0}` has no operator index")]
    UnindexedRole(Symbol),
    #[error("operator index {0} has no role")]
    UnindexedOperator(u32),
    #[error("defined concept `{0}` must be a constant")]
    DefinedVariable(ConceptName),
    #[error("search budget exhausted")]
    BudgetExceeded,
    #[error("{0}")]
    Syntax(String),
}

pub type Result<T> = std::result::Result<T, Error>;
