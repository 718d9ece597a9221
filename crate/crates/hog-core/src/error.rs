//! Error type shared by the library modules.

use thiserror::Error;

/// Errors raised by construction, evaluation, and checking operations.
///
/// Parse and elaboration failures of the `.hog` text format are reported
/// separately as positioned [`crate::gamedef::Diagnostic`]s.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Transitive closure of the declared pairs would relate an element
    /// strictly below itself.
    #[error("order cycle: {0} would be strictly below itself")]
    Cycle(String),

    /// A symbol or outcome value lies outside the set it must belong to.
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),

    /// A duplicate element was passed where a set was expected.
    #[error("duplicate element: {0}")]
    DuplicateElement(String),

    /// An enumeration space is larger than the configured budget.
    #[error("budget exceeded: {what} space has {size} elements, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        size: u128,
        budget: u64,
    },

    /// Two higher-order values do not share move/outcome sets.
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    /// A vector-mode construct was used with symbolic outcomes or vice versa.
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),

    /// Fix/non-fix agents need the move set to equal the outcome set.
    #[error("fix domain mismatch: {0}")]
    FixDomainMismatch(String),

    /// Coordinate index outside the vector arity.
    #[error("coordinate {k} out of range 1..={arity}")]
    BadCoordinate { k: usize, arity: usize },

    /// The outcomes in play are not totally ordered.
    #[error("order not total: {0}")]
    OrderNotTotal(String),

    /// The majority rule needs exactly three moves.
    #[error("majority expects exactly 3 moves, got {0}")]
    Arity(usize),

    /// The majority rule needs a two-symbol alphabet.
    #[error("majority expects a 2-symbol alphabet: {0}")]
    Alphabet(String),

    /// An outcome table does not cover the full profile product.
    #[error("incomplete outcome table: missing profile {0}")]
    IncompleteTable(String),

    /// An outcome table defines the same profile twice.
    #[error("duplicate outcome table row for profile {0}")]
    DuplicateRow(String),

    /// A declared player has no agent.
    #[error("missing agent for player {0}")]
    MissingAgent(String),

    /// An agent's selection function is empty on a reachable unilateral
    /// context, so the game violates the totality precondition.
    #[error("agent for player {player} is empty on reachable context {context}")]
    AgentNotTotal { player: String, context: String },

    /// The compile theorem failed to verify; this signals an implementation
    /// bug, never a property of the input game.
    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    /// Malformed token for a symbol or player identifier.
    #[error("invalid token: {0:?} (expected letters, digits or underscore)")]
    BadToken(String),
}

pub type Result<T> = std::result::Result<T, Error>;
