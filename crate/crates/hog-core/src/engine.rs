//! General games, unilateral contexts, generalized Nash and selection
//! equilibria, and exhaustive solving.
//!
//! A game is per-player move sets, per-player selection functions, and a
//! total outcome function over strategy profiles. A profile is a Nash
//! equilibrium when each player's current outcome is among the good
//! outcomes of their induced quantifier on the unilateral context, and a
//! selection equilibrium when each player's current move is among their
//! good moves there. Selection equilibria are always Nash equilibria; the
//! solver asserts this per profile.
//!
//! [`Game::solve`] enumerates the full profile product in lexicographic
//! order (first player most significant, moves in declaration order) and
//! may partition the space across rayon workers; rows are merged in index
//! order, so output is identical for any worker count.

use rayon::prelude::*;

use crate::core::{
    check_uniform_mode, union_symbols, Context, FiniteSet, OutcomeValue, StrategyProfile, Symbol,
};
use crate::error::{Error, Result};
use crate::hof::{induced_quantifier, SelectionFunction};
use crate::selections::{self, SelectionSpec};

/// Default ceiling on the number of strategy profiles a solve may enumerate.
pub const DEFAULT_PROFILE_BUDGET: u64 = 10_000_000;

/// Mixed-radix indexing of the profile product, lexicographic with the
/// first player most significant.
#[derive(Clone, Debug)]
pub(crate) struct ProfileSpace {
    sizes: Vec<usize>,
    total: u64,
}

impl ProfileSpace {
    pub(crate) fn new(sizes: Vec<usize>) -> ProfileSpace {
        let total = sizes.iter().try_fold(1u64, |acc, &s| {
            acc.checked_mul(s as u64)
        });
        ProfileSpace {
            total: total.unwrap_or(u64::MAX),
            sizes,
        }
    }

    pub(crate) fn len(&self) -> u64 {
        self.total
    }

    pub(crate) fn indices(&self, mut k: u64) -> Vec<usize> {
        let mut out = vec![0usize; self.sizes.len()];
        for (slot, &size) in out.iter_mut().zip(self.sizes.iter()).rev() {
            *slot = (k % size as u64) as usize;
            k /= size as u64;
        }
        out
    }

    pub(crate) fn index_of(&self, digits: &[usize]) -> u64 {
        digits
            .iter()
            .zip(self.sizes.iter())
            .fold(0u64, |acc, (&d, &s)| acc * s as u64 + d as u64)
    }
}

/// The outcome function: an explicit dense table in profile-index order,
/// or the builtin three-player majority rule.
#[derive(Clone, Debug)]
enum OutcomeRule {
    Table(Vec<OutcomeValue>),
    Majority,
}

/// Outcome declaration for [`GameConfig`]: a declared symbolic set, or
/// vector mode with a given arity (the set is derived from the table).
#[derive(Clone, Debug)]
pub enum OutcomeDecl {
    Symbolic(FiniteSet<OutcomeValue>),
    Vector(usize),
}

/// Per-player agent declaration: a builtin spec or a prebuilt selection
/// function (for embeddings supplying their own set-valued mapping).
#[derive(Clone)]
pub enum AgentDecl {
    Spec(SelectionSpec),
    Custom(SelectionFunction),
}

/// Everything needed to assemble a [`Game`]; [`Game::build`] validates it.
pub struct GameConfig {
    pub name: String,
    pub players: Vec<String>,
    pub move_sets: Vec<FiniteSet<Symbol>>,
    pub outcomes: OutcomeDecl,
    pub rule: OutcomeTableSource,
    pub agents: Vec<AgentDecl>,
}

/// Outcome source before coverage checking: explicit rows or the builtin
/// majority rule.
#[derive(Clone, Debug)]
pub enum OutcomeTableSource {
    Rows(Vec<(Vec<Symbol>, OutcomeValue)>),
    Majority,
}

/// A finite general game.
#[derive(Clone, Debug)]
pub struct Game {
    name: String,
    players: Vec<String>,
    move_sets: Vec<FiniteSet<Symbol>>,
    outcome_set: FiniteSet<OutcomeValue>,
    vector_arity: Option<usize>,
    rule: OutcomeRule,
    agents: Vec<SelectionFunction>,
    space: ProfileSpace,
}

/// The simple majority rule over three moves from a two-symbol alphabet.
pub fn majority(profile: &StrategyProfile) -> Result<OutcomeValue> {
    let moves = profile.moves();
    if moves.len() != 3 {
        return Err(Error::Arity(moves.len()));
    }
    let distinct = FiniteSet::from_iter_dedup(moves.iter().cloned());
    if distinct.len() > 2 {
        return Err(Error::Alphabet(profile.spaced()));
    }
    let winner = distinct
        .iter()
        .find(|s| moves.iter().filter(|m| m == s).count() >= 2)
        .expect("two symbols over three slots force a majority");
    Ok(OutcomeValue::Sym(winner.clone()))
}

impl Game {
    /// Validates a [`GameConfig`] and assembles the game.
    ///
    /// Checks: distinct non-empty players and move sets, one agent per
    /// player with matching move/outcome sets, a table covering the full
    /// profile product exactly once with values in the outcome set, and
    /// the majority-rule preconditions when that builtin is used. Agent
    /// totality over reachable contexts is a separate step,
    /// [`Game::validate_agent_totality`], so callers can choose between
    /// rejecting and reporting.
    pub fn build(cfg: GameConfig) -> Result<Game> {
        let n = cfg.players.len();
        if n == 0 {
            return Err(Error::DomainMismatch("a game needs at least one player".into()));
        }
        for (i, p) in cfg.players.iter().enumerate() {
            if cfg.players[..i].contains(p) {
                return Err(Error::DuplicateElement(p.clone()));
            }
        }
        if cfg.move_sets.len() != n {
            return Err(Error::DomainMismatch(format!(
                "{} move sets for {} players",
                cfg.move_sets.len(),
                n
            )));
        }
        if cfg.move_sets.iter().any(FiniteSet::is_empty) {
            return Err(Error::DomainMismatch("empty move set".into()));
        }
        if cfg.agents.len() != n {
            return Err(Error::DomainMismatch(format!(
                "{} agents for {} players",
                cfg.agents.len(),
                n
            )));
        }

        let space = ProfileSpace::new(cfg.move_sets.iter().map(FiniteSet::len).collect());

        // Resolve the outcome set and the dense table.
        let (outcome_set, vector_arity, rule) = match (&cfg.outcomes, cfg.rule) {
            (OutcomeDecl::Symbolic(declared), OutcomeTableSource::Majority) => {
                let declared = declared.clone();
                if n != 3 {
                    return Err(Error::Arity(n));
                }
                let alphabet = union_symbols(&cfg.move_sets);
                if alphabet.len() != 2 {
                    return Err(Error::Alphabet(format!("{alphabet:?}")));
                }
                for ms in &cfg.move_sets {
                    if !ms.same_elements(&cfg.move_sets[0]) {
                        return Err(Error::Alphabet(
                            "majority needs one shared move alphabet".into(),
                        ));
                    }
                }
                if !declared.same_elements(&alphabet.to_outcomes()) {
                    return Err(Error::Alphabet(
                        "majority needs the outcome set to equal the move alphabet".into(),
                    ));
                }
                (declared, None, OutcomeRule::Majority)
            }
            (OutcomeDecl::Vector(_), OutcomeTableSource::Majority) => {
                return Err(Error::ModeMismatch(
                    "majority is a symbolic-mode builtin".into(),
                ));
            }
            (decl, OutcomeTableSource::Rows(rows)) => {
                let table = assemble_table(&cfg.move_sets, &space, rows)?;
                match decl {
                    OutcomeDecl::Symbolic(declared) => {
                        if check_uniform_mode(declared)?.is_some() {
                            return Err(Error::ModeMismatch(
                                "symbolic outcome declaration contains vectors".into(),
                            ));
                        }
                        for v in &table {
                            if !declared.contains(v) {
                                return Err(Error::UnknownSymbol(v.to_string()));
                            }
                        }
                        (declared.clone(), None, OutcomeRule::Table(table))
                    }
                    OutcomeDecl::Vector(arity) => {
                        for v in &table {
                            if v.arity() != Some(*arity) {
                                return Err(Error::ModeMismatch(format!(
                                    "outcome {v} does not have arity {arity}"
                                )));
                            }
                        }
                        let derived = FiniteSet::from_iter_dedup(table.iter().cloned());
                        (derived, Some(*arity), OutcomeRule::Table(table))
                    }
                }
            }
        };

        // Agents must live over the player's move set and the game's outcomes.
        let mut agents = Vec::with_capacity(n);
        for (i, decl) in cfg.agents.into_iter().enumerate() {
            let agent = match decl {
                AgentDecl::Spec(spec) => {
                    selections::build(&spec, &cfg.move_sets[i], &outcome_set)?
                }
                AgentDecl::Custom(f) => {
                    if !f.moves().same_elements(&cfg.move_sets[i]) {
                        return Err(Error::DomainMismatch(format!(
                            "agent for player {} is over moves {:?}, expected {:?}",
                            cfg.players[i],
                            f.moves(),
                            cfg.move_sets[i]
                        )));
                    }
                    if !f.outcomes().same_elements(&outcome_set) {
                        return Err(Error::DomainMismatch(format!(
                            "agent for player {} is over a different outcome set",
                            cfg.players[i]
                        )));
                    }
                    f
                }
            };
            agents.push(agent);
        }

        Ok(Game {
            name: cfg.name,
            players: cfg.players,
            move_sets: cfg.move_sets,
            outcome_set,
            vector_arity,
            rule,
            agents,
            space,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn move_sets(&self) -> &[FiniteSet<Symbol>] {
        &self.move_sets
    }

    pub fn outcome_set(&self) -> &FiniteSet<OutcomeValue> {
        &self.outcome_set
    }

    /// Vector arity when the game is in vector mode.
    pub fn vector_arity(&self) -> Option<usize> {
        self.vector_arity
    }

    pub fn agents(&self) -> &[SelectionFunction] {
        &self.agents
    }

    pub fn profile_count(&self) -> u64 {
        self.space.len()
    }

    fn profile_from_indices(&self, idx: &[usize]) -> StrategyProfile {
        StrategyProfile::new(
            idx.iter()
                .enumerate()
                .map(|(i, &d)| self.move_sets[i].get(d).clone())
                .collect(),
        )
    }

    /// Move indices of a profile, validating it against the move sets.
    fn indices_of(&self, x: &StrategyProfile) -> Result<Vec<usize>> {
        if x.len() != self.players.len() {
            return Err(Error::DomainMismatch(format!(
                "profile {} has {} moves for {} players",
                x.label(),
                x.len(),
                self.players.len()
            )));
        }
        x.moves()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                self.move_sets[i]
                    .index_of(m)
                    .ok_or_else(|| Error::UnknownSymbol(m.to_string()))
            })
            .collect()
    }

    fn outcome_at(&self, idx: &[usize]) -> OutcomeValue {
        match &self.rule {
            OutcomeRule::Table(t) => t[self.space.index_of(idx) as usize].clone(),
            OutcomeRule::Majority => {
                let profile = self.profile_from_indices(idx);
                majority(&profile).expect("majority preconditions hold by construction")
            }
        }
    }

    /// The outcome of a strategy profile.
    pub fn outcome(&self, x: &StrategyProfile) -> Result<OutcomeValue> {
        Ok(self.outcome_at(&self.indices_of(x)?))
    }

    fn unilateral_context_at(&self, idx: &[usize], i: usize) -> Context {
        let mut probe = idx.to_vec();
        let values = (0..self.move_sets[i].len())
            .map(|d| {
                probe[i] = d;
                self.outcome_at(&probe)
            })
            .collect();
        Context::new(self.move_sets[i].clone(), values).expect("domain and values align")
    }

    /// The context player `i` sees at profile `x`: their own coordinate
    /// ranges over their move set while everyone else's is frozen. The
    /// result does not depend on `x`'s own `i`-th coordinate.
    pub fn unilateral_context(&self, x: &StrategyProfile, i: usize) -> Result<Context> {
        let idx = self.indices_of(x)?;
        if i >= self.players.len() {
            return Err(Error::DomainMismatch(format!(
                "player index {i} out of range for {} players",
                self.players.len()
            )));
        }
        Ok(self.unilateral_context_at(&idx, i))
    }

    fn evaluate_at(&self, idx: &[usize]) -> ProfileReport {
        let profile = self.profile_from_indices(idx);
        let outcome = self.outcome_at(idx);
        let verdicts: Vec<PlayerVerdict> = (0..self.players.len())
            .map(|i| {
                let p = self.unilateral_context_at(idx, i);
                let preferred_moves = self.agents[i].eval(&p);
                let preferred_outcomes = FiniteSet::from_iter_dedup(
                    preferred_moves
                        .iter()
                        .map(|m| p.value_of(m).expect("move in domain").clone()),
                );
                let selection_ok = preferred_moves.contains(&profile.moves()[i]);
                let nash_ok = preferred_outcomes.contains(&outcome);
                // Refinement theorem, enforced per player.
                assert!(
                    !selection_ok || nash_ok,
                    "selection equilibrium condition held without the Nash condition"
                );
                PlayerVerdict {
                    player: self.players[i].clone(),
                    nash_ok,
                    selection_ok,
                    preferred_moves,
                    preferred_outcomes,
                }
            })
            .collect();
        let is_nash = verdicts.iter().all(|v| v.nash_ok);
        let is_selection = verdicts.iter().all(|v| v.selection_ok);
        ProfileReport {
            profile,
            outcome,
            verdicts,
            is_nash,
            is_selection,
        }
    }

    /// Full per-player report for one profile: the generalized Nash check
    /// (outcome among the induced quantifier's good outcomes) and the
    /// selection check (own move among the good moves), with the witness
    /// sets recorded.
    pub fn evaluate(&self, x: &StrategyProfile) -> Result<ProfileReport> {
        Ok(self.evaluate_at(&self.indices_of(x)?))
    }

    /// Nash verdicts for one profile; see [`Game::evaluate`].
    pub fn nash_status(&self, x: &StrategyProfile) -> Result<ProfileReport> {
        self.evaluate(x)
    }

    /// Selection verdicts for one profile; see [`Game::evaluate`].
    pub fn selection_status(&self, x: &StrategyProfile) -> Result<ProfileReport> {
        self.evaluate(x)
    }

    /// Exhaustively evaluates every profile, in lexicographic order.
    pub fn solve(&self, budget: u64) -> Result<SolveReport> {
        self.check_profile_budget(budget)?;
        let rows: Vec<ProfileReport> = (0..self.space.len())
            .into_par_iter()
            .map(|k| self.evaluate_at(&self.space.indices(k)))
            .collect();
        let nash_count = rows.iter().filter(|r| r.is_nash).count();
        let selection_count = rows.iter().filter(|r| r.is_selection).count();
        Ok(SolveReport {
            game: self.name.clone(),
            rows,
            nash_count,
            selection_count,
        })
    }

    pub(crate) fn check_profile_budget(&self, budget: u64) -> Result<()> {
        let total: u128 = self
            .move_sets
            .iter()
            .map(|s| s.len() as u128)
            .product();
        if total > budget as u128 {
            return Err(Error::BudgetExceeded {
                what: "profile",
                size: total,
                budget,
            });
        }
        Ok(())
    }

    /// The distinct unilateral contexts player `i` can actually face, one
    /// per assignment of the other players' moves.
    pub fn reachable_contexts(&self, i: usize) -> Vec<Context> {
        let other_sizes: Vec<usize> = (0..self.players.len())
            .map(|j| if j == i { 1 } else { self.move_sets[j].len() })
            .collect();
        let others = ProfileSpace::new(other_sizes);
        (0..others.len())
            .map(|k| self.unilateral_context_at(&others.indices(k), i))
            .collect()
    }

    /// Checks that every agent is non-empty on every unilateral context
    /// reachable in this game, the totality precondition for agents.
    /// Returns the first violation in player order with a witness context.
    pub fn validate_agent_totality(&self) -> Result<()> {
        for i in 0..self.players.len() {
            for p in self.reachable_contexts(i) {
                if self.agents[i].eval(&p).is_empty() {
                    return Err(Error::AgentNotTotal {
                        player: self.players[i].clone(),
                        context: p.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The induced quantifier of player `i`'s agent.
    pub fn agent_quantifier(&self, i: usize) -> crate::hof::Quantifier {
        induced_quantifier(&self.agents[i])
    }
}

/// One player's verdicts at one profile.
#[derive(Clone, Debug)]
pub struct PlayerVerdict {
    pub player: String,
    pub nash_ok: bool,
    pub selection_ok: bool,
    /// The agent's good moves on the unilateral context.
    pub preferred_moves: FiniteSet<Symbol>,
    /// The induced quantifier's good outcomes there.
    pub preferred_outcomes: FiniteSet<OutcomeValue>,
}

/// One row of a solve report.
#[derive(Clone, Debug)]
pub struct ProfileReport {
    pub profile: StrategyProfile,
    pub outcome: OutcomeValue,
    pub verdicts: Vec<PlayerVerdict>,
    pub is_nash: bool,
    pub is_selection: bool,
}

impl ProfileReport {
    pub fn nash_defectors(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|v| !v.nash_ok)
            .map(|v| v.player.as_str())
            .collect()
    }

    pub fn selection_defectors(&self) -> Vec<&str> {
        self.verdicts
            .iter()
            .filter(|v| !v.selection_ok)
            .map(|v| v.player.as_str())
            .collect()
    }
}

/// The result of exhaustively solving a game: one row per profile, in
/// lexicographic profile order.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub game: String,
    pub rows: Vec<ProfileReport>,
    pub nash_count: usize,
    pub selection_count: usize,
}

impl SolveReport {
    pub fn nash_profiles(&self) -> Vec<&StrategyProfile> {
        self.rows
            .iter()
            .filter(|r| r.is_nash)
            .map(|r| &r.profile)
            .collect()
    }

    pub fn selection_profiles(&self) -> Vec<&StrategyProfile> {
        self.rows
            .iter()
            .filter(|r| r.is_selection)
            .map(|r| &r.profile)
            .collect()
    }

    pub fn nash_labels(&self) -> Vec<String> {
        self.nash_profiles().iter().map(|p| p.label()).collect()
    }

    pub fn selection_labels(&self) -> Vec<String> {
        self.selection_profiles().iter().map(|p| p.label()).collect()
    }
}

/// Orders explicit rows into the dense lexicographic table, checking
/// coverage: every profile exactly once.
pub(crate) fn assemble_dense(
    move_sets: &[FiniteSet<Symbol>],
    rows: Vec<(Vec<Symbol>, OutcomeValue)>,
) -> Result<Vec<OutcomeValue>> {
    let space = ProfileSpace::new(move_sets.iter().map(FiniteSet::len).collect());
    assemble_table(move_sets, &space, rows)
}

fn assemble_table(
    move_sets: &[FiniteSet<Symbol>],
    space: &ProfileSpace,
    rows: Vec<(Vec<Symbol>, OutcomeValue)>,
) -> Result<Vec<OutcomeValue>> {
    let total = space.len() as usize;
    let mut table: Vec<Option<OutcomeValue>> = vec![None; total];
    for (profile, value) in rows {
        if profile.len() != move_sets.len() {
            return Err(Error::DomainMismatch(format!(
                "table row {} has {} moves for {} players",
                StrategyProfile::new(profile.clone()).spaced(),
                profile.len(),
                move_sets.len()
            )));
        }
        let digits: Vec<usize> = profile
            .iter()
            .enumerate()
            .map(|(i, m)| {
                move_sets[i]
                    .index_of(m)
                    .ok_or_else(|| Error::UnknownSymbol(m.to_string()))
            })
            .collect::<Result<_>>()?;
        let k = space.index_of(&digits) as usize;
        if table[k].is_some() {
            return Err(Error::DuplicateRow(
                StrategyProfile::new(profile).spaced(),
            ));
        }
        table[k] = Some(value);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(k, slot)| {
            slot.ok_or_else(|| {
                let digits = space.indices(k as u64);
                let missing: Vec<Symbol> = digits
                    .iter()
                    .enumerate()
                    .map(|(i, &d)| move_sets[i].get(d).clone())
                    .collect();
                Error::IncompleteTable(StrategyProfile::new(missing).spaced())
            })
        })
        .collect()
}
