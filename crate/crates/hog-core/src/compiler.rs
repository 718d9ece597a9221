//! Lowering selection-function games to classical payoff games, plus a
//! textbook pure-Nash solver for classical games.
//!
//! [`compile_game`] gives every player payoff 1 at a profile where their
//! own move is among their good moves on the unilateral context, and 0
//! where it is not. Two facts follow and [`verify_compile`] checks both on
//! every run: a profile of the compiled game is a pure Nash equilibrium
//! exactly when all payoffs are 1, and the compiled game's Nash equilibria
//! are exactly the source game's selection equilibria. A failure of either
//! is an implementation bug and is reported as
//! [`Error::TheoremViolation`], never silently.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::core::{FiniteSet, Rational, StrategyProfile, Symbol};
use crate::engine::{Game, DEFAULT_PROFILE_BUDGET};
use crate::error::{Error, Result};

/// A classical strategic game: per-player move sets and a total payoff
/// table assigning each profile a vector of exact rationals, one
/// coordinate per player.
#[derive(Clone, Debug)]
pub struct StrategicGame {
    players: Vec<String>,
    move_sets: Vec<FiniteSet<Symbol>>,
    payoffs: Vec<Vec<Rational>>, // dense, lexicographic profile order
}

impl StrategicGame {
    pub fn new(
        players: Vec<String>,
        move_sets: Vec<FiniteSet<Symbol>>,
        payoffs: Vec<Vec<Rational>>,
    ) -> Result<StrategicGame> {
        let n = players.len();
        if move_sets.len() != n || n == 0 {
            return Err(Error::DomainMismatch(format!(
                "{} move sets for {} players",
                move_sets.len(),
                n
            )));
        }
        let total: usize = move_sets.iter().map(FiniteSet::len).product();
        if payoffs.len() != total {
            return Err(Error::IncompleteTable(format!(
                "{} payoff rows for {} profiles",
                payoffs.len(),
                total
            )));
        }
        if let Some(bad) = payoffs.iter().find(|v| v.len() != n) {
            return Err(Error::DomainMismatch(format!(
                "payoff vector of length {} for {} players",
                bad.len(),
                n
            )));
        }
        Ok(StrategicGame {
            players,
            move_sets,
            payoffs,
        })
    }

    /// Reads a vector-mode [`Game`] whose outcome arity equals the player
    /// count as a classical payoff game, ignoring its agents.
    pub fn from_game(g: &Game) -> Result<StrategicGame> {
        let n = g.players().len();
        if g.vector_arity() != Some(n) {
            return Err(Error::ModeMismatch(format!(
                "game {} is not in vector mode with one payoff coordinate per player",
                g.name()
            )));
        }
        let space = ProfileIter::new(g.move_sets());
        let payoffs = space
            .map(|profile| {
                let outcome = g.outcome(&profile)?;
                match outcome {
                    crate::core::OutcomeValue::Vec(v) => Ok(v),
                    other => Err(Error::ModeMismatch(format!("non-vector outcome {other}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        StrategicGame::new(g.players().to_vec(), g.move_sets().to_vec(), payoffs)
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn move_sets(&self) -> &[FiniteSet<Symbol>] {
        &self.move_sets
    }

    pub fn profile_count(&self) -> u64 {
        self.move_sets.iter().map(|s| s.len() as u64).product()
    }

    fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(self.move_sets.iter())
            .fold(0usize, |acc, (&d, s)| acc * s.len() + d)
    }

    fn digits(&self, mut k: usize) -> Vec<usize> {
        let mut out = vec![0usize; self.move_sets.len()];
        for (slot, s) in out.iter_mut().zip(self.move_sets.iter()).rev() {
            *slot = k % s.len();
            k /= s.len();
        }
        out
    }

    fn profile_at(&self, digits: &[usize]) -> StrategyProfile {
        StrategyProfile::new(
            digits
                .iter()
                .enumerate()
                .map(|(i, &d)| self.move_sets[i].get(d).clone())
                .collect(),
        )
    }

    /// Payoff vector of a profile given by move indices.
    fn payoff_at(&self, digits: &[usize]) -> &[Rational] {
        &self.payoffs[self.index_of(digits)]
    }

    /// Payoff vector of a strategy profile.
    pub fn payoff(&self, x: &StrategyProfile) -> Result<&[Rational]> {
        let digits: Vec<usize> = x
            .moves()
            .iter()
            .enumerate()
            .map(|(i, m)| {
                self.move_sets[i]
                    .index_of(m)
                    .ok_or_else(|| Error::UnknownSymbol(m.to_string()))
            })
            .collect::<Result<_>>()?;
        Ok(self.payoff_at(&digits))
    }

    /// All profiles in lexicographic order, with their payoff vectors.
    pub fn rows(&self) -> Vec<(StrategyProfile, &[Rational])> {
        (0..self.profile_count() as usize)
            .map(|k| {
                let digits = self.digits(k);
                (self.profile_at(&digits), self.payoffs[k].as_slice())
            })
            .collect()
    }

    fn is_pure_nash_at(&self, digits: &[usize]) -> bool {
        let current = self.payoff_at(digits);
        let mut probe = digits.to_vec();
        for i in 0..self.players.len() {
            for d in 0..self.move_sets[i].len() {
                if d == digits[i] {
                    continue;
                }
                probe[i] = d;
                if self.payoff_at(&probe)[i] > current[i] {
                    return false;
                }
            }
            probe[i] = digits[i];
        }
        true
    }
}

struct ProfileIter<'a> {
    move_sets: &'a [FiniteSet<Symbol>],
    next: u64,
    total: u64,
}

impl<'a> ProfileIter<'a> {
    fn new(move_sets: &'a [FiniteSet<Symbol>]) -> Self {
        let total = move_sets.iter().map(|s| s.len() as u64).product();
        ProfileIter {
            move_sets,
            next: 0,
            total,
        }
    }
}

impl Iterator for ProfileIter<'_> {
    type Item = StrategyProfile;
    fn next(&mut self) -> Option<StrategyProfile> {
        if self.next >= self.total {
            return None;
        }
        let mut k = self.next;
        self.next += 1;
        let mut digits = vec![0usize; self.move_sets.len()];
        for (slot, s) in digits.iter_mut().zip(self.move_sets.iter()).rev() {
            *slot = (k % s.len() as u64) as usize;
            k /= s.len() as u64;
        }
        Some(StrategyProfile::new(
            digits
                .iter()
                .enumerate()
                .map(|(i, &d)| self.move_sets[i].get(d).clone())
                .collect(),
        ))
    }
}

/// Lowers a game to a strategic game over the same move sets: payoff 1 for
/// a player whose move is among their good moves on the unilateral
/// context, 0 for a defecting player.
pub fn compile_game(g: &Game, budget: u64) -> Result<StrategicGame> {
    g.check_profile_budget(budget)?;
    let report = g.solve(budget)?;
    let payoffs: Vec<Vec<Rational>> = report
        .rows
        .iter()
        .map(|row| {
            row.verdicts
                .iter()
                .map(|v| {
                    if v.selection_ok {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    StrategicGame::new(g.players().to_vec(), g.move_sets().to_vec(), payoffs)
}

/// Pure Nash equilibria by best-response enumeration: the profiles where
/// no player can strictly increase their own payoff coordinate by a
/// unilateral deviation.
pub fn classical_nash(sg: &StrategicGame, budget: u64) -> Result<Vec<StrategyProfile>> {
    let total = sg.profile_count();
    if total as u128 > budget as u128 {
        return Err(Error::BudgetExceeded {
            what: "profile",
            size: total as u128,
            budget,
        });
    }
    let hits: Vec<Option<StrategyProfile>> = (0..total)
        .into_par_iter()
        .map(|k| {
            let digits = sg.digits(k as usize);
            sg.is_pure_nash_at(&digits).then(|| sg.profile_at(&digits))
        })
        .collect();
    Ok(hits.into_iter().flatten().collect())
}

/// Outcome of checking the compile construction on one game.
#[derive(Clone, Debug)]
pub struct CompileCheck {
    pub source_game: String,
    pub nash_of_compiled: Vec<StrategyProfile>,
    pub selection_of_source: Vec<StrategyProfile>,
    pub equal: bool,
}

/// Compiles `g`, solves both sides, and checks the construction: Nash of
/// the compiled game must be exactly the all-payoffs-1 profiles, and must
/// equal the selection equilibria of `g`.
pub fn verify_compile(g: &Game, budget: u64) -> Result<CompileCheck> {
    let compiled = compile_game(g, budget)?;
    let nash_of_compiled = classical_nash(&compiled, budget)?;
    let report = g.solve(budget)?;
    let selection_of_source: Vec<StrategyProfile> =
        report.selection_profiles().into_iter().cloned().collect();

    for (profile, payoff) in compiled.rows() {
        let all_ones = payoff.iter().all(|u| u.is_one());
        let is_nash = nash_of_compiled.contains(&profile);
        if all_ones != is_nash {
            return Err(Error::TheoremViolation(format!(
                "profile {} of the compiled game: all-payoffs-1 is {all_ones} but Nash is {is_nash}",
                profile.label()
            )));
        }
    }

    let equal = nash_of_compiled.len() == selection_of_source.len()
        && nash_of_compiled
            .iter()
            .all(|p| selection_of_source.contains(p));
    if !equal {
        return Err(Error::TheoremViolation(format!(
            "compiled Nash set {:?} differs from source selection set {:?}",
            nash_of_compiled
                .iter()
                .map(StrategyProfile::label)
                .collect::<Vec<_>>(),
            selection_of_source
                .iter()
                .map(StrategyProfile::label)
                .collect::<Vec<_>>()
        )));
    }

    Ok(CompileCheck {
        source_game: g.name().to_string(),
        nash_of_compiled,
        selection_of_source,
        equal,
    })
}

/// Convenience wrapper using the default profile budget.
pub fn verify_compile_default(g: &Game) -> Result<CompileCheck> {
    verify_compile(g, DEFAULT_PROFILE_BUDGET)
}
