//! Python bindings for the hog game engine.
//!
//! Exposes game loading, solving, compiling, and the agent checks as a
//! `Game` class plus a `SolveResult` wrapper. Detailed rows travel as JSON
//! so Python code can `json.loads` them without a custom type layer.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use hog_core::compiler::{compile_game, verify_compile, StrategicGame};
use hog_core::core::{StrategyProfile, Symbol};
use hog_core::engine::{Game as CoreGame, SolveReport, DEFAULT_PROFILE_BUDGET};
use hog_core::gamedef::{
    self, render_report, serialize_strategic, EquilibriumKind, ReportFormat,
};
use hog_core::hof::{is_context_independent, DEFAULT_CONTEXT_BUDGET};

fn value_err(msg: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(msg.to_string())
}

fn parse_format(s: &str) -> PyResult<ReportFormat> {
    match s {
        "table" => Ok(ReportFormat::Table),
        "csv" => Ok(ReportFormat::Csv),
        "json" => Ok(ReportFormat::Json),
        other => Err(value_err(format!(
            "unknown format {other:?} (expected table, csv or json)"
        ))),
    }
}

fn parse_kind(s: &str) -> PyResult<EquilibriumKind> {
    match s {
        "nash" => Ok(EquilibriumKind::Nash),
        "selection" => Ok(EquilibriumKind::Selection),
        "both" => Ok(EquilibriumKind::Both),
        other => Err(value_err(format!(
            "unknown kind {other:?} (expected nash, selection or both)"
        ))),
    }
}

fn to_profile(moves: Vec<String>) -> PyResult<StrategyProfile> {
    let syms: Vec<Symbol> = moves
        .iter()
        .map(|m| Symbol::new(m).map_err(value_err))
        .collect::<PyResult<_>>()?;
    Ok(StrategyProfile::new(syms))
}

/// A finite game with selection-function agents.
///
/// Usage from Python:
///
///     from hog_py import Game
///     game = Game.from_file("games/keynes_max_fix_fix.hog")
///     result = game.solve()
///     assert result.selection() == ["AAA", "ABB", "BAA", "BBB"]
#[pyclass]
struct Game {
    inner: CoreGame,
}

#[pymethods]
impl Game {
    /// Parse and validate a game from gamedef text.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Game> {
        let game = gamedef::load_game(text).map_err(value_err)?;
        game.validate_agent_totality().map_err(value_err)?;
        Ok(Game { inner: game })
    }

    /// Parse and validate a game from a .hog file.
    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Game> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| value_err(format!("cannot read {path}: {e}")))?;
        Game::from_text(&text)
    }

    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn players(&self) -> Vec<String> {
        self.inner.players().to_vec()
    }

    /// Move labels of one player.
    fn moves(&self, player: &str) -> PyResult<Vec<String>> {
        let i = self
            .inner
            .players()
            .iter()
            .position(|p| p == player)
            .ok_or_else(|| value_err(format!("unknown player {player}")))?;
        Ok(self.inner.move_sets()[i]
            .iter()
            .map(|m| m.to_string())
            .collect())
    }

    fn profile_count(&self) -> u64 {
        self.inner.profile_count()
    }

    /// Exhaustively evaluate every strategy profile.
    #[pyo3(signature = (budget = None))]
    fn solve(&self, budget: Option<u64>) -> PyResult<SolveResult> {
        let report = self
            .inner
            .solve(budget.unwrap_or(DEFAULT_PROFILE_BUDGET))
            .map_err(value_err)?;
        Ok(SolveResult { inner: report })
    }

    /// One profile's verdicts as a JSON object string.
    fn evaluate_json(&self, profile: Vec<String>) -> PyResult<String> {
        let row = self
            .inner
            .evaluate(&to_profile(profile)?)
            .map_err(value_err)?;
        let verdicts: Vec<serde_json::Value> = row
            .verdicts
            .iter()
            .map(|v| {
                serde_json::json!({
                    "player": v.player,
                    "nash_ok": v.nash_ok,
                    "selection_ok": v.selection_ok,
                    "preferred_moves":
                        v.preferred_moves.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                    "preferred_outcomes":
                        v.preferred_outcomes.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let doc = serde_json::json!({
            "profile": row.profile.moves().iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "outcome": row.outcome.to_string(),
            "nash": row.is_nash,
            "selection": row.is_selection,
            "verdicts": verdicts,
        });
        serde_json::to_string(&doc).map_err(value_err)
    }

    /// Compile to a classical 0/1 payoff game, returned as gamedef text.
    #[pyo3(signature = (budget = None))]
    fn compile_text(&self, budget: Option<u64>) -> PyResult<String> {
        let budget = budget.unwrap_or(DEFAULT_PROFILE_BUDGET);
        let compiled = compile_game(&self.inner, budget).map_err(value_err)?;
        Ok(serialize_strategic(
            &compiled,
            &format!("{}_compiled", self.inner.name()),
        ))
    }

    /// Check the compile construction: returns (equal, nash_of_compiled,
    /// selection_of_source) with profiles as compact labels.
    #[pyo3(signature = (budget = None))]
    fn verify_compile(&self, budget: Option<u64>) -> PyResult<(bool, Vec<String>, Vec<String>)> {
        let check = verify_compile(&self.inner, budget.unwrap_or(DEFAULT_PROFILE_BUDGET))
            .map_err(value_err)?;
        Ok((
            check.equal,
            check.nash_of_compiled.iter().map(|p| p.label()).collect(),
            check
                .selection_of_source
                .iter()
                .map(|p| p.label())
                .collect(),
        ))
    }

    /// Best-response Nash labels of a vector-mode game read as a classical
    /// payoff game.
    #[pyo3(signature = (budget = None))]
    fn classical_nash(&self, budget: Option<u64>) -> PyResult<Vec<String>> {
        let sg = StrategicGame::from_game(&self.inner).map_err(value_err)?;
        let nash = hog_core::compiler::classical_nash(&sg, budget.unwrap_or(DEFAULT_PROFILE_BUDGET))
            .map_err(value_err)?;
        Ok(nash.iter().map(|p| p.label()).collect())
    }

    /// Whether a player's induced quantifier is context-independent.
    fn agent_context_independent(&self, player: &str) -> PyResult<bool> {
        let i = self
            .inner
            .players()
            .iter()
            .position(|p| p == player)
            .ok_or_else(|| value_err(format!("unknown player {player}")))?;
        is_context_independent(&self.inner.agent_quantifier(i), DEFAULT_CONTEXT_BUDGET)
            .map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Game(name={:?}, players={}, profiles={})",
            self.inner.name(),
            self.inner.players().len(),
            self.inner.profile_count()
        )
    }
}

/// The outcome of solving a game: per-profile Nash/selection verdicts.
#[pyclass]
struct SolveResult {
    inner: SolveReport,
}

#[pymethods]
impl SolveResult {
    /// Labels of the generalized Nash equilibria, in profile order.
    fn nash(&self) -> Vec<String> {
        self.inner.nash_labels()
    }

    /// Labels of the selection equilibria, in profile order.
    fn selection(&self) -> Vec<String> {
        self.inner.selection_labels()
    }

    fn nash_count(&self) -> usize {
        self.inner.nash_count
    }

    fn selection_count(&self) -> usize {
        self.inner.selection_count
    }

    /// Render as "table", "csv" or "json", filtered to "nash",
    /// "selection" or "both" columns.
    #[pyo3(signature = (format = "table", kind = "both"))]
    fn render(&self, format: &str, kind: &str) -> PyResult<String> {
        Ok(render_report(
            &self.inner,
            parse_format(format)?,
            parse_kind(kind)?,
        ))
    }

    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "SolveResult(game={:?}, profiles={}, nash={}, selection={})",
            self.inner.game,
            self.inner.rows.len(),
            self.inner.nash_count,
            self.inner.selection_count
        )
    }
}

/// Solve a .hog file and return the rendered report in one call.
#[pyfunction]
#[pyo3(signature = (path, format = "table", kind = "both"))]
fn solve_file(path: &str, format: &str, kind: &str) -> PyResult<String> {
    let game = Game::from_file(path)?;
    let result = game.solve(None)?;
    result.render(format, kind)
}

#[pymodule]
fn hog_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Game>()?;
    m.add_class::<SolveResult>()?;
    m.add_function(wrap_pyfunction!(solve_file, m)?)?;
    Ok(())
}
