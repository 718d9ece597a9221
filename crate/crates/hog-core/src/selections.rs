//! The builtin zoo of agent descriptions.
//!
//! [`build`] elaborates a [`SelectionSpec`] against a move set and an
//! outcome set into an evaluable [`SelectionFunction`]. All validation is
//! done here, so the built functions evaluate without errors.
//!
//! Degenerate cases fall back to the full move set (a fixpoint agent with
//! no fixpoint available, a non-fixpoint agent facing only fixpoints, a
//! sub-maximal agent seeing fewer than two distinct values): the agent is
//! equally happy with any choice when no good choice exists. `Prefer` is
//! the exception: it is allowed to be empty-valued so it can serve as the
//! refining operand of `Lex`, and standalone use must pass the totality
//! check first.

use std::fmt;

use crate::core::{check_uniform_mode, Context, FiniteSet, OutcomeValue, PartialOrder, Symbol};
use crate::error::{Error, Result};
use crate::hof::SelectionFunction;

/// Description of a builtin agent, mirroring the gamedef `selspec` grammar.
#[derive(Clone, Debug)]
pub enum SelectionSpec {
    /// Moves whose outcome is not strictly dominated within the image.
    ArgmaxOrder(PartialOrder),
    /// Argmax over the dual order.
    ArgminOrder(PartialOrder),
    /// Moves maximising the k-th payoff coordinate (1-based, vector mode).
    ArgmaxCoord(usize),
    /// Moves minimising the k-th payoff coordinate.
    ArgminCoord(usize),
    /// Fixpoints of the context; the full move set when there are none.
    Fix,
    /// Non-fixpoints of the context; the full move set when there are none.
    NonFix,
    /// Moves hitting the second-largest distinct value (vector coordinate 1).
    SubMax,
    /// Preimage of a target set of outcomes. May be empty-valued.
    Prefer(FiniteSet<OutcomeValue>),
    /// `first ∩ second` when non-empty, otherwise `first`.
    Lex(Box<SelectionSpec>, Box<SelectionSpec>),
}

impl fmt::Display for SelectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionSpec::ArgmaxOrder(o) => {
                let pairs: Vec<String> = o
                    .strict_pairs()
                    .iter()
                    .map(|(a, b)| format!("{a} < {b}"))
                    .collect();
                write!(f, "argmax order({})", pairs.join(", "))
            }
            SelectionSpec::ArgminOrder(o) => {
                let pairs: Vec<String> = o
                    .strict_pairs()
                    .iter()
                    .map(|(a, b)| format!("{a} < {b}"))
                    .collect();
                write!(f, "argmin order({})", pairs.join(", "))
            }
            SelectionSpec::ArgmaxCoord(k) => write!(f, "argmax-coord {k}"),
            SelectionSpec::ArgminCoord(k) => write!(f, "argmin-coord {k}"),
            SelectionSpec::Fix => write!(f, "fix"),
            SelectionSpec::NonFix => write!(f, "nonfix"),
            SelectionSpec::SubMax => write!(f, "submax"),
            SelectionSpec::Prefer(ts) => {
                let names: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "prefer {{ {} }}", names.join(" "))
            }
            SelectionSpec::Lex(a, b) => write!(f, "lex( {a} , {b} )"),
        }
    }
}

/// Moves whose outcome is maximal within the image of the context:
/// `{ x | no r ∈ Im(p) with p(x) ≺ r }`. Never empty.
pub fn eval_argmax_order(order: &PartialOrder, p: &Context) -> Result<FiniteSet<Symbol>> {
    let maximal = order.maximal_elements(&p.image())?;
    Ok(FiniteSet::from_iter_dedup(
        p.entries()
            .filter(|(_, v)| maximal.contains(v))
            .map(|(m, _)| m.clone()),
    ))
}

fn eval_coord(k: usize, maximise: bool, p: &Context) -> Result<FiniteSet<Symbol>> {
    let mut best: Option<crate::core::Rational> = None;
    for (_, v) in p.entries() {
        let c = v.coord(k - 1).ok_or_else(|| {
            Error::ModeMismatch(format!("coordinate agent on non-vector outcome {v}"))
        })?;
        best = Some(match best {
            None => *c,
            Some(b) if (maximise && *c > b) || (!maximise && *c < b) => *c,
            Some(b) => b,
        });
    }
    let best = best.ok_or_else(|| Error::ModeMismatch("empty context".to_string()))?;
    Ok(FiniteSet::from_iter_dedup(
        p.entries()
            .filter(|(_, v)| v.coord(k - 1) == Some(&best))
            .map(|(m, _)| m.clone()),
    ))
}

/// Moves whose outcome has a maximal k-th coordinate (1-based).
pub fn eval_argmax_coord(k: usize, p: &Context) -> Result<FiniteSet<Symbol>> {
    eval_coord(k, true, p)
}

/// Moves whose outcome has a minimal k-th coordinate (1-based).
pub fn eval_argmin_coord(k: usize, p: &Context) -> Result<FiniteSet<Symbol>> {
    eval_coord(k, false, p)
}

/// Fixpoints `{ x | p(x) = x }`, or the full move set when there are none.
pub fn eval_fix(p: &Context) -> Result<FiniteSet<Symbol>> {
    let fixed = fixpoints(p)?;
    Ok(if fixed.is_empty() { p.domain().clone() } else { fixed })
}

/// Non-fixpoints `{ x | p(x) ≠ x }`, or the full move set when there are none.
pub fn eval_nonfix(p: &Context) -> Result<FiniteSet<Symbol>> {
    let fixed = fixpoints(p)?;
    let moving = FiniteSet::from_iter_dedup(
        p.domain().iter().filter(|m| !fixed.contains(m)).cloned(),
    );
    Ok(if moving.is_empty() { p.domain().clone() } else { moving })
}

fn fixpoints(p: &Context) -> Result<FiniteSet<Symbol>> {
    let mut out = Vec::new();
    for (m, v) in p.entries() {
        let sym = v.as_symbol().ok_or_else(|| {
            Error::FixDomainMismatch(format!("fixpoint agent on non-symbolic outcome {v}"))
        })?;
        if sym == m {
            out.push(m.clone());
        }
    }
    Ok(FiniteSet::from_iter_dedup(out))
}

/// Moves whose outcome carries the second-largest distinct first
/// coordinate of the image; every move when fewer than two distinct
/// values are attainable.
pub fn eval_submax(p: &Context) -> Result<FiniteSet<Symbol>> {
    let mut values: Vec<crate::core::Rational> = Vec::new();
    for (_, v) in p.entries() {
        let c = v
            .coord(0)
            .ok_or_else(|| Error::OrderNotTotal(format!("symbolic outcome {v} has no declared total order")))?;
        if !values.contains(c) {
            values.push(*c);
        }
    }
    if values.len() < 2 {
        return Ok(p.domain().clone());
    }
    values.sort();
    let submax = values[values.len() - 2];
    Ok(FiniteSet::from_iter_dedup(
        p.entries()
            .filter(|(_, v)| v.coord(0) == Some(&submax))
            .map(|(m, _)| m.clone()),
    ))
}

/// Sub-maximal choice over an explicit order, for symbolic outcomes.
/// The order must be total on the image of the context.
pub fn eval_submax_with_order(order: &PartialOrder, p: &Context) -> Result<FiniteSet<Symbol>> {
    let img = p.image();
    if !order.is_total_on(&img)? {
        return Err(Error::OrderNotTotal(format!("{img:?}")));
    }
    if img.len() < 2 {
        return Ok(p.domain().clone());
    }
    let top = order.maximal_elements(&img)?;
    let rest = FiniteSet::from_iter_dedup(img.iter().filter(|r| !top.contains(r)).cloned());
    let submax = order.maximal_elements(&rest)?;
    Ok(FiniteSet::from_iter_dedup(
        p.entries()
            .filter(|(_, v)| submax.contains(v))
            .map(|(m, _)| m.clone()),
    ))
}

/// Preimage of a target outcome set: `p⁻¹(targets)`. May be empty.
pub fn eval_prefer(targets: &FiniteSet<OutcomeValue>, p: &Context) -> FiniteSet<Symbol> {
    FiniteSet::from_iter_dedup(
        p.entries()
            .filter(|(_, v)| targets.contains(v))
            .map(|(m, _)| m.clone()),
    )
}

/// `first(p) ∩ second(p)` when non-empty, otherwise `first(p)`:
/// the first component takes priority, the second breaks ties.
pub fn eval_lex(
    first: &SelectionFunction,
    second: &SelectionFunction,
    p: &Context,
) -> Result<FiniteSet<Symbol>> {
    if !first.moves().same_elements(second.moves())
        || !first.outcomes().same_elements(second.outcomes())
    {
        return Err(Error::DomainMismatch(
            "lex operands over different move/outcome sets".to_string(),
        ));
    }
    let a = first.eval(p);
    let both = a.intersect(&second.eval(p));
    Ok(if both.is_empty() { a } else { both })
}

/// Validates `spec` against the move and outcome sets and returns the
/// selection function implementing it.
pub fn build(
    spec: &SelectionSpec,
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
) -> Result<SelectionFunction> {
    let arity = check_uniform_mode(outcomes)?;
    let describe = spec.to_string();
    match spec {
        SelectionSpec::ArgmaxOrder(order) | SelectionSpec::ArgminOrder(order) => {
            for r in outcomes {
                if !order.carrier().contains(r) {
                    return Err(Error::UnknownSymbol(format!(
                        "outcome {r} is not in the order's carrier"
                    )));
                }
            }
            let order = if matches!(spec, SelectionSpec::ArgminOrder(_)) {
                order.dual()
            } else {
                order.clone()
            };
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| {
                    eval_argmax_order(&order, p)
                        .expect("context value outside the declared outcome set")
                },
            ))
        }
        SelectionSpec::ArgmaxCoord(k) | SelectionSpec::ArgminCoord(k) => {
            let arity = arity.ok_or_else(|| {
                Error::ModeMismatch(format!("{describe} needs vector outcomes"))
            })?;
            if *k < 1 || *k > arity {
                return Err(Error::BadCoordinate { k: *k, arity });
            }
            let k = *k;
            let maximise = matches!(spec, SelectionSpec::ArgmaxCoord(_));
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| eval_coord(k, maximise, p).expect("arity checked at build"),
            ))
        }
        SelectionSpec::Fix | SelectionSpec::NonFix => {
            if arity.is_some() || !moves.to_outcomes().same_elements(outcomes) {
                return Err(Error::FixDomainMismatch(format!(
                    "{describe} needs the move set to equal the outcome set, got moves {moves:?} and outcomes {outcomes:?}"
                )));
            }
            let fixish = matches!(spec, SelectionSpec::Fix);
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| {
                    if fixish {
                        eval_fix(p).expect("symbolic mode checked at build")
                    } else {
                        eval_nonfix(p).expect("symbolic mode checked at build")
                    }
                },
            ))
        }
        SelectionSpec::SubMax => {
            if arity.is_none() {
                return Err(Error::OrderNotTotal(
                    "submax needs vector outcomes (ordered by coordinate 1); symbolic outcomes have no declared total order".to_string(),
                ));
            }
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| eval_submax(p).expect("vector mode checked at build"),
            ))
        }
        SelectionSpec::Prefer(targets) => {
            for t in targets {
                if !outcomes.contains(t) {
                    return Err(Error::UnknownSymbol(format!(
                        "prefer target {t} is not a declared outcome"
                    )));
                }
            }
            let targets = targets.clone();
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| eval_prefer(&targets, p),
            ))
        }
        SelectionSpec::Lex(first, second) => {
            let a = build(first, moves, outcomes)?;
            let b = build(second, moves, outcomes)?;
            Ok(SelectionFunction::from_fn(
                moves.clone(),
                outcomes.clone(),
                describe,
                move |p| eval_lex(&a, &b, p).expect("operands share domains by construction"),
            ))
        }
    }
}
