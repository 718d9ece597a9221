//! Selection functions, quantifiers, the induced conversions between them,
//! and the decidable checks over finite context spaces.
//!
//! A context for an agent choosing from moves `X` with outcomes in `R` is a
//! total map `p : X -> R`. A selection function maps contexts to sets of
//! good moves, a quantifier maps contexts to sets of good outcomes. Over
//! finite `X` and `R` the defining properties (totality, attainment,
//! realism, context independence) quantify over the full context space
//! `R^X`, so they are decidable by enumeration; every check takes a budget
//! and fails with [`Error::BudgetExceeded`] beyond it.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::core::{Context, FiniteSet, OutcomeValue, PartialOrder, Symbol};
use crate::error::{Error, Result};

/// Default ceiling on the number of contexts a checker may enumerate.
pub const DEFAULT_CONTEXT_BUDGET: u64 = 1_000_000;

type SelectionEval = Arc<dyn Fn(&Context) -> FiniteSet<Symbol> + Send + Sync>;
type QuantifierEval = Arc<dyn Fn(&Context) -> FiniteSet<OutcomeValue> + Send + Sync>;

/// A total set-valued map from contexts to moves: the agent's preferred
/// strategies in each context.
///
/// Evaluation must be pure; results are clamped to the declared move set.
#[derive(Clone)]
pub struct SelectionFunction {
    moves: FiniteSet<Symbol>,
    outcomes: FiniteSet<OutcomeValue>,
    describe: String,
    eval_fn: SelectionEval,
}

impl SelectionFunction {
    pub fn from_fn<F>(
        moves: FiniteSet<Symbol>,
        outcomes: FiniteSet<OutcomeValue>,
        describe: impl Into<String>,
        f: F,
    ) -> Self
    where
        F: Fn(&Context) -> FiniteSet<Symbol> + Send + Sync + 'static,
    {
        SelectionFunction {
            moves,
            outcomes,
            describe: describe.into(),
            eval_fn: Arc::new(f),
        }
    }

    pub fn moves(&self) -> &FiniteSet<Symbol> {
        &self.moves
    }

    pub fn outcomes(&self) -> &FiniteSet<OutcomeValue> {
        &self.outcomes
    }

    pub fn description(&self) -> &str {
        &self.describe
    }

    pub fn eval(&self, p: &Context) -> FiniteSet<Symbol> {
        let raw = (self.eval_fn)(p);
        if raw.iter().all(|m| self.moves.contains(m)) {
            raw
        } else {
            FiniteSet::from_iter_dedup(raw.iter().filter(|m| self.moves.contains(m)).cloned())
        }
    }
}

impl fmt::Debug for SelectionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SelectionFunction({})", self.describe)
    }
}

/// A total set-valued map from contexts to outcomes: the outcomes the agent
/// considers good in each context.
#[derive(Clone)]
pub struct Quantifier {
    moves: FiniteSet<Symbol>,
    outcomes: FiniteSet<OutcomeValue>,
    describe: String,
    eval_fn: QuantifierEval,
}

impl Quantifier {
    pub fn from_fn<F>(
        moves: FiniteSet<Symbol>,
        outcomes: FiniteSet<OutcomeValue>,
        describe: impl Into<String>,
        f: F,
    ) -> Self
    where
        F: Fn(&Context) -> FiniteSet<OutcomeValue> + Send + Sync + 'static,
    {
        Quantifier {
            moves,
            outcomes,
            describe: describe.into(),
            eval_fn: Arc::new(f),
        }
    }

    pub fn moves(&self) -> &FiniteSet<Symbol> {
        &self.moves
    }

    pub fn outcomes(&self) -> &FiniteSet<OutcomeValue> {
        &self.outcomes
    }

    pub fn description(&self) -> &str {
        &self.describe
    }

    pub fn eval(&self, p: &Context) -> FiniteSet<OutcomeValue> {
        let raw = (self.eval_fn)(p);
        if raw.iter().all(|r| self.outcomes.contains(r)) {
            raw
        } else {
            FiniteSet::from_iter_dedup(raw.iter().filter(|r| self.outcomes.contains(r)).cloned())
        }
    }
}

impl fmt::Debug for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quantifier({})", self.describe)
    }
}

/// The smallest quantifier attained by `e`: `p ↦ { p(x) | x ∈ e(p) }`.
pub fn induced_quantifier(e: &SelectionFunction) -> Quantifier {
    let inner = e.clone();
    Quantifier::from_fn(
        e.moves.clone(),
        e.outcomes.clone(),
        format!("induced({})", e.describe),
        move |p| FiniteSet::from_iter_dedup(inner.eval(p).iter().map(|m| p.value_of(m).expect("move in domain").clone())),
    )
}

/// The largest selection function attaining `q`: `p ↦ { x | p(x) ∈ q(p) }`.
///
/// The result may be empty-valued when `q` is not attainable; callers that
/// want an agent must check [`is_total`] first.
pub fn induced_selection(q: &Quantifier) -> SelectionFunction {
    let inner = q.clone();
    SelectionFunction::from_fn(
        q.moves.clone(),
        q.outcomes.clone(),
        format!("induced({})", q.describe),
        move |p| {
            let good = inner.eval(p);
            FiniteSet::from_iter_dedup(
                p.domain()
                    .iter()
                    .filter(|m| good.contains(p.value_of(m).expect("move in domain")))
                    .cloned(),
            )
        },
    )
}

/// Anything evaluable over a finite context space. Implemented by
/// [`SelectionFunction`] and [`Quantifier`] so the checks below work on both.
pub trait ContextMap: Sync {
    fn context_moves(&self) -> &FiniteSet<Symbol>;
    fn context_outcomes(&self) -> &FiniteSet<OutcomeValue>;
    fn nonempty_on(&self, p: &Context) -> bool;
}

impl ContextMap for SelectionFunction {
    fn context_moves(&self) -> &FiniteSet<Symbol> {
        &self.moves
    }
    fn context_outcomes(&self) -> &FiniteSet<OutcomeValue> {
        &self.outcomes
    }
    fn nonempty_on(&self, p: &Context) -> bool {
        !self.eval(p).is_empty()
    }
}

impl ContextMap for Quantifier {
    fn context_moves(&self) -> &FiniteSet<Symbol> {
        &self.moves
    }
    fn context_outcomes(&self) -> &FiniteSet<OutcomeValue> {
        &self.outcomes
    }
    fn nonempty_on(&self, p: &Context) -> bool {
        !self.eval(p).is_empty()
    }
}

/// The full finite space of contexts `moves -> outcomes`, enumerable by
/// index. Context `k` assigns move `i` the outcome whose index is the
/// `i`-th digit of `k` in base `|outcomes|`.
pub struct ContextSpace {
    moves: FiniteSet<Symbol>,
    outcomes: FiniteSet<OutcomeValue>,
    size: u64,
}

impl ContextSpace {
    pub fn new(
        moves: &FiniteSet<Symbol>,
        outcomes: &FiniteSet<OutcomeValue>,
        budget: u64,
    ) -> Result<ContextSpace> {
        let size = (outcomes.len() as u128).checked_pow(moves.len() as u32);
        match size {
            Some(s) if s <= budget as u128 => Ok(ContextSpace {
                moves: moves.clone(),
                outcomes: outcomes.clone(),
                size: s as u64,
            }),
            Some(s) => Err(Error::BudgetExceeded {
                what: "context",
                size: s,
                budget,
            }),
            None => Err(Error::BudgetExceeded {
                what: "context",
                size: u128::MAX,
                budget,
            }),
        }
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Outcome indices assigned by context `k`, one per move.
    fn digits(&self, k: u64) -> Vec<usize> {
        let base = self.outcomes.len() as u64;
        let mut rest = k;
        let mut digits = vec![0usize; self.moves.len()];
        for d in digits.iter_mut().rev() {
            *d = (rest % base) as usize;
            rest /= base;
        }
        digits
    }

    pub fn context_at(&self, k: u64) -> Context {
        let values = self
            .digits(k)
            .into_iter()
            .map(|d| self.outcomes.get(d).clone())
            .collect();
        Context::new(self.moves.clone(), values).expect("lengths match by construction")
    }

    /// Image of context `k` as a sorted set of outcome indices.
    fn image_key(&self, k: u64) -> Vec<usize> {
        let mut digits = self.digits(k);
        digits.sort_unstable();
        digits.dedup();
        digits
    }
}

fn check_same_domains(e: &SelectionFunction, q: &Quantifier) -> Result<()> {
    if !e.moves.same_elements(&q.moves) || !e.outcomes.same_elements(&q.outcomes) {
        return Err(Error::DomainMismatch(format!(
            "{} and {} are over different move/outcome sets",
            e.describe, q.describe
        )));
    }
    Ok(())
}

/// Whether `f` returns a non-empty set on every context in the full space.
pub fn is_total<F: ContextMap>(f: &F, budget: u64) -> Result<bool> {
    let space = ContextSpace::new(f.context_moves(), f.context_outcomes(), budget)?;
    Ok((0..space.len())
        .into_par_iter()
        .all(|k| f.nonempty_on(&space.context_at(k))))
}

/// Whether every good move's outcome is a good outcome:
/// `x ∈ e(p)  ⟹  p(x) ∈ q(p)` for all contexts `p`.
pub fn attains(e: &SelectionFunction, q: &Quantifier, budget: u64) -> Result<bool> {
    check_same_domains(e, q)?;
    let space = ContextSpace::new(&e.moves, &e.outcomes, budget)?;
    Ok((0..space.len()).into_par_iter().all(|k| {
        let p = space.context_at(k);
        let good_outcomes = q.eval(&p);
        e.eval(&p)
            .iter()
            .all(|m| good_outcomes.contains(p.value_of(m).expect("move in domain")))
    }))
}

/// Whether every context with a good outcome has an attainable one:
/// `q(p) ≠ ∅  ⟹  q(p) ∩ Im(p) ≠ ∅`.
pub fn is_realistic(q: &Quantifier, budget: u64) -> Result<bool> {
    let space = ContextSpace::new(&q.moves, &q.outcomes, budget)?;
    Ok((0..space.len()).into_par_iter().all(|k| {
        let p = space.context_at(k);
        let good = q.eval(&p);
        good.is_empty() || good.iter().any(|r| p.image().contains(r))
    }))
}

/// Whether `q` depends only on the image of its context: contexts with
/// equal images get equal values.
pub fn is_context_independent(q: &Quantifier, budget: u64) -> Result<bool> {
    let space = ContextSpace::new(&q.moves, &q.outcomes, budget)?;
    let mut seen: HashMap<Vec<usize>, FiniteSet<OutcomeValue>> = HashMap::new();
    for k in 0..space.len() {
        let value = q.eval(&space.context_at(k));
        match seen.entry(space.image_key(k)) {
            std::collections::hash_map::Entry::Occupied(prev) => {
                if !prev.get().same_elements(&value) {
                    return Ok(false);
                }
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(value);
            }
        }
    }
    Ok(true)
}

/// Maximisation over a partial order: the maximal elements of the image.
pub fn max_quantifier(moves: &FiniteSet<Symbol>, order: &PartialOrder) -> Quantifier {
    let order = order.clone();
    Quantifier::from_fn(
        moves.clone(),
        order.carrier().clone(),
        format!("max{:?}", order),
        move |p| {
            order
                .maximal_elements(&p.image())
                .expect("image within carrier")
        },
    )
}

/// Minimisation over a partial order: maximisation over its dual.
pub fn min_quantifier(moves: &FiniteSet<Symbol>, order: &PartialOrder) -> Quantifier {
    let dual = order.dual();
    Quantifier::from_fn(
        moves.clone(),
        order.carrier().clone(),
        format!("min{:?}", order),
        move |p| dual.maximal_elements(&p.image()).expect("image within carrier"),
    )
}

/// Coordinate maximisation over vector outcomes:
/// `{ r ∈ Im(p) | r_k is maximal }` with `k` 1-based.
pub fn coord_max_quantifier(
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
    k: usize,
) -> Quantifier {
    Quantifier::from_fn(
        moves.clone(),
        outcomes.clone(),
        format!("max-coord {k}"),
        move |p| {
            let img = p.image();
            let best = img.iter().filter_map(|r| r.coord(k - 1)).max().cloned();
            match best {
                Some(best) => FiniteSet::from_iter_dedup(
                    img.iter().filter(|r| r.coord(k - 1) == Some(&best)).cloned(),
                ),
                None => FiniteSet::empty(),
            }
        },
    )
}

/// The fixpoint quantifier over a shared move/outcome alphabet: the
/// fixpoints of the context, or every outcome when none exist.
pub fn fix_quantifier(alphabet: &FiniteSet<Symbol>) -> Quantifier {
    let outcomes = alphabet.to_outcomes();
    let all = outcomes.clone();
    Quantifier::from_fn(alphabet.clone(), outcomes, "fix", move |p| {
        let fixed = FiniteSet::from_iter_dedup(
            p.entries()
                .filter(|(m, v)| v.as_symbol() == Some(m))
                .map(|(_, v)| v.clone()),
        );
        if fixed.is_empty() {
            all.clone()
        } else {
            fixed
        }
    })
}

/// The bare non-fixpoint quantifier `{ p(x) | x ≠ p(x) }`, with no
/// completion: empty on the identity context.
pub fn nonfix_quantifier(alphabet: &FiniteSet<Symbol>) -> Quantifier {
    Quantifier::from_fn(alphabet.clone(), alphabet.to_outcomes(), "non-fix", |p| {
        FiniteSet::from_iter_dedup(
            p.entries()
                .filter(|(m, v)| v.as_symbol() != Some(m))
                .map(|(_, v)| v.clone()),
        )
    })
}

/// The quantifier that accepts every attainable outcome.
pub fn image_quantifier(moves: &FiniteSet<Symbol>, outcomes: &FiniteSet<OutcomeValue>) -> Quantifier {
    Quantifier::from_fn(moves.clone(), outcomes.clone(), "image", |p| p.image())
}

/// The quantifier with a fixed value on every context.
pub fn constant_quantifier(
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
    value: FiniteSet<OutcomeValue>,
) -> Quantifier {
    Quantifier::from_fn(
        moves.clone(),
        outcomes.clone(),
        format!("const{value:?}"),
        move |_| value.clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::transitive_closure_order;
    use crate::selections::{self, SelectionSpec};

    fn syms(names: &[&str]) -> FiniteSet<Symbol> {
        FiniteSet::new(names.iter().map(|n| Symbol::new(n).unwrap()).collect()).unwrap()
    }

    fn o(name: &str) -> OutcomeValue {
        OutcomeValue::Sym(Symbol::new(name).unwrap())
    }

    fn ctx(dom: &FiniteSet<Symbol>, values: &[&str]) -> Context {
        Context::new(dom.clone(), values.iter().map(|v| o(v)).collect()).unwrap()
    }

    fn b_below_a() -> PartialOrder {
        transitive_closure_order(syms(&["A", "B"]).to_outcomes(), &[(o("B"), o("A"))]).unwrap()
    }

    fn argmax_ab() -> SelectionFunction {
        selections::build(
            &SelectionSpec::ArgmaxOrder(b_below_a()),
            &syms(&["A", "B"]),
            &syms(&["A", "B"]).to_outcomes(),
        )
        .unwrap()
    }

    fn fix_ab() -> SelectionFunction {
        selections::build(
            &SelectionSpec::Fix,
            &syms(&["A", "B"]),
            &syms(&["A", "B"]).to_outcomes(),
        )
        .unwrap()
    }

    #[test]
    fn induced_quantifier_of_argmax_on_constant_context() {
        let dom = syms(&["A", "B"]);
        // maj(x, B, B) is the constant-B context.
        let p = ctx(&dom, &["B", "B"]);
        let e = argmax_ab();
        assert_eq!(e.eval(&p), syms(&["A", "B"]));
        assert_eq!(induced_quantifier(&e).eval(&p), FiniteSet::new(vec![o("B")]).unwrap());
    }

    #[test]
    fn induced_quantifier_of_fix_on_constant_context() {
        let dom = syms(&["A", "B"]);
        let p = ctx(&dom, &["A", "A"]);
        assert_eq!(
            induced_quantifier(&fix_ab()).eval(&p),
            FiniteSet::new(vec![o("A")]).unwrap()
        );
    }

    #[test]
    fn induced_quantifier_of_full_selection_is_image() {
        let dom = syms(&["A", "B"]);
        let full = SelectionFunction::from_fn(
            dom.clone(),
            dom.to_outcomes(),
            "all-moves",
            |p: &Context| p.domain().clone(),
        );
        let p = ctx(&dom, &["A", "B"]);
        assert_eq!(induced_quantifier(&full).eval(&p), dom.to_outcomes());
    }

    #[test]
    fn induced_selection_of_max_on_identity_and_constant() {
        let dom = syms(&["A", "B"]);
        let q = max_quantifier(&dom, &b_below_a());
        let sel = induced_selection(&q);
        assert_eq!(sel.eval(&ctx(&dom, &["A", "B"])), syms(&["A"]));
        // Constant-B context: the only attainable maximal outcome is B,
        // so both moves hit it.
        assert_eq!(sel.eval(&ctx(&dom, &["B", "B"])), syms(&["A", "B"]));
    }

    #[test]
    fn induced_selection_of_empty_quantifier_is_empty() {
        let dom = syms(&["A", "B"]);
        let q = constant_quantifier(&dom, &dom.to_outcomes(), FiniteSet::empty());
        assert!(induced_selection(&q).eval(&ctx(&dom, &["A", "B"])).is_empty());
    }

    #[test]
    fn totality_of_fix_with_and_without_fallback() {
        let dom = syms(&["A", "B"]);
        assert!(is_total(&fix_ab(), DEFAULT_CONTEXT_BUDGET).unwrap());
        let bare = SelectionFunction::from_fn(
            dom.clone(),
            dom.to_outcomes(),
            "bare-fix",
            |p: &Context| {
                FiniteSet::from_iter_dedup(
                    p.entries()
                        .filter(|(m, v)| v.as_symbol() == Some(*m))
                        .map(|(m, _)| m.clone()),
                )
            },
        );
        // The swap context has no fixpoint.
        assert!(!is_total(&bare, DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn totality_of_argmax_by_enumeration() {
        assert!(is_total(&argmax_ab(), DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let err = is_total(&argmax_ab(), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { size: 4, .. }));
    }

    #[test]
    fn argmax_attains_max() {
        let dom = syms(&["A", "B"]);
        let q = max_quantifier(&dom, &b_below_a());
        assert!(attains(&argmax_ab(), &q, DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn fix_attains_itself() {
        let dom = syms(&["A", "B"]);
        assert!(attains(&fix_ab(), &fix_quantifier(&dom), DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn nonfix_with_fallback_does_not_attain_bare_nonfix() {
        let dom = syms(&["A", "B"]);
        let e = selections::build(&SelectionSpec::NonFix, &dom, &dom.to_outcomes()).unwrap();
        let q = nonfix_quantifier(&dom);
        assert!(!attains(&e, &q, DEFAULT_CONTEXT_BUDGET).unwrap());
        // Witness: on the identity context the fallback picks fixpoints.
        let id = ctx(&dom, &["A", "B"]);
        assert_eq!(e.eval(&id), dom);
        assert!(q.eval(&id).is_empty());
    }

    #[test]
    fn attains_requires_matching_domains() {
        let q = fix_quantifier(&syms(&["A", "B", "C"]));
        assert!(matches!(
            attains(&fix_ab(), &q, DEFAULT_CONTEXT_BUDGET),
            Err(Error::DomainMismatch(_))
        ));
    }

    #[test]
    fn realism_examples() {
        let dom = syms(&["A", "B"]);
        let q = max_quantifier(&dom, &b_below_a());
        assert!(is_realistic(&q, DEFAULT_CONTEXT_BUDGET).unwrap());

        // Constant {A} over X = {B}: the context p ≡ B leaves A unattainable.
        let forced = constant_quantifier(
            &syms(&["B"]),
            &syms(&["A", "B"]).to_outcomes(),
            FiniteSet::new(vec![o("A")]).unwrap(),
        );
        assert!(!is_realistic(&forced, DEFAULT_CONTEXT_BUDGET).unwrap());

        let img = image_quantifier(&dom, &dom.to_outcomes());
        assert!(is_realistic(&img, DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn context_independence_examples() {
        let dom = syms(&["A", "B"]);
        assert!(is_context_independent(
            &max_quantifier(&dom, &b_below_a()),
            DEFAULT_CONTEXT_BUDGET
        )
        .unwrap());
        assert!(is_context_independent(
            &image_quantifier(&dom, &dom.to_outcomes()),
            DEFAULT_CONTEXT_BUDGET
        )
        .unwrap());
        // On a two-element alphabet the fallback hides the dependence: the
        // identity and the swap share the image {A,B} and both evaluate to
        // {A,B}. Three elements witness it, e.g. (B,A,A) vs (A,A,B).
        let abc = syms(&["A", "B", "C"]);
        assert!(!is_context_independent(&fix_quantifier(&abc), DEFAULT_CONTEXT_BUDGET).unwrap());
        assert!(is_context_independent(&fix_quantifier(&dom), DEFAULT_CONTEXT_BUDGET).unwrap());
    }

    #[test]
    fn coord_max_is_context_independent() {
        use crate::core::Rational;
        let dom = syms(&["L", "R"]);
        let outs = FiniteSet::new(vec![
            OutcomeValue::vec(vec![Rational::from(0), Rational::from(1)]),
            OutcomeValue::vec(vec![Rational::from(1), Rational::from(0)]),
        ])
        .unwrap();
        let q = coord_max_quantifier(&dom, &outs, 1);
        assert!(is_context_independent(&q, DEFAULT_CONTEXT_BUDGET).unwrap());
        assert!(is_realistic(&q, DEFAULT_CONTEXT_BUDGET).unwrap());
    }
}
