#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use hog_core::core::{
    transitive_closure_order, Context, FiniteSet, OutcomeValue, PartialOrder, Rational,
    StrategyProfile, Symbol,
};
use hog_core::engine::{AgentDecl, Game, GameConfig, OutcomeDecl, OutcomeTableSource};
use hog_core::gamedef;
use hog_core::hof::{
    constant_quantifier, fix_quantifier, image_quantifier, max_quantifier, min_quantifier,
    nonfix_quantifier, ContextSpace, Quantifier, SelectionFunction, DEFAULT_CONTEXT_BUDGET,
};
use hog_core::selections::{self, SelectionSpec};
use rand::Rng;

pub const SYMS: [&str; 4] = ["A", "B", "C", "D"];

pub fn symbol_universe(n: usize) -> FiniteSet<Symbol> {
    syms(&SYMS[..n])
}

/// Move/outcome universes with |X|, |R| <= 3, symbolic mode.
pub fn universes() -> Vec<(FiniteSet<Symbol>, FiniteSet<OutcomeValue>)> {
    let mut out = Vec::new();
    for nx in 1..=3usize {
        for nr in 1..=3usize {
            let moves = syms(&["x1", "x2", "x3"][..nx]);
            out.push((moves, symbol_universe(nr).to_outcomes()));
        }
    }
    // Shared-alphabet universes, where fixpoint agents are meaningful.
    for n in 1..=3usize {
        let alphabet = symbol_universe(n);
        out.push((alphabet.clone(), alphabet.to_outcomes()));
    }
    out
}

/// Every strict partial order on the given carrier, by filtering all
/// candidate pair sets through the transitive-closure constructor.
pub fn all_orders(carrier: &FiniteSet<OutcomeValue>) -> Vec<PartialOrder> {
    let n = carrier.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                pairs.push((carrier.get(i).clone(), carrier.get(j).clone()));
            }
        }
    }
    let mut orders = Vec::new();
    for mask in 0..(1u32 << pairs.len()) {
        let chosen: Vec<(OutcomeValue, OutcomeValue)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, p)| p.clone())
            .collect();
        if let Ok(order) = transitive_closure_order(carrier.clone(), &chosen) {
            if !orders.contains(&order) {
                orders.push(order);
            }
        }
    }
    orders
}

pub fn nonempty_subsets(set: &FiniteSet<OutcomeValue>) -> Vec<FiniteSet<OutcomeValue>> {
    let n = set.len();
    (1..(1u32 << n))
        .map(|mask| {
            FiniteSet::from_iter_dedup(
                set.iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) != 0)
                    .map(|(_, v)| v.clone()),
            )
        })
        .collect()
}

/// The builtin selection zoo instantiated over one universe.
pub fn zoo_selections(
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
) -> Vec<SelectionFunction> {
    let mut specs: Vec<SelectionSpec> = Vec::new();
    let orders = all_orders(outcomes);
    for order in &orders {
        specs.push(SelectionSpec::ArgmaxOrder(order.clone()));
        specs.push(SelectionSpec::ArgminOrder(order.clone()));
    }
    if moves.to_outcomes().same_elements(outcomes) {
        specs.push(SelectionSpec::Fix);
        specs.push(SelectionSpec::NonFix);
    }
    for targets in nonempty_subsets(outcomes) {
        specs.push(SelectionSpec::Prefer(targets));
    }
    if let Some(first) = orders.first() {
        for targets in nonempty_subsets(outcomes) {
            specs.push(SelectionSpec::Lex(
                Box::new(SelectionSpec::ArgmaxOrder(first.clone())),
                Box::new(SelectionSpec::Prefer(targets)),
            ));
        }
    }
    specs
        .iter()
        .map(|s| selections::build(s, moves, outcomes).expect("zoo specs are well-formed"))
        .collect()
}

/// The builtin quantifier zoo instantiated over one universe.
pub fn zoo_quantifiers(
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
) -> Vec<Quantifier> {
    let mut out = vec![image_quantifier(moves, outcomes)];
    for order in all_orders(outcomes) {
        out.push(max_quantifier(moves, &order));
        out.push(min_quantifier(moves, &order));
    }
    if moves.to_outcomes().same_elements(outcomes) {
        out.push(fix_quantifier(moves));
        out.push(nonfix_quantifier(moves));
    }
    for value in nonempty_subsets(outcomes) {
        out.push(constant_quantifier(moves, outcomes, value));
    }
    out
}

pub fn context_key(p: &Context, outcomes: &FiniteSet<OutcomeValue>) -> Vec<usize> {
    p.domain()
        .iter()
        .map(|m| {
            outcomes
                .index_of(p.value_of(m).expect("total"))
                .expect("value in outcome set")
        })
        .collect()
}

pub fn every_context(
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
) -> Vec<Context> {
    let space = ContextSpace::new(moves, outcomes, DEFAULT_CONTEXT_BUDGET).unwrap();
    (0..space.len()).map(|k| space.context_at(k)).collect()
}

/// A deterministic random quantifier given by a lookup table. With
/// `image_valued` the value at each context is a nonempty subset of that
/// context's image; otherwise any nonempty subset of the outcome set,
/// which need not be realistic.
pub fn tabulated_quantifier<R: Rng>(
    rng: &mut R,
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
    image_valued: bool,
) -> Quantifier {
    let mut table: HashMap<Vec<usize>, FiniteSet<OutcomeValue>> = HashMap::new();
    for p in every_context(moves, outcomes) {
        let pool: Vec<OutcomeValue> = if image_valued {
            p.image().iter().cloned().collect()
        } else {
            outcomes.iter().cloned().collect()
        };
        let value = loop {
            let picked: Vec<OutcomeValue> =
                pool.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
            if !picked.is_empty() {
                break FiniteSet::from_iter_dedup(picked);
            }
        };
        table.insert(context_key(&p, outcomes), value);
    }
    let key_outcomes = outcomes.clone();
    Quantifier::from_fn(moves.clone(), outcomes.clone(), "tabulated", move |p| {
        table[&context_key(p, &key_outcomes)].clone()
    })
}

pub fn tabulated_selection<R: Rng>(
    rng: &mut R,
    moves: &FiniteSet<Symbol>,
    outcomes: &FiniteSet<OutcomeValue>,
) -> SelectionFunction {
    let mut table: HashMap<Vec<usize>, FiniteSet<Symbol>> = HashMap::new();
    for p in every_context(moves, outcomes) {
        let picked: Vec<Symbol> = moves
            .iter()
            .filter(|_| rng.random_bool(0.6))
            .cloned()
            .collect();
        table.insert(context_key(&p, outcomes), FiniteSet::from_iter_dedup(picked));
    }
    let key_outcomes = outcomes.clone();
    SelectionFunction::from_fn(moves.clone(), outcomes.clone(), "tabulated", move |p| {
        table[&context_key(p, &key_outcomes)].clone()
    })
}

pub const BUNDLED: [&str; 8] = [
    "keynes_max_max_min",
    "keynes_max_fix_fix",
    "coordination",
    "anticoordination",
    "bos_classic",
    "bos_extended",
    "bos_qualitative",
    "compile_table_hand",
];

pub fn games_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("games")
}

pub fn load_bundled(name: &str) -> Game {
    let path = games_dir().join(format!("{name}.hog"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    let game = gamedef::load_game(&text)
        .unwrap_or_else(|d| panic!("loading {name}: {d}"));
    game.validate_agent_totality()
        .unwrap_or_else(|e| panic!("{name}: {e}"));
    game
}

pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap()
}

pub fn syms(names: &[&str]) -> FiniteSet<Symbol> {
    FiniteSet::new(names.iter().map(|n| sym(n)).collect()).unwrap()
}

pub fn o(name: &str) -> OutcomeValue {
    OutcomeValue::Sym(sym(name))
}

pub fn profile(names: &[&str]) -> StrategyProfile {
    StrategyProfile::new(names.iter().map(|n| sym(n)).collect())
}

pub fn labels(profiles: &[&StrategyProfile]) -> Vec<String> {
    profiles.iter().map(|p| p.label()).collect()
}

/// A random strict partial order on the given outcomes: pairs are drawn
/// along a random permutation, so the result is acyclic by construction.
pub fn random_order<R: Rng>(rng: &mut R, outcomes: &FiniteSet<OutcomeValue>) -> PartialOrder {
    let mut perm: Vec<&OutcomeValue> = outcomes.iter().collect();
    for i in (1..perm.len()).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let mut pairs = Vec::new();
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if rng.random_bool(0.4) {
                pairs.push((perm[i].clone(), perm[j].clone()));
            }
        }
    }
    transitive_closure_order(outcomes.clone(), &pairs).expect("acyclic by construction")
}

fn random_nonempty_subset<R: Rng>(
    rng: &mut R,
    outcomes: &FiniteSet<OutcomeValue>,
) -> FiniteSet<OutcomeValue> {
    loop {
        let picked: Vec<OutcomeValue> = outcomes
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .cloned()
            .collect();
        if !picked.is_empty() {
            return FiniteSet::from_iter_dedup(picked);
        }
    }
}

/// A random total-over-reachable-contexts agent kind for a game whose
/// move set equals its outcome alphabet.
pub fn random_agent_kind<R: Rng>(
    rng: &mut R,
    outcomes: &FiniteSet<OutcomeValue>,
) -> SelectionSpec {
    match rng.random_range(0..7) {
        0 => SelectionSpec::ArgmaxOrder(random_order(rng, outcomes)),
        1 => SelectionSpec::ArgminOrder(random_order(rng, outcomes)),
        2 => SelectionSpec::Fix,
        3 => SelectionSpec::NonFix,
        4 => SelectionSpec::Lex(
            Box::new(SelectionSpec::ArgmaxOrder(random_order(rng, outcomes))),
            Box::new(SelectionSpec::Prefer(random_nonempty_subset(rng, outcomes))),
        ),
        5 => SelectionSpec::Lex(
            Box::new(SelectionSpec::Fix),
            Box::new(SelectionSpec::Prefer(random_nonempty_subset(rng, outcomes))),
        ),
        _ => SelectionSpec::Prefer(FiniteSet::from_iter_dedup(outcomes.iter().cloned())),
    }
}

/// A random three-player symbolic game over a shared 2- or 3-symbol
/// alphabet, with a uniformly random outcome table and random agent kinds.
pub fn random_symbolic_game<R: Rng>(rng: &mut R, name: &str) -> Game {
    let alphabet = if rng.random_bool(0.5) {
        syms(&["A", "B"])
    } else {
        syms(&["A", "B", "C"])
    };
    let outcomes = alphabet.to_outcomes();
    let s = alphabet.len();
    let mut rows = Vec::new();
    for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                let value = outcomes.get(rng.random_range(0..s)).clone();
                rows.push((
                    vec![
                        alphabet.get(a).clone(),
                        alphabet.get(b).clone(),
                        alphabet.get(c).clone(),
                    ],
                    value,
                ));
            }
        }
    }
    let agents = (0..3)
        .map(|_| AgentDecl::Spec(random_agent_kind(rng, &outcomes)))
        .collect();
    let game = Game::build(GameConfig {
        name: name.to_string(),
        players: vec!["J1".into(), "J2".into(), "J3".into()],
        move_sets: vec![alphabet.clone(), alphabet.clone(), alphabet],
        outcomes: OutcomeDecl::Symbolic(outcomes),
        rule: OutcomeTableSource::Rows(rows),
        agents,
    })
    .expect("random symbolic game is well-formed");
    game.validate_agent_totality()
        .expect("chosen agent kinds are total");
    game
}

/// A random 2- or 3-player vector-mode game with small integer payoffs
/// and own-coordinate maximisers, the classical strategic case.
pub fn random_vector_game<R: Rng>(rng: &mut R, name: &str) -> Game {
    let n = rng.random_range(2..=3);
    let labels = ["a", "b", "c"];
    let move_sets: Vec<FiniteSet<Symbol>> = (0..n)
        .map(|_| {
            let count = rng.random_range(2..=3);
            syms(&labels[..count])
        })
        .collect();
    let mut rows = Vec::new();
    let mut digits = vec![0usize; n];
    loop {
        let profile: Vec<Symbol> = digits
            .iter()
            .enumerate()
            .map(|(i, &d)| move_sets[i].get(d).clone())
            .collect();
        let payoff: Vec<Rational> = (0..n)
            .map(|_| Rational::from(rng.random_range(-2i64..=3)))
            .collect();
        rows.push((profile, OutcomeValue::Vec(payoff)));
        // Advance the mixed-radix counter.
        let mut i = n;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < move_sets[i].len() {
                break;
            }
            digits[i] = 0;
        }
        if digits.iter().all(|&d| d == 0) {
            break;
        }
    }
    let agents = (0..n)
        .map(|i| AgentDecl::Spec(SelectionSpec::ArgmaxCoord(i + 1)))
        .collect();
    Game::build(GameConfig {
        name: name.to_string(),
        players: (0..n).map(|i| format!("P{}", i + 1)).collect(),
        move_sets,
        outcomes: OutcomeDecl::Vector(n),
        rule: OutcomeTableSource::Rows(rows),
        agents,
    })
    .expect("random vector game is well-formed")
}
