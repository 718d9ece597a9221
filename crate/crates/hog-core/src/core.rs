//! Ground types: symbols, outcome values, finite sets, partial orders,
//! contexts, and strategy profiles.
//!
//! Everything here is immutable after construction and cheap to clone, so
//! values can be shared freely across worker threads. Iteration order is
//! always declaration order, which keeps reports and tables byte-stable.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Exact rational number used for vector-mode outcomes and payoffs.
///
/// `num_rational::Ratio` stores values gcd-reduced with a positive
/// denominator, which is exactly the normal form the equilibrium checks
/// rely on: multi-valued argmax sets are computed with exact equality.
pub type Rational = num_rational::Rational64;

fn is_valid_token(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// An interned move or outcome label.
///
/// Equality is exact token equality. Symbols produced by one [`Interner`]
/// share their backing allocation, so the common comparison path is a
/// pointer check.
#[derive(Clone)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Symbol> {
        if is_valid_token(name) {
            Ok(Symbol(Arc::from(name)))
        } else {
            Err(Error::BadToken(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Symbol {}

impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol({})", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Symbol interner, one per game.
#[derive(Default, Debug, Clone)]
pub struct Interner {
    known: Vec<Symbol>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Result<Symbol> {
        if let Some(sym) = self.known.iter().find(|s| s.as_str() == name) {
            return Ok(sym.clone());
        }
        let sym = Symbol::new(name)?;
        self.known.push(sym.clone());
        Ok(sym)
    }
}

/// A final outcome: either a symbolic label or a vector of exact rationals
/// (one coordinate per player in vector-mode games).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum OutcomeValue {
    Sym(Symbol),
    Vec(Vec<Rational>),
}

impl OutcomeValue {
    pub fn sym(s: Symbol) -> Self {
        OutcomeValue::Sym(s)
    }

    pub fn vec(coords: Vec<Rational>) -> Self {
        OutcomeValue::Vec(coords)
    }

    pub fn is_vector(&self) -> bool {
        matches!(self, OutcomeValue::Vec(_))
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self {
            OutcomeValue::Sym(s) => Some(s),
            OutcomeValue::Vec(_) => None,
        }
    }

    pub fn coord(&self, k: usize) -> Option<&Rational> {
        match self {
            OutcomeValue::Sym(_) => None,
            OutcomeValue::Vec(v) => v.get(k),
        }
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            OutcomeValue::Sym(_) => None,
            OutcomeValue::Vec(v) => Some(v.len()),
        }
    }
}

/// Renders a rational as `int` or `int/int`, matching the gamedef syntax.
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for OutcomeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeValue::Sym(s) => f.write_str(s.as_str()),
            OutcomeValue::Vec(v) => {
                let coords: Vec<String> = v.iter().map(rational_to_string).collect();
                write!(f, "({})", coords.join(","))
            }
        }
    }
}

impl fmt::Debug for OutcomeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// An ordered set of distinct elements. Iteration order equals declaration
/// order and is deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSet<T> {
    items: Vec<T>,
}

impl<T: PartialEq + fmt::Display> FiniteSet<T> {
    /// Builds a set from elements that must already be distinct.
    pub fn new(items: Vec<T>) -> Result<Self> {
        for (i, a) in items.iter().enumerate() {
            if items[..i].contains(a) {
                return Err(Error::DuplicateElement(a.to_string()));
            }
        }
        Ok(FiniteSet { items })
    }
}

impl<T: PartialEq> FiniteSet<T> {
    /// Builds a set keeping the first occurrence of each element.
    pub fn from_iter_dedup<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut items: Vec<T> = Vec::new();
        for x in iter {
            if !items.contains(&x) {
                items.push(x);
            }
        }
        FiniteSet { items }
    }

    pub fn empty() -> Self {
        FiniteSet { items: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.items.contains(x)
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.items.iter().position(|y| y == x)
    }

    pub fn get(&self, i: usize) -> &T {
        &self.items[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.items.iter()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.items
    }

    /// Set equality, ignoring element order.
    pub fn same_elements(&self, other: &Self) -> bool {
        self.len() == other.len() && self.items.iter().all(|x| other.contains(x))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.items.iter().all(|x| other.contains(x))
    }
}

impl<T: PartialEq + Clone> FiniteSet<T> {
    /// Intersection, keeping `self`'s order.
    pub fn intersect(&self, other: &Self) -> Self {
        FiniteSet {
            items: self
                .items
                .iter()
                .filter(|x| other.contains(x))
                .cloned()
                .collect(),
        }
    }
}

impl<'a, T> IntoIterator for &'a FiniteSet<T> {
    type Item = &'a T;
    type IntoIter = std::slice::Iter<'a, T>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl<T: fmt::Display> fmt::Debug for FiniteSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.items.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl FiniteSet<Symbol> {
    /// Views a symbol set as a set of symbolic outcome values.
    pub fn to_outcomes(&self) -> FiniteSet<OutcomeValue> {
        FiniteSet {
            items: self.items.iter().cloned().map(OutcomeValue::Sym).collect(),
        }
    }
}

/// A strict partial order `a ≺ b` over a carrier of outcome values, stored
/// transitively closed. The reflexive `⪰` is recovered as "equal or ≻".
#[derive(Clone, PartialEq, Eq)]
pub struct PartialOrder {
    carrier: FiniteSet<OutcomeValue>,
    strict: Vec<bool>, // strict[i * n + j] means carrier[i] ≺ carrier[j]
}

/// Transitively closes the declared strict pairs over the carrier.
///
/// Fails with [`Error::Cycle`] if the closure would relate any element
/// strictly below itself, and [`Error::UnknownSymbol`] if a pair member
/// is not in the carrier.
pub fn transitive_closure_order(
    carrier: FiniteSet<OutcomeValue>,
    pairs: &[(OutcomeValue, OutcomeValue)],
) -> Result<PartialOrder> {
    let n = carrier.len();
    let mut strict = vec![false; n * n];
    for (a, b) in pairs {
        let i = carrier
            .index_of(a)
            .ok_or_else(|| Error::UnknownSymbol(a.to_string()))?;
        let j = carrier
            .index_of(b)
            .ok_or_else(|| Error::UnknownSymbol(b.to_string()))?;
        strict[i * n + j] = true;
    }
    // Warshall closure.
    for k in 0..n {
        for i in 0..n {
            if strict[i * n + k] {
                for j in 0..n {
                    if strict[k * n + j] {
                        strict[i * n + j] = true;
                    }
                }
            }
        }
    }
    for i in 0..n {
        if strict[i * n + i] {
            return Err(Error::Cycle(carrier.get(i).to_string()));
        }
    }
    Ok(PartialOrder { carrier, strict })
}

impl PartialOrder {
    /// The empty order: all carrier elements incomparable.
    pub fn discrete(carrier: FiniteSet<OutcomeValue>) -> Self {
        let n = carrier.len();
        PartialOrder {
            carrier,
            strict: vec![false; n * n],
        }
    }

    pub fn carrier(&self) -> &FiniteSet<OutcomeValue> {
        &self.carrier
    }

    fn lt_idx(&self, i: usize, j: usize) -> bool {
        self.strict[i * self.carrier.len() + j]
    }

    /// Whether `a ≺ b`. Elements outside the carrier compare as unrelated.
    pub fn lt(&self, a: &OutcomeValue, b: &OutcomeValue) -> bool {
        match (self.carrier.index_of(a), self.carrier.index_of(b)) {
            (Some(i), Some(j)) => self.lt_idx(i, j),
            _ => false,
        }
    }

    /// The order with all strict pairs flipped.
    pub fn dual(&self) -> PartialOrder {
        let n = self.carrier.len();
        let mut strict = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                strict[j * n + i] = self.strict[i * n + j];
            }
        }
        PartialOrder {
            carrier: self.carrier.clone(),
            strict,
        }
    }

    /// The elements of `s` that no other element of `s` strictly dominates.
    /// Non-empty whenever `s` is: acyclicity guarantees a maximal element.
    pub fn maximal_elements(&self, s: &FiniteSet<OutcomeValue>) -> Result<FiniteSet<OutcomeValue>> {
        let idx: Vec<usize> = s
            .iter()
            .map(|x| {
                self.carrier
                    .index_of(x)
                    .ok_or_else(|| Error::UnknownSymbol(x.to_string()))
            })
            .collect::<Result<_>>()?;
        let keep: Vec<OutcomeValue> = idx
            .iter()
            .enumerate()
            .filter(|(_, &i)| !idx.iter().any(|&j| self.lt_idx(i, j)))
            .map(|(pos, _)| s.get(pos).clone())
            .collect();
        Ok(FiniteSet { items: keep })
    }

    /// Whether every pair of distinct elements of `s` is comparable.
    pub fn is_total_on(&self, s: &FiniteSet<OutcomeValue>) -> Result<bool> {
        let idx: Vec<usize> = s
            .iter()
            .map(|x| {
                self.carrier
                    .index_of(x)
                    .ok_or_else(|| Error::UnknownSymbol(x.to_string()))
            })
            .collect::<Result<_>>()?;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if i != j && !self.lt_idx(i, j) && !self.lt_idx(j, i) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// All strict pairs, in carrier order. Mostly useful for tests.
    pub fn strict_pairs(&self) -> Vec<(&OutcomeValue, &OutcomeValue)> {
        let n = self.carrier.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.strict[i * n + j] {
                    out.push((self.carrier.get(i), self.carrier.get(j)));
                }
            }
        }
        out
    }
}

impl fmt::Debug for PartialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .strict_pairs()
            .iter()
            .map(|(a, b)| format!("{a} < {b}"))
            .collect();
        write!(f, "PartialOrder[{}]", pairs.join(", "))
    }
}

/// A total finite map from a player's moves to outcomes: everything the
/// player needs to know about the rest of the game.
#[derive(Clone, PartialEq, Eq)]
pub struct Context {
    domain: FiniteSet<Symbol>,
    values: Vec<OutcomeValue>,
}

impl Context {
    pub fn new(domain: FiniteSet<Symbol>, values: Vec<OutcomeValue>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::DomainMismatch(format!(
                "context table has {} values for {} moves",
                values.len(),
                domain.len()
            )));
        }
        Ok(Context { domain, values })
    }

    pub fn domain(&self) -> &FiniteSet<Symbol> {
        &self.domain
    }

    pub fn value_at(&self, i: usize) -> &OutcomeValue {
        &self.values[i]
    }

    pub fn value_of(&self, m: &Symbol) -> Result<&OutcomeValue> {
        self.domain
            .index_of(m)
            .map(|i| &self.values[i])
            .ok_or_else(|| Error::UnknownSymbol(m.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Symbol, &OutcomeValue)> {
        self.domain.iter().zip(self.values.iter())
    }

    /// The set of distinct values, in first-occurrence order over the
    /// domain's declaration order.
    pub fn image(&self) -> FiniteSet<OutcomeValue> {
        FiniteSet::from_iter_dedup(self.values.iter().cloned())
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (m, v)) in self.entries().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m} -> {v}")?;
        }
        write!(f, "}}")
    }
}

/// One move per player, in player declaration order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    moves: Vec<Symbol>,
}

impl StrategyProfile {
    pub fn new(moves: Vec<Symbol>) -> Self {
        StrategyProfile { moves }
    }

    pub fn moves(&self) -> &[Symbol] {
        &self.moves
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Space-joined form, used by diagnostics ("B B A").
    pub fn spaced(&self) -> String {
        self.moves
            .iter()
            .map(Symbol::as_str)
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Compact form: concatenated when every move label is a single
    /// character ("AAB"), space-joined otherwise.
    pub fn label(&self) -> String {
        if self.moves.iter().all(|m| m.as_str().len() == 1) {
            self.moves.iter().map(Symbol::as_str).collect()
        } else {
            self.spaced()
        }
    }
}

impl fmt::Debug for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Checks that all values share one mode (and one arity in vector mode).
/// Returns `Some(arity)` in vector mode, `None` in symbolic mode.
pub fn check_uniform_mode(values: &FiniteSet<OutcomeValue>) -> Result<Option<usize>> {
    let mut arity: Option<usize> = None;
    let mut saw_sym = false;
    for v in values {
        match v {
            OutcomeValue::Sym(_) => saw_sym = true,
            OutcomeValue::Vec(coords) => match arity {
                None => arity = Some(coords.len()),
                Some(n) if n != coords.len() => {
                    return Err(Error::ModeMismatch(format!(
                        "outcome vectors of arity {n} and {} in one set",
                        coords.len()
                    )));
                }
                _ => {}
            },
        }
    }
    if saw_sym && arity.is_some() {
        return Err(Error::ModeMismatch(
            "symbolic and vector outcomes in one set".to_string(),
        ));
    }
    Ok(arity)
}

/// Distinct symbols appearing in a list of sets, first occurrence first.
pub fn union_symbols(sets: &[FiniteSet<Symbol>]) -> FiniteSet<Symbol> {
    FiniteSet::from_iter_dedup(sets.iter().flat_map(|s| s.iter().cloned()))
}

#[allow(dead_code)]
fn assert_send_sync()
where
    Symbol: Send + Sync,
    OutcomeValue: Send + Sync,
    PartialOrder: Send + Sync,
    Context: Send + Sync,
    StrategyProfile: Send + Sync,
{
}

#[cfg(test)]
mod tests {
    use super::*;

    fn syms(names: &[&str]) -> FiniteSet<Symbol> {
        FiniteSet::new(names.iter().map(|n| Symbol::new(n).unwrap()).collect()).unwrap()
    }

    fn outs(names: &[&str]) -> FiniteSet<OutcomeValue> {
        syms(names).to_outcomes()
    }

    fn o(name: &str) -> OutcomeValue {
        OutcomeValue::Sym(Symbol::new(name).unwrap())
    }

    #[test]
    fn closure_forces_transitivity() {
        let order =
            transitive_closure_order(outs(&["A", "B", "C"]), &[(o("B"), o("A")), (o("C"), o("B"))])
                .unwrap();
        assert!(order.lt(&o("C"), &o("B")));
        assert!(order.lt(&o("B"), &o("A")));
        assert!(order.lt(&o("C"), &o("A")));
        assert!(!order.lt(&o("A"), &o("C")));
    }

    #[test]
    fn empty_pairs_give_discrete_order() {
        let order = transitive_closure_order(outs(&["A", "B"]), &[]).unwrap();
        assert!(order.strict_pairs().is_empty());
        assert_eq!(order, PartialOrder::discrete(outs(&["A", "B"])));
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = transitive_closure_order(outs(&["A", "B"]), &[(o("A"), o("B")), (o("B"), o("A"))])
            .unwrap_err();
        assert!(matches!(err, Error::Cycle(_)));
    }

    #[test]
    fn closure_rejects_unknown_member() {
        let err = transitive_closure_order(outs(&["A", "B"]), &[(o("A"), o("Z"))]).unwrap_err();
        assert_eq!(err, Error::UnknownSymbol("Z".to_string()));
    }

    #[test]
    fn maximal_of_chain_is_top() {
        // B ≺ C ≺ A
        let order =
            transitive_closure_order(outs(&["A", "B", "C"]), &[(o("B"), o("C")), (o("C"), o("A"))])
                .unwrap();
        let max = order.maximal_elements(&outs(&["A", "B", "C"])).unwrap();
        assert_eq!(max, outs(&["A"]));
    }

    #[test]
    fn incomparable_elements_stay_maximal() {
        let order = transitive_closure_order(outs(&["A", "B", "C"]), &[(o("B"), o("A"))]).unwrap();
        let max = order.maximal_elements(&outs(&["A", "B", "C"])).unwrap();
        assert_eq!(max, outs(&["A", "C"]));
    }

    #[test]
    fn maximal_of_singleton_under_empty_order() {
        let order = PartialOrder::discrete(outs(&["A"]));
        assert_eq!(order.maximal_elements(&outs(&["A"])).unwrap(), outs(&["A"]));
    }

    #[test]
    fn maximal_rejects_foreign_elements() {
        let order = PartialOrder::discrete(outs(&["A"]));
        assert!(order.maximal_elements(&outs(&["Z"])).is_err());
    }

    #[test]
    fn image_of_identity_and_constant() {
        let dom = syms(&["A", "B"]);
        let id = Context::new(dom.clone(), vec![o("A"), o("B")]).unwrap();
        assert_eq!(id.image(), outs(&["A", "B"]));
        let constant = Context::new(dom, vec![o("A"), o("A")]).unwrap();
        assert_eq!(constant.image(), outs(&["A"]));
    }

    #[test]
    fn image_keeps_first_occurrence_order_for_vectors() {
        let dom = syms(&["B", "C", "F"]);
        let r = |a: i64, b: i64| OutcomeValue::vec(vec![Rational::from(a), Rational::from(b)]);
        let p = Context::new(dom, vec![r(2, 1), r(2, 2), r(0, 1)]).unwrap();
        let img = p.image();
        assert_eq!(img.as_slice(), &[r(2, 1), r(2, 2), r(0, 1)]);
    }

    #[test]
    fn finite_set_rejects_duplicates() {
        assert!(FiniteSet::new(vec![o("A"), o("A")]).is_err());
    }

    #[test]
    fn symbols_compare_by_token() {
        let a1 = Symbol::new("A").unwrap();
        let a2 = Symbol::new("A").unwrap();
        let b = Symbol::new("B").unwrap();
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
        assert!(Symbol::new("").is_err());
        assert!(Symbol::new("x y").is_err());
    }

    #[test]
    fn interner_shares_backing() {
        let mut interner = Interner::new();
        let a1 = interner.intern("A").unwrap();
        let a2 = interner.intern("A").unwrap();
        assert!(std::sync::Arc::ptr_eq(&a1.0, &a2.0));
    }

    #[test]
    fn rationals_render_in_gamedef_syntax() {
        assert_eq!(rational_to_string(&Rational::from(3)), "3");
        assert_eq!(rational_to_string(&Rational::new(-1, 2)), "-1/2");
        assert_eq!(
            OutcomeValue::vec(vec![Rational::from(2), Rational::new(1, 3)]).to_string(),
            "(2,1/3)"
        );
    }

    #[test]
    fn mixed_modes_are_rejected() {
        let mixed = FiniteSet::from_iter_dedup(vec![o("A"), OutcomeValue::vec(vec![Rational::from(1)])]);
        assert!(check_uniform_mode(&mixed).is_err());
        let uneven = FiniteSet::from_iter_dedup(vec![
            OutcomeValue::vec(vec![Rational::from(1)]),
            OutcomeValue::vec(vec![Rational::from(1), Rational::from(2)]),
        ]);
        assert!(check_uniform_mode(&uneven).is_err());
    }
}
