//! Parser, validator, and serializers for the `.hog` game definition
//! format and for solve reports.
//!
//! The format is line-oriented UTF-8 with `#` comments:
//!
//! ```text
//! game <ident>
//! players <ident>+
//! moves <player> : <sym>+
//! outcomes : <sym>+            # symbolic mode
//! outcomes vector <n>          # OR vector mode (n defaults to player count)
//! outcome builtin majority
//! outcome table                # rows: <m1> ... <mn> -> <sym>
//!   ...                        #       <m1> ... <mn> -> <q1> ... <qn>
//! end
//! agent <player> : <selspec>
//! ```
//!
//! with
//!
//! ```text
//! selspec := argmax ORDER | argmin ORDER | argmax-coord <k> | argmin-coord <k>
//!          | fix | nonfix | submax | prefer { <sym>+ } | lex( selspec , selspec )
//! ORDER   := order( <sym> < <sym> [, <sym> < <sym>]* ) | total( <sym> [< <sym>]+ )
//! ```
//!
//! Rationals are written `int` or `int/int`; there is no decimal syntax.
//! [`parse`] does the syntactic work, [`elaborate`] the semantic checks;
//! every failure carries a position. All rendered text ends with a single
//! trailing newline.

use std::fmt;

use serde::Serialize;

use crate::compiler::StrategicGame;
use crate::core::{
    rational_to_string, FiniteSet, Interner, OutcomeValue, Rational, Symbol,
    transitive_closure_order,
};
use crate::engine::{
    AgentDecl, Game, GameConfig, OutcomeDecl, OutcomeTableSource, SolveReport,
};
use crate::error::Error;
use crate::selections::SelectionSpec;

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned parse or elaboration message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub line: usize,
    pub col: usize,
}

impl Diagnostic {
    fn error(message: impl Into<String>, line: usize, col: usize) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            line,
            col,
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{tag}: {} (line {}, column {})", self.message, self.line, self.col)
    }
}

// ---------------------------------------------------------------------------
// Syntax tree
// ---------------------------------------------------------------------------

/// Source position, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct GameDef {
    pub name: Option<(String, Pos)>,
    pub players: Option<(Vec<String>, Pos)>,
    pub moves: Vec<(String, Vec<String>, Pos)>,
    pub outcome_mode: Option<(OutcomeModeAst, Pos)>,
    pub outcome_src: Option<(OutcomeSrcAst, Pos)>,
    pub agents: Vec<(String, SelSpecAst, Pos)>,
}

#[derive(Clone, Debug)]
pub enum OutcomeModeAst {
    Symbolic(Vec<String>),
    Vector(Option<usize>),
}

#[derive(Clone, Debug)]
pub enum OutcomeSrcAst {
    Majority,
    Table(Vec<TableRowAst>),
}

#[derive(Clone, Debug)]
pub struct TableRowAst {
    pub profile: Vec<String>,
    pub values: Vec<String>,
    pub pos: Pos,
}

#[derive(Clone, Debug)]
pub enum SelSpecAst {
    Argmax(OrderAst),
    Argmin(OrderAst),
    ArgmaxCoord(usize),
    ArgminCoord(usize),
    Fix,
    NonFix,
    SubMax,
    Prefer(Vec<String>),
    Lex(Box<SelSpecAst>, Box<SelSpecAst>),
}

#[derive(Clone, Debug)]
pub enum OrderAst {
    Pairs(Vec<(String, String)>),
    Chain(Vec<String>),
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Less,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "{w}"),
            Tok::LParen => write!(f, "("),
            Tok::RParen => write!(f, ")"),
            Tok::LBrace => write!(f, "{{"),
            Tok::RBrace => write!(f, "}}"),
            Tok::Comma => write!(f, ","),
            Tok::Colon => write!(f, ":"),
            Tok::Less => write!(f, "<"),
            Tok::Arrow => write!(f, "->"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '/'
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<Token>, Diagnostic> {
    let text: Vec<char> = match line.find('#') {
        Some(i) => line[..i].chars().collect(),
        None => line.chars().collect(),
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < text.len() {
        let c = text[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let punct = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            '<' => Some(Tok::Less),
            _ => None,
        };
        if let Some(tok) = punct {
            out.push(Token { tok, col });
            i += 1;
            continue;
        }
        if is_word_char(c) {
            let mut word = String::new();
            while i < text.len() && is_word_char(text[i]) {
                if text[i] == '-' && text.get(i + 1) == Some(&'>') {
                    break;
                }
                word.push(text[i]);
                i += 1;
            }
            if word.is_empty() {
                // A bare '-' directly followed by '>'.
                out.push(Token { tok: Tok::Arrow, col });
                i += 2;
            } else {
                out.push(Token {
                    tok: Tok::Word(word),
                    col,
                });
            }
            continue;
        }
        return Err(Diagnostic::error(
            format!("unexpected character {c:?}"),
            lineno,
            col,
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct LineParser<'a> {
    toks: &'a [Token],
    line: usize,
    at: usize,
}

impl<'a> LineParser<'a> {
    fn new(toks: &'a [Token], line: usize) -> Self {
        LineParser { toks, line, at: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        let col = self
            .toks
            .get(self.at)
            .map(|t| t.col)
            .unwrap_or_else(|| self.toks.last().map(|t| t.col + 1).unwrap_or(1));
        Pos {
            line: self.line,
            col,
        }
    }

    fn fail(&self, message: impl Into<String>) -> Diagnostic {
        let p = self.pos();
        Diagnostic::error(message, p.line, p.col)
    }

    fn next(&mut self, expected: &str) -> Result<&'a Token, Diagnostic> {
        let tok = self
            .toks
            .get(self.at)
            .ok_or_else(|| self.fail(format!("expected {expected}, found end of line")))?;
        self.at += 1;
        Ok(tok)
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<(), Diagnostic> {
        let tok = self.next(expected)?;
        if tok.tok == want {
            Ok(())
        } else {
            Err(Diagnostic::error(
                format!("expected {expected}, found {}", tok.tok),
                self.line,
                tok.col,
            ))
        }
    }

    fn word(&mut self, expected: &str) -> Result<(String, usize), Diagnostic> {
        let tok = self.next(expected)?;
        match &tok.tok {
            Tok::Word(w) => Ok((w.clone(), tok.col)),
            other => Err(Diagnostic::error(
                format!("expected {expected}, found {other}"),
                self.line,
                tok.col,
            )),
        }
    }

    fn symbol(&mut self, expected: &str) -> Result<String, Diagnostic> {
        let (w, col) = self.word(expected)?;
        if w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(w)
        } else {
            Err(Diagnostic::error(
                format!("invalid symbol {w:?}"),
                self.line,
                col,
            ))
        }
    }

    fn integer(&mut self, expected: &str) -> Result<usize, Diagnostic> {
        let (w, col) = self.word(expected)?;
        w.parse::<usize>().map_err(|_| {
            Diagnostic::error(format!("expected {expected}, found {w:?}"), self.line, col)
        })
    }

    fn end_of_line(&self) -> Result<(), Diagnostic> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            Err(self.fail("trailing tokens after directive"))
        }
    }

    fn parse_selspec(&mut self) -> Result<SelSpecAst, Diagnostic> {
        let (word, col) = self.word("a selection spec")?;
        match word.as_str() {
            "argmax" => Ok(SelSpecAst::Argmax(self.parse_order()?)),
            "argmin" => Ok(SelSpecAst::Argmin(self.parse_order()?)),
            "argmax-coord" => Ok(SelSpecAst::ArgmaxCoord(self.integer("a coordinate index")?)),
            "argmin-coord" => Ok(SelSpecAst::ArgminCoord(self.integer("a coordinate index")?)),
            "fix" => Ok(SelSpecAst::Fix),
            "nonfix" => Ok(SelSpecAst::NonFix),
            "submax" => Ok(SelSpecAst::SubMax),
            "prefer" => {
                self.expect(Tok::LBrace, "'{'")?;
                let mut targets = vec![self.symbol("an outcome symbol")?];
                while self.peek() != Some(&Tok::RBrace) {
                    targets.push(self.symbol("an outcome symbol or '}'")?);
                }
                self.expect(Tok::RBrace, "'}'")?;
                Ok(SelSpecAst::Prefer(targets))
            }
            "lex" => {
                self.expect(Tok::LParen, "'('")?;
                let first = self.parse_selspec()?;
                self.expect(Tok::Comma, "','")?;
                let second = self.parse_selspec()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(SelSpecAst::Lex(Box::new(first), Box::new(second)))
            }
            other => Err(Diagnostic::error(
                format!("unknown selection spec {other:?}"),
                self.line,
                col,
            )),
        }
    }

    fn parse_order(&mut self) -> Result<OrderAst, Diagnostic> {
        let (word, col) = self.word("'order' or 'total'")?;
        match word.as_str() {
            "order" => {
                self.expect(Tok::LParen, "'('")?;
                let mut pairs = Vec::new();
                loop {
                    let lo = self.symbol("an outcome symbol")?;
                    self.expect(Tok::Less, "'<'")?;
                    let hi = self.symbol("an outcome symbol")?;
                    pairs.push((lo, hi));
                    match self.peek() {
                        Some(Tok::Comma) => {
                            self.at += 1;
                        }
                        _ => break,
                    }
                }
                self.expect(Tok::RParen, "')'")?;
                Ok(OrderAst::Pairs(pairs))
            }
            "total" => {
                self.expect(Tok::LParen, "'('")?;
                let mut chain = vec![self.symbol("an outcome symbol")?];
                while self.peek() == Some(&Tok::Less) {
                    self.at += 1;
                    chain.push(self.symbol("an outcome symbol")?);
                }
                self.expect(Tok::RParen, "')'")?;
                if chain.len() < 2 {
                    return Err(Diagnostic::error(
                        "a total order needs at least two elements",
                        self.line,
                        col,
                    ));
                }
                Ok(OrderAst::Chain(chain))
            }
            other => Err(Diagnostic::error(
                format!("expected 'order' or 'total', found {other:?}"),
                self.line,
                col,
            )),
        }
    }
}

fn looks_like_rational(word: &str) -> bool {
    let body = word.strip_prefix('-').unwrap_or(word);
    match body.split_once('/') {
        Some((n, d)) => {
            !n.is_empty()
                && !d.is_empty()
                && n.chars().all(|c| c.is_ascii_digit())
                && d.chars().all(|c| c.is_ascii_digit())
        }
        None => !body.is_empty() && body.chars().all(|c| c.is_ascii_digit()),
    }
}

fn parse_rational(word: &str, pos: Pos) -> Result<Rational, Diagnostic> {
    let bad = || Diagnostic::error(format!("malformed rational {word:?}"), pos.line, pos.col);
    let (numer, denom) = match word.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (word, None),
    };
    let n: i64 = numer.parse().map_err(|_| bad())?;
    let d: i64 = match denom {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => 1,
    };
    if d == 0 {
        return Err(Diagnostic::error(
            format!("rational {word:?} has a zero denominator"),
            pos.line,
            pos.col,
        ));
    }
    Ok(Rational::new(n, d))
}

/// Parses gamedef text into a syntax tree. Comments and blank lines are
/// ignored; the first syntactic problem is returned as a positioned
/// diagnostic.
pub fn parse(text: &str) -> Result<GameDef, Diagnostic> {
    let mut def = GameDef {
        name: None,
        players: None,
        moves: Vec::new(),
        outcome_mode: None,
        outcome_src: None,
        agents: Vec::new(),
    };
    let mut table: Option<(Vec<TableRowAst>, Pos)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokenize(raw, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut lp = LineParser::new(&toks, lineno);

        if table.is_some() {
            // Inside `outcome table ... end`.
            if toks.len() == 1 && matches!(&toks[0].tok, Tok::Word(w) if w == "end") {
                let (rows, pos) = table.take().expect("checked above");
                set_once(
                    &mut def.outcome_src,
                    (OutcomeSrcAst::Table(rows), pos),
                    "outcome",
                    pos,
                )?;
                continue;
            }
            let row_pos = Pos {
                line: lineno,
                col: toks[0].col,
            };
            let mut profile = Vec::new();
            loop {
                match lp.peek() {
                    Some(Tok::Arrow) => {
                        lp.at += 1;
                        break;
                    }
                    Some(_) => profile.push(lp.symbol("a move symbol or '->'")?),
                    None => return Err(lp.fail("expected '->' in table row")),
                }
            }
            if profile.is_empty() {
                return Err(Diagnostic::error(
                    "table row has no moves before '->'",
                    lineno,
                    toks[0].col,
                ));
            }
            let mut values = Vec::new();
            while lp.peek().is_some() {
                let (w, col) = lp.word("an outcome symbol or rational")?;
                let valid_sym = w.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
                if !valid_sym && !looks_like_rational(&w) {
                    return Err(Diagnostic::error(
                        format!("malformed table value {w:?}"),
                        lineno,
                        col,
                    ));
                }
                values.push(w);
            }
            if values.is_empty() {
                return Err(lp.fail("table row has no value after '->'"));
            }
            table.as_mut().expect("checked above").0.push(TableRowAst {
                profile,
                values,
                pos: row_pos,
            });
            continue;
        }

        let (directive, col) = lp.word("a directive")?;
        let pos = Pos { line: lineno, col };
        match directive.as_str() {
            "game" => {
                let name = lp.symbol("a game name")?;
                lp.end_of_line()?;
                set_once(&mut def.name, (name, pos), "game", pos)?;
            }
            "players" => {
                let mut ids = vec![lp.symbol("a player id")?];
                while lp.peek().is_some() {
                    ids.push(lp.symbol("a player id")?);
                }
                set_once(&mut def.players, (ids, pos), "players", pos)?;
            }
            "moves" => {
                let player = lp.symbol("a player id")?;
                lp.expect(Tok::Colon, "':'")?;
                let mut syms = vec![lp.symbol("a move symbol")?];
                while lp.peek().is_some() {
                    syms.push(lp.symbol("a move symbol")?);
                }
                def.moves.push((player, syms, pos));
            }
            "outcomes" => match lp.peek() {
                Some(Tok::Colon) => {
                    lp.at += 1;
                    let mut syms = vec![lp.symbol("an outcome symbol")?];
                    while lp.peek().is_some() {
                        syms.push(lp.symbol("an outcome symbol")?);
                    }
                    set_once(
                        &mut def.outcome_mode,
                        (OutcomeModeAst::Symbolic(syms), pos),
                        "outcomes",
                        pos,
                    )?;
                }
                Some(Tok::Word(w)) if w == "vector" => {
                    lp.at += 1;
                    let arity = if lp.peek().is_some() {
                        Some(lp.integer("a vector arity")?)
                    } else {
                        None
                    };
                    lp.end_of_line()?;
                    set_once(
                        &mut def.outcome_mode,
                        (OutcomeModeAst::Vector(arity), pos),
                        "outcomes",
                        pos,
                    )?;
                }
                _ => return Err(lp.fail("expected ':' or 'vector' after 'outcomes'")),
            },
            "outcome" => {
                let (what, wcol) = lp.word("'builtin' or 'table'")?;
                match what.as_str() {
                    "builtin" => {
                        let (which, bcol) = lp.word("'majority'")?;
                        if which != "majority" {
                            return Err(Diagnostic::error(
                                format!("unknown builtin outcome function {which:?}"),
                                lineno,
                                bcol,
                            ));
                        }
                        lp.end_of_line()?;
                        set_once(
                            &mut def.outcome_src,
                            (OutcomeSrcAst::Majority, pos),
                            "outcome",
                            pos,
                        )?;
                    }
                    "table" => {
                        lp.end_of_line()?;
                        if def.outcome_src.is_some() {
                            return Err(Diagnostic::error(
                                "duplicate outcome directive",
                                lineno,
                                col,
                            ));
                        }
                        table = Some((Vec::new(), pos));
                    }
                    other => {
                        return Err(Diagnostic::error(
                            format!("expected 'builtin' or 'table', found {other:?}"),
                            lineno,
                            wcol,
                        ))
                    }
                }
            }
            "agent" => {
                let player = lp.symbol("a player id")?;
                lp.expect(Tok::Colon, "':'")?;
                let spec = lp.parse_selspec()?;
                lp.end_of_line()?;
                def.agents.push((player, spec, pos));
            }
            other => {
                return Err(Diagnostic::error(
                    format!("unknown directive {other:?}"),
                    lineno,
                    col,
                ))
            }
        }
    }

    if let Some((_, pos)) = table {
        return Err(Diagnostic::error(
            "outcome table is missing its 'end' line",
            pos.line,
            pos.col,
        ));
    }
    Ok(def)
}

fn set_once<T>(
    slot: &mut Option<(T, Pos)>,
    value: (T, Pos),
    what: &str,
    pos: Pos,
) -> Result<(), Diagnostic> {
    if slot.is_some() {
        return Err(Diagnostic::error(
            format!("duplicate {what} directive"),
            pos.line,
            pos.col,
        ));
    }
    *slot = Some(value);
    Ok(())
}

// ---------------------------------------------------------------------------
// Elaboration
// ---------------------------------------------------------------------------

fn err_at(e: Error, pos: Pos) -> Diagnostic {
    Diagnostic::error(e.to_string(), pos.line, pos.col)
}

/// Semantic checks and lowering of a parsed [`GameDef`] into a [`Game`]:
/// all symbols declared, the outcome table covering every profile exactly
/// once, every agent spec building against its player's move set and the
/// game's outcome set.
///
/// Agent totality over reachable contexts is left to
/// [`Game::validate_agent_totality`] so that callers can either reject the
/// game or report the witness.
pub fn elaborate(def: &GameDef) -> Result<Game, Diagnostic> {
    let (name, game_pos) = def
        .name
        .as_ref()
        .ok_or_else(|| Diagnostic::error("missing game directive", 1, 1))?;
    let (player_ids, players_pos) = def
        .players
        .as_ref()
        .ok_or_else(|| Diagnostic::error("missing players directive", game_pos.line, game_pos.col))?;
    for (i, p) in player_ids.iter().enumerate() {
        if player_ids[..i].contains(p) {
            return Err(Diagnostic::error(
                format!("duplicate player {p}"),
                players_pos.line,
                players_pos.col,
            ));
        }
    }

    let mut interner = Interner::new();

    // One moves line per declared player.
    let mut move_sets: Vec<Option<(FiniteSet<Symbol>, Pos)>> = vec![None; player_ids.len()];
    for (player, syms, pos) in &def.moves {
        let Some(i) = player_ids.iter().position(|p| p == player) else {
            return Err(Diagnostic::error(
                format!("moves for undeclared player {player}"),
                pos.line,
                pos.col,
            ));
        };
        if move_sets[i].is_some() {
            return Err(Diagnostic::error(
                format!("duplicate moves line for player {player}"),
                pos.line,
                pos.col,
            ));
        }
        let interned: Vec<Symbol> = syms
            .iter()
            .map(|s| interner.intern(s))
            .collect::<Result<_, _>>()
            .map_err(|e| err_at(e, *pos))?;
        let set = FiniteSet::new(interned).map_err(|e| err_at(e, *pos))?;
        move_sets[i] = Some((set, *pos));
    }
    let mut resolved_moves = Vec::with_capacity(player_ids.len());
    for (i, slot) in move_sets.into_iter().enumerate() {
        match slot {
            Some((set, _)) => resolved_moves.push(set),
            None => {
                return Err(Diagnostic::error(
                    format!("missing moves for player {}", player_ids[i]),
                    players_pos.line,
                    players_pos.col,
                ))
            }
        }
    }

    let (mode, mode_pos) = def.outcome_mode.as_ref().ok_or_else(|| {
        Diagnostic::error("missing outcomes directive", game_pos.line, game_pos.col)
    })?;
    let (src, src_pos) = def.outcome_src.as_ref().ok_or_else(|| {
        Diagnostic::error("missing outcome directive", game_pos.line, game_pos.col)
    })?;

    // Resolve the outcome declaration.
    let decl = match mode {
        OutcomeModeAst::Symbolic(syms) => {
            let interned: Vec<OutcomeValue> = syms
                .iter()
                .map(|s| interner.intern(s).map(OutcomeValue::Sym))
                .collect::<Result<_, _>>()
                .map_err(|e| err_at(e, *mode_pos))?;
            OutcomeDecl::Symbolic(FiniteSet::new(interned).map_err(|e| err_at(e, *mode_pos))?)
        }
        OutcomeModeAst::Vector(arity) => OutcomeDecl::Vector(arity.unwrap_or(player_ids.len())),
    };

    // Resolve the outcome source, with per-row checks while positions are
    // at hand. Coverage is rechecked inside Game::build.
    let rule = match src {
        OutcomeSrcAst::Majority => OutcomeTableSource::Majority,
        OutcomeSrcAst::Table(rows) => {
            let mut resolved = Vec::with_capacity(rows.len());
            let mut seen: Vec<&[String]> = Vec::with_capacity(rows.len());
            for row in rows {
                if row.profile.len() != player_ids.len() {
                    return Err(Diagnostic::error(
                        format!(
                            "table row has {} moves for {} players",
                            row.profile.len(),
                            player_ids.len()
                        ),
                        row.pos.line,
                        row.pos.col,
                    ));
                }
                let mut profile = Vec::with_capacity(row.profile.len());
                for (i, m) in row.profile.iter().enumerate() {
                    let sym = interner.intern(m).map_err(|e| err_at(e, row.pos))?;
                    if !resolved_moves[i].contains(&sym) {
                        return Err(Diagnostic::error(
                            format!("{m} is not a declared move of player {}", player_ids[i]),
                            row.pos.line,
                            row.pos.col,
                        ));
                    }
                    profile.push(sym);
                }
                if seen.contains(&row.profile.as_slice()) {
                    return Err(Diagnostic::error(
                        Error::DuplicateRow(row.profile.join(" ")).to_string(),
                        row.pos.line,
                        row.pos.col,
                    ));
                }
                seen.push(&row.profile);
                let value = match &decl {
                    OutcomeDecl::Symbolic(declared) => {
                        if row.values.len() != 1 {
                            return Err(Diagnostic::error(
                                "symbolic mode expects exactly one outcome per row",
                                row.pos.line,
                                row.pos.col,
                            ));
                        }
                        let v = OutcomeValue::Sym(
                            interner.intern(&row.values[0]).map_err(|e| err_at(e, row.pos))?,
                        );
                        if !declared.contains(&v) {
                            return Err(Diagnostic::error(
                                format!("{v} is not a declared outcome"),
                                row.pos.line,
                                row.pos.col,
                            ));
                        }
                        v
                    }
                    OutcomeDecl::Vector(arity) => {
                        if row.values.len() != *arity {
                            return Err(Diagnostic::error(
                                format!(
                                    "vector mode expects {arity} payoff coordinates, found {}",
                                    row.values.len()
                                ),
                                row.pos.line,
                                row.pos.col,
                            ));
                        }
                        let coords: Vec<Rational> = row
                            .values
                            .iter()
                            .map(|w| parse_rational(w, row.pos))
                            .collect::<Result<_, _>>()?;
                        OutcomeValue::Vec(coords)
                    }
                };
                resolved.push((profile, value));
            }
            OutcomeTableSource::Rows(resolved)
        }
    };

    // The outcome set agents build against: declared in symbolic mode,
    // derived from the dense table (lexicographic profile order) in
    // vector mode. Deriving here also surfaces coverage errors early with
    // the table's position.
    let outcome_set = match (&decl, &rule) {
        (OutcomeDecl::Symbolic(declared), _) => declared.clone(),
        (OutcomeDecl::Vector(_), OutcomeTableSource::Rows(rows)) => {
            let dense = crate::engine::assemble_dense(&resolved_moves, rows.clone())
                .map_err(|e| err_at(e, *src_pos))?;
            FiniteSet::from_iter_dedup(dense)
        }
        (OutcomeDecl::Vector(_), OutcomeTableSource::Majority) => {
            return Err(Diagnostic::error(
                "majority is a symbolic-mode builtin",
                src_pos.line,
                src_pos.col,
            ))
        }
    };

    // Build agents with positioned errors.
    let mut agents: Vec<Option<AgentDecl>> = vec![None; player_ids.len()];
    for (player, ast, pos) in &def.agents {
        let Some(i) = player_ids.iter().position(|p| p == player) else {
            return Err(Diagnostic::error(
                format!("agent for undeclared player {player}"),
                pos.line,
                pos.col,
            ));
        };
        if agents[i].is_some() {
            return Err(Diagnostic::error(
                format!("duplicate agent line for player {player}"),
                pos.line,
                pos.col,
            ));
        }
        let spec = lower_selspec(ast, &outcome_set, &mut interner, *pos)?;
        crate::selections::build(&spec, &resolved_moves[i], &outcome_set)
            .map_err(|e| err_at(e, *pos))?;
        agents[i] = Some(AgentDecl::Spec(spec));
    }
    let mut resolved_agents = Vec::with_capacity(player_ids.len());
    for (i, slot) in agents.into_iter().enumerate() {
        match slot {
            Some(a) => resolved_agents.push(a),
            None => {
                return Err(Diagnostic::error(
                    Error::MissingAgent(player_ids[i].clone()).to_string(),
                    players_pos.line,
                    players_pos.col,
                ))
            }
        }
    }

    Game::build(GameConfig {
        name: name.clone(),
        players: player_ids.clone(),
        move_sets: resolved_moves,
        outcomes: decl,
        rule,
        agents: resolved_agents,
    })
    .map_err(|e| err_at(e, *src_pos))
}

fn lower_selspec(
    ast: &SelSpecAst,
    outcomes: &FiniteSet<OutcomeValue>,
    interner: &mut Interner,
    pos: Pos,
) -> Result<SelectionSpec, Diagnostic> {
    let resolve_outcome = |interner: &mut Interner, s: &str| -> Result<OutcomeValue, Diagnostic> {
        let v = OutcomeValue::Sym(interner.intern(s).map_err(|e| err_at(e, pos))?);
        if outcomes.contains(&v) {
            Ok(v)
        } else {
            Err(Diagnostic::error(
                format!("{s} is not a declared outcome"),
                pos.line,
                pos.col,
            ))
        }
    };
    match ast {
        SelSpecAst::Argmax(order) | SelSpecAst::Argmin(order) => {
            let pairs: Vec<(OutcomeValue, OutcomeValue)> = match order {
                OrderAst::Pairs(ps) => ps
                    .iter()
                    .map(|(a, b)| {
                        Ok((
                            resolve_outcome(interner, a)?,
                            resolve_outcome(interner, b)?,
                        ))
                    })
                    .collect::<Result<_, Diagnostic>>()?,
                OrderAst::Chain(chain) => {
                    let elems: Vec<OutcomeValue> = chain
                        .iter()
                        .map(|s| resolve_outcome(interner, s))
                        .collect::<Result<_, Diagnostic>>()?;
                    for (i, e) in elems.iter().enumerate() {
                        if elems[..i].contains(e) {
                            return Err(Diagnostic::error(
                                format!("total order repeats {e}"),
                                pos.line,
                                pos.col,
                            ));
                        }
                    }
                    if elems.len() != outcomes.len() {
                        return Err(Diagnostic::error(
                            "total order must mention every declared outcome",
                            pos.line,
                            pos.col,
                        ));
                    }
                    elems.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
                }
            };
            let order = transitive_closure_order(outcomes.clone(), &pairs)
                .map_err(|e| err_at(e, pos))?;
            Ok(match ast {
                SelSpecAst::Argmax(_) => SelectionSpec::ArgmaxOrder(order),
                _ => SelectionSpec::ArgminOrder(order),
            })
        }
        SelSpecAst::ArgmaxCoord(k) => Ok(SelectionSpec::ArgmaxCoord(*k)),
        SelSpecAst::ArgminCoord(k) => Ok(SelectionSpec::ArgminCoord(*k)),
        SelSpecAst::Fix => Ok(SelectionSpec::Fix),
        SelSpecAst::NonFix => Ok(SelectionSpec::NonFix),
        SelSpecAst::SubMax => Ok(SelectionSpec::SubMax),
        SelSpecAst::Prefer(targets) => {
            let resolved: Vec<OutcomeValue> = targets
                .iter()
                .map(|s| resolve_outcome(interner, s))
                .collect::<Result<_, Diagnostic>>()?;
            Ok(SelectionSpec::Prefer(FiniteSet::from_iter_dedup(resolved)))
        }
        SelSpecAst::Lex(a, b) => Ok(SelectionSpec::Lex(
            Box::new(lower_selspec(a, outcomes, interner, pos)?),
            Box::new(lower_selspec(b, outcomes, interner, pos)?),
        )),
    }
}

/// Parses and elaborates gamedef text in one step.
///
/// ```
/// use hog_core::engine::DEFAULT_PROFILE_BUDGET;
///
/// let game = hog_core::gamedef::load_game(
///     "game contest\n\
///      players J1 J2 J3\n\
///      moves J1 : A B\n\
///      moves J2 : A B\n\
///      moves J3 : A B\n\
///      outcomes : A B\n\
///      outcome builtin majority\n\
///      agent J1 : fix\n\
///      agent J2 : fix\n\
///      agent J3 : fix\n",
/// )
/// .unwrap();
/// game.validate_agent_totality().unwrap();
/// let report = game.solve(DEFAULT_PROFILE_BUDGET).unwrap();
/// assert_eq!(report.nash_count, 8);
/// assert_eq!(report.selection_labels(), ["AAA", "BBB"]);
/// ```
pub fn load_game(text: &str) -> Result<Game, Diagnostic> {
    elaborate(&parse(text)?)
}

// ---------------------------------------------------------------------------
// Report rendering
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

/// Which equilibrium columns to present. Both notions are always computed
/// by the solver; this filters presentation only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquilibriumKind {
    Nash,
    Selection,
    Both,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    game: &'a str,
    rows: Vec<JsonRow>,
}

#[derive(Serialize)]
struct JsonRow {
    profile: Vec<String>,
    outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    nash: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nash_defectors: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    selection: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    selection_defectors: Option<Vec<String>>,
}

/// Renders a solve report. The table format follows the column order
/// Strategy | Outcome | Nash | Defects | Selection | Defects; CSV uses the
/// columns strategy,outcome,nash,nash_defectors,selection,
/// selection_defectors; JSON is a stable object schema. Output ends with a
/// single trailing newline.
pub fn render_report(r: &SolveReport, format: ReportFormat, kind: EquilibriumKind) -> String {
    let compact = r
        .rows
        .iter()
        .all(|row| row.profile.moves().iter().all(|m| m.as_str().len() == 1));
    let label = |row: &crate::engine::ProfileReport| {
        if compact {
            row.profile.label()
        } else {
            row.profile.spaced()
        }
    };
    let want_nash = matches!(kind, EquilibriumKind::Nash | EquilibriumKind::Both);
    let want_sel = matches!(kind, EquilibriumKind::Selection | EquilibriumKind::Both);

    match format {
        ReportFormat::Table => {
            let mut header = vec!["Strategy", "Outcome"];
            if want_nash {
                header.extend(["Nash", "Defects"]);
            }
            if want_sel {
                header.extend(["Selection", "Defects"]);
            }
            let mut out = header.join(" | ");
            out.push('\n');
            for row in &r.rows {
                let mut cells = vec![label(row), row.outcome.to_string()];
                if want_nash {
                    cells.push(if row.is_nash { "yes".into() } else { "-".into() });
                    cells.push(row.nash_defectors().join(","));
                }
                if want_sel {
                    cells.push(if row.is_selection { "yes".into() } else { "-".into() });
                    cells.push(row.selection_defectors().join(","));
                }
                let line = cells.join(" | ");
                out.push_str(line.trim_end());
                out.push('\n');
            }
            out
        }
        ReportFormat::Csv => {
            let mut header = vec!["strategy", "outcome"];
            if want_nash {
                header.extend(["nash", "nash_defectors"]);
            }
            if want_sel {
                header.extend(["selection", "selection_defectors"]);
            }
            let mut out = header.join(",");
            out.push('\n');
            for row in &r.rows {
                let mut cells = vec![csv_field(&label(row)), csv_field(&row.outcome.to_string())];
                if want_nash {
                    cells.push(yes_no(row.is_nash).to_string());
                    cells.push(csv_field(&row.nash_defectors().join(",")));
                }
                if want_sel {
                    cells.push(yes_no(row.is_selection).to_string());
                    cells.push(csv_field(&row.selection_defectors().join(",")));
                }
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        ReportFormat::Json => {
            let rows = r
                .rows
                .iter()
                .map(|row| JsonRow {
                    profile: row.profile.moves().iter().map(|m| m.to_string()).collect(),
                    outcome: row.outcome.to_string(),
                    nash: want_nash.then_some(row.is_nash),
                    nash_defectors: want_nash
                        .then(|| row.nash_defectors().iter().map(|s| s.to_string()).collect()),
                    selection: want_sel.then_some(row.is_selection),
                    selection_defectors: want_sel.then(|| {
                        row.selection_defectors()
                            .iter()
                            .map(|s| s.to_string())
                            .collect()
                    }),
                })
                .collect();
            let doc = JsonReport { game: &r.game, rows };
            let mut out = serde_json::to_string_pretty(&doc).expect("report DTO serializes");
            out.push('\n');
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Strategic-game serialization
// ---------------------------------------------------------------------------

/// Writes a strategic game back out as gamedef text in vector mode, with
/// an own-coordinate maximiser for every player, so compiled games can be
/// re-solved by the same pipeline.
pub fn serialize_strategic(sg: &StrategicGame, name: &str) -> String {
    let n = sg.players().len();
    let mut out = String::new();
    out.push_str(&format!("game {name}\n"));
    out.push_str(&format!("players {}\n", sg.players().join(" ")));
    for (player, moves) in sg.players().iter().zip(sg.move_sets()) {
        let syms: Vec<&str> = moves.iter().map(Symbol::as_str).collect();
        out.push_str(&format!("moves {player} : {}\n", syms.join(" ")));
    }
    out.push_str(&format!("outcomes vector {n}\n"));
    out.push_str("outcome table\n");
    for (profile, payoff) in sg.rows() {
        let coords: Vec<String> = payoff.iter().map(rational_to_string).collect();
        out.push_str(&format!("  {} -> {}\n", profile.spaced(), coords.join(" ")));
    }
    out.push_str("end\n");
    for (i, player) in sg.players().iter().enumerate() {
        out.push_str(&format!("agent {player} : argmax-coord {}\n", i + 1));
    }
    out
}
