//! Concrete syntax: formulas, sequents (`G |- phi`) and sequent files.
//!
//! IMLL uses `*`, `-o`, `I`; IPL uses `/\`, `\/`, `->`, `_|_`. The Unicode
//! symbols `⊗ ⊸ ∧ ∨ → ⊥ ⊢` are accepted as synonyms.

use thiserror::Error;

use super::formula::{
    is_atom_tail_char, Atom, Connective, Formula, Logic, Sequent, RESERVED_PREFIX,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("lexical error at offset {pos}: unexpected `{found}`")]
    Lexical { pos: usize, found: String },
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("`{token}` at offset {pos} is not a connective of {logic}")]
    LogicMismatch {
        pos: usize,
        token: String,
        logic: Logic,
    },
    #[error("atom `{name}` uses the reserved `#` prefix")]
    ReservedAtom { name: String },
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<ParseError>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Atom(String),
    Unit,
    Falsum,
    Bin(Connective),
    LParen,
    RParen,
    Comma,
    Turnstile,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Atom(a) => a.clone(),
            Tok::Unit => "I".into(),
            Tok::Falsum => "_|_".into(),
            Tok::Bin(c) => c.symbol().into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Turnstile => "|-".into(),
        }
    }
}

fn lex(text: &str, allow_reserved: bool) -> Result<Vec<(usize, Tok)>, ParseError> {
    const SYMBOLS: &[(&str, Tok)] = &[
        ("-o", Tok::Bin(Connective::Lolli)),
        ("->", Tok::Bin(Connective::Imp)),
        ("/\\", Tok::Bin(Connective::And)),
        ("\\/", Tok::Bin(Connective::Or)),
        ("_|_", Tok::Falsum),
        ("|-", Tok::Turnstile),
        ("*", Tok::Bin(Connective::Tensor)),
        ("(", Tok::LParen),
        (")", Tok::RParen),
        (",", Tok::Comma),
        ("⊗", Tok::Bin(Connective::Tensor)),
        ("⊸", Tok::Bin(Connective::Lolli)),
        ("∧", Tok::Bin(Connective::And)),
        ("∨", Tok::Bin(Connective::Or)),
        ("→", Tok::Bin(Connective::Imp)),
        ("⊥", Tok::Falsum),
        ("⊢", Tok::Turnstile),
    ];
    let mut out = Vec::new();
    let mut pos = 0;
    'outer: while pos < text.len() {
        let rest = &text[pos..];
        let c = rest.chars().next().expect("nonempty");
        if c.is_whitespace() {
            pos += c.len_utf8();
            continue;
        }
        for (sym, tok) in SYMBOLS {
            if rest.starts_with(sym) {
                out.push((pos, tok.clone()));
                pos += sym.len();
                continue 'outer;
            }
        }
        if c.is_ascii_lowercase() || c == RESERVED_PREFIX {
            let len = rest
                .char_indices()
                .skip(1)
                .find(|&(_, ch)| !is_atom_tail_char(ch))
                .map_or(rest.len(), |(i, _)| i);
            let name = &rest[..len];
            if c == RESERVED_PREFIX && (!allow_reserved || len == 1) {
                return Err(if len == 1 {
                    ParseError::Lexical {
                        pos,
                        found: name.into(),
                    }
                } else {
                    ParseError::ReservedAtom { name: name.into() }
                });
            }
            out.push((pos, Tok::Atom(name.into())));
            pos += len;
            continue;
        }
        if c == 'I' {
            let next = rest[1..].chars().next();
            if !next.is_some_and(is_atom_tail_char) {
                out.push((pos, Tok::Unit));
                pos += 1;
                continue;
            }
        }
        let found: String = rest
            .chars()
            .take_while(|ch| !ch.is_whitespace())
            .take(8)
            .collect();
        return Err(ParseError::Lexical { pos, found });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    end: usize,
    logic: Logic,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let message = match self.peek() {
            Some(t) => format!("expected {wanted}, found `{}`", t.describe()),
            None => format!("expected {wanted}, found end of input"),
        };
        ParseError::Syntax {
            pos: self.pos(),
            message,
        }
    }

    fn check_connective(&self, c: Connective) -> Result<(), ParseError> {
        if c.logic() != self.logic {
            return Err(ParseError::LogicMismatch {
                pos: self.pos(),
                token: c.symbol().into(),
                logic: self.logic,
            });
        }
        Ok(())
    }

    /// Precedence climbing over the binary connectives.
    fn formula(&mut self, min_prec: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.primary()?;
        while let Some(Tok::Bin(c)) = self.peek().cloned() {
            self.check_connective(c)?;
            let prec = prec_of(c);
            if prec < min_prec {
                break;
            }
            self.idx += 1;
            let next_min = if c == Connective::Lolli || c == Connective::Imp {
                prec
            } else {
                prec + 1
            };
            let rhs = self.formula(next_min)?;
            lhs = Formula::binary(c, lhs, rhs);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Atom(name)) => {
                self.idx += 1;
                Ok(Formula::Atom(Atom::new(&name)))
            }
            Some(Tok::Unit) => {
                if self.logic != Logic::Imll {
                    return Err(ParseError::LogicMismatch {
                        pos,
                        token: "I".into(),
                        logic: self.logic,
                    });
                }
                self.idx += 1;
                Ok(Formula::Unit)
            }
            Some(Tok::Falsum) => {
                if self.logic != Logic::Ipl {
                    return Err(ParseError::LogicMismatch {
                        pos,
                        token: "_|_".into(),
                        logic: self.logic,
                    });
                }
                self.idx += 1;
                Ok(Formula::Falsum)
            }
            Some(Tok::LParen) => {
                self.idx += 1;
                let f = self.formula(0)?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.idx += 1;
                Ok(f)
            }
            Some(Tok::Bin(c)) => {
                self.check_connective(c)?;
                Err(self.unexpected("a formula"))
            }
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(Tok::RParen) => Err(ParseError::Syntax {
                pos: self.pos(),
                message: "unbalanced `)`".into(),
            }),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }
}

fn prec_of(c: Connective) -> u8 {
    match c {
        Connective::Tensor | Connective::And => 3,
        Connective::Or => 2,
        Connective::Lolli | Connective::Imp => 1,
    }
}

fn parser(text: &str, logic: Logic, allow_reserved: bool) -> Result<Parser, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let toks = lex(text, allow_reserved)?;
    Ok(Parser {
        toks,
        idx: 0,
        end: text.len(),
        logic,
    })
}

/// Parses user-facing formula text. Reserved `#` atoms are rejected.
pub fn parse_formula(text: &str, logic: Logic) -> Result<Formula, ParseError> {
    parse_formula_with(text, logic, false)
}

/// As [`parse_formula`], optionally admitting reserved atoms (used when
/// reading artifacts this library wrote itself).
pub fn parse_formula_with(
    text: &str,
    logic: Logic,
    allow_reserved: bool,
) -> Result<Formula, ParseError> {
    let mut p = parser(text, logic, allow_reserved)?;
    let f = p.formula(0)?;
    p.finish()?;
    Ok(f)
}

pub fn parse_sequent(text: &str, logic: Logic) -> Result<Sequent, ParseError> {
    parse_sequent_with(text, logic, false)
}

pub fn parse_sequent_with(
    text: &str,
    logic: Logic,
    allow_reserved: bool,
) -> Result<Sequent, ParseError> {
    let mut p = parser(text, logic, allow_reserved)?;
    let mut context = Vec::new();
    if p.peek() != Some(&Tok::Turnstile) {
        loop {
            context.push(p.formula(0)?);
            match p.peek() {
                Some(Tok::Comma) => p.idx += 1,
                Some(Tok::Turnstile) => break,
                Some(Tok::RParen) => {
                    return Err(ParseError::Syntax {
                        pos: p.pos(),
                        message: "unbalanced `)`".into(),
                    })
                }
                _ => return Err(p.unexpected("`,` or `|-`")),
            }
        }
    }
    p.idx += 1;
    let conclusion = p.formula(0)?;
    p.finish()?;
    Ok(Sequent::new(logic, context, conclusion))
}

/// Parses a file of sequents: one per line, blank lines and lines whose
/// first non-blank character is `#` are skipped.
pub fn parse_sequent_file(text: &str, logic: Logic) -> Result<Vec<Sequent>, ParseError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        })
        .map(|(i, l)| {
            parse_sequent(l, logic).map_err(|e| ParseError::Line {
                line: i + 1,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Parses a comma-separated atom list such as `p1, p2` (possibly empty).
pub fn parse_atom_list(text: &str, allow_reserved: bool) -> Result<Vec<Atom>, ParseError> {
    let mut out = Vec::new();
    for (i, part) in text.split(',').enumerate() {
        let name = part.trim();
        if name.is_empty() {
            if text.trim().is_empty() {
                break;
            }
            return Err(ParseError::Syntax {
                pos: i,
                message: "empty atom in list".into(),
            });
        }
        if !Atom::is_valid_name(name, allow_reserved) {
            if name.starts_with(RESERVED_PREFIX) && Atom::is_valid_name(name, true) {
                return Err(ParseError::ReservedAtom { name: name.into() });
            }
            return Err(ParseError::Lexical {
                pos: i,
                found: name.into(),
            });
        }
        out.push(Atom::new(name));
    }
    Ok(out)
}
