//! Concrete syntax for formulas and sequents.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! sequent := formula "|-" formula
//! formula := conj ("|" conj)*              disjunction, loosest
//! conj    := unary ("&" unary)*            conjunction binds tighter than "|"
//! unary   := ("[]" | "<>") label? unary
//!          | "top" | "bot" | IDENT | "(" formula ")"
//! label   := "_" IDENT                     as in "[]_M", "<>_H"
//! IDENT   := [A-Za-z][A-Za-z0-9_]*
//! ```
//!
//! `top` and `bot` are reserved words; an unlabelled `[]`/`<>` binds the
//! frame's sole relation label at evaluation time. Both connectives associate
//! to the left, and modalities bind tightest: `[] p & q` is `([] p) & q`.
//!
//! Errors carry a 1-based character position, the expected-token set, and
//! what was found instead. Three representative cases, each exercised by the
//! test suite:
//!
//! - a dangling modal label, as in `"[]_"` — expected a label identifier;
//! - an unclosed parenthesis, as in `"(p & q"` — expected `&`, `|`, or `)`;
//! - a missing operand, as in `"p &"` — expected the start of a formula.

use thiserror::Error;

use crate::logic::{Formula, Sequent};

/// A formula or sequent syntax error with its position (1-based character
/// column), the expected-token set, and the offending token.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub position: usize,
    pub expected: Vec<String>,
    pub found: String,
}

fn err(position: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
    ParseError {
        position,
        expected: expected.iter().map(|s| s.to_string()).collect(),
        found: found.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    And,
    Or,
    Turnstile,
    LParen,
    RParen,
    BoxOp(Option<String>),
    DiaOp(Option<String>),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    /// 1-based character position of the token's first character.
    position: usize,
}

impl Token {
    fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Ident(name) => format!("identifier `{name}`"),
            TokenKind::And => "`&`".to_string(),
            TokenKind::Or => "`|`".to_string(),
            TokenKind::Turnstile => "`|-`".to_string(),
            TokenKind::LParen => "`(`".to_string(),
            TokenKind::RParen => "`)`".to_string(),
            TokenKind::BoxOp(None) => "`[]`".to_string(),
            TokenKind::BoxOp(Some(l)) => format!("`[]_{l}`"),
            TokenKind::DiaOp(None) => "`<>`".to_string(),
            TokenKind::DiaOp(Some(l)) => format!("`<>_{l}`"),
            TokenKind::End => "end of input".to_string(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;

    let ident_at = |i: usize| -> Option<(String, usize)> {
        if i < chars.len() && chars[i].is_ascii_alphabetic() {
            let mut j = i + 1;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            Some((chars[i..j].iter().collect(), j))
        } else {
            None
        }
    };
    let found_at = |i: usize| -> String {
        match chars.get(i) {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        }
    };
    // An optional "_label" suffix for a modal operator that starts at `start`.
    let label_suffix = |i: usize| -> Result<(Option<String>, usize), ParseError> {
        if chars.get(i) == Some(&'_') {
            match ident_at(i + 1) {
                Some((label, j)) => Ok((Some(label), j)),
                None => Err(err(i + 2, &["label identifier"], found_at(i + 1))),
            }
        } else {
            Ok((None, i))
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let position = i + 1;
        match c {
            c if c.is_whitespace() => i += 1,
            '&' => {
                tokens.push(Token { kind: TokenKind::And, position });
                i += 1;
            }
            '|' => {
                if chars.get(i + 1) == Some(&'-') {
                    tokens.push(Token { kind: TokenKind::Turnstile, position });
                    i += 2;
                } else {
                    tokens.push(Token { kind: TokenKind::Or, position });
                    i += 1;
                }
            }
            '(' => {
                tokens.push(Token { kind: TokenKind::LParen, position });
                i += 1;
            }
            ')' => {
                tokens.push(Token { kind: TokenKind::RParen, position });
                i += 1;
            }
            '[' => {
                if chars.get(i + 1) != Some(&']') {
                    return Err(err(i + 2, &["`]`"], found_at(i + 1)));
                }
                let (label, next) = label_suffix(i + 2)?;
                tokens.push(Token { kind: TokenKind::BoxOp(label), position });
                i = next;
            }
            '<' => {
                if chars.get(i + 1) != Some(&'>') {
                    return Err(err(i + 2, &["`>`"], found_at(i + 1)));
                }
                let (label, next) = label_suffix(i + 2)?;
                tokens.push(Token { kind: TokenKind::DiaOp(label), position });
                i = next;
            }
            _ => match ident_at(i) {
                Some((name, j)) => {
                    tokens.push(Token { kind: TokenKind::Ident(name), position });
                    i = j;
                }
                None => {
                    return Err(err(
                        position,
                        &["identifier", "operator", "parenthesis"],
                        format!("`{c}`"),
                    ))
                }
            },
        }
    }
    tokens.push(Token {
        kind: TokenKind::End,
        position: chars.len() + 1,
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

const FORMULA_START: &[&str] = &["identifier", "`top`", "`bot`", "`(`", "`[]`", "`<>`"];

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Token {
        let token = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        token
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek().kind == TokenKind::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == TokenKind::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let token = self.bump();
        match token.kind {
            TokenKind::BoxOp(label) => {
                Ok(Formula::Box(label, Box::new(self.unary()?)))
            }
            TokenKind::DiaOp(label) => {
                Ok(Formula::Dia(label, Box::new(self.unary()?)))
            }
            TokenKind::Ident(name) if name == "top" => Ok(Formula::Top),
            TokenKind::Ident(name) if name == "bot" => Ok(Formula::Bottom),
            TokenKind::Ident(name) => Ok(Formula::Atom(name)),
            TokenKind::LParen => {
                let inner = self.formula()?;
                let close = self.bump();
                if close.kind != TokenKind::RParen {
                    return Err(err(
                        close.position,
                        &["`&`", "`|`", "`)`"],
                        close.describe(),
                    ));
                }
                Ok(inner)
            }
            _ => Err(err(token.position, FORMULA_START, token.describe())),
        }
    }

    fn expect_end(&mut self, also: &[&str]) -> Result<(), ParseError> {
        let token = self.bump();
        if token.kind == TokenKind::End {
            return Ok(());
        }
        let mut expected: Vec<&str> = vec!["`&`", "`|`"];
        expected.extend_from_slice(also);
        expected.push("end of input");
        Err(err(token.position, &expected, token.describe()))
    }
}

/// Parses a formula.
pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        tokens: lex(input)?,
        at: 0,
    };
    let formula = parser.formula()?;
    parser.expect_end(&[])?;
    Ok(formula)
}

/// Parses a sequent `φ |- ψ`.
pub fn parse_sequent(input: &str) -> Result<Sequent, ParseError> {
    let mut parser = Parser {
        tokens: lex(input)?,
        at: 0,
    };
    let lhs = parser.formula()?;
    let turnstile = parser.bump();
    if turnstile.kind != TokenKind::Turnstile {
        return Err(err(
            turnstile.position,
            &["`&`", "`|`", "`|-`"],
            turnstile.describe(),
        ));
    }
    let rhs = parser.formula()?;
    parser.expect_end(&[])?;
    Ok(Sequent::new(lhs, rhs))
}
