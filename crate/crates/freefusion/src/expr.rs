//! A small expression language over a loaded ring.
//!
//! Grammar: words in square brackets as space-separated letter names
//! (`[a a*]`, `[]` is the unit), `~` postfix for duals, `*` for products
//! (left-associative), `+` for sums, parentheses, and nonnegative integer
//! scalars which multiply by juxtaposition (`2 [a]`).

use num_bigint::BigUint;
use thiserror::Error;

use crate::ring::{LetterAddr, RingElement, RingError, RingHandle, Simple};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown letter `{name}`")]
    UnknownLetter { line: usize, col: usize, name: String },
    #[error("{line}:{col}: word does not name a simple: {message}")]
    NotASimple { line: usize, col: usize, message: String },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Expr {
    Int(BigUint),
    Word(Simple),
    Dual(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

struct Parser<'a> {
    ring: &'a RingHandle,
    space: crate::ring::LetterSpace,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Parser<'a> {
    fn new(ring: &'a RingHandle, src: &str) -> Self {
        Parser {
            ring,
            space: ring.letter_space(),
            chars: src.chars().collect(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { line: self.line, col: self.col, message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`"))
        }
    }

    fn parse_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('+') {
                self.bump();
                let rhs = self.parse_term()?;
                e = Expr::Sum(Box::new(e), Box::new(rhs));
            } else {
                return Ok(e);
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.parse_factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                let rhs = self.parse_factor()?;
                e = Expr::Product(Box::new(e), Box::new(rhs));
            } else {
                return Ok(e);
            }
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '[' || c == '(')
    }

    fn parse_factor(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let mut e = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let mut digits = String::new();
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(self.bump().unwrap());
                }
                let n = Expr::Int(digits.parse().expect("digits parse as an integer"));
                self.skip_ws();
                if self.starts_factor() {
                    // scalar juxtaposition
                    let rhs = self.parse_factor()?;
                    return Ok(Expr::Product(Box::new(n), Box::new(rhs)));
                }
                n
            }
            Some('(') => {
                self.bump();
                let inner = self.parse_expr()?;
                self.expect(')')?;
                inner
            }
            Some('[') => self.parse_word()?,
            Some(c) => return self.syntax(format!("unexpected `{c}`")),
            None => return self.syntax("unexpected end of input"),
        };
        loop {
            self.skip_ws();
            if self.peek() == Some('~') {
                self.bump();
                e = Expr::Dual(Box::new(e));
            } else {
                return Ok(e);
            }
        }
    }

    fn parse_word(&mut self) -> Result<Expr, ParseError> {
        let (start_line, start_col) = (self.line, self.col);
        self.expect('[')?;
        let mut addrs: Vec<LetterAddr> = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(']') => {
                    self.bump();
                    break;
                }
                Some('[') => return self.syntax("nested `[` inside a word"),
                None => return self.syntax("unterminated word literal"),
                Some(_) => {
                    let (nline, ncol) = (self.line, self.col);
                    let mut name = String::new();
                    while self
                        .peek()
                        .is_some_and(|c| !c.is_whitespace() && c != ']' && c != '[')
                    {
                        name.push(self.bump().unwrap());
                    }
                    match self.space.resolve(self.ring, &name) {
                        Some(addr) => addrs.push(addr),
                        None => {
                            return Err(ParseError::UnknownLetter {
                                line: nline,
                                col: ncol,
                                name,
                            })
                        }
                    }
                }
            }
        }
        match self.ring.simple_from_letters(&addrs) {
            Ok(s) => Ok(Expr::Word(s)),
            Err(e) => Err(ParseError::NotASimple {
                line: start_line,
                col: start_col,
                message: e.to_string(),
            }),
        }
    }
}

/// Parses an expression against the letters of the loaded ring.
pub fn parse(ring: &RingHandle, src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(ring, src);
    let e = p.parse_expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return p.syntax(format!("trailing `{c}`"));
    }
    Ok(e)
}

/// Parses a whitespace-separated sequence of word literals (generator lists).
pub fn parse_words(ring: &RingHandle, src: &str) -> Result<Vec<Simple>, ParseError> {
    let mut p = Parser::new(ring, src);
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        match p.peek() {
            None => return Ok(out),
            Some('[') => match p.parse_word()? {
                Expr::Word(s) => out.push(s),
                _ => unreachable!("parse_word returns word literals"),
            },
            Some(c) => return p.syntax(format!("expected a word literal, found `{c}`")),
        }
    }
}

/// Evaluates an expression to a fully decomposed element.
pub fn eval(e: &Expr, ring: &RingHandle) -> Result<RingElement, RingError> {
    match e {
        Expr::Int(n) => Ok(RingElement::unit(ring.clone()).scale(n)),
        Expr::Word(s) => RingElement::simple(ring.clone(), s.clone()),
        Expr::Dual(inner) => eval(inner, ring)?.dual(),
        Expr::Sum(a, b) => eval(a, ring)?.add(&eval(b, ring)?),
        Expr::Product(a, b) => eval(a, ring)?.mul(&eval(b, ring)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn eval_str(spec: &str, src: &str) -> RingElement {
        let ring = catalog::ring_from_spec(spec).unwrap();
        eval(&parse(&ring, src).unwrap(), &ring).unwrap()
    }

    #[test]
    fn product_of_word_literals_parses() {
        let ring = catalog::ring_from_spec("au").unwrap();
        let e = parse(&ring, "[a a*] * [a a*]").unwrap();
        assert!(matches!(e, Expr::Product(..)));
    }

    #[test]
    fn scalars_and_duals_parse() {
        let ring = catalog::ring_from_spec("au").unwrap();
        let e = parse(&ring, "2 [a] + [a*]~").unwrap();
        let Expr::Sum(lhs, rhs) = e else { panic!("expected a sum") };
        assert!(matches!(*lhs, Expr::Product(..)));
        assert!(matches!(*rhs, Expr::Dual(..)));
    }

    #[test]
    fn unknown_letters_carry_positions() {
        let ring = catalog::ring_from_spec("au").unwrap();
        let err = parse(&ring, "[c]").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownLetter { line: 1, col: 2, name: "c".into() }
        );
        let err = parse(&ring, "[a] +").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn eval_matches_ring_products() {
        assert_eq!(eval_str("au", "[a] * [a]~").to_string(), "1 + [a a*]");
        assert_eq!(eval_str("au", "[]").to_string(), "1");
        assert_eq!(eval_str("aaut", "[r] * [r]").to_string(), "1 + [r] + [r r]");
        assert_eq!(eval_str("au", "2 [a] + [a]").to_string(), "3 [a]");
        assert_eq!(eval_str("au", "0").to_string(), "0");
    }

    #[test]
    fn cyclic_words_use_residues() {
        assert_eq!(eval_str("refl:3", "[1] * [2]").to_string(), "1 + [0] + [1 2]");
        assert_eq!(eval_str("refl:inf", "[-1] * [1]").to_string(), "1 + [0] + [-1 1]");
    }

    #[test]
    fn printed_elements_reparse_to_themselves() {
        for (spec, src) in [
            ("au", "([a] + [a*]) * ([a] + [a*])"),
            ("refl:3", "[1 1] * [1 2] * [2]"),
            ("freeprod:bu,bu", "[r s] * [s r] + 2 [r]"),
            ("aaut", "[r] * [r] * [r]"),
        ] {
            let ring = catalog::ring_from_spec(spec).unwrap();
            let el = eval(&parse(&ring, src).unwrap(), &ring).unwrap();
            let printed = el.to_string();
            let back = eval(&parse(&ring, &printed).unwrap(), &ring).unwrap();
            assert_eq!(back, el, "{spec}: `{printed}`");
        }
    }

    #[test]
    fn generator_lists_parse() {
        let ring = catalog::ring_from_spec("au").unwrap();
        let gens = parse_words(&ring, "[a a*] [a* a]").unwrap();
        assert_eq!(gens.len(), 2);
        assert!(parse_words(&ring, "[a a*] nonsense").is_err());
    }
}
