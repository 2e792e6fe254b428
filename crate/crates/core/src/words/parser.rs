//! Recursive-descent parser for the relation mini-language.
//!
//! ```text
//! word  := term { term }
//! term  := atom [ '^' int ]
//! atom  := ident | '[' word ',' word ']'
//! int   := [ '+' | '-' ] digit { digit }
//! ident := ( alpha | '_' ) { alnum | '_' }
//! ```
//!
//! Whitespace may appear between any two tokens and is required only where
//! two identifiers would otherwise run together.

use super::ast::{Alphabet, Atom, Term, Word};
use crate::error::{Error, Result};

/// Largest absolute exponent accepted in text.
pub const MAX_EXPONENT: i64 = 1_000_000_000;

/// Deepest commutator nesting accepted in text.
pub const MAX_DEPTH: usize = 128;

pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    let w = p.word(0)?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error(format!("unexpected `{}`", p.peek_char())));
    }
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
            .unwrap_or('?')
    }

    fn starts_term(&self) -> bool {
        matches!(self.peek(), Some(c) if c == b'[' || c == b'_' || c.is_ascii_alphabetic())
    }

    fn word(&mut self, depth: usize) -> Result<Word> {
        let mut terms = Vec::new();
        loop {
            self.skip_ws();
            if !self.starts_term() {
                break;
            }
            terms.push(self.term(depth)?);
        }
        if terms.is_empty() {
            return Err(match self.peek() {
                None => self.error("expected a term, found end of input"),
                Some(_) => self.error(format!("expected a term, found `{}`", self.peek_char())),
            });
        }
        Word::from_terms(terms)
    }

    fn term(&mut self, depth: usize) -> Result<Term> {
        let atom = self.atom(depth)?;
        self.skip_ws();
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.int()?;
            if e == 0 {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "exponent must be nonzero".into(),
                });
            }
            e
        } else {
            1
        };
        Ok(Term { atom, exp })
    }

    fn atom(&mut self, depth: usize) -> Result<Atom> {
        match self.peek() {
            Some(b'[') => {
                if depth >= MAX_DEPTH {
                    return Err(self.error(format!("commutators nested deeper than {MAX_DEPTH}")));
                }
                self.pos += 1;
                let a = self.word(depth + 1)?;
                self.skip_ws();
                if self.peek() != Some(b',') {
                    return Err(self.error("expected `,` inside commutator"));
                }
                self.pos += 1;
                let b = self.word(depth + 1)?;
                self.skip_ws();
                if self.peek() != Some(b']') {
                    return Err(self.error("expected `]` to close commutator"));
                }
                self.pos += 1;
                Ok(Atom::Comm(Box::new(a), Box::new(b)))
            }
            _ => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos])
                    .expect("ASCII identifier bytes");
                if !self.alphabet.contains(name) {
                    return Err(Error::UnknownGenerator {
                        name: name.to_string(),
                        pos: start,
                    });
                }
                Ok(Atom::Gen(name.to_string()))
            }
        }
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        let negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected an integer exponent"));
        }
        let digits = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ASCII digits");
        let magnitude: i64 =
            digits
                .parse()
                .ok()
                .filter(|m| *m <= MAX_EXPONENT)
                .ok_or(Error::Syntax {
                    pos: start,
                    msg: format!("exponent exceeds {MAX_EXPONENT} in absolute value"),
                })?;
        Ok(if negative { -magnitude } else { magnitude })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::ast::render_word;

    fn alpha() -> Alphabet {
        Alphabet::standard(4)
    }

    #[test]
    fn parses_relation_with_three_terms() {
        let w = parse_word("x^9 [y1,y2] [y3,y4]", &alpha()).unwrap();
        assert_eq!(w.terms().len(), 3);
        assert_eq!(w.terms()[0].exp, 9);
        assert_eq!(render_word(&w), "x^9 [y1,y2] [y3,y4]");
    }

    #[test]
    fn parses_nested_commutator() {
        let w = parse_word("[[y1,y2],x]", &alpha()).unwrap();
        assert_eq!(w.terms().len(), 1);
        let Atom::Comm(a, b) = &w.terms()[0].atom else {
            panic!("expected a commutator");
        };
        assert_eq!(a.to_string(), "[y1,y2]");
        assert_eq!(**b, Word::gen("x"));
    }

    #[test]
    fn zero_exponent_is_a_syntax_error() {
        let err = parse_word("x^0", &alpha()).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                pos: 2,
                msg: "exponent must be nonzero".into()
            }
        );
    }

    #[test]
    fn unknown_generator_reports_position() {
        let err = parse_word("x [y1,z]", &alpha()).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownGenerator {
                name: "z".into(),
                pos: 6
            }
        );
    }

    #[test]
    fn whitespace_is_normalized() {
        let w = parse_word("  [ y1 y2 ^ -2 , x ]^3x", &alpha()).unwrap();
        assert_eq!(render_word(&w), "[y1 y2^-2,x]^3 x");
    }

    #[test]
    fn malformed_inputs() {
        for bad in [
            "",
            "[y1,y2",
            "[y1]",
            "x^",
            "x^-",
            "x)",
            "[,y1]",
            "x^99999999999",
            "x ^ 1 ,",
        ] {
            assert!(
                matches!(parse_word(bad, &alpha()), Err(Error::Syntax { .. })),
                "`{bad}` should be a syntax error"
            );
        }
    }

    #[test]
    fn deep_nesting_is_bounded() {
        let deep = "[".repeat(MAX_DEPTH + 1) + "x";
        assert!(matches!(
            parse_word(&deep, &alpha()),
            Err(Error::Syntax { .. })
        ));
        let mut ok = String::from("x");
        for _ in 0..MAX_DEPTH {
            ok = format!("[x,{ok}]");
        }
        assert_eq!(parse_word(&ok, &alpha()).unwrap().depth(), MAX_DEPTH);
    }
}
