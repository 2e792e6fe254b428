use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A generator or its formal inverse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub name: String,
    pub inverse: bool,
}

impl Letter {
    pub fn new(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverse: false,
        }
    }

    pub fn inverted(name: impl Into<String>) -> Self {
        Letter {
            name: name.into(),
            inverse: true,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Gen(String),
    Comm(Box<Word>, Box<Word>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub atom: Atom,
    pub exp: i64,
}

/// A nonempty product of terms; every exponent is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    terms: Vec<Term>,
}

impl Word {
    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a word needs at least one term"));
        }
        if terms.iter().any(|t| t.exp == 0) {
            return Err(Error::invalid("term exponents must be nonzero"));
        }
        Ok(Word { terms })
    }

    pub fn gen(name: impl Into<String>) -> Self {
        Word::power(Atom::Gen(name.into()), 1).expect("exponent 1 is valid")
    }

    pub fn power(atom: Atom, exp: i64) -> Result<Self> {
        Word::from_terms(vec![Term { atom, exp }])
    }

    pub fn gen_power(name: impl Into<String>, exp: i64) -> Result<Self> {
        Word::power(Atom::Gen(name.into()), exp)
    }

    /// The one-term word `[a, b]`.
    pub fn commutator(a: Word, b: Word) -> Self {
        Word {
            terms: vec![Term {
                atom: Atom::Comm(Box::new(a), Box::new(b)),
                exp: 1,
            }],
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Word { terms }
    }

    /// Splits off the first term: `(head, tail)`; the tail is `None` for a one-term word.
    pub fn split_first(&self) -> (Word, Option<Word>) {
        let head = Word {
            terms: vec![self.terms[0].clone()],
        };
        let tail = (self.terms.len() > 1).then(|| Word {
            terms: self.terms[1..].to_vec(),
        });
        (head, tail)
    }

    /// The letter this word is, if it is a single generator to the power ±1.
    pub fn as_letter(&self) -> Option<Letter> {
        match self.terms.as_slice() {
            [Term {
                atom: Atom::Gen(name),
                exp,
            }] if exp.abs() == 1 => Some(Letter {
                name: name.clone(),
                inverse: *exp < 0,
            }),
            _ => None,
        }
    }

    /// Generator names occurring anywhere in the word.
    pub fn generators(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeSet<String>) {
        for t in &self.terms {
            match &t.atom {
                Atom::Gen(n) => {
                    out.insert(n.clone());
                }
                Atom::Comm(a, b) => {
                    a.collect_generators(out);
                    b.collect_generators(out);
                }
            }
        }
    }

    /// Total exponent of `name` in the image of the word in the free abelian
    /// group; commutators contribute zero. A word lies in `[S, S]` exactly
    /// when this vanishes for every generator.
    pub fn exponent_sum(&self, name: &str) -> i128 {
        self.terms
            .iter()
            .map(|t| match &t.atom {
                Atom::Gen(n) if n == name => t.exp as i128,
                _ => 0,
            })
            .sum()
    }

    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| match &t.atom {
                Atom::Gen(_) => 0,
                Atom::Comm(a, b) => 1 + a.depth().max(b.depth()),
            })
            .max()
            .unwrap_or(0)
    }

    /// True when the word is a product of hyper-commutators whose innermost
    /// entries are letters: every top-level term is a commutator and every
    /// commutator argument is either a letter or again such a product.
    pub fn is_commutator_expression(&self) -> bool {
        self.terms.iter().all(|t| match &t.atom {
            Atom::Gen(_) => false,
            Atom::Comm(a, b) => [a, b]
                .iter()
                .all(|w| w.as_letter().is_some() || w.is_commutator_expression()),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match &t.atom {
                Atom::Gen(n) => f.write_str(n)?,
                Atom::Comm(a, b) => write!(f, "[{a},{b}]")?,
            }
            if t.exp != 1 {
                write!(f, "^{}", t.exp)?;
            }
        }
        Ok(())
    }
}

/// Canonical rendering: single spaces between terms, no spaces inside brackets.
pub fn render_word(w: &Word) -> String {
    w.to_string()
}

/// Generators `{x} ∪ {y_1, …, y_n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Alphabet {
    x: String,
    ys: Vec<String>,
}

impl Alphabet {
    pub fn new(
        x: impl Into<String>,
        ys: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self> {
        let x = x.into();
        let ys: Vec<String> = ys.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for name in std::iter::once(&x).chain(ys.iter()) {
            if !is_identifier(name) {
                return Err(Error::invalid(format!(
                    "`{name}` is not a valid generator name"
                )));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::invalid(format!("generator `{name}` declared twice")));
            }
        }
        Ok(Alphabet { x, ys })
    }

    /// `x, y1, …, yn`.
    pub fn standard(n: usize) -> Self {
        Alphabet {
            x: "x".into(),
            ys: (1..=n).map(|i| format!("y{i}")).collect(),
        }
    }

    pub fn x(&self) -> &str {
        &self.x
    }

    pub fn ys(&self) -> &[String] {
        &self.ys
    }

    pub fn contains(&self, name: &str) -> bool {
        self.x == name || self.ys.iter().any(|y| y == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `[x^(0), y] = y`, `[x^(i), y] = [x, [x^(i-1), y]]`.
pub fn iterated_commutator(x: &Word, y: &Word, i: usize) -> Word {
    (0..i).fold(y.clone(), |acc, _| Word::commutator(x.clone(), acc))
}

/// Ordered letter pairs `(u, v)` such that `[u, v]` occurs as an innermost
/// two-letter commutator somewhere in the word.
pub fn appearing_pairs(w: &Word) -> BTreeSet<(Letter, Letter)> {
    let mut out = BTreeSet::new();
    collect_pairs(w, &mut out);
    out
}

fn collect_pairs(w: &Word, out: &mut BTreeSet<(Letter, Letter)>) {
    for t in &w.terms {
        if let Atom::Comm(a, b) = &t.atom {
            match (a.as_letter(), b.as_letter()) {
                (Some(u), Some(v)) => {
                    out.insert((u, v));
                }
                _ => {
                    collect_pairs(a, out);
                    collect_pairs(b, out);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(i: usize) -> Word {
        Word::gen(format!("y{i}"))
    }

    #[test]
    fn iterated_commutator_unfolds() {
        let x = Word::gen("x");
        assert_eq!(iterated_commutator(&x, &y(1), 0), y(1));
        assert_eq!(iterated_commutator(&x, &y(1), 1).to_string(), "[x,y1]");
        assert_eq!(iterated_commutator(&x, &y(1), 2).to_string(), "[x,[x,y1]]");
    }

    #[test]
    fn appearing_pairs_examples() {
        let x = Word::gen("x");
        let c12 = Word::commutator(y(1), y(2));
        let w = Word::commutator(c12.clone(), x.clone());
        assert_eq!(
            appearing_pairs(&w),
            BTreeSet::from([(Letter::new("y1"), Letter::new("y2"))])
        );
        let w = Word::commutator(c12, Word::commutator(y(3), y(4)));
        assert_eq!(
            appearing_pairs(&w),
            BTreeSet::from([
                (Letter::new("y1"), Letter::new("y2")),
                (Letter::new("y3"), Letter::new("y4"))
            ])
        );
        assert!(appearing_pairs(&Word::gen_power("y1", 3).unwrap()).is_empty());
    }

    #[test]
    fn appearing_pairs_tracks_inverse_letters() {
        let w = Word::commutator(Word::gen_power("x", -1).unwrap(), y(2));
        assert_eq!(
            appearing_pairs(&w),
            BTreeSet::from([(Letter::inverted("x"), Letter::new("y2"))])
        );
    }

    #[test]
    fn zero_exponent_rejected() {
        assert!(Word::gen_power("x", 0).is_err());
        assert!(Word::from_terms(vec![]).is_err());
    }

    #[test]
    fn commutator_expression_shape() {
        let c = Word::commutator(y(1), y(2));
        assert!(c.is_commutator_expression());
        assert!(c
            .concat(&Word::commutator(c.clone(), Word::gen("x")))
            .is_commutator_expression());
        assert!(!c.concat(&y(3)).is_commutator_expression());
        let bad = Word::commutator(Word::gen_power("y1", 2).unwrap(), y(2));
        assert!(!bad.is_commutator_expression());
    }

    #[test]
    fn exponent_sums() {
        let w = Word::gen_power("x", 9)
            .unwrap()
            .concat(&Word::commutator(Word::gen("x"), y(1)))
            .concat(&Word::gen_power("y1", -2).unwrap());
        assert_eq!(w.exponent_sum("x"), 9);
        assert_eq!(w.exponent_sum("y1"), -2);
        assert_eq!(w.depth(), 1);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new("x", ["y1", "y1"]).is_err());
        assert!(Alphabet::new("x", ["x"]).is_err());
        assert!(Alphabet::new("1x", Vec::<String>::new()).is_err());
        let a = Alphabet::standard(3);
        assert!(a.contains("y3") && !a.contains("y4"));
    }
}
