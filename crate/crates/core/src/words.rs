//! Free-group words over a fixed basis `x1, ..., xr`, and a small expression
//! language for writing them down.
//!
//! Grammar accepted by [`parse_word`]:
//!
//! ```text
//! expr  := term*                      juxtaposition = concatenation
//! term  := atom ('^' integer)*
//! atom  := generator | '1' | '(' expr ')' | '[' expr ',' expr ']'
//! generator := 'x' digits | 'X' digits | single letter
//! ```
//!
//! Single letters map `x, y, z` to generators 1, 2, 3 and `a, ..., w` to
//! 4, ..., 26. An uppercase letter is the inverse of its lowercase form.
//! Printed words always use the indexed alphabet (`x1 x2 x1^-1`).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A signed basis letter: `+g` is `x_g`, `-g` is `x_g^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Letter {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn from_signed(raw: i32) -> Letter {
        assert!(raw != 0, "zero is not a letter");
        Letter(raw)
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn sign(self) -> i32 {
        self.0.signum()
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "x{}^-1", self.generator())
        } else {
            write!(f, "x{}", self.generator())
        }
    }
}

/// A freely reduced word in `F_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
    rank: usize,
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word { letters: Vec::new(), rank }
    }

    pub fn generator(generator: usize, rank: usize) -> Word {
        Word::from_letters([Letter::new(generator, false)], rank)
    }

    /// Builds a word from arbitrary letters, reducing as it goes. The rank is
    /// raised if a letter needs it.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I, rank: usize) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        let mut rank = rank;
        for l in letters {
            rank = rank.max(l.generator());
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out, rank }
    }

    /// Signed-integer spelling, e.g. `[1, 2, -1, -2]` for `[x1, x2]`.
    pub fn from_signed(letters: &[i32], rank: usize) -> Word {
        Word::from_letters(letters.iter().map(|&s| Letter::from_signed(s)), rank)
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word, ParseError> {
        Ok(parse_word(text, rank)?.eval(rank))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn signed_letters(&self) -> Vec<i32> {
        self.letters.iter().map(|l| l.signed()).collect()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn with_rank(mut self, rank: usize) -> Word {
        self.rank = rank.max(self.max_generator());
        self
    }

    pub fn max_generator(&self) -> usize {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn uses_generator(&self, generator: usize) -> bool {
        self.letters.iter().any(|l| l.generator() == generator)
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::from_letters(
            self.letters.iter().chain(other.letters.iter()).copied(),
            self.rank.max(other.rank),
        )
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            rank: self.rank,
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..exponent.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        c.mul(self).mul(&c.inverse())
    }

    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.mul(v).mul(&u.inverse()).mul(&v.inverse())
    }

    /// Total exponent of each generator, indexed from 0.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.rank.max(self.max_generator())];
        for l in &self.letters {
            sums[l.generator() - 1] += l.sign() as i64;
        }
        sums
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || *a != b.inverse(),
            _ => true,
        }
    }

    /// Returns `(core, conjugator)` with `self = conjugator * core * conjugator^-1`
    /// and `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut k = 0;
        while l.len() >= 2 * (k + 1) && l[k] == l[l.len() - 1 - k].inverse() {
            k += 1;
        }
        let core = Word { letters: l[k..l.len() - k].to_vec(), rank: self.rank };
        let conj = Word { letters: l[..k].to_vec(), rank: self.rank };
        (core, conj)
    }

    pub fn cyclic_core(&self) -> Word {
        self.cyclic_reduce().0
    }

    pub fn cyclic_length(&self) -> usize {
        self.cyclic_reduce().0.len()
    }

    /// Cyclic rotation by `k` positions. Only meaningful for cyclically
    /// reduced words, where the result is again reduced.
    pub fn rotate(&self, k: usize) -> Word {
        if self.letters.is_empty() {
            return self.clone();
        }
        let k = k % self.letters.len();
        let mut letters = self.letters[k..].to_vec();
        letters.extend_from_slice(&self.letters[..k]);
        Word::from_letters(letters, self.rank)
    }

    /// Lexicographically minimal rotation of the cyclic core.
    pub fn min_rotation(&self) -> Word {
        let core = self.cyclic_core();
        (0..core.len().max(1))
            .map(|k| core.rotate(k))
            .min_by(|a, b| a.letters.cmp(&b.letters))
            .unwrap_or(core)
    }

    pub fn is_proper_power(&self) -> ProperPower {
        let (core, conj) = self.cyclic_reduce();
        let n = core.len();
        if n == 0 {
            return ProperPower { is_power: false, root: self.clone(), exponent: 1 };
        }
        for period in 1..n {
            if n % period != 0 {
                continue;
            }
            if (0..n).all(|i| core.letters[i] == core.letters[(i + period) % n]) {
                let root = Word { letters: core.letters[..period].to_vec(), rank: self.rank };
                return ProperPower {
                    is_power: true,
                    root: root.conjugate_by(&conj),
                    exponent: (n / period) as u32,
                };
            }
        }
        ProperPower { is_power: false, root: self.clone(), exponent: 1 }
    }

    /// Cache identity: minimal rotation of the cyclic core, then the
    /// conjugator, then the full reduced spelling.
    pub fn canonical_key(&self) -> String {
        let (_, conj) = self.cyclic_reduce();
        format!("{} | {} | {}", self.min_rotation(), conj, self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperPower {
    pub is_power: bool,
    pub root: Word,
    pub exponent: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Balance {
    pub balanced: bool,
    /// Total exponent per generator over all words, indexed from 0.
    pub totals: Vec<i64>,
}

/// Whether every generator has total exponent 0 across `words`.
pub fn is_balanced(words: &[Word]) -> Balance {
    let width = words.iter().map(|w| w.rank().max(w.max_generator())).max().unwrap_or(0);
    let mut totals = vec![0i64; width];
    for w in words {
        for (i, s) in w.exponent_sums().into_iter().enumerate() {
            totals[i] += s;
        }
    }
    Balance { balanced: totals.iter().all(|&t| t == 0), totals }
}

/// Syntax tree produced by [`parse_word`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    Generator(usize),
    Inverse(Box<WordExpr>),
    Power(Box<WordExpr>, i64),
    Concat(Vec<WordExpr>),
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

impl WordExpr {
    pub fn eval(&self, rank: usize) -> Word {
        match self {
            WordExpr::Generator(g) => Word::generator(*g, rank),
            WordExpr::Inverse(e) => e.eval(rank).inverse(),
            WordExpr::Power(e, k) => e.eval(rank).pow(*k),
            WordExpr::Concat(parts) => parts
                .iter()
                .fold(Word::identity(rank), |acc, p| acc.mul(&p.eval(rank))),
            WordExpr::Commutator(u, v) => Word::commutator(&u.eval(rank), &v.eval(rank)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at position {position}")]
    Unexpected { position: usize, found: char },
    #[error("unexpected end of input at position {position}, expected {expected}")]
    UnexpectedEnd { position: usize, expected: &'static str },
    #[error("expected {expected} at position {position}")]
    Expected { position: usize, expected: &'static str },
    #[error("generator x{generator} at position {position} exceeds rank {rank}")]
    RankExceeded { position: usize, generator: usize, rank: usize },
    #[error("integer at position {position} is out of range")]
    BadInteger { position: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match *self {
            ParseError::Unexpected { position, .. }
            | ParseError::UnexpectedEnd { position, .. }
            | ParseError::Expected { position, .. }
            | ParseError::RankExceeded { position, .. }
            | ParseError::BadInteger { position } => position,
        }
    }
}

/// Maps a lowercase letter to its generator index.
fn letter_index(c: char) -> Option<usize> {
    match c {
        'x' => Some(1),
        'y' => Some(2),
        'z' => Some(3),
        'a'..='w' => Some(4 + (c as usize - 'a' as usize)),
        _ => None,
    }
}

pub fn parse_word(text: &str, rank: usize) -> Result<WordExpr, ParseError> {
    let mut p = Parser { chars: text.char_indices().collect(), pos: 0, len: text.len(), rank };
    let expr = p.expr()?;
    p.skip_ws();
    match p.peek() {
        None => Ok(expr),
        Some((position, found)) => Err(ParseError::Unexpected { position, found }),
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    rank: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while matches!(self.chars.get(self.pos), Some((_, c)) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.peek().map(|(i, _)| i).unwrap_or(self.len)
    }

    fn expr(&mut self) -> Result<WordExpr, ParseError> {
        let mut parts = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some((_, c)) if c.is_ascii_alphabetic() || c == '(' || c == '[' || c == '1' => {
                    parts.push(self.term()?);
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { WordExpr::Concat(parts) })
    }

    fn term(&mut self) -> Result<WordExpr, ParseError> {
        let mut atom = self.atom()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some((_, '^')) => {
                    self.pos += 1;
                    self.skip_ws();
                    let k = self.integer(true)?;
                    atom = WordExpr::Power(Box::new(atom), k);
                }
                _ => return Ok(atom),
            }
        }
    }

    fn integer(&mut self, signed: bool) -> Result<i64, ParseError> {
        let start = self.offset();
        let mut text = String::new();
        if signed {
            if let Some((_, c @ ('-' | '+'))) = self.peek() {
                text.push(c);
                self.pos += 1;
                self.skip_ws();
            }
        }
        while let Some((_, c)) = self.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if !text.chars().any(|c| c.is_ascii_digit()) {
            return match self.peek() {
                None => Err(ParseError::UnexpectedEnd { position: self.len, expected: "integer" }),
                Some((position, _)) => Err(ParseError::Expected { position, expected: "integer" }),
            };
        }
        text.parse::<i64>().map_err(|_| ParseError::BadInteger { position: start })
    }

    fn expect(&mut self, want: char, expected: &'static str) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            Some((_, c)) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some((position, _)) => Err(ParseError::Expected { position, expected }),
            None => Err(ParseError::UnexpectedEnd { position: self.len, expected }),
        }
    }

    fn generator(&mut self, position: usize, generator: usize) -> Result<WordExpr, ParseError> {
        if generator == 0 || generator > self.rank {
            return Err(ParseError::RankExceeded { position, generator, rank: self.rank });
        }
        Ok(WordExpr::Generator(generator))
    }

    fn atom(&mut self) -> Result<WordExpr, ParseError> {
        self.skip_ws();
        let Some((position, c)) = self.peek() else {
            return Err(ParseError::UnexpectedEnd { position: self.len, expected: "generator" });
        };
        match c {
            '(' => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')', "')'")?;
                Ok(e)
            }
            '[' => {
                self.pos += 1;
                let u = self.expr()?;
                self.expect(',', "','")?;
                let v = self.expr()?;
                self.expect(']', "']'")?;
                Ok(WordExpr::Commutator(Box::new(u), Box::new(v)))
            }
            '1' => {
                self.pos += 1;
                Ok(WordExpr::Concat(Vec::new()))
            }
            'x' | 'X' if matches!(self.chars.get(self.pos + 1), Some((_, d)) if d.is_ascii_digit()) => {
                self.pos += 1;
                let g = self.integer(false)?;
                let g = usize::try_from(g).map_err(|_| ParseError::BadInteger { position })?;
                let gen = self.generator(position, g)?;
                Ok(if c == 'X' { WordExpr::Inverse(Box::new(gen)) } else { gen })
            }
            c if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let g = letter_index(c.to_ascii_lowercase())
                    .ok_or(ParseError::Unexpected { position, found: c })?;
                let gen = self.generator(position, g)?;
                Ok(if c.is_ascii_uppercase() { WordExpr::Inverse(Box::new(gen)) } else { gen })
            }
            found => Err(ParseError::Unexpected { position, found }),
        }
    }
}
