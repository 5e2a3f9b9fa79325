use std::fmt;
use std::ops::Mul;

use super::presentation::GeneratorSymbol;
use super::GroupError;

/// Largest exponent accepted by the word parser.
const MAX_PARSED_EXPONENT: i64 = 1 << 20;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// An element of the free group, stored as a sequence of letters.
///
/// Words are not reduced on construction; `free_reduce` and `cyclic_reduce`
/// produce the canonical forms. Multiplication (`*`) freely reduces.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn generator(index: usize) -> Self {
        Word {
            letters: vec![Letter::new(index, false)],
        }
    }

    /// `g^exponent` for a single generator.
    pub fn power(index: usize, exponent: i64) -> Self {
        let letter = Letter::new(index, exponent < 0);
        Word {
            letters: vec![letter; exponent.unsigned_abs() as usize],
        }
    }

    /// `a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Self {
        let mut letters = Vec::with_capacity(2 * (a.len() + b.len()));
        letters.extend_from_slice(&a.letters);
        letters.extend_from_slice(&b.letters);
        letters.extend(a.inverse().letters);
        letters.extend(b.inverse().letters);
        Word { letters }.free_reduce()
    }

    /// Builds `g_0^v_0 g_1^v_1 ...` from an exponent vector.
    pub fn from_exponents(exponents: &[i64]) -> Self {
        let mut letters = Vec::new();
        for (g, &e) in exponents.iter().enumerate() {
            letters.extend(Word::power(g, e).letters);
        }
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 {
            self.inverse()
        } else {
            self.clone()
        };
        let mut letters = Vec::with_capacity(base.len() * exponent.unsigned_abs() as usize);
        for _ in 0..exponent.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }.free_reduce()
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] != w[1].inv())
    }

    /// Freely reduces, then strips inverse pairs from the two ends. The
    /// result is conjugate to `self`.
    pub fn cyclic_reduce(&self) -> Word {
        let reduced = self.free_reduce();
        let letters = reduced.letters;
        let (mut lo, mut hi) = (0, letters.len());
        while hi - lo >= 2 && letters[lo] == letters[hi - 1].inv() {
            lo += 1;
            hi -= 1;
        }
        Word {
            letters: letters[lo..hi].to_vec(),
        }
    }

    pub fn exponent_sum(&self, generator: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator == generator)
            .map(|l| l.exponent())
            .sum()
    }

    pub fn exponent_vector(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0; generators];
        for l in &self.letters {
            v[l.generator] += l.exponent();
        }
        v
    }

    /// Number of letters (of either sign) naming `generator`.
    pub fn occurrences(&self, generator: usize) -> usize {
        self.letters
            .iter()
            .filter(|l| l.generator == generator)
            .count()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator).max()
    }

    /// Replaces every generator `g` by `images[g]` and freely reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut letters = Vec::new();
        for l in &self.letters {
            let image = &images[l.generator];
            if l.inverse {
                letters.extend(image.inverse().letters);
            } else {
                letters.extend_from_slice(&image.letters);
            }
        }
        Word { letters }.free_reduce()
    }

    /// Replaces one generator by `image`, leaving the others alone.
    pub fn substitute_one(&self, generator: usize, image: &Word) -> Word {
        if self.occurrences(generator) == 0 {
            return self.clone();
        }
        let inverse_image = image.inverse();
        let mut letters = Vec::new();
        for &l in &self.letters {
            if l.generator != generator {
                letters.push(l);
            } else if l.inverse {
                letters.extend_from_slice(&inverse_image.letters);
            } else {
                letters.extend_from_slice(&image.letters);
            }
        }
        Word { letters }.free_reduce()
    }

    /// Renames generators through `map`; used when generators are dropped
    /// and the survivors renumbered.
    pub fn reindex(&self, map: &[Option<usize>]) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .map(|l| Letter::new(map[l.generator].expect("reindex of eliminated generator"), l.inverse))
                .collect(),
        }
    }

    /// If the word has the shape `x y x^-1 y^-1` with `x`, `y` letters on two
    /// distinct generators, returns those generators in ascending order.
    /// Every cyclic rotation of a commutator has this shape.
    pub fn commutator_pair(&self) -> Option<(usize, usize)> {
        if self.letters.len() != 4 {
            return None;
        }
        let l = &self.letters;
        if l[2] != l[0].inv() || l[3] != l[1].inv() || l[0].generator == l[1].generator {
            return None;
        }
        let (a, b) = (l[0].generator, l[1].generator);
        Some((a.min(b), a.max(b)))
    }

    /// Parses the word grammar: whitespace-separated tokens, each `name`,
    /// `name^<signed int>` or `[u,v]` (where `u`, `v` are themselves words);
    /// `1` is the identity.
    pub fn parse(input: &str, generators: &[GeneratorSymbol]) -> Result<Word, GroupError> {
        let mut parser = Parser {
            input,
            chars: input.char_indices().peekable(),
            generators,
        };
        let word = parser.word(false)?;
        Ok(word)
    }

    pub fn display<'a>(&'a self, generators: &'a [GeneratorSymbol]) -> DisplayWord<'a> {
        DisplayWord {
            word: self,
            generators,
        }
    }
}

impl Mul for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&rhs.letters);
        Word { letters }.free_reduce()
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

/// The unique freely reduced word equal to `w` in the free group.
pub fn free_reduce(w: &Word) -> Word {
    w.free_reduce()
}

pub struct DisplayWord<'a> {
    word: &'a Word,
    generators: &'a [GeneratorSymbol],
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        let name = |g: usize| -> String {
            self.generators
                .get(g)
                .map(|s| s.as_str().to_string())
                .unwrap_or_else(|| format!("g{g}"))
        };
        if let Some((_, _)) = self.word.commutator_pair() {
            let l = self.word.letters();
            if !l[0].inverse && !l[1].inverse {
                return write!(f, "[{},{}]", name(l[0].generator), name(l[1].generator));
            }
        }
        let mut first = true;
        let letters = self.word.letters();
        let mut i = 0;
        while i < letters.len() {
            let mut j = i;
            while j < letters.len() && letters[j] == letters[i] {
                j += 1;
            }
            let exponent = (j - i) as i64 * letters[i].exponent();
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            if exponent == 1 {
                write!(f, "{}", name(letters[i].generator))?;
            } else {
                write!(f, "{}^{}", name(letters[i].generator), exponent)?;
            }
            i = j;
        }
        Ok(())
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    generators: &'a [GeneratorSymbol],
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> GroupError {
        GroupError::Parse {
            input: self.input.to_string(),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    /// Parses tokens until end of input, or until `,` / `]` when nested.
    fn word(&mut self, nested: bool) -> Result<Word, GroupError> {
        let mut letters = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                None => {
                    if nested {
                        return Err(self.error("unterminated commutator"));
                    }
                    break;
                }
                Some((_, ',' | ']')) if nested => break,
                Some((_, '[')) => {
                    self.chars.next();
                    let a = self.word(true)?;
                    match self.chars.next() {
                        Some((_, ',')) => {}
                        _ => return Err(self.error("expected ',' inside commutator")),
                    }
                    let b = self.word(true)?;
                    match self.chars.next() {
                        Some((_, ']')) => {}
                        _ => return Err(self.error("expected ']' closing commutator")),
                    }
                    let mut c = Word::commutator(&a, &b);
                    if let Some(e) = self.exponent()? {
                        c = c.pow(e);
                    }
                    letters.extend(c.letters);
                }
                Some((start, c)) if c.is_alphanumeric() || c == '_' => {
                    let mut end = start;
                    while let Some(&(i, c)) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' || c == '\'' {
                            end = i + c.len_utf8();
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    let name = &self.input[start..end];
                    let exponent = self.exponent()?.unwrap_or(1);
                    if name == "1" {
                        continue;
                    }
                    let index = self
                        .generators
                        .iter()
                        .position(|g| g.as_str() == name)
                        .ok_or_else(|| GroupError::UnknownGenerator {
                            name: name.to_string(),
                            input: self.input.to_string(),
                        })?;
                    letters.extend(Word::power(index, exponent).letters);
                }
                Some((_, c)) => return Err(self.error(format!("unexpected character {c:?}"))),
            }
        }
        Ok(Word { letters })
    }

    fn exponent(&mut self) -> Result<Option<i64>, GroupError> {
        if !matches!(self.chars.peek(), Some((_, '^'))) {
            return Ok(None);
        }
        self.chars.next();
        let mut text = String::new();
        if let Some(&(_, c)) = self.chars.peek() {
            if c == '-' || c == '+' {
                text.push(c);
                self.chars.next();
            }
        }
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                text.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        let value: i64 = text
            .parse()
            .map_err(|_| self.error(format!("bad exponent {text:?}")))?;
        if value.abs() > MAX_PARSED_EXPONENT {
            return Err(self.error(format!("exponent {value} out of range")));
        }
        Ok(Some(value))
    }
}
