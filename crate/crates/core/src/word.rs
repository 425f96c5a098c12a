//! Freely reduced words and free groups of finite rank.
//!
//! A word is a flat sequence of signed generator indices kept freely reduced
//! at all times, so two words are equal as group elements iff they are equal
//! as sequences. The empty word is the identity.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::group::Group;

/// A generator or its inverse, stored as a nonzero signed index.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(i32);

impl Letter {
    /// `generator` is 1-based.
    pub fn new(generator: u32, inverse: bool) -> Letter {
        assert!(generator >= 1, "generator indices start at 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn from_signed(value: i32) -> Option<Letter> {
        (value != 0).then_some(Letter(value))
    }

    pub fn generator(self) -> u32 {
        self.0.unsigned_abs()
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    /// `+1` or `-1`.
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

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("generator {generator} is out of range for rank {rank}")]
    GeneratorOutOfRange { generator: u32, rank: u32 },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: u32, right: u32 },
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("counting word must be nonempty")]
    EmptyCountingWord,
}

/// A freely reduced word.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alphabet::for_rank(self.max_generator().max(2)).format(self))
    }
}

impl Word {
    pub fn identity() -> Word {
        Word::default()
    }

    pub fn generator(index: u32) -> Word {
        Word {
            letters: alloc::vec![Letter::new(index, false)],
        }
    }

    /// Free reduction by a single stack scan.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if letters.last() == Some(&l.inverse()) {
                letters.pop();
            } else {
                letters.push(l);
            }
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

    pub fn max_generator(&self) -> u32 {
        self.letters.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        let mut rest = other.letters.iter().peekable();
        while let (Some(&last), Some(&&next)) = (letters.last(), rest.peek()) {
            if last == next.inverse() {
                letters.pop();
                rest.next();
            } else {
                break;
            }
        }
        letters.extend(rest);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 {
            return Word::identity();
        }
        let (core, conj) = self.cyclic_reduce();
        let base = if n < 0 { core.inverse() } else { core };
        let mut letters = conj.letters.clone();
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        letters.extend(conj.inverse().letters);
        // The core is cyclically reduced, so only the conjugator junctions
        // can cancel; those are already reduced by construction.
        Word { letters }
    }

    /// Splits `self = conjugator · core · conjugator⁻¹` with `core` cyclically
    /// reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let conjugator = Word {
            letters: self.letters[..k].to_vec(),
        };
        let core = Word {
            letters: self.letters[k..n - k].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) => self.letters.len() == 1 || a != b.inverse(),
            _ => true,
        }
    }

    /// Sum of the signs of letters of the given generator.
    pub fn exponent_sum(&self, generator: u32) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.generator() == generator)
            .map(|l| l.sign() as i64)
            .sum()
    }

    /// Sum of all letter signs.
    pub fn total_exponent(&self) -> i64 {
        self.letters.iter().map(|l| l.sign() as i64).sum()
    }
}

/// Letter names for the text syntax. Lowercase is a generator, uppercase its
/// inverse.
///
/// Ranks up to 3 use `x, y, z`; larger ranks use `a` .. `z` for generators
/// 1 .. 26.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: &'static [u8],
}

impl Alphabet {
    pub const XYZ: Alphabet = Alphabet { names: b"xyz" };
    pub const LATIN: Alphabet = Alphabet {
        names: b"abcdefghijklmnopqrstuvwxyz",
    };

    pub fn for_rank(rank: u32) -> Alphabet {
        if rank <= 3 {
            Alphabet::XYZ
        } else {
            Alphabet::LATIN
        }
    }

    pub fn capacity(self) -> u32 {
        self.names.len() as u32
    }

    fn index_of(self, c: char) -> Option<Letter> {
        let lower = c.to_ascii_lowercase() as u8;
        let pos = self.names.iter().position(|&b| b == lower)?;
        Some(Letter::new(pos as u32 + 1, c.is_ascii_uppercase()))
    }

    pub fn letter_char(self, l: Letter) -> char {
        let idx = (l.generator() - 1) as usize;
        let c = *self.names.get(idx).unwrap_or(&b'?') as char;
        if l.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    pub fn format(self, w: &Word) -> String {
        w.letters.iter().map(|&l| self.letter_char(l)).collect()
    }

    /// Parses a word such as `xyXY`, `x^3 Y^-2`; whitespace is ignored and
    /// powers are expanded. The result is freely reduced.
    pub fn parse(self, text: &str) -> Result<Vec<Letter>, WordError> {
        let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut raw = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let (pos, c) = chars[i];
            let letter = if c.is_ascii_alphabetic() {
                self.index_of(c)
            } else {
                None
            }
            .ok_or_else(|| WordError::Parse {
                position: pos,
                message: alloc::format!("unexpected character {c:?}"),
            })?;
            i += 1;
            let mut exponent: i64 = 1;
            if i < chars.len() && chars[i].1 == '^' {
                let caret = chars[i].0;
                i += 1;
                let mut digits = String::new();
                if i < chars.len() && (chars[i].1 == '-' || chars[i].1 == '+') {
                    digits.push(chars[i].1);
                    i += 1;
                }
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    digits.push(chars[i].1);
                    i += 1;
                }
                exponent = digits.parse().map_err(|_| WordError::Parse {
                    position: caret,
                    message: String::from("expected an integer exponent after '^'"),
                })?;
            }
            let l = if exponent < 0 { letter.inverse() } else { letter };
            for _ in 0..exponent.unsigned_abs() {
                raw.push(l);
            }
        }
        Ok(raw)
    }
}

/// The free group of a given rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    rank: u32,
}

impl FreeGroup {
    pub fn new(rank: u32) -> Self {
        assert!(rank >= 1, "rank must be positive");
        FreeGroup { rank }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::for_rank(self.rank)
    }

    pub fn generator(&self, index: u32) -> Word {
        assert!(index >= 1 && index <= self.rank);
        Word::generator(index)
    }

    pub fn generators(&self) -> Vec<Word> {
        (1..=self.rank).map(Word::generator).collect()
    }

    pub fn check(&self, w: &Word) -> Result<(), WordError> {
        match w.max_generator() {
            g if g > self.rank => Err(WordError::GeneratorOutOfRange {
                generator: g,
                rank: self.rank,
            }),
            _ => Ok(()),
        }
    }

    /// Reduces raw letters, rejecting generators beyond the rank.
    pub fn reduce<I: IntoIterator<Item = Letter>>(&self, raw: I) -> Result<Word, WordError> {
        let w = Word::reduce(raw);
        self.check(&w)?;
        Ok(w)
    }

    pub fn try_multiply(&self, a: &Word, b: &Word) -> Result<Word, WordError> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.multiply(b))
    }

    pub fn parse(&self, text: &str) -> Result<Word, WordError> {
        let alphabet = self.alphabet();
        if self.rank > alphabet.capacity() {
            return Err(WordError::Parse {
                position: 0,
                message: alloc::format!("rank {} has no text syntax", self.rank),
            });
        }
        let raw = alphabet.parse(text)?;
        self.reduce(raw)
    }

    pub fn format(&self, w: &Word) -> String {
        self.alphabet().format(w)
    }
}

impl Group for FreeGroup {
    type Elem = Word;

    fn identity(&self) -> Word {
        Word::identity()
    }
    fn multiply(&self, a: &Word, b: &Word) -> Word {
        a.multiply(b)
    }
    fn invert(&self, a: &Word) -> Word {
        a.inverse()
    }
    fn is_identity(&self, a: &Word) -> bool {
        a.is_empty()
    }
    fn pow(&self, a: &Word, n: i64) -> Word {
        a.pow(n)
    }
}
