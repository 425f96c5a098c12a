//! Braid groups `Bₙ` with exact equality through the Garside left normal form,
//! the index sum homomorphism, and the splitting `P₃ ≅ F₂ × ℤ`.
//!
//! A [`Braid`] is stored as its left normal form `Δ^inf · A₁ ⋯ A_r`, where the
//! `Aᵢ` are permutation braids (positive braids in which each pair of strands
//! crosses at most once), none trivial or equal to `Δ`, and every adjacent
//! pair is left-weighted. Two braids are equal iff their normal forms are
//! identical, so `Braid` derives `Eq`.
//!
//! Simple braids are identified with permutations: the positive word
//! `σ_{a₁} ⋯ σ_{a_k}` maps to `s_{a₁} ∘ ⋯ ∘ s_{a_k}`. The starting set of a
//! simple braid is its set of left descents and the finishing set its right
//! descents.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::group::Group;
use crate::perm::Permutation;
use crate::word::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: u32, right: u32 },
    #[error("generator index {index} out of range for {strands} strands")]
    IndexOutOfRange { index: i32, strands: u32 },
    #[error("braid parse error at token {token}: {message}")]
    Parse { token: usize, message: String },
    #[error("braid is not pure")]
    NotPure,
    #[error("braid is not in the commutator subgroup (index sum {0})")]
    NotInCommutatorSubgroup(i64),
    #[error("operation is only implemented for 3 strands, got {0}")]
    Unsupported(u32),
    #[error("internal error, result refused: {0}")]
    Internal(String),
}

/// A word in the Artin generators `σ₁ .. σ_{n-1}`, as signed 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BraidWord {
    strands: u32,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: u32, letters: Vec<i32>) -> Result<Self, BraidError> {
        if strands < 2 {
            return Err(BraidError::Unsupported(strands));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() >= strands {
                return Err(BraidError::IndexOutOfRange { index: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: u32) -> Self {
        BraidWord {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord, BraidError> {
        check_strands(self.strands, other.strands)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    /// Parses `s1 s2 s1^-1` or `1,2,-1`. Without an explicit strand count the
    /// smallest one that fits (at least 3) is used.
    pub fn parse(text: &str, strands: Option<u32>) -> Result<Self, BraidError> {
        let mut letters = Vec::new();
        let tokens = text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty());
        for (i, token) in tokens.enumerate() {
            let err = |message: &str| BraidError::Parse {
                token: i,
                message: String::from(message),
            };
            let (body, exponent) = match token.split_once('^') {
                Some((b, e)) => (b, e.parse::<i32>().map_err(|_| err("bad exponent"))?),
                None => (token, 1),
            };
            let index: i32 = match body.strip_prefix(['s', 'S']) {
                Some(rest) => rest.parse().map_err(|_| err("expected s<index>"))?,
                None => body.parse().map_err(|_| err("expected a signed generator index"))?,
            };
            if index == 0 {
                return Err(err("generator index 0"));
            }
            let l = if exponent < 0 { -index } else { index };
            for _ in 0..exponent.unsigned_abs() {
                letters.push(l);
            }
        }
        let needed = letters.iter().map(|l| l.unsigned_abs() + 1).max().unwrap_or(0).max(3);
        BraidWord::new(strands.unwrap_or(needed), letters)
    }

    /// Compact printing: `1,2,-1`; the empty word prints as an empty string.
    pub fn compact(&self) -> String {
        let parts: Vec<String> = self.letters.iter().map(|l| alloc::format!("{l}")).collect();
        parts.join(",")
    }

    /// The sum of letter signs.
    pub fn index_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn underlying_permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands as usize);
        for &l in &self.letters {
            p.swap_positions(l.unsigned_abs() as usize - 1);
        }
        p
    }
}

fn check_strands(a: u32, b: u32) -> Result<(), BraidError> {
    if a == b {
        Ok(())
    } else {
        Err(BraidError::StrandMismatch { left: a, right: b })
    }
}

/// A braid in left normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Braid {
    strands: u32,
    inf: i64,
    factors: Vec<Permutation>,
}

impl fmt::Debug for Braid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.normal_form_string())
    }
}

impl Braid {
    pub fn strands(&self) -> u32 {
        self.strands
    }

    /// The power of `Δ` in the normal form.
    pub fn infimum(&self) -> i64 {
        self.inf
    }

    pub fn factors(&self) -> &[Permutation] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.inf == 0 && self.factors.is_empty()
    }

    /// `D^k | p1 p2 ...` with permutations in one-line notation.
    pub fn normal_form_string(&self) -> String {
        let mut s = alloc::format!("D^{} |", self.inf);
        for p in &self.factors {
            s.push(' ');
            s.push_str(&p.one_line());
        }
        s
    }

    /// A word representing the braid, read off the normal form.
    pub fn to_word(&self) -> BraidWord {
        let n = self.strands as usize;
        let delta = simple_word(&half_twist(n));
        let mut letters = Vec::new();
        for _ in 0..self.inf.unsigned_abs() {
            if self.inf > 0 {
                letters.extend_from_slice(&delta);
            } else {
                letters.extend(delta.iter().rev().map(|l| -l));
            }
        }
        for p in &self.factors {
            letters.extend(simple_word(p));
        }
        BraidWord {
            strands: self.strands,
            letters,
        }
    }

    pub fn index_sum(&self) -> i64 {
        let n = self.strands as i64;
        self.inf * n * (n - 1) / 2 + self.factors.iter().map(|p| p.inversions() as i64).sum::<i64>()
    }

    pub fn underlying_permutation(&self) -> Permutation {
        let n = self.strands as usize;
        let mut p = if self.inf.rem_euclid(2) == 1 {
            half_twist(n)
        } else {
            Permutation::identity(n)
        };
        for f in &self.factors {
            p = p.compose(f);
        }
        p
    }

    pub fn is_pure(&self) -> bool {
        self.underlying_permutation().is_identity()
    }
}

/// The permutation of the half twist `Δ`: `i ↦ n-1-i`.
fn half_twist(n: usize) -> Permutation {
    Permutation::from_images((0..n as u16).rev().collect()).expect("reversal is a permutation")
}

/// `Δ p Δ⁻¹`, which maps `σᵢ` to `σ_{n-i}`.
fn flip(p: &Permutation) -> Permutation {
    let n = p.degree();
    let images = (0..n).map(|i| (n - 1 - p.image(n - 1 - i)) as u16).collect();
    Permutation::from_images(images).expect("conjugate of a permutation")
}

fn is_left_descent(p: &Permutation, i: usize) -> bool {
    let (mut pos_i, mut pos_next) = (0, 0);
    for (pos, &v) in p.images().iter().enumerate() {
        if v as usize == i {
            pos_i = pos;
        } else if v as usize == i + 1 {
            pos_next = pos;
        }
    }
    pos_i > pos_next
}

fn is_right_descent(p: &Permutation, i: usize) -> bool {
    p.image(i) > p.image(i + 1)
}

/// A positive word for a simple braid, built from left descents.
fn simple_word(p: &Permutation) -> Vec<i32> {
    let mut p = p.clone();
    let mut out = Vec::new();
    'outer: while !p.is_identity() {
        for i in 0..p.degree() - 1 {
            if is_left_descent(&p, i) {
                out.push(i as i32 + 1);
                p.swap_values(i);
                continue 'outer;
            }
        }
        unreachable!("a nontrivial permutation has a left descent");
    }
    out
}

/// Makes the pair `(a, b)` left-weighted by moving generators from the front
/// of `b` to the back of `a`. Returns whether anything moved.
fn left_weight(a: &mut Permutation, b: &mut Permutation) -> bool {
    let mut changed = false;
    'outer: loop {
        for i in 0..a.degree() - 1 {
            if is_left_descent(b, i) && !is_right_descent(a, i) {
                a.swap_positions(i);
                b.swap_values(i);
                changed = true;
                continue 'outer;
            }
        }
        return changed;
    }
}

/// `Δ^inf · factors` where the factors are kept left-weighted.
struct Builder {
    strands: u32,
    inf: i64,
    factors: Vec<Permutation>,
}

impl Builder {
    fn new(strands: u32) -> Self {
        Builder {
            strands,
            inf: 0,
            factors: Vec::new(),
        }
    }

    fn from_braid(b: &Braid) -> Self {
        Builder {
            strands: b.strands,
            inf: b.inf,
            factors: b.factors.clone(),
        }
    }

    fn push_simple(&mut self, p: Permutation) {
        if p.is_identity() {
            return;
        }
        self.factors.push(p);
        let mut j = self.factors.len() - 1;
        while j > 0 {
            let (left, right) = self.factors.split_at_mut(j);
            if !left_weight(&mut left[j - 1], &mut right[0]) {
                break;
            }
            j -= 1;
        }
    }

    /// Right multiplication by the inverse of the simple braid `p`, using
    /// `X · p⁻¹ = Δ⁻¹ · τ(X) · (Δ p⁻¹)`.
    fn push_inverse_simple(&mut self, p: &Permutation) {
        if p.is_identity() {
            return;
        }
        self.push_delta_power(-1);
        let complement = half_twist(self.strands as usize).compose(&p.inverse());
        self.push_simple(complement);
    }

    /// Right multiplication by `Δ^k`, using `X Δ^k = Δ^k τ^k(X)`.
    fn push_delta_power(&mut self, k: i64) {
        self.inf += k;
        if k.rem_euclid(2) == 1 {
            for f in self.factors.iter_mut() {
                *f = flip(f);
            }
        }
    }

    fn finish(mut self) -> Braid {
        // The sweeps in push_simple already produce a left-weighted sequence;
        // this pass only confirms it.
        loop {
            let mut changed = false;
            for j in 1..self.factors.len() {
                let (left, right) = self.factors.split_at_mut(j);
                changed |= left_weight(&mut left[j - 1], &mut right[0]);
            }
            if !changed {
                break;
            }
        }
        let n = self.strands as usize;
        let delta = half_twist(n);
        let leading = self.factors.iter().take_while(|p| **p == delta).count();
        self.inf += leading as i64;
        self.factors.drain(..leading);
        while self.factors.last().is_some_and(Permutation::is_identity) {
            self.factors.pop();
        }
        Braid {
            strands: self.strands,
            inf: self.inf,
            factors: self.factors,
        }
    }
}

/// Computes the left normal form of a braid word.
pub fn normal_form(word: &BraidWord) -> Braid {
    let n = word.strands as usize;
    let mut b = Builder::new(word.strands);
    for &l in &word.letters {
        let s = Permutation::transposition(n, l.unsigned_abs() as usize - 1, l.unsigned_abs() as usize);
        if l > 0 {
            b.push_simple(s);
        } else {
            b.push_inverse_simple(&s);
        }
    }
    b.finish()
}

/// Equality in `Bₙ`.
pub fn braid_equal(a: &BraidWord, b: &BraidWord) -> Result<bool, BraidError> {
    check_strands(a.strands, b.strands)?;
    Ok(normal_form(a) == normal_form(b))
}

/// The section `k ↦ σ₁ᵏ` of the index sum homomorphism.
pub fn index_section(k: i64, strands: u32) -> BraidWord {
    let l = if k < 0 { -1 } else { 1 };
    BraidWord {
        strands,
        letters: alloc::vec![l; k.unsigned_abs() as usize],
    }
}

/// The braid group on a fixed number of strands; elements are normal forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BraidGroup {
    strands: u32,
}

impl BraidGroup {
    pub fn new(strands: u32) -> Self {
        assert!(strands >= 2, "braid groups need at least two strands");
        BraidGroup { strands }
    }

    pub fn strands(&self) -> u32 {
        self.strands
    }

    pub fn element(&self, word: &BraidWord) -> Result<Braid, BraidError> {
        check_strands(self.strands, word.strands)?;
        Ok(normal_form(word))
    }

    /// Builds an element from signed generator indices.
    pub fn from_letters(&self, letters: &[i32]) -> Result<Braid, BraidError> {
        Ok(normal_form(&BraidWord::new(self.strands, letters.to_vec())?))
    }

    pub fn parse(&self, text: &str) -> Result<Braid, BraidError> {
        self.element(&BraidWord::parse(text, Some(self.strands))?)
    }

    pub fn format(&self, b: &Braid) -> String {
        b.to_word().compact()
    }

    /// `σ₁ .. σ_{n-1}`.
    pub fn generators(&self) -> Vec<Braid> {
        (1..self.strands as i32)
            .map(|i| self.from_letters(&[i]).expect("valid generator"))
            .collect()
    }

    pub fn delta(&self) -> Braid {
        Braid {
            strands: self.strands,
            inf: 1,
            factors: Vec::new(),
        }
    }
}

impl Group for BraidGroup {
    type Elem = Braid;

    fn identity(&self) -> Braid {
        Braid {
            strands: self.strands,
            inf: 0,
            factors: Vec::new(),
        }
    }

    fn multiply(&self, a: &Braid, b: &Braid) -> Braid {
        debug_assert_eq!(a.strands, b.strands);
        let mut builder = Builder::from_braid(a);
        builder.push_delta_power(b.inf);
        for f in &b.factors {
            builder.push_simple(f.clone());
        }
        builder.finish()
    }

    fn invert(&self, a: &Braid) -> Braid {
        let mut builder = Builder::new(a.strands);
        for f in a.factors.iter().rev() {
            builder.push_inverse_simple(f);
        }
        builder.push_delta_power(-a.inf);
        builder.finish()
    }

    fn is_identity(&self, a: &Braid) -> bool {
        a.is_identity()
    }
}

/// A 2×2 integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_minus_identity(&self) -> bool {
        (-&self.a).is_one() && (-&self.d).is_one() && self.b.is_zero() && self.c.is_zero()
    }

    fn max_abs(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .map(|v| v.abs())
            .max()
            .expect("four entries")
    }
}

/// The image of a 3-strand braid word in `SL(2,ℤ)` under
/// `σ₁ ↦ [[1,1],[0,1]]`, `σ₂ ↦ [[1,0],[-1,1]]`. The kernel is `⟨Δ⁴⟩`.
pub fn sl2_image(word: &BraidWord) -> Result<Mat2, BraidError> {
    if word.strands != 3 {
        return Err(BraidError::Unsupported(word.strands));
    }
    let mut m = Mat2::identity();
    for &l in &word.letters {
        let g = match l {
            1 => Mat2::new(1, 1, 0, 1),
            -1 => Mat2::new(1, -1, 0, 1),
            2 => Mat2::new(1, 0, -1, 1),
            _ => Mat2::new(1, 0, 1, 1),
        };
        m = m.mul(&g);
    }
    Ok(m)
}

/// Writes `m` (up to sign, if allowed) as a reduced word in two free
/// generators by greedily peeling off the left letter that most decreases the
/// largest absolute entry. Gives up after `cap` steps or when no letter gives
/// a strict decrease.
fn peel(mut m: Mat2, gens: [&Mat2; 2], allow_negative: bool, cap: usize) -> Option<Word> {
    let inverses = [gens[0].inverse(), gens[1].inverse()];
    // candidate letter and the matrix its inverse multiplies by on the left
    let candidates = [
        (Letter::new(1, false), &inverses[0]),
        (Letter::new(2, false), &inverses[1]),
        (Letter::new(1, true), gens[0]),
        (Letter::new(2, true), gens[1]),
    ];
    let mut letters = Vec::new();
    let mut steps = 0;
    while !(m.is_identity() || (allow_negative && m.is_minus_identity())) {
        if steps >= cap {
            return None;
        }
        steps += 1;
        let current = m.max_abs();
        let (letter, next) = candidates
            .iter()
            .map(|(l, g)| {
                let next = g.mul(&m);
                (next.max_abs(), *l, next)
            })
            .min_by(|x, y| x.0.cmp(&y.0))
            .map(|(norm, l, next)| (norm < current).then_some((l, next)))??;
        letters.push(letter);
        m = next;
    }
    Some(Word::reduce(letters))
}

/// Coordinates of a pure 3-strand braid in `P₃ ≅ F₂ × ℤ`, with
/// `x = σ₁²`, `y = σ₂²` and central `z = Δ²`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PureBraidCoordinates {
    pub f2_part: Word,
    pub center_exponent: i64,
}

fn b3() -> BraidGroup {
    BraidGroup::new(3)
}

/// `ι(w) · z^k`, with `ι(x) = σ₁²`, `ι(y) = σ₂²`, `z = Δ²`.
pub fn p3_assemble(f2_part: &Word, center_exponent: i64) -> Braid {
    let mut letters = Vec::with_capacity(2 * f2_part.len());
    for l in f2_part.letters() {
        let g = l.generator() as i32 * l.sign();
        letters.push(g);
        letters.push(g);
    }
    let g = b3();
    let body = g.from_letters(&letters).expect("generators 1 and 2");
    let z = Braid {
        strands: 3,
        inf: 2 * center_exponent,
        factors: Vec::new(),
    };
    g.multiply(&body, &z)
}

/// `x = σ₁²`, `y = σ₂²`, `z = Δ²` as braids.
pub fn p3_generators() -> [Braid; 3] {
    let g = b3();
    [
        g.from_letters(&[1, 1]).expect("valid"),
        g.from_letters(&[2, 2]).expect("valid"),
        g.pow(&g.delta(), 2),
    ]
}

/// Splits a pure 3-strand braid into its `F₂` and central parts.
///
/// The `F₂` part is recovered by peeling the `SL(2,ℤ)` image against
/// `x ↦ [[1,2],[0,1]]`, `y ↦ [[1,0],[-2,1]]`; the central exponent is
/// `(index_sum(b) − 2·expsum(w)) / 6`. The answer is re-assembled and
/// compared with `b` before it is returned.
pub fn p3_coordinates(b: &Braid) -> Result<PureBraidCoordinates, BraidError> {
    if b.strands != 3 {
        return Err(BraidError::Unsupported(b.strands));
    }
    if !b.is_pure() {
        return Err(BraidError::NotPure);
    }
    let word = b.to_word();
    let m = sl2_image(&word)?;
    let x = Mat2::new(1, 2, 0, 1);
    let y = Mat2::new(1, 0, -2, 1);
    let f2_part = peel(m, [&x, &y], true, 4 * word.len() + 16)
        .ok_or_else(|| BraidError::Internal(String::from("peeling did not terminate")))?;
    let excess = b.index_sum() - 2 * f2_part.total_exponent();
    if excess % 6 != 0 {
        return Err(BraidError::Internal(alloc::format!(
            "central exponent {excess}/6 is not an integer"
        )));
    }
    let coords = PureBraidCoordinates {
        f2_part,
        center_exponent: excess / 6,
    };
    if p3_assemble(&coords.f2_part, coords.center_exponent) != *b {
        return Err(BraidError::Internal(String::from("reassembly check failed")));
    }
    Ok(coords)
}

/// `a = σ₁σ₂⁻¹` and `b = σ₂⁻¹σ₁`, a free basis of `[B₃, B₃]`.
pub fn commutator_basis() -> [Braid; 2] {
    let g = b3();
    [
        g.from_letters(&[1, -2]).expect("valid"),
        g.from_letters(&[-2, 1]).expect("valid"),
    ]
}

pub fn commutator_assemble(w: &Word) -> Braid {
    let g = b3();
    let mut letters = Vec::with_capacity(2 * w.len());
    for l in w.letters() {
        let pair: [i32; 2] = match l.generator() {
            1 => [1, -2],
            _ => [-2, 1],
        };
        if l.is_inverse() {
            letters.push(-pair[1]);
            letters.push(-pair[0]);
        } else {
            letters.extend_from_slice(&pair);
        }
    }
    g.from_letters(&letters).expect("valid")
}

/// Coordinates of `b ∈ [B₃, B₃]` in the free basis of [`commutator_basis`].
///
/// `[B₃, B₃]` maps isomorphically onto the commutator subgroup of `SL(2,ℤ)`,
/// free on `[[2,1],[1,1]]` and `[[1,1],[1,2]]`; the word is found by peeling
/// and checked by reassembly.
pub fn commutator_coordinates(b: &Braid) -> Result<Word, BraidError> {
    if b.strands != 3 {
        return Err(BraidError::Unsupported(b.strands));
    }
    let e = b.index_sum();
    if e != 0 {
        return Err(BraidError::NotInCommutatorSubgroup(e));
    }
    let word = b.to_word();
    let m = sl2_image(&word)?;
    let a_mat = Mat2::new(2, 1, 1, 1);
    let b_mat = Mat2::new(1, 1, 1, 2);
    let w = peel(m, [&a_mat, &b_mat], false, 4 * word.len() + 16)
        .ok_or_else(|| BraidError::Internal(String::from("peeling did not terminate")))?;
    if commutator_assemble(&w) != *b {
        return Err(BraidError::Internal(String::from("reassembly check failed")));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::FreeGroup;

    fn bw(text: &str) -> BraidWord {
        BraidWord::parse(text, Some(3)).unwrap()
    }

    fn nf(text: &str) -> Braid {
        normal_form(&bw(text))
    }

    #[test]
    fn braid_relation_and_delta() {
        assert_eq!(nf("1,2,1"), nf("2,1,2"));
        assert_eq!(nf("1,2,1").normal_form_string(), "D^1 |");
        assert_eq!(nf("").normal_form_string(), "D^0 |");
        assert!(nf("").is_identity());
        assert!(!braid_equal(&bw("1,2"), &bw("2,1")).unwrap());
        assert!(braid_equal(&bw("1,2,1"), &bw("s2 s1 s2")).unwrap());
    }

    #[test]
    fn full_twist_is_central() {
        assert_eq!(nf("1,2,1,1,2,1,1"), nf("1,1,2,1,1,2,1"));
        assert_eq!(nf("1,2,1,1,2,1,2"), nf("2,1,2,1,1,2,1"));
    }

    #[test]
    fn inverse_cancels() {
        let w = bw("1,-2,2,2,-1,1,2,-1");
        let both = w.concat(&w.inverse()).unwrap();
        assert!(normal_form(&both).is_identity());
        let g = BraidGroup::new(3);
        let b = normal_form(&w);
        assert!(g.multiply(&b, &g.invert(&b)).is_identity());
        assert!(g.multiply(&g.invert(&b), &b).is_identity());
    }

    #[test]
    fn negative_letters_normalize() {
        // σ₁⁻¹ = Δ⁻¹ · σ₁σ₂ in B₃
        assert_eq!(nf("-1").normal_form_string(), "D^-1 | 231");
        assert_eq!(nf("-1").to_word().index_sum(), -1);
        assert_eq!(normal_form(&nf("-1,2,-2").to_word()), nf("-1"));
    }

    #[test]
    fn parse_and_print() {
        let w = BraidWord::parse("s1 s2 s1^-1", None).unwrap();
        assert_eq!(w.compact(), "1,2,-1");
        assert_eq!(w.strands(), 3);
        assert_eq!(BraidWord::parse("1, 2, -1", None).unwrap(), w);
        assert_eq!(BraidWord::parse("3", None).unwrap().strands(), 4);
        assert!(matches!(BraidWord::parse("1,x", None), Err(BraidError::Parse { token: 1, .. })));
        assert!(matches!(BraidWord::parse("3", Some(3)), Err(BraidError::IndexOutOfRange { .. })));
        assert_eq!(BraidWord::parse("s1^3", None).unwrap().compact(), "1,1,1");
    }

    #[test]
    fn strand_mismatch() {
        let a = BraidWord::parse("1", Some(3)).unwrap();
        let b = BraidWord::parse("1", Some(4)).unwrap();
        assert_eq!(braid_equal(&a, &b), Err(BraidError::StrandMismatch { left: 3, right: 4 }));
    }

    #[test]
    fn index_sum_and_section() {
        assert_eq!(bw("1").index_sum(), 1);
        assert_eq!(bw("1,2,1").index_sum(), 3);
        assert_eq!(nf("1,2,-1,-2").index_sum(), 0);
        assert_eq!(nf("-1,-1,2").index_sum(), -1);
        assert!(index_section(0, 3).is_empty());
        assert_eq!(index_section(3, 3).compact(), "1,1,1");
        assert_eq!(index_section(-2, 3).index_sum(), -2);
    }

    #[test]
    fn permutations() {
        assert_eq!(bw("1").underlying_permutation().one_line(), "213");
        assert!(bw("1,1").underlying_permutation().is_identity());
        assert!(bw("1,2,1,1,2,1").underlying_permutation().is_identity());
        assert_eq!(nf("1,-2").underlying_permutation(), bw("1,-2").underlying_permutation());
    }

    #[test]
    fn four_strand_relations() {
        let w = |t: &str| BraidWord::parse(t, Some(4)).unwrap();
        assert!(braid_equal(&w("1,3"), &w("3,1")).unwrap());
        assert!(braid_equal(&w("2,3,2"), &w("3,2,3")).unwrap());
        assert!(!braid_equal(&w("1,2"), &w("2,1")).unwrap());
        let delta = normal_form(&w("1,2,1,3,2,1"));
        assert_eq!(delta.infimum(), 1);
        assert!(delta.factors().is_empty());
    }

    #[test]
    fn flip_identity() {
        let g = BraidGroup::new(3);
        let alpha = g.from_letters(&[1, 1, 2, 2, -1, -1, -2, -2]).unwrap();
        let delta = g.delta();
        assert_eq!(g.conjugate(&delta, &alpha), g.invert(&alpha));
        for n in 1..=8 {
            let lhs = g.pow(&alpha, 2 * n);
            let rhs = g.commutator(&delta, &g.pow(&alpha, -n));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn p3_coordinate_examples() {
        let g = BraidGroup::new(3);
        let f2 = FreeGroup::new(2);
        let c = p3_coordinates(&g.from_letters(&[1, 1]).unwrap()).unwrap();
        assert_eq!(c.f2_part, f2.parse("x").unwrap());
        assert_eq!(c.center_exponent, 0);
        let c = p3_coordinates(&g.pow(&g.delta(), 2)).unwrap();
        assert!(c.f2_part.is_empty());
        assert_eq!(c.center_exponent, 1);
        let alpha = g.from_letters(&[1, 1, 2, 2, -1, -1, -2, -2]).unwrap();
        let b = g.multiply(&alpha, &g.pow(&g.delta(), 2));
        let c = p3_coordinates(&b).unwrap();
        assert_eq!(c.f2_part, f2.parse("xyXY").unwrap());
        assert_eq!(c.center_exponent, 1);
        assert_eq!(p3_coordinates(&g.from_letters(&[1]).unwrap()), Err(BraidError::NotPure));
    }

    #[test]
    fn commutator_coordinate_examples() {
        let g = BraidGroup::new(3);
        let [a, b] = commutator_basis();
        assert_eq!(commutator_coordinates(&a).unwrap(), Word::generator(1));
        assert_eq!(commutator_coordinates(&b).unwrap(), Word::generator(2));
        let c = g.commutator(&g.from_letters(&[1]).unwrap(), &g.from_letters(&[2]).unwrap());
        let w = commutator_coordinates(&c).unwrap();
        assert_eq!(commutator_assemble(&w), c);
        assert_eq!(
            commutator_coordinates(&g.from_letters(&[1]).unwrap()),
            Err(BraidError::NotInCommutatorSubgroup(1))
        );
    }
}
