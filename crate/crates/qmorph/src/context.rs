//! Group contexts named by the `--group` syntax, with a single element type
//! so that quasimorphism specs and certificates can be handled uniformly.
//!
//! Group pair syntax:
//!
//! | spec                   | ambient      | subgroup          | mode     |
//! |------------------------|--------------|-------------------|----------|
//! | `free:N`               | `F_N`        | whole             | ordinary |
//! | `braid:N`              | `B_N`        | whole             | ordinary |
//! | `pure:N`               | `B_N`        | pure braids       | ordinary |
//! | `braid:N/pure`         | `B_N`        | pure braids       | mixed    |
//! | `braid:3/commutator`   | `B_3`        | index sum zero    | mixed    |
//! | `product:free:N,z`     | `F_N × ℤ`    | whole             | ordinary |
//! | `product:free:N,z/free`| `F_N × ℤ`    | `F_N × 0`         | mixed    |

use std::fmt;

use qmorph_core::braid::{commutator_basis, Braid, BraidGroup, BraidWord};
use qmorph_core::group::ball;
use qmorph_core::word::{FreeGroup, Word};
use qmorph_core::Group;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("{0}")]
    Unsupported(String),
}

impl SpecError {
    pub fn at(position: usize, message: impl Into<String>) -> Self {
        SpecError::Parse {
            position,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Word(Word),
    Braid(Braid),
    Pair(Word, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    Free(u32),
    Braid(u32),
    /// `F_N × ℤ`.
    Product(u32),
}

impl Group for GroupKind {
    type Elem = Element;

    fn identity(&self) -> Element {
        match self {
            GroupKind::Free(_) => Element::Word(Word::identity()),
            GroupKind::Braid(n) => Element::Braid(BraidGroup::new(*n).identity()),
            GroupKind::Product(_) => Element::Pair(Word::identity(), 0),
        }
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (GroupKind::Free(_), Element::Word(a), Element::Word(b)) => Element::Word(a.multiply(b)),
            (GroupKind::Braid(n), Element::Braid(a), Element::Braid(b)) => {
                Element::Braid(BraidGroup::new(*n).multiply(a, b))
            }
            (GroupKind::Product(_), Element::Pair(a, i), Element::Pair(b, j)) => Element::Pair(a.multiply(b), i + j),
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    fn invert(&self, a: &Element) -> Element {
        match (self, a) {
            (GroupKind::Free(_), Element::Word(a)) => Element::Word(a.inverse()),
            (GroupKind::Braid(n), Element::Braid(a)) => Element::Braid(BraidGroup::new(*n).invert(a)),
            (GroupKind::Product(_), Element::Pair(a, i)) => Element::Pair(a.inverse(), -i),
            _ => panic!("element does not belong to {self:?}"),
        }
    }

    fn is_identity(&self, a: &Element) -> bool {
        match a {
            Element::Word(w) => w.is_empty(),
            Element::Braid(b) => b.is_identity(),
            Element::Pair(w, k) => w.is_empty() && *k == 0,
        }
    }

    fn pow(&self, a: &Element, n: i64) -> Element {
        match (self, a) {
            (GroupKind::Free(_), Element::Word(w)) => Element::Word(w.pow(n)),
            (GroupKind::Product(_), Element::Pair(w, k)) => Element::Pair(w.pow(n), k * n),
            (GroupKind::Braid(s), Element::Braid(b)) => Element::Braid(BraidGroup::new(*s).pow(b, n)),
            _ => panic!("element does not belong to {self:?}"),
        }
    }
}

impl GroupKind {
    pub fn free_group(&self) -> Option<FreeGroup> {
        match self {
            GroupKind::Free(r) | GroupKind::Product(r) => Some(FreeGroup::new(*r)),
            GroupKind::Braid(_) => None,
        }
    }

    pub fn generators(&self) -> Vec<Element> {
        match self {
            GroupKind::Free(r) => FreeGroup::new(*r).generators().into_iter().map(Element::Word).collect(),
            GroupKind::Braid(n) => BraidGroup::new(*n).generators().into_iter().map(Element::Braid).collect(),
            GroupKind::Product(r) => {
                let mut g: Vec<Element> =
                    FreeGroup::new(*r).generators().into_iter().map(|w| Element::Pair(w, 0)).collect();
                g.push(Element::Pair(Word::identity(), 1));
                g
            }
        }
    }

    pub fn format(&self, e: &Element) -> String {
        match e {
            Element::Word(w) => FreeGroup::new(w.max_generator().max(self.rank())).format(w),
            Element::Braid(b) => b.to_word().compact(),
            Element::Pair(w, k) => format!("{},{}", FreeGroup::new(self.rank()).format(w), k),
        }
    }

    fn rank(&self) -> u32 {
        match self {
            GroupKind::Free(r) | GroupKind::Product(r) => *r,
            GroupKind::Braid(_) => 0,
        }
    }

    /// Parses an element: a word for free groups, `WORD` or `WORD,K` for
    /// products, and a braid word for braid groups.
    pub fn parse(&self, text: &str) -> Result<Element, SpecError> {
        match self {
            GroupKind::Free(r) => FreeGroup::new(*r)
                .parse(text)
                .map(Element::Word)
                .map_err(|e| word_error(e, 0)),
            GroupKind::Braid(n) => BraidWord::parse(text, Some(*n))
                .map(|w| Element::Braid(qmorph_core::braid::normal_form(&w)))
                .map_err(|e| SpecError::at(0, e.to_string())),
            GroupKind::Product(r) => {
                let (w, k) = match text.rsplit_once(',') {
                    Some((w, k)) => {
                        let k = k
                            .trim()
                            .parse::<i64>()
                            .map_err(|_| SpecError::at(w.len() + 1, "expected an integer after ','"))?;
                        (w, k)
                    }
                    None => (text, 0),
                };
                let w = FreeGroup::new(*r).parse(w).map_err(|e| word_error(e, 0))?;
                Ok(Element::Pair(w, k))
            }
        }
    }
}

fn word_error(e: qmorph_core::word::WordError, offset: usize) -> SpecError {
    match e {
        qmorph_core::word::WordError::Parse { position, message } => SpecError::at(position + offset, message),
        other => SpecError::at(offset, other.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Whole,
    Pure,
    /// `[B₃, B₃]`, i.e. index sum zero.
    Commutator,
    /// `F_N × 0` inside `F_N × ℤ`.
    FreeFactor,
}

/// A parsed `--group` value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub text: String,
    pub ambient: GroupKind,
    pub subgroup: Subgroup,
    pub mixed: bool,
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_count(text: &str, position: usize, min: u32) -> Result<u32, SpecError> {
    let n: u32 = text
        .trim()
        .parse()
        .map_err(|_| SpecError::at(position, format!("expected a number, found '{text}'")))?;
    if n < min {
        return Err(SpecError::at(position, format!("need at least {min}")));
    }
    Ok(n)
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec, SpecError> {
        let trimmed = text.trim();
        let (head, tail) = match trimmed.split_once('/') {
            Some((h, t)) => (h, Some(t)),
            None => (trimmed, None),
        };
        let (kind, subgroup, mixed) = if let Some(n) = head.strip_prefix("free:") {
            (GroupKind::Free(parse_count(n, 5, 1)?), Subgroup::Whole, false)
        } else if let Some(n) = head.strip_prefix("braid:") {
            (GroupKind::Braid(parse_count(n, 6, 2)?), Subgroup::Whole, false)
        } else if let Some(n) = head.strip_prefix("pure:") {
            (GroupKind::Braid(parse_count(n, 5, 2)?), Subgroup::Pure, false)
        } else if let Some(rest) = head.strip_prefix("product:free:") {
            let n = rest
                .strip_suffix(",z")
                .ok_or_else(|| SpecError::at(13, "expected product:free:N,z"))?;
            (GroupKind::Product(parse_count(n, 13, 1)?), Subgroup::Whole, false)
        } else {
            return Err(SpecError::at(0, format!("unknown group '{trimmed}'")));
        };
        let (subgroup, mixed) = match (tail, kind, subgroup) {
            (None, _, s) => (s, mixed),
            (Some("pure"), GroupKind::Braid(_), Subgroup::Whole) => (Subgroup::Pure, true),
            (Some("commutator"), GroupKind::Braid(3), Subgroup::Whole) => (Subgroup::Commutator, true),
            (Some("free"), GroupKind::Product(_), Subgroup::Whole) => (Subgroup::FreeFactor, true),
            (Some(t), _, _) => {
                return Err(SpecError::at(head.len() + 1, format!("unsupported subgroup '{t}' for '{head}'")));
            }
        };
        Ok(GroupSpec {
            text: trimmed.to_string(),
            ambient: kind,
            subgroup,
            mixed,
        })
    }

    pub fn contains(&self, e: &Element) -> bool {
        match (self.subgroup, e) {
            (Subgroup::Whole, _) => true,
            (Subgroup::Pure, Element::Braid(b)) => b.is_pure(),
            (Subgroup::Commutator, Element::Braid(b)) => b.index_sum() == 0,
            (Subgroup::FreeFactor, Element::Pair(_, k)) => *k == 0,
            _ => false,
        }
    }

    /// Generators of the subgroup (of the ambient group for `Whole`).
    pub fn subgroup_generators(&self) -> Vec<Element> {
        match (self.subgroup, self.ambient) {
            (Subgroup::Whole, k) => k.generators(),
            (Subgroup::Pure, GroupKind::Braid(n)) => pure_generators(n).into_iter().map(Element::Braid).collect(),
            (Subgroup::Commutator, _) => commutator_basis().into_iter().map(Element::Braid).collect(),
            (Subgroup::FreeFactor, GroupKind::Product(r)) => {
                FreeGroup::new(r).generators().into_iter().map(|w| Element::Pair(w, 0)).collect()
            }
            _ => Vec::new(),
        }
    }

    /// The group in which ordinary commutators live: the subgroup.
    pub fn ball_of_subgroup(&self, radius: usize) -> Vec<Element> {
        ball(&self.ambient, &self.subgroup_generators(), radius).elements
    }

    pub fn ball_of_ambient(&self, radius: usize) -> Vec<Element> {
        ball(&self.ambient, &self.ambient.generators(), radius).elements
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, SpecError> {
        self.ambient.parse(text)
    }

    pub fn format(&self, e: &Element) -> String {
        self.ambient.format(e)
    }
}

/// `A_ij = σ_{j-1} ⋯ σ_{i+1} σ_i² σ_{i+1}⁻¹ ⋯ σ_{j-1}⁻¹`, generators of `P_n`.
pub fn pure_generators(n: u32) -> Vec<Braid> {
    let g = BraidGroup::new(n);
    let mut out = Vec::new();
    for i in 1..n as i32 {
        for j in i + 1..=n as i32 {
            let mut letters: Vec<i32> = (i + 1..j).rev().collect();
            letters.extend([i, i]);
            letters.extend((i + 1..j).map(|k| -k));
            out.push(g.from_letters(&letters).expect("valid generator"));
        }
    }
    out
}
