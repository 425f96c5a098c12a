//! The quasimorphism and section spec languages.
//!
//! ```text
//! qm      := zero
//!          | brooks(w=WORD)
//!          | homog(brooks(w=WORD))
//!          | hom(indexsum | expsum | center)
//!          | pullback(qm, pr1 | comm3 | id)
//!          | symmetrize(qm, s1, M)
//! section := section(quotient=Z, map=s1^k | z^k)
//! ```
//!
//! `pr1` is `P₃ → F₂` (braids) or `F_N × ℤ → F_N` (products); `comm3` is the
//! free basis coordinates `[B₃, B₃] → F₂`. Inner quasimorphisms of a pullback
//! live on that free group.

use std::fmt;

use qmorph_core::braid::{commutator_basis, commutator_coordinates, p3_coordinates, p3_generators, BraidGroup};
use qmorph_core::extension::SectionData;
use qmorph_core::group::ball;
use qmorph_core::quasimorphism::{brooks, brooks_homogenized, CountingWord, EvalError, Quasimorphism};
use qmorph_core::word::{FreeGroup, Word};
use qmorph_core::Group;

use crate::context::{Element, GroupKind, SpecError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QmExpr {
    Zero,
    Brooks(String),
    Homog(Box<QmExpr>),
    Hom(String),
    Pullback(Box<QmExpr>, String),
    Symmetrize(Box<QmExpr>, String, u32),
}

impl fmt::Display for QmExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QmExpr::Zero => f.write_str("zero"),
            QmExpr::Brooks(w) => write!(f, "brooks(w={w})"),
            QmExpr::Homog(q) => write!(f, "homog({q})"),
            QmExpr::Hom(h) => write!(f, "hom({h})"),
            QmExpr::Pullback(q, m) => write!(f, "pullback({q}, {m})"),
            QmExpr::Symmetrize(q, c, m) => write!(f, "symmetrize({q}, {c}, {m})"),
        }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn ident(&mut self) -> Result<&'a str, SpecError> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(SpecError::at(self.pos, "expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    /// Everything up to the next `,` or `)` at depth zero.
    fn raw(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest.find([',', ')']).unwrap_or(rest.len());
        self.pos += len;
        rest[..len].trim_end()
    }

    fn expect(&mut self, token: &str) -> Result<(), SpecError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(SpecError::at(self.pos, format!("expected '{token}'")))
        }
    }

    fn finish(&mut self) -> Result<(), SpecError> {
        self.skip_ws();
        if self.pos == self.text.len() {
            Ok(())
        } else {
            Err(SpecError::at(self.pos, "unexpected trailing input"))
        }
    }
}

pub fn parse_qm(text: &str) -> Result<QmExpr, SpecError> {
    let mut c = Cursor { text, pos: 0 };
    let e = parse_expr(&mut c)?;
    c.finish()?;
    Ok(e)
}

fn parse_expr(c: &mut Cursor<'_>) -> Result<QmExpr, SpecError> {
    let start = c.pos;
    let name = c.ident()?;
    if name == "zero" {
        return Ok(QmExpr::Zero);
    }
    c.expect("(")?;
    let e = match name {
        "brooks" => {
            let key = c.ident()?;
            if key != "w" {
                return Err(SpecError::at(c.pos - key.len(), "expected 'w='"));
            }
            c.expect("=")?;
            let w = c.raw();
            if w.is_empty() {
                return Err(SpecError::at(c.pos, "counting word must be nonempty"));
            }
            QmExpr::Brooks(w.to_string())
        }
        "homog" => QmExpr::Homog(Box::new(parse_expr(c)?)),
        "hom" => {
            let at = c.pos;
            let h = c.ident()?;
            if !matches!(h, "indexsum" | "expsum" | "center") {
                return Err(SpecError::at(at, format!("unknown homomorphism '{h}'")));
            }
            QmExpr::Hom(h.to_string())
        }
        "pullback" => {
            let q = parse_expr(c)?;
            c.expect(",")?;
            let at = c.pos;
            let m = c.ident()?;
            if !matches!(m, "pr1" | "comm3" | "id") {
                return Err(SpecError::at(at, format!("unknown map '{m}'")));
            }
            QmExpr::Pullback(Box::new(q), m.to_string())
        }
        "symmetrize" => {
            let q = parse_expr(c)?;
            c.expect(",")?;
            let at = c.pos;
            let g = c.ident()?;
            if g != "s1" {
                return Err(SpecError::at(at, "only 's1' conjugators are supported"));
            }
            c.expect(",")?;
            let at = c.pos;
            let m: u32 = c
                .raw()
                .parse()
                .ok()
                .filter(|&m| m > 0)
                .ok_or_else(|| SpecError::at(at, "expected a positive count"))?;
            QmExpr::Symmetrize(Box::new(q), g.to_string(), m)
        }
        other => return Err(SpecError::at(start, format!("unknown quasimorphism '{other}'"))),
    };
    c.expect(")")?;
    Ok(e)
}

fn domain(e: impl fmt::Display) -> EvalError {
    EvalError::Domain(e.to_string())
}

/// Moves a quasimorphism along `f`, keeping its name, defect and invariance.
fn lift<E: 'static>(
    q: Quasimorphism<E>,
    f: impl Fn(&Element) -> Result<E, EvalError> + Send + Sync + 'static,
) -> Quasimorphism<Element> {
    let inner = q.clone();
    let mut out = Quasimorphism::new(q.name.clone(), q.homogeneous, move |e: &Element| inner.eval(&f(e)?));
    out.defect_upper = q.defect_upper;
    out.defect_lower = q.defect_lower;
    out.invariance = q.invariance;
    out
}

fn as_word(e: &Element) -> Result<Word, EvalError> {
    match e {
        Element::Word(w) => Ok(w.clone()),
        _ => Err(domain("expected a free group element")),
    }
}

/// Compiles a quasimorphism on the free group of the given rank.
pub fn compile_free(expr: &QmExpr, rank: u32) -> Result<Quasimorphism<Word>, SpecError> {
    let f = FreeGroup::new(rank);
    let counting = |w: &str| -> Result<CountingWord, SpecError> {
        let word = f
            .parse(w)
            .map_err(|e| SpecError::at(0, format!("counting word: {e}")))?;
        CountingWord::new(&f, word).map_err(|e| SpecError::at(0, format!("counting word: {e}")))
    };
    match expr {
        QmExpr::Zero => Ok(Quasimorphism::zero()),
        QmExpr::Brooks(w) => Ok(brooks(&counting(w)?)),
        QmExpr::Homog(inner) => match inner.as_ref() {
            QmExpr::Brooks(w) => Ok(brooks_homogenized(&counting(w)?)),
            other => Err(SpecError::Unsupported(format!("homog({other}): only Brooks quasimorphisms are homogenized"))),
        },
        QmExpr::Hom(h) if h == "expsum" => {
            Ok(Quasimorphism::homomorphism("hom(expsum)", |w: &Word| Ok(w.total_exponent())).with_invariance(format!("F{rank}")))
        }
        other => Err(SpecError::Unsupported(format!("{other} is not defined on a free group"))),
    }
}

/// Sample pairs for checking that a projection is a homomorphism.
fn sample_pairs(group: &GroupKind, generators: &[Element]) -> Vec<(Element, Element)> {
    let small = ball(group, generators, 2).elements;
    small
        .iter()
        .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
        .collect()
}

/// Compiles a spec into a quasimorphism on the elements of `kind`.
pub fn compile(expr: &QmExpr, kind: GroupKind) -> Result<Quasimorphism<Element>, SpecError> {
    match (expr, kind) {
        (QmExpr::Zero, _) => Ok(Quasimorphism::zero()),
        (QmExpr::Brooks(_) | QmExpr::Homog(_), GroupKind::Free(r)) => Ok(lift(compile_free(expr, r)?, as_word)),
        (QmExpr::Brooks(_) | QmExpr::Homog(_), _) => Err(SpecError::Unsupported(format!(
            "{expr} needs a free group; use pullback({expr}, pr1)"
        ))),
        (QmExpr::Hom(h), _) => compile_hom(h, kind),
        (QmExpr::Pullback(inner, m), _) if m == "id" => compile(inner, kind),
        (QmExpr::Pullback(inner, m), GroupKind::Braid(3)) if m == "pr1" => {
            let q = compile_free(inner, 2)?;
            let f2 = FreeGroup::new(2);
            let gens: Vec<Element> = p3_generators().into_iter().map(Element::Braid).collect();
            let pairs = sample_pairs(&kind, &gens);
            let map = |e: &Element| match e {
                Element::Braid(b) => p3_coordinates(b).map(|c| c.f2_part).map_err(domain),
                _ => Err(domain("expected a braid")),
            };
            let out = q.pullback(&kind, &f2, "pr1", map, &pairs).map_err(|e| SpecError::Unsupported(e.to_string()))?;
            Ok(out.with_invariance("P3"))
        }
        (QmExpr::Pullback(inner, m), GroupKind::Braid(3)) if m == "comm3" => {
            let q = compile_free(inner, 2)?;
            let f2 = FreeGroup::new(2);
            let gens: Vec<Element> = commutator_basis().into_iter().map(Element::Braid).collect();
            let pairs = sample_pairs(&kind, &gens);
            let map = |e: &Element| match e {
                Element::Braid(b) => commutator_coordinates(b).map_err(domain),
                _ => Err(domain("expected a braid")),
            };
            let out = q
                .pullback(&kind, &f2, "comm3", map, &pairs)
                .map_err(|e| SpecError::Unsupported(e.to_string()))?;
            Ok(out.with_invariance("[B3,B3]"))
        }
        (QmExpr::Pullback(inner, m), GroupKind::Product(r)) if m == "pr1" => {
            let q = compile_free(inner, r)?;
            let fr = FreeGroup::new(r);
            let pairs = sample_pairs(&kind, &kind.generators());
            let map = |e: &Element| match e {
                Element::Pair(w, _) => Ok(w.clone()),
                _ => Err(domain("expected a pair")),
            };
            let out = q.pullback(&kind, &fr, "pr1", map, &pairs).map_err(|e| SpecError::Unsupported(e.to_string()))?;
            // the ℤ factor is central, so invariance under F_N carries over
            let tag = match &q.invariance {
                Some(t) => format!("{t}xZ"),
                None => String::from("none"),
            };
            Ok(out.with_invariance(tag))
        }
        (QmExpr::Pullback(_, m), _) => Err(SpecError::Unsupported(format!("map '{m}' is not available on {kind:?}"))),
        (QmExpr::Symmetrize(inner, _, m), GroupKind::Braid(n)) => {
            let q = compile(inner, kind)?;
            let b = BraidGroup::new(n);
            let s1 = b.from_letters(&[1]).expect("valid generator");
            let conjugators: Vec<Element> = (0..i64::from(*m)).map(|j| Element::Braid(b.pow(&s1, j))).collect();
            let full = n == 3 && *m == 6 && q.invariance.as_deref() == Some("[B3,B3]");
            let out = q.symmetrize(kind, conjugators, &format!("s1, {m}"));
            Ok(if full { out.with_invariance("B3") } else { out })
        }
        (QmExpr::Symmetrize(..), _) => Err(SpecError::Unsupported(String::from("symmetrize needs a braid group"))),
    }
}

fn compile_hom(h: &str, kind: GroupKind) -> Result<Quasimorphism<Element>, SpecError> {
    let tag = match kind {
        GroupKind::Free(r) => format!("F{r}"),
        GroupKind::Braid(n) => format!("B{n}"),
        GroupKind::Product(r) => format!("F{r}xZ"),
    };
    let name = format!("hom({h})");
    let q = match (h, kind) {
        ("indexsum", GroupKind::Braid(_)) => Quasimorphism::homomorphism(name, |e: &Element| match e {
            Element::Braid(b) => Ok(b.index_sum()),
            _ => Err(domain("expected a braid")),
        }),
        ("expsum", GroupKind::Free(_) | GroupKind::Product(_)) => Quasimorphism::homomorphism(name, |e: &Element| match e {
            Element::Word(w) | Element::Pair(w, _) => Ok(w.total_exponent()),
            _ => Err(domain("expected a word")),
        }),
        ("center", GroupKind::Product(_)) => Quasimorphism::homomorphism(name, |e: &Element| match e {
            Element::Pair(_, k) => Ok(*k),
            _ => Err(domain("expected a pair")),
        }),
        ("center", GroupKind::Braid(3)) => {
            return Ok(Quasimorphism::homomorphism(name, |e: &Element| match e {
                Element::Braid(b) => p3_coordinates(b).map(|c| c.center_exponent).map_err(domain),
                _ => Err(domain("expected a braid")),
            })
            .with_invariance("P3"))
        }
        _ => return Err(SpecError::Unsupported(format!("hom({h}) is not defined on {kind:?}"))),
    };
    Ok(q.with_invariance(tag))
}

/// Parses `section(quotient=Z, map=s1^k)` (braid groups) or
/// `section(quotient=Z, map=z^k)` (products `F_N × ℤ`).
pub fn parse_section(text: &str, kind: GroupKind) -> Result<SectionData<Element>, SpecError> {
    let mut c = Cursor { text, pos: 0 };
    let head = c.ident()?;
    if head != "section" {
        return Err(SpecError::at(0, "expected 'section('"));
    }
    c.expect("(")?;
    let at = c.pos;
    if c.ident()? != "quotient" {
        return Err(SpecError::at(at, "expected 'quotient='"));
    }
    c.expect("=")?;
    let at = c.pos;
    if c.raw() != "Z" {
        return Err(SpecError::at(at, "only quotient=Z is supported"));
    }
    c.expect(",")?;
    let at = c.pos;
    if c.ident()? != "map" {
        return Err(SpecError::at(at, "expected 'map='"));
    }
    c.expect("=")?;
    let at = c.pos;
    let map = c.raw().to_string();
    c.expect(")")?;
    c.finish()?;
    let name = format!("section(quotient=Z, map={map})");
    match (map.as_str(), kind) {
        ("s1^k", GroupKind::Braid(n)) => {
            let g = BraidGroup::new(n);
            let s1 = g.from_letters(&[1]).expect("valid generator");
            Ok(SectionData::new(
                name,
                move |k| Element::Braid(g.pow(&s1, k)),
                |e: &Element| match e {
                    Element::Braid(b) => b.index_sum(),
                    _ => 0,
                },
            ))
        }
        ("z^k", GroupKind::Product(_)) => Ok(SectionData::new(
            name,
            |k| Element::Pair(Word::identity(), k),
            |e: &Element| match e {
                Element::Pair(_, k) => *k,
                _ => 0,
            },
        )),
        _ => Err(SpecError::at(at, format!("map '{map}' is not a section for {kind:?}"))),
    }
}
