//! Brooks counting quasimorphisms, homogenization, pullbacks, defect
//! estimation and invariance checks.
//!
//! A [`Quasimorphism`] carries its evaluation procedure together with a
//! certified upper bound on the defect (with a provenance string that ends up
//! in certificates) and the best lower bound found by search so far.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::{Ball, Group};
use crate::rational::{int, Interval, Rational};
use crate::word::{FreeGroup, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("element outside the domain: {0}")]
    Domain(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QmError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("map is not a homomorphism on sample pair {0}")]
    NotHomomorphism(usize),
    #[error("defect is not certified")]
    DefectUnknown,
}

/// A certified upper bound on the defect and where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectBound {
    pub value: Rational,
    pub provenance: String,
}

impl DefectBound {
    pub fn new(value: Rational, provenance: impl Into<String>) -> Self {
        DefectBound {
            value,
            provenance: provenance.into(),
        }
    }
}

type EvalFn<E> = Arc<dyn Fn(&E) -> Result<Rational, EvalError> + Send + Sync>;

pub struct Quasimorphism<E> {
    pub name: String,
    eval: EvalFn<E>,
    pub defect_upper: Option<DefectBound>,
    pub defect_lower: Rational,
    pub homogeneous: bool,
    /// The ambient group under whose conjugation action this is known (or
    /// claimed) to be invariant.
    pub invariance: Option<String>,
}

impl<E> Clone for Quasimorphism<E> {
    fn clone(&self) -> Self {
        Quasimorphism {
            name: self.name.clone(),
            eval: Arc::clone(&self.eval),
            defect_upper: self.defect_upper.clone(),
            defect_lower: self.defect_lower.clone(),
            homogeneous: self.homogeneous,
            invariance: self.invariance.clone(),
        }
    }
}

impl<E> fmt::Debug for Quasimorphism<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Quasimorphism")
            .field("name", &self.name)
            .field("defect_upper", &self.defect_upper)
            .field("defect_lower", &self.defect_lower)
            .field("homogeneous", &self.homogeneous)
            .field("invariance", &self.invariance)
            .finish()
    }
}

impl<E: 'static> Quasimorphism<E> {
    pub fn new(
        name: impl Into<String>,
        homogeneous: bool,
        eval: impl Fn(&E) -> Result<Rational, EvalError> + Send + Sync + 'static,
    ) -> Self {
        Quasimorphism {
            name: name.into(),
            eval: Arc::new(eval),
            defect_upper: None,
            defect_lower: Rational::zero(),
            homogeneous,
            invariance: None,
        }
    }

    pub fn eval(&self, g: &E) -> Result<Rational, EvalError> {
        (self.eval)(g)
    }

    pub fn with_defect(mut self, bound: DefectBound) -> Self {
        self.defect_upper = Some(bound);
        self
    }

    /// Replaces the certified defect with a user-supplied constant.
    pub fn with_defect_override(self, value: Rational) -> Self {
        self.with_defect(DefectBound::new(value, "user-supplied"))
    }

    pub fn with_invariance(mut self, group: impl Into<String>) -> Self {
        self.invariance = Some(group.into());
        self
    }

    /// Raises `defect_lower` to `value` if larger.
    pub fn record_lower(&mut self, value: &Rational) {
        if *value > self.defect_lower {
            self.defect_lower = value.clone();
        }
    }

    pub fn zero() -> Self {
        Quasimorphism::new("zero", true, |_: &E| Ok(Rational::zero()))
            .with_defect(DefectBound::new(Rational::zero(), "zero map"))
    }

    /// A homomorphism to ℤ, viewed as a quasimorphism of defect 0.
    pub fn homomorphism(name: impl Into<String>, map: impl Fn(&E) -> Result<i64, EvalError> + Send + Sync + 'static) -> Self {
        Quasimorphism::new(name, true, move |g: &E| map(g).map(int))
            .with_defect(DefectBound::new(Rational::zero(), "homomorphism"))
    }

    /// `g ↦ φ(h(g))` for a map `h` that is checked to be a homomorphism on
    /// `sample_pairs`. The defect bound carries over.
    pub fn pullback<A, GA, GB>(
        &self,
        domain: &GA,
        codomain: &GB,
        map_name: &str,
        map: impl Fn(&A) -> Result<E, EvalError> + Send + Sync + 'static,
        sample_pairs: &[(A, A)],
    ) -> Result<Quasimorphism<A>, QmError>
    where
        A: 'static,
        E: PartialEq,
        GA: Group<Elem = A>,
        GB: Group<Elem = E>,
    {
        for (i, (a, b)) in sample_pairs.iter().enumerate() {
            let lhs = map(&domain.multiply(a, b))?;
            let rhs = codomain.multiply(&map(a)?, &map(b)?);
            if lhs != rhs {
                return Err(QmError::NotHomomorphism(i));
            }
        }
        let inner = self.clone();
        let name = alloc::format!("pullback({}, {})", self.name, map_name);
        let mut out = Quasimorphism::new(name, self.homogeneous, move |a: &A| inner.eval(&map(a)?));
        out.defect_upper = self.defect_upper.as_ref().map(|d| DefectBound {
            value: d.value.clone(),
            provenance: alloc::format!("pullback of: {}", d.provenance),
        });
        Ok(out)
    }

    /// `g ↦ Σ φ(c g c⁻¹)` over the given conjugators, with defect at most the
    /// number of conjugators times the defect of `φ`.
    pub fn symmetrize<G>(&self, group: G, conjugators: Vec<E>, label: &str) -> Quasimorphism<E>
    where
        G: Group<Elem = E> + Send + Sync + 'static,
        E: Send + Sync,
    {
        let k = conjugators.len() as i64;
        let inner = self.clone();
        let name = alloc::format!("symmetrize({}, {})", self.name, label);
        let mut out = Quasimorphism::new(name, self.homogeneous, move |g: &E| {
            let mut total = Rational::zero();
            for c in &conjugators {
                total += inner.eval(&group.conjugate(c, g))?;
            }
            Ok(total)
        });
        out.defect_upper = self.defect_upper.as_ref().map(|d| DefectBound {
            value: &d.value * int(k),
            provenance: alloc::format!("{k} x ({})", d.provenance),
        });
        out
    }
}

/// A nonempty reduced word used for counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingWord {
    word: Word,
    rank: u32,
}

impl CountingWord {
    pub fn new(group: &FreeGroup, word: Word) -> Result<Self, WordError> {
        if word.is_empty() {
            return Err(WordError::EmptyCountingWord);
        }
        group.check(&word)?;
        Ok(CountingWord {
            word,
            rank: group.rank(),
        })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn inverse(&self) -> CountingWord {
        CountingWord {
            word: self.word.inverse(),
            rank: self.rank,
        }
    }

    fn check(&self, g: &Word) -> Result<(), WordError> {
        FreeGroup::new(self.rank).check(g)
    }
}

/// Maximal number of pairwise disjoint occurrences of `w` in the reduced
/// word `g`. A greedy left-to-right scan is optimal because all occurrences
/// have the same length.
pub fn count_copies(w: &CountingWord, g: &Word) -> Result<usize, WordError> {
    w.check(g)?;
    Ok(greedy_count(w.word.letters(), g.letters()))
}

fn greedy_count<T: PartialEq>(w: &[T], g: &[T]) -> usize {
    let k = w.len();
    let mut count = 0;
    let mut i = 0;
    while i + k <= g.len() {
        if &g[i..i + k] == w {
            count += 1;
            i += k;
        } else {
            i += 1;
        }
    }
    count
}

/// `lim c_w(uⁿ)/n` for a cyclically reduced `u`, found by running the greedy
/// scan over the periodic word `u u u ...` until the scan position repeats
/// modulo `|u|`.
fn periodic_density(w: &Word, u: &Word) -> Rational {
    let m = u.len();
    if m == 0 {
        return Rational::zero();
    }
    let (w, u) = (w.letters(), u.letters());
    let k = w.len();
    // first (position, count) at which each residue was free
    let mut seen: Vec<Option<(usize, usize)>> = alloc::vec![None; m];
    let (mut pos, mut count) = (0usize, 0usize);
    loop {
        let r = pos % m;
        if let Some((p0, c0)) = seen[r] {
            let periods = (pos - p0) / m;
            return Rational::new(((count - c0) as i64).into(), (periods as i64).into());
        }
        seen[r] = Some((pos, count));
        if (0..k).all(|j| w[j] == u[(pos + j) % m]) {
            count += 1;
            pos += k;
        } else {
            pos += 1;
        }
    }
}

/// The exact homogenization `h̄_w(g)`, computed on the cyclic core of `g`.
pub fn homogenize_counting_exact(w: &CountingWord, g: &Word) -> Result<Rational, WordError> {
    w.check(g)?;
    let (core, _) = g.cyclic_reduce();
    Ok(periodic_density(&w.word, &core) - periodic_density(&w.inverse().word, &core))
}

/// Certified defect bound for `h_w`.
///
/// Write `g = g₁c`, `h = c⁻¹h₂` with `gh = g₁h₂` reduced. For reduced
/// products `ab` one has `c_w(ab) = c_w(a) + c_w(b) + ε` with `ε ∈ {0, 1}`,
/// since a maximal disjoint family has at most one copy crossing the seam.
/// Applying this to `g`, `h` and `gh` (and using `h_w(c⁻¹) = −h_w(c)`) leaves
/// three seam terms, each in `[−1, 1]`, so the defect is at most 3. For a
/// single letter `h_w` is an exponent sum and the defect is 0.
pub fn defect_bound_counting(w: &CountingWord) -> DefectBound {
    if w.len() == 1 {
        DefectBound::new(Rational::zero(), "exponent sum homomorphism (|w|=1)")
    } else {
        DefectBound::new(int(3), alloc::format!("junction bound (|w|={})", w.len()))
    }
}

fn word_name(w: &CountingWord) -> String {
    FreeGroup::new(w.rank).format(&w.word)
}

/// `h_w = c_w − c_{w⁻¹}` on the free group of the word's rank.
pub fn brooks(w: &CountingWord) -> Quasimorphism<Word> {
    let (a, b) = (w.clone(), w.inverse());
    let name = alloc::format!("brooks(w={})", word_name(w));
    Quasimorphism::new(name, w.len() == 1, move |g: &Word| {
        let plus = count_copies(&a, g)? as i64;
        let minus = count_copies(&b, g)? as i64;
        Ok(int(plus - minus))
    })
    .with_defect(defect_bound_counting(w))
    .with_invariance(alloc::format!("F{}", w.rank))
}

/// The homogenization `h̄_w`, evaluated exactly. Its defect is at most twice
/// that of `h_w`.
pub fn brooks_homogenized(w: &CountingWord) -> Quasimorphism<Word> {
    let a = w.clone();
    let base = defect_bound_counting(w);
    let name = alloc::format!("homog(brooks(w={}))", word_name(w));
    Quasimorphism::new(name, true, move |g: &Word| Ok(homogenize_counting_exact(&a, g)?))
        .with_defect(DefectBound::new(
            int(2) * &base.value,
            alloc::format!("2 x homogenization of: {}", base.provenance),
        ))
        .with_invariance(alloc::format!("F{}", w.rank))
}

/// `φ(gⁿ)/n` with certified radius `D/n`; exact for homogeneous `φ`. The
/// radius is `None` when the defect is unknown.
pub fn homogenize<G: Group>(
    group: &G,
    phi: &Quasimorphism<G::Elem>,
    g: &G::Elem,
    n_max: u32,
) -> Result<Interval, EvalError>
where
    G::Elem: 'static,
{
    if phi.homogeneous {
        return Ok(Interval::exact(phi.eval(g)?));
    }
    let n = i64::from(n_max.max(1));
    let value = phi.eval(&group.pow(g, n))? / int(n);
    Ok(Interval {
        center: value,
        radius: phi.defect_upper.as_ref().map(|d| &d.value / int(n)),
    })
}

/// A pair realizing a searched defect lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectWitness<E> {
    pub lower: Rational,
    pub g: E,
    pub h: E,
}

/// Largest certified `|φ(gh) − φ(g) − φ(h)|` over pairs from `ball` with
/// `|g| + |h| ≤ radius`, where values are intervals. The certified lower
/// bound for a pair is the center difference minus the sum of radii, so
/// exact values give the exact deviation. Returns `None` for an empty
/// search, otherwise the first pair (in ball order) attaining the maximum.
pub fn defect_search_intervals<G, F>(
    group: &G,
    ball: &Ball<G::Elem>,
    radius: usize,
    mut value: F,
) -> Result<Option<DefectWitness<G::Elem>>, EvalError>
where
    G: Group,
    F: FnMut(&G::Elem) -> Result<Interval, EvalError>,
{
    let values: Vec<Interval> = ball.elements.iter().map(&mut value).collect::<Result<_, _>>()?;
    let mut best: Option<DefectWitness<G::Elem>> = None;
    for (i, (g, lg)) in ball.iter().enumerate() {
        if lg > radius {
            break;
        }
        for (j, (h, lh)) in ball.iter().enumerate() {
            if lg + lh > radius {
                break;
            }
            let gh = value(&group.multiply(g, h))?;
            let (a, b) = (&values[i], &values[j]);
            let slack = match (&gh.radius, &a.radius, &b.radius) {
                (Some(x), Some(y), Some(z)) => x + y + z,
                _ => return Err(EvalError::Domain(String::from("uncertified value in defect search"))),
            };
            let lower = (&gh.center - &a.center - &b.center).abs() - slack;
            if best.as_ref().is_none_or(|w| lower > w.lower) {
                best = Some(DefectWitness {
                    lower,
                    g: g.clone(),
                    h: h.clone(),
                });
            }
        }
    }
    Ok(best.map(|mut w| {
        if w.lower.is_negative() {
            w.lower = Rational::zero();
        }
        w
    }))
}

/// Searched defect lower bound of an exactly evaluated quasimorphism; see
/// [`defect_search_intervals`]. Records the result in `phi.defect_lower`.
pub fn defect_search<G: Group>(
    group: &G,
    phi: &mut Quasimorphism<G::Elem>,
    ball: &Ball<G::Elem>,
    radius: usize,
) -> Result<Option<DefectWitness<G::Elem>>, EvalError>
where
    G::Elem: 'static,
{
    let found = {
        let phi = &*phi;
        defect_search_intervals(group, ball, radius, |g| phi.eval(g).map(Interval::exact))?
    };
    if let Some(w) = &found {
        phi.record_lower(&w.lower);
    }
    Ok(found)
}

/// One failure of `φ(c g c⁻¹) = φ(g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceViolation {
    pub conjugator: usize,
    pub target: usize,
    pub before: Rational,
    pub after: Rational,
}

impl InvarianceViolation {
    pub fn magnitude(&self) -> Rational {
        (&self.after - &self.before).abs()
    }
}

/// Compares `φ(c g c⁻¹)` with `φ(g)` for every conjugator and target, with
/// conjugation computed in the ambient `group`. An empty result means no
/// counterexample was found.
pub fn invariance_check<G: Group>(
    group: &G,
    phi: &Quasimorphism<G::Elem>,
    conjugators: &[G::Elem],
    targets: &[G::Elem],
) -> Result<Vec<InvarianceViolation>, EvalError>
where
    G::Elem: 'static,
{
    let mut out = Vec::new();
    for (t, g) in targets.iter().enumerate() {
        let before = phi.eval(g)?;
        for (c, x) in conjugators.iter().enumerate() {
            let after = phi.eval(&group.conjugate(x, g))?;
            if after != before {
                out.push(InvarianceViolation {
                    conjugator: c,
                    target: t,
                    before: before.clone(),
                    after,
                });
            }
        }
    }
    Ok(out)
}

/// Checks `φ(gⁿ) = n·φ(g)` for `n ∈ [−n_max, n_max]`; returns the first
/// failing `(target index, n)`.
pub fn homogeneity_check<G: Group>(
    group: &G,
    phi: &Quasimorphism<G::Elem>,
    targets: &[G::Elem],
    n_max: i64,
) -> Result<Option<(usize, i64)>, EvalError>
where
    G::Elem: 'static,
{
    for (i, g) in targets.iter().enumerate() {
        let base = phi.eval(g)?;
        for n in -n_max..=n_max {
            if phi.eval(&group.pow(g, n))? != &base * int(n) {
                return Ok(Some((i, n)));
            }
        }
    }
    Ok(None)
}

/// Human-readable one-line summary of a defect record.
pub fn defect_summary<E>(phi: &Quasimorphism<E>) -> String {
    let upper = match &phi.defect_upper {
        Some(d) => alloc::format!("{} [{}]", d.value, d.provenance),
        None => "unknown".to_string(),
    };
    alloc::format!("{}: defect in [{}, {}]", phi.name, phi.defect_lower, upper)
}
