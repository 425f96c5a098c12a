//! Conjugation-invariant norms, fragmentation norms, and partial
//! (norm-controlled) quasimorphisms.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::group::{FiniteGroup, Group};
use crate::perm::closure;
use crate::quasimorphism::{EvalError, Quasimorphism};
use crate::rational::{int, Rational};

/// A non-negative rational or `+∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Rational),
    Infinite,
}

impl Extended {
    pub fn from_int(v: i64) -> Self {
        Extended::Finite(int(v))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn add(&self, other: &Extended) -> Extended {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinite,
        }
    }

    /// `c · self` for `c ≥ 0`, with `0 · ∞ = 0`.
    pub fn scale(&self, c: &Rational) -> Extended {
        match self {
            Extended::Finite(v) => Extended::Finite(v * c),
            Extended::Infinite if c.is_zero() => Extended::Finite(Rational::zero()),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

pub struct ConjugationInvariantNorm<E> {
    pub name: String,
    eval: Arc<dyn Fn(&E) -> Extended + Send + Sync>,
}

impl<E> Clone for ConjugationInvariantNorm<E> {
    fn clone(&self) -> Self {
        ConjugationInvariantNorm {
            name: self.name.clone(),
            eval: Arc::clone(&self.eval),
        }
    }
}

impl<E> fmt::Debug for ConjugationInvariantNorm<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConjugationInvariantNorm({})", self.name)
    }
}

impl<E> ConjugationInvariantNorm<E> {
    pub fn new(name: impl Into<String>, eval: impl Fn(&E) -> Extended + Send + Sync + 'static) -> Self {
        ConjugationInvariantNorm {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, g: &E) -> Extended {
        (self.eval)(g)
    }
}

/// `ν₀`: 0 at the identity, 1 elsewhere.
pub fn trivial_norm<E>(identity: E) -> ConjugationInvariantNorm<E>
where
    E: PartialEq + Send + Sync + 'static,
{
    ConjugationInvariantNorm::new("trivial", move |g: &E| Extended::from_int(i64::from(*g != identity)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormAxiom {
    IdentityZero,
    Symmetric,
    Triangle,
    ConjugationInvariant,
    Positive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation<E> {
    pub axiom: NormAxiom,
    pub elements: Vec<E>,
}

/// Checks the five norm axioms on `samples`, using every ordered pair for the
/// two-variable axioms.
pub fn check_norm_axioms<G: Group>(
    group: &G,
    norm: &ConjugationInvariantNorm<G::Elem>,
    samples: &[G::Elem],
) -> Vec<AxiomViolation<G::Elem>> {
    let mut out = Vec::new();
    let zero = Extended::Finite(Rational::zero());
    if norm.eval(&group.identity()) != zero {
        out.push(AxiomViolation {
            axiom: NormAxiom::IdentityZero,
            elements: alloc::vec![group.identity()],
        });
    }
    let values: Vec<Extended> = samples.iter().map(|g| norm.eval(g)).collect();
    for (f, v) in samples.iter().zip(&values) {
        if norm.eval(&group.invert(f)) != *v {
            out.push(AxiomViolation {
                axiom: NormAxiom::Symmetric,
                elements: alloc::vec![f.clone()],
            });
        }
        if !group.is_identity(f) && *v <= zero {
            out.push(AxiomViolation {
                axiom: NormAxiom::Positive,
                elements: alloc::vec![f.clone()],
            });
        }
    }
    for (f, vf) in samples.iter().zip(&values) {
        for (g, vg) in samples.iter().zip(&values) {
            if norm.eval(&group.multiply(f, g)) > vf.add(vg) {
                out.push(AxiomViolation {
                    axiom: NormAxiom::Triangle,
                    elements: alloc::vec![f.clone(), g.clone()],
                });
            }
            if norm.eval(&group.conjugate(g, f)) != *vf {
                out.push(AxiomViolation {
                    axiom: NormAxiom::ConjugationInvariant,
                    elements: alloc::vec![f.clone(), g.clone()],
                });
            }
        }
    }
    out
}

/// A factorization `f = g₁h₁g₁⁻¹ ⋯ g_kh_kg_k⁻¹`, stored as the pairs `(gᵢ, hᵢ)`.
pub type Fragmentation<E> = Vec<(E, E)>;

pub fn reassemble<G: Group>(group: &G, pieces: &[(G::Elem, G::Elem)]) -> G::Elem {
    pieces
        .iter()
        .fold(group.identity(), |acc, (g, h)| group.multiply(&acc, &group.conjugate(g, h)))
}

/// Conjugates `g h g⁻¹` of the nontrivial `h`, deduplicated, each with the
/// first pair producing it. Sorted by the conjugate.
fn conjugate_generators<G: Group>(
    group: &G,
    conjugators: &[G::Elem],
    subgroup: &[G::Elem],
) -> Vec<(G::Elem, (G::Elem, G::Elem))> {
    let mut seen: BTreeMap<G::Elem, (G::Elem, G::Elem)> = BTreeMap::new();
    for h in subgroup.iter().filter(|h| !group.is_identity(h)) {
        for g in conjugators {
            seen.entry(group.conjugate(g, h)).or_insert_with(|| (g.clone(), h.clone()));
        }
    }
    seen.into_iter().collect()
}

/// Breadth-first layers of products of conjugates, with parent pointers.
struct Layers<E> {
    /// element → (layer, parent element, (g, h))
    nodes: BTreeMap<E, (usize, Option<(E, (E, E))>)>,
}

impl<E: Clone + Ord> Layers<E> {
    fn witness(&self, f: &E) -> Option<Fragmentation<E>> {
        let mut out = Vec::new();
        let mut cur = f.clone();
        loop {
            let (_, parent) = self.nodes.get(&cur)?;
            match parent {
                None => break,
                Some((p, piece)) => {
                    out.push(piece.clone());
                    cur = p.clone();
                }
            }
        }
        out.reverse();
        Some(out)
    }
}

fn bfs<G: Group>(
    group: &G,
    generators: &[(G::Elem, (G::Elem, G::Elem))],
    max_layer: usize,
    stop_at: Option<&G::Elem>,
) -> Layers<G::Elem> {
    let mut nodes = BTreeMap::new();
    nodes.insert(group.identity(), (0, None));
    let mut frontier = alloc::vec![group.identity()];
    for layer in 1..=max_layer {
        if frontier.is_empty() || stop_at.is_some_and(|f| nodes.contains_key(f)) {
            break;
        }
        let mut next = Vec::new();
        for x in &frontier {
            for (s, piece) in generators {
                let y = group.multiply(x, s);
                if !nodes.contains_key(&y) {
                    nodes.insert(y.clone(), (layer, Some((x.clone(), piece.clone()))));
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    Layers { nodes }
}

/// Exact fragmentation norm `ν_H` on a finite group, with witnesses.
pub struct FragmentationTable<E> {
    layers: Layers<E>,
    pub subgroup_order: usize,
    pub generator_count: usize,
}

impl<E: Clone + Ord> FragmentationTable<E> {
    pub fn norm(&self, f: &E) -> Extended {
        match self.layers.nodes.get(f) {
            Some((k, _)) => Extended::from_int(*k as i64),
            None => Extended::Infinite,
        }
    }

    pub fn witness(&self, f: &E) -> Option<Fragmentation<E>> {
        self.layers.witness(f)
    }

    /// Elements at exactly distance `k`.
    pub fn layer(&self, k: usize) -> Vec<E> {
        self.layers
            .nodes
            .iter()
            .filter(|(_, (l, _))| *l == k)
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn max_finite(&self) -> usize {
        self.layers.nodes.values().map(|(l, _)| *l).max().unwrap_or(0)
    }
}

/// `ν_H` on all of `group`, where `H` is generated by `subgroup_generators`.
/// Elements outside the normal closure of `H` get `+∞`.
pub fn fragmentation_table<G: FiniteGroup>(group: &G, subgroup_generators: &[G::Elem]) -> FragmentationTable<G::Elem> {
    let subgroup = closure(group, subgroup_generators);
    let elements = group.elements();
    let gens = conjugate_generators(group, &elements, &subgroup);
    let layers = bfs(group, &gens, elements.len(), None);
    FragmentationTable {
        layers,
        subgroup_order: subgroup.len(),
        generator_count: gens.len(),
    }
}

/// The table as a norm on the group.
pub fn fragmentation_norm<E>(table: FragmentationTable<E>, name: impl Into<String>) -> ConjugationInvariantNorm<E>
where
    E: Clone + Ord + Send + Sync + 'static,
{
    ConjugationInvariantNorm::new(name, move |f: &E| table.norm(f))
}

/// Outcome of a truncated fragmentation search in an infinite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchVerdict {
    /// A decomposition with this many factors was found and none shorter
    /// exists among the enumerated conjugates.
    Exact(usize),
    /// Nothing with at most `cap` factors among the enumerated conjugates.
    AtLeast(usize),
}

#[derive(Clone, Debug)]
pub struct FragmentationSearch<E> {
    pub verdict: SearchVerdict,
    pub witness: Option<Fragmentation<E>>,
    /// Number of distinct conjugates used as generators.
    pub scope: usize,
}

/// Least number of conjugates `g h g⁻¹` with `g` from `conjugators` and `h`
/// from `subgroup_elements` whose product is `f`, up to `cap` factors.
pub fn fragmentation_search<G: Group>(
    group: &G,
    conjugators: &[G::Elem],
    subgroup_elements: &[G::Elem],
    f: &G::Elem,
    cap: usize,
) -> FragmentationSearch<G::Elem> {
    let gens = conjugate_generators(group, conjugators, subgroup_elements);
    let layers = bfs(group, &gens, cap, Some(f));
    let scope = gens.len();
    match layers.nodes.get(f) {
        Some((k, _)) => FragmentationSearch {
            verdict: SearchVerdict::Exact(*k),
            witness: layers.witness(f),
            scope,
        },
        None => FragmentationSearch {
            verdict: SearchVerdict::AtLeast(cap + 1),
            witness: None,
            scope,
        },
    }
}

/// A function controlled by a norm: `|φ(fg) − φ(f) − φ(g)| ≤ C·min{ν(f), ν(g)}`.
#[derive(Clone, Debug)]
pub struct PartialQuasimorphism<E> {
    pub phi: Quasimorphism<E>,
    pub norm: ConjugationInvariantNorm<E>,
    pub constant: Rational,
    pub semi_homogeneous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlViolation {
    pub f: usize,
    pub g: usize,
    pub deviation: Rational,
    pub allowed: Extended,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PartialQmReport {
    pub pairs_checked: usize,
    pub control_violations: Vec<ControlViolation>,
    /// `(sample index, n)` with `φ(fⁿ) ≠ n·φ(f)`.
    pub homogeneity_violations: Vec<(usize, i64)>,
}

impl PartialQmReport {
    pub fn passed(&self) -> bool {
        self.control_violations.is_empty() && self.homogeneity_violations.is_empty()
    }
}

/// Tests the controlled-defect inequality (non-strict) on all ordered pairs
/// of `samples`, and semi-homogeneity for `0 ≤ n ≤ n_max` when claimed.
pub fn partial_qm_check<G: Group>(
    group: &G,
    pq: &PartialQuasimorphism<G::Elem>,
    samples: &[G::Elem],
    n_max: i64,
) -> Result<PartialQmReport, EvalError>
where
    G::Elem: 'static,
{
    let mut report = PartialQmReport::default();
    let values: Vec<Rational> = samples.iter().map(|g| pq.phi.eval(g)).collect::<Result<_, _>>()?;
    let norms: Vec<Extended> = samples.iter().map(|g| pq.norm.eval(g)).collect();
    for i in 0..samples.len() {
        for j in 0..samples.len() {
            report.pairs_checked += 1;
            let fg = pq.phi.eval(&group.multiply(&samples[i], &samples[j]))?;
            let deviation = (fg - &values[i] - &values[j]).abs();
            let allowed = norms[i].clone().min(norms[j].clone()).scale(&pq.constant);
            if Extended::Finite(deviation.clone()) > allowed {
                report.control_violations.push(ControlViolation {
                    f: i,
                    g: j,
                    deviation,
                    allowed,
                });
            }
        }
    }
    if pq.semi_homogeneous {
        for (i, f) in samples.iter().enumerate() {
            for n in 0..=n_max {
                if pq.phi.eval(&group.pow(f, n))? != &values[i] * int(n) {
                    report.homogeneity_violations.push((i, n));
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationStep {
    pub k: i64,
    pub deviation: Rational,
    pub bound: Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationReport {
    pub steps: Vec<ConjugationStep>,
}

impl ConjugationReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| Extended::Finite(s.deviation.clone()) <= s.bound)
    }
}

/// For `k = 1..=n_max`, compares `|φ(g fᵏ g⁻¹)/k − φ(f)|` with
/// `(|φ(g)| + |φ(g⁻¹)| + 2C·ν(g)) / k`.
pub fn conj_invariance_of_partial_qm<G: Group>(
    group: &G,
    pq: &PartialQuasimorphism<G::Elem>,
    f: &G::Elem,
    g: &G::Elem,
    n_max: i64,
) -> Result<ConjugationReport, EvalError>
where
    G::Elem: 'static,
{
    let phi_f = pq.phi.eval(f)?;
    let ginv = group.invert(g);
    let base = Extended::Finite(pq.phi.eval(g)?.abs() + pq.phi.eval(&ginv)?.abs())
        .add(&pq.norm.eval(g).scale(&(int(2) * &pq.constant)));
    let mut steps = Vec::new();
    for k in 1..=n_max {
        let conj = group.conjugate(g, &group.pow(f, k));
        let deviation = (pq.phi.eval(&conj)? / int(k) - &phi_f).abs();
        let bound = match &base {
            Extended::Finite(b) => Extended::Finite(b / int(k)),
            Extended::Infinite => Extended::Infinite,
        };
        steps.push(ConjugationStep { k, deviation, bound });
    }
    Ok(ConjugationReport { steps })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreconditionError {
    #[error("f does not commute with g f^-1 g^-1")]
    NotCommuting,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCommutatorStep {
    pub n: i64,
    /// `[f,g]ⁿ = [fⁿ,g]` as group elements.
    pub identity_holds: bool,
    /// `|φ([fⁿ,g])|`, to be compared with `R`.
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitCommutatorReport {
    pub phi_commutator: Rational,
    /// `max{|φ(g) + φ(g⁻¹) + C·ν(g)|, |C·ν(g)|}`.
    pub r: Extended,
    pub steps: Vec<SplitCommutatorStep>,
}

impl SplitCommutatorReport {
    /// Every identity holds, every `|φ([fⁿ,g])| ≤ R`, and for
    /// semi-homogeneous `φ` also `n·|φ([f,g])| ≤ R`.
    pub fn passed(&self, semi_homogeneous: bool) -> bool {
        self.steps.iter().all(|s| {
            let scaled = Extended::Finite(self.phi_commutator.abs() * int(s.n));
            s.identity_holds
                && Extended::Finite(s.value.clone()) <= self.r
                && (!semi_homogeneous || scaled <= self.r)
        })
    }
}

/// Checks `f · (g f⁻¹ g⁻¹) = (g f⁻¹ g⁻¹) · f` exactly.
pub fn split_commutator_hypothesis<G: Group>(group: &G, f: &G::Elem, g: &G::Elem) -> bool {
    let k = group.conjugate(g, &group.invert(f));
    group.multiply(f, &k) == group.multiply(&k, f)
}

/// Under the hypothesis above, `[f,g]ⁿ = [fⁿ,g]` for all `n`, which forces a
/// semi-homogeneous controlled `φ` to vanish on `[f,g]`.
pub fn vanishing_on_split_commutators<G: Group>(
    group: &G,
    pq: &PartialQuasimorphism<G::Elem>,
    f: &G::Elem,
    g: &G::Elem,
    n_max: i64,
) -> Result<SplitCommutatorReport, PreconditionError>
where
    G::Elem: 'static,
{
    if !split_commutator_hypothesis(group, f, g) {
        return Err(PreconditionError::NotCommuting);
    }
    let c = group.commutator(f, g);
    let phi_commutator = pq.phi.eval(&c)?;
    let c_nu = pq.norm.eval(g).scale(&pq.constant);
    let first = match &c_nu {
        Extended::Finite(v) => Extended::Finite((pq.phi.eval(g)? + pq.phi.eval(&group.invert(g))? + v).abs()),
        Extended::Infinite => Extended::Infinite,
    };
    let r = first.max(c_nu);
    let mut steps = Vec::new();
    for n in 1..=n_max {
        let lhs = group.pow(&c, n);
        let rhs = group.commutator(&group.pow(f, n), g);
        steps.push(SplitCommutatorStep {
            n,
            identity_holds: lhs == rhs,
            value: pq.phi.eval(&rhs)?.abs(),
        });
    }
    Ok(SplitCommutatorReport { phi_commutator, r, steps })
}
