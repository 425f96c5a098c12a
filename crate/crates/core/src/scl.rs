//! Commutator decompositions and bounds on (mixed) stable commutator length.
//!
//! Upper bounds come from explicit decompositions of `xⁿ` into commutators
//! `[ĝ, g]`; lower bounds from homogeneous quasimorphisms via
//! `scl(x) ≥ |φ(x)| / 2D(φ)`. Values are never claimed exactly: a
//! certificate is a one-sided bound together with the data that proves it.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::braid::{p3_coordinates, p3_generators, Braid, BraidGroup};
use crate::group::{ball, Group};
use crate::norms::split_commutator_hypothesis;
use crate::quasimorphism::{
    brooks_homogenized, invariance_check, DefectBound, EvalError, InvarianceViolation, QmError, Quasimorphism,
};
use crate::rational::{int, ratio, Rational};
use crate::word::{FreeGroup, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SclError {
    #[error("factor {factor}: second component fails the membership test")]
    Membership { factor: usize },
    #[error("quasimorphism is not homogeneous")]
    NotHomogeneous,
    #[error("defect is not certified")]
    DefectUnknown,
    #[error("invariance evidence has {0} violations")]
    InvarianceViolated(usize),
    #[error("f does not commute with g f^-1 g^-1")]
    NotCommuting,
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Qm(#[from] QmError),
}

/// `target = Π [ĝᵢ, gᵢ]` with `ĝᵢ` in the ambient group and `gᵢ` in the
/// normal subgroup. For ordinary commutator length both lie in one group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedCommutatorDecomposition<E> {
    pub factors: Vec<(E, E)>,
    pub target: E,
}

impl<E> MixedCommutatorDecomposition<E> {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }
}

pub fn product_of_commutators<G: Group>(group: &G, factors: &[(G::Elem, G::Elem)]) -> G::Elem {
    factors
        .iter()
        .fold(group.identity(), |acc, (a, b)| group.multiply(&acc, &group.commutator(a, b)))
}

/// Checks memberships (second components) and then the exact product.
/// Returns `Ok(false)` if the product differs from the target.
pub fn verify_decomposition<G: Group>(
    group: &G,
    d: &MixedCommutatorDecomposition<G::Elem>,
    membership: impl Fn(&G::Elem) -> bool,
) -> Result<bool, SclError> {
    for (i, (_, g)) in d.factors.iter().enumerate() {
        if !membership(g) {
            return Err(SclError::Membership { factor: i });
        }
    }
    Ok(product_of_commutators(group, &d.factors) == d.target)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MixedSearch<E> {
    Found(MixedCommutatorDecomposition<E>),
    /// No decomposition with at most `cap` factors from the enumerated balls.
    NotFound { cap: usize },
}

/// Exhaustive search for the fewest commutators `[ĝ, g]`, `ĝ ∈ ambient`,
/// `g ∈ normal`, with product `target`. Ties go to the smallest pairs in the
/// element order, so the witness is deterministic.
pub fn mixed_cl_search<G: Group>(
    group: &G,
    target: &G::Elem,
    ambient: &[G::Elem],
    normal: &[G::Elem],
    max_factors: usize,
) -> MixedSearch<G::Elem> {
    if group.is_identity(target) {
        return MixedSearch::Found(MixedCommutatorDecomposition {
            factors: Vec::new(),
            target: target.clone(),
        });
    }
    let mut commutators: BTreeMap<G::Elem, (G::Elem, G::Elem)> = BTreeMap::new();
    for a in ambient {
        for b in normal {
            let c = group.commutator(a, b);
            let pair = (a.clone(), b.clone());
            match commutators.get(&c) {
                Some(existing) if *existing <= pair => {}
                _ => {
                    commutators.insert(c, pair);
                }
            }
        }
    }
    // products of k commutators, each with the factor list that reached it
    let mut level: BTreeMap<G::Elem, Vec<(G::Elem, G::Elem)>> = BTreeMap::new();
    level.insert(group.identity(), Vec::new());
    for _ in 1..=max_factors {
        // finish with one more commutator: prefix⁻¹ · target must be one
        let mut best: Option<Vec<(G::Elem, G::Elem)>> = None;
        for (prefix, factors) in &level {
            let rest = group.multiply(&group.invert(prefix), target);
            if let Some(pair) = commutators.get(&rest) {
                let mut candidate = factors.clone();
                candidate.push(pair.clone());
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
        if let Some(factors) = best {
            return MixedSearch::Found(MixedCommutatorDecomposition {
                factors,
                target: target.clone(),
            });
        }
        let mut next: BTreeMap<G::Elem, Vec<(G::Elem, G::Elem)>> = BTreeMap::new();
        for (prefix, factors) in &level {
            for (c, pair) in &commutators {
                let p = group.multiply(prefix, c);
                let mut candidate = factors.clone();
                candidate.push(pair.clone());
                match next.get(&p) {
                    Some(existing) if *existing <= candidate => {}
                    _ => {
                        next.insert(p, candidate);
                    }
                }
            }
        }
        level = next;
    }
    MixedSearch::NotFound { cap: max_factors }
}

/// `(xy)^{2n} x^{-2n} y^{-2n}` as a product of `n` commutators.
///
/// With `c` conjugation by `(xy)²` and `Rₖ = [xyx, y^{2k+1}x⁻¹]`, induction on
/// `n` gives `Pₙ₊₁ = c(Pₙ)·Rₙ`, hence `Pₙ = Π_{k<n} c^{n-1-k}(Rₖ)`; a
/// conjugated commutator `g[a,b]g⁻¹` is `[gag⁻¹, gbg⁻¹]`.
pub fn commutator_identity_xy<G: Group>(group: &G, x: &G::Elem, y: &G::Elem, n: u32) -> MixedCommutatorDecomposition<G::Elem> {
    let n = i64::from(n);
    let xy = group.multiply(x, y);
    let target = group.product(&[group.pow(&xy, 2 * n), group.pow(x, -2 * n), group.pow(y, -2 * n)]);
    let xyx = group.multiply(&xy, x);
    let c = group.pow(&xy, 2);
    let xinv = group.invert(x);
    let factors = (0..n)
        .map(|k| {
            let a = xyx.clone();
            let b = group.multiply(&group.pow(y, 2 * k + 1), &xinv);
            let conj = group.pow(&c, n - 1 - k);
            (group.conjugate(&conj, &a), group.conjugate(&conj, &b))
        })
        .collect();
    MixedCommutatorDecomposition { factors, target }
}

/// `[f,g]ⁿ = [fⁿ, g]`, valid when `f` commutes with `g f⁻¹ g⁻¹`.
pub fn power_commutator<G: Group>(
    group: &G,
    f: &G::Elem,
    g: &G::Elem,
    n: u32,
) -> Result<MixedCommutatorDecomposition<G::Elem>, SclError> {
    if !split_commutator_hypothesis(group, f, g) {
        return Err(SclError::NotCommuting);
    }
    let target = group.pow(&group.commutator(f, g), i64::from(n));
    let factors = if n == 0 {
        Vec::new()
    } else {
        alloc::vec![(group.pow(f, i64::from(n)), g.clone())]
    };
    Ok(MixedCommutatorDecomposition { factors, target })
}

/// Sampled evidence that a quasimorphism is invariant under the ambient
/// group; it is evidence, not proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceEvidence {
    pub scope: String,
    pub conjugators: usize,
    pub targets: usize,
    pub violations: usize,
}

/// `|φ(x)| / 2D`, with everything needed to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub bound: Rational,
    pub qm: String,
    pub value: Rational,
    pub defect: DefectBound,
    pub evidence: InvarianceEvidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BavardVerdict {
    Bound(LowerBound),
    /// `D = 0` and `φ(x) ≠ 0`: `x` is not in the commutator subgroup.
    NotInCommutatorSubgroup { value: Rational },
}

pub fn bavard_lower<E: 'static>(
    phi: &Quasimorphism<E>,
    target: &E,
    evidence: InvarianceEvidence,
) -> Result<BavardVerdict, SclError> {
    if !phi.homogeneous {
        return Err(SclError::NotHomogeneous);
    }
    let defect = phi.defect_upper.clone().ok_or(SclError::DefectUnknown)?;
    if evidence.violations > 0 {
        return Err(SclError::InvarianceViolated(evidence.violations));
    }
    let value = phi.eval(target)?;
    if defect.value.is_zero() {
        if !value.is_zero() {
            return Ok(BavardVerdict::NotInCommutatorSubgroup { value });
        }
        return Ok(BavardVerdict::Bound(LowerBound {
            bound: Rational::zero(),
            qm: phi.name.clone(),
            value,
            defect,
            evidence,
        }));
    }
    let bound = value.abs() / (int(2) * &defect.value);
    Ok(BavardVerdict::Bound(LowerBound {
        bound,
        qm: phi.name.clone(),
        value,
        defect,
        evidence,
    }))
}

/// Certified interval for a stable commutator length; `None` means no
/// certificate on that side.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SclBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl SclBounds {
    /// The upper bound `m/n` from a decomposition of `xⁿ` into `m` factors.
    pub fn from_decomposition(factors: usize, power: u32) -> Rational {
        ratio(factors as i64, i64::from(power))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SandwichReport {
    pub contradictions: Vec<String>,
}

impl SandwichReport {
    pub fn consistent(&self) -> bool {
        self.contradictions.is_empty()
    }
}

/// Consistency of `scl_Ĝ(x) ≤ scl_{Ĝ,Ḡ}(x) ≤ 2 scl_Ĝ(x)` with the certified
/// intervals. Any contradiction means one of the certificates is wrong.
pub fn sandwich_report(ordinary: &SclBounds, mixed: &SclBounds) -> SandwichReport {
    let mut contradictions = Vec::new();
    for (name, b) in [("ordinary", ordinary), ("mixed", mixed)] {
        if let (Some(l), Some(u)) = (&b.lower, &b.upper) {
            if l > u {
                contradictions.push(alloc::format!("{name}: lower {l} > upper {u}"));
            }
        }
    }
    if let (Some(l), Some(u)) = (&ordinary.lower, &mixed.upper) {
        if l > u {
            contradictions.push(alloc::format!("ordinary lower {l} > mixed upper {u}"));
        }
    }
    if let (Some(l), Some(u)) = (&mixed.lower, &ordinary.upper) {
        let twice = int(2) * u;
        if *l > twice {
            contradictions.push(alloc::format!("mixed lower {l} > 2 x ordinary upper {u}"));
        }
    }
    SandwichReport { contradictions }
}

/// `α = [σ₁², σ₂²]` in `B₃`.
pub fn alpha() -> Braid {
    BraidGroup::new(3)
        .from_letters(&[1, 1, 2, 2, -1, -1, -2, -2])
        .expect("valid braid")
}

/// `φ = h̄_w ∘ pr₁` on pure 3-braids, with the projection checked to be a
/// homomorphism on products of pairs from a small ball of `P₃`. Evaluating
/// on a non-pure braid is a domain error.
pub fn pure_braid_brooks(w: &str) -> Result<Quasimorphism<Braid>, SclError> {
    let f2 = FreeGroup::new(2);
    let word = f2.parse(w).map_err(|e| SclError::Eval(e.into()))?;
    let cw = crate::quasimorphism::CountingWord::new(&f2, word).map_err(|e| SclError::Eval(e.into()))?;
    let hbar = brooks_homogenized(&cw);
    let b3 = BraidGroup::new(3);
    let gens = p3_generators();
    let small = ball(&b3, &gens, 2).elements;
    let pairs: Vec<(Braid, Braid)> = small
        .iter()
        .flat_map(|a| small.iter().map(move |b| (a.clone(), b.clone())))
        .collect();
    let pr1 = |b: &Braid| -> Result<Word, EvalError> {
        p3_coordinates(b)
            .map(|c| c.f2_part)
            .map_err(|e| EvalError::Domain(alloc::format!("{e}")))
    };
    let phi = hbar.pullback(&b3, &f2, "pr1", pr1, &pairs)?;
    Ok(phi.with_invariance("P3"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperStep {
    pub n: u32,
    pub verified: bool,
    pub bound: Rational,
}

#[derive(Clone, Debug)]
pub struct SeparationReport {
    /// `α^{2n} = [Δ, α^{-n}]`, giving `scl_{B₃,P₃}(α) ≤ 1/(2n)`.
    pub mixed_upper: Vec<UpperStep>,
    /// `scl_{P₃}(α) ≥ 1/(2D)` from `h̄_w ∘ pr₁`.
    pub ordinary_lower: LowerBound,
    /// `φ(ΔαΔ⁻¹) = −φ(α)`: the same `φ` is not `B₃`-invariant.
    pub violation: InvarianceViolation,
    /// Using `φ` with the `Δ` evidence in mixed mode is refused.
    pub mixed_lower_refused: bool,
    pub sandwich: SandwichReport,
}

impl SeparationReport {
    pub fn passed(&self) -> bool {
        self.mixed_upper.iter().all(|s| s.verified)
            && self.ordinary_lower.bound > Rational::zero()
            && self.violation.magnitude() > Rational::zero()
            && self.mixed_lower_refused
            && self.sandwich.consistent()
    }
}

/// Mixed scl of `α` in `(B₃, P₃)` tends to zero while the ordinary scl in
/// `P₃` stays bounded below.
pub fn separation_demo(n_max: u32) -> Result<SeparationReport, SclError> {
    let b3 = BraidGroup::new(3);
    let a = alpha();
    let delta = b3.delta();
    let mut mixed_upper = Vec::new();
    for n in 1..=n_max {
        let d = MixedCommutatorDecomposition {
            factors: alloc::vec![(delta.clone(), b3.pow(&a, -i64::from(n)))],
            target: b3.pow(&a, 2 * i64::from(n)),
        };
        let verified = verify_decomposition(&b3, &d, Braid::is_pure)?;
        mixed_upper.push(UpperStep {
            n,
            verified,
            bound: SclBounds::from_decomposition(1, 2 * n),
        });
    }

    let phi = pure_braid_brooks("xyXY")?;
    let gens = p3_generators();
    let conjugators = ball(&b3, &gens, 1).elements;
    let violations = invariance_check(&b3, &phi, &conjugators, core::slice::from_ref(&a))?;
    let evidence = InvarianceEvidence {
        scope: alloc::format!("P3 ball of radius 1 ({} conjugators)", conjugators.len()),
        conjugators: conjugators.len(),
        targets: 1,
        violations: violations.len(),
    };
    let ordinary_lower = match bavard_lower(&phi, &a, evidence)? {
        BavardVerdict::Bound(b) => b,
        BavardVerdict::NotInCommutatorSubgroup { .. } => return Err(SclError::DefectUnknown),
    };

    let flip = invariance_check(&b3, &phi, core::slice::from_ref(&delta), core::slice::from_ref(&a))?;
    let violation = flip.first().cloned().ok_or(SclError::InvarianceViolated(0))?;
    let mixed_evidence = InvarianceEvidence {
        scope: String::from("conjugation by the half twist"),
        conjugators: 1,
        targets: 1,
        violations: flip.len(),
    };
    let mixed_lower_refused = matches!(
        bavard_lower(&phi, &a, mixed_evidence),
        Err(SclError::InvarianceViolated(_))
    );

    let best = mixed_upper.last().map(|s| s.bound.clone());
    // the same decompositions are ordinary commutators in B₃
    let ordinary_ambient = SclBounds {
        lower: Some(Rational::zero()),
        upper: best.clone(),
    };
    let mixed = SclBounds {
        lower: Some(Rational::zero()),
        upper: best,
    };
    Ok(SeparationReport {
        mixed_upper,
        ordinary_lower,
        violation,
        mixed_lower_refused,
        sandwich: sandwich_report(&ordinary_ambient, &mixed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{DirectProduct, Integers};

    #[test]
    fn packing_identity_small() {
        let f2 = FreeGroup::new(2);
        let (x, y) = (f2.generator(1), f2.generator(2));
        for n in 0..=6 {
            let d = commutator_identity_xy(&f2, &x, &y, n);
            assert_eq!(d.len(), n as usize);
            assert!(verify_decomposition(&f2, &d, |_| true).unwrap());
        }
        let d = commutator_identity_xy(&f2, &x, &x, 3);
        assert!(f2.is_identity(&d.target));
        assert!(verify_decomposition(&f2, &d, |_| true).unwrap());
    }

    #[test]
    fn power_commutator_in_product() {
        let f2 = FreeGroup::new(2);
        let g = crate::group::SwapProduct::new(f2.clone());
        let f = (f2.generator(1), Word::identity(), false);
        let t = g.swap();
        for n in 0..=8 {
            let d = power_commutator(&g, &f, &t, n).unwrap();
            assert!(verify_decomposition(&g, &d, |_| true).unwrap());
        }
        assert_eq!(
            power_commutator(&f2, &f2.generator(1), &f2.generator(2), 2).unwrap_err(),
            SclError::NotCommuting
        );
    }

    #[test]
    fn wrong_factor_fails() {
        let b3 = BraidGroup::new(3);
        let a = alpha();
        let d = MixedCommutatorDecomposition {
            factors: alloc::vec![(b3.delta(), b3.invert(&a))],
            target: b3.pow(&a, 4),
        };
        assert!(!verify_decomposition(&b3, &d, Braid::is_pure).unwrap());
        let bad = MixedCommutatorDecomposition {
            factors: alloc::vec![(b3.delta(), b3.delta())],
            target: b3.identity(),
        };
        assert_eq!(
            verify_decomposition(&b3, &bad, Braid::is_pure),
            Err(SclError::Membership { factor: 0 })
        );
    }

    #[test]
    fn search_finds_single_commutator() {
        let b3 = BraidGroup::new(3);
        let a = alpha();
        let amb = alloc::vec![b3.identity(), b3.delta()];
        let nor = alloc::vec![b3.identity(), b3.invert(&a), a.clone()];
        match mixed_cl_search(&b3, &b3.pow(&a, 2), &amb, &nor, 2) {
            MixedSearch::Found(d) => {
                assert_eq!(d.len(), 1);
                assert!(verify_decomposition(&b3, &d, Braid::is_pure).unwrap());
            }
            MixedSearch::NotFound { .. } => panic!("expected a decomposition"),
        }
        assert!(matches!(
            mixed_cl_search(&b3, &b3.identity(), &amb, &nor, 1),
            MixedSearch::Found(d) if d.is_empty()
        ));
        let g = DirectProduct::new(Integers, Integers);
        assert_eq!(mixed_cl_search(&g, &(1, 0), &[(1, 0)], &[(0, 1)], 2), MixedSearch::NotFound { cap: 2 });
    }

    #[test]
    fn bavard_cases() {
        let zero = Quasimorphism::<Word>::zero();
        let ev = InvarianceEvidence {
            scope: String::from("none"),
            conjugators: 0,
            targets: 0,
            violations: 0,
        };
        let f2 = FreeGroup::new(2);
        let x = f2.generator(1);
        assert!(matches!(bavard_lower(&zero, &x, ev.clone()), Ok(BavardVerdict::Bound(b)) if b.bound.is_zero()));
        let hom = Quasimorphism::homomorphism("expsum", |g: &Word| Ok(g.total_exponent()));
        assert!(matches!(
            bavard_lower(&hom, &x, ev.clone()),
            Ok(BavardVerdict::NotInCommutatorSubgroup { .. })
        ));
        let unknown = Quasimorphism::new("u", true, |_: &Word| Ok(int(1)));
        assert_eq!(bavard_lower(&unknown, &x, ev), Err(SclError::DefectUnknown));
    }

    #[test]
    fn sandwich_fault_injection() {
        let ok = SclBounds {
            lower: Some(Rational::zero()),
            upper: Some(ratio(1, 64)),
        };
        assert!(sandwich_report(&ok, &ok).consistent());
        let inflated = SclBounds {
            lower: Some(int(1)),
            upper: Some(ratio(1, 64)),
        };
        assert!(!sandwich_report(&ok, &inflated).consistent());
    }

    #[test]
    fn separation() {
        let r = separation_demo(4).unwrap();
        assert!(r.passed());
        assert_eq!(r.ordinary_lower.bound, ratio(1, 12));
        assert_eq!(r.violation.magnitude(), int(2));
    }
}
