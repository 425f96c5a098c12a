//! Extending an invariant homogeneous quasimorphism from a normal subgroup
//! `Ḡ ⊴ Ĝ` to `Ĝ`, given a homomorphic section of `Ĝ → Ĝ/Ḡ ≅ ℤ`.
//!
//! With `q(ĝ) = s(π(ĝ))` and `ḡ(ĝ) = q(ĝ)⁻¹ĝ ∈ Ḡ`, set `φ′(ĝ) = φ(ḡ(ĝ))`.
//! Invariance of `φ` under `Ĝ` gives `D(φ′) ≤ D(φ)`, and the homogenization
//! `φ̂` of `φ′` has `D(φ̂) ≤ 2D(φ′)`. On `Ḡ` the section part is trivial, so
//! `φ̂ = φ` there exactly.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::braid::{commutator_coordinates, Braid, BraidGroup};
use crate::group::{Ball, Group};
use crate::quasimorphism::{
    brooks_homogenized, defect_search_intervals, CountingWord, DefectBound, EvalError, Quasimorphism,
};
use crate::rational::{int, Interval, Rational};
use crate::scl::InvarianceEvidence;
use crate::word::FreeGroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtensionError {
    #[error("section check failed: {0}")]
    Section(String),
    #[error("quasimorphism is not homogeneous")]
    NotHomogeneous,
    #[error("defect is not certified")]
    DefectUnknown,
    #[error("invariance evidence has {0} violations")]
    InvarianceViolated(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A section `s: ℤ → Ĝ` of the projection `π: Ĝ → ℤ`.
pub struct SectionData<E> {
    pub name: String,
    section: Arc<dyn Fn(i64) -> E + Send + Sync>,
    projection: Arc<dyn Fn(&E) -> i64 + Send + Sync>,
}

impl<E> Clone for SectionData<E> {
    fn clone(&self) -> Self {
        SectionData {
            name: self.name.clone(),
            section: Arc::clone(&self.section),
            projection: Arc::clone(&self.projection),
        }
    }
}

impl<E> core::fmt::Debug for SectionData<E> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "SectionData({})", self.name)
    }
}

impl<E> SectionData<E> {
    pub fn new(
        name: impl Into<String>,
        section: impl Fn(i64) -> E + Send + Sync + 'static,
        projection: impl Fn(&E) -> i64 + Send + Sync + 'static,
    ) -> Self {
        SectionData {
            name: name.into(),
            section: Arc::new(section),
            projection: Arc::new(projection),
        }
    }

    pub fn section(&self, k: i64) -> E {
        (self.section)(k)
    }

    pub fn project(&self, g: &E) -> i64 {
        (self.projection)(g)
    }
}

/// `π(s(k)) = k` and `s(a + b) = s(a)s(b)` for `|a|, |b|, |k| ≤ radius`.
pub fn check_section<G: Group>(group: &G, s: &SectionData<G::Elem>, radius: i64) -> Result<(), ExtensionError> {
    if !group.is_identity(&s.section(0)) {
        return Err(ExtensionError::Section(String::from("s(0) is not the identity")));
    }
    for k in -radius..=radius {
        let p = s.project(&s.section(k));
        if p != k {
            return Err(ExtensionError::Section(alloc::format!("pi(s({k})) = {p}")));
        }
    }
    for a in -radius..=radius {
        for b in -radius..=radius {
            if s.section(a + b) != group.multiply(&s.section(a), &s.section(b)) {
                return Err(ExtensionError::Section(alloc::format!("s({a} + {b}) != s({a}) s({b})")));
            }
        }
    }
    Ok(())
}

type IntervalFn<E> = Arc<dyn Fn(&E) -> Result<Interval, EvalError> + Send + Sync>;

pub struct ExtensionResult<E> {
    /// `φ′(ĝ) = φ(s(π(ĝ))⁻¹ ĝ)`.
    pub phi_prime: Quasimorphism<E>,
    hat: IntervalFn<E>,
    pub n_max: u32,
    /// `D(φ)`, `D(φ′) ≤ D(φ)` and `D(φ̂) ≤ 2D(φ′)`.
    pub d_phi: DefectBound,
    pub d_prime: Rational,
    pub d_hat: Rational,
}

impl<E> ExtensionResult<E> {
    /// `φ̂(ĝ)`: exact on `Ḡ`, otherwise `φ′(ĝⁿ)/n` with radius `D(φ′)/n`.
    pub fn eval_hat(&self, g: &E) -> Result<Interval, EvalError> {
        (self.hat)(g)
    }
}

pub fn extend_via_section<G>(
    group: G,
    phi: &Quasimorphism<G::Elem>,
    s: &SectionData<G::Elem>,
    evidence: &InvarianceEvidence,
    n_max: u32,
) -> Result<ExtensionResult<G::Elem>, ExtensionError>
where
    G: Group + Clone + Send + Sync + 'static,
    G::Elem: Send + Sync + 'static,
{
    if !phi.homogeneous {
        return Err(ExtensionError::NotHomogeneous);
    }
    let d_phi = phi.defect_upper.clone().ok_or(ExtensionError::DefectUnknown)?;
    if evidence.violations > 0 {
        return Err(ExtensionError::InvarianceViolated(evidence.violations));
    }
    let (inner, sec, grp) = (phi.clone(), s.clone(), group.clone());
    let phi_prime = Quasimorphism::new(alloc::format!("prime({})", phi.name), false, move |g: &G::Elem| {
        let q = sec.section(sec.project(g));
        inner.eval(&grp.multiply(&grp.invert(&q), g))
    })
    .with_defect(DefectBound::new(
        d_phi.value.clone(),
        alloc::format!("section part removed from: {}", d_phi.provenance),
    ));
    let d_prime = d_phi.value.clone();
    let d_hat = int(2) * &d_prime;
    let (inner, sec, prime) = (phi.clone(), s.clone(), phi_prime.clone());
    let n = i64::from(n_max.max(1));
    let radius = &d_prime / int(n);
    let hat = move |g: &G::Elem| -> Result<Interval, EvalError> {
        if sec.project(g) == 0 {
            return Ok(Interval::exact(inner.eval(g)?));
        }
        let value = prime.eval(&group.pow(g, n))? / int(n);
        Ok(Interval {
            center: value,
            radius: Some(radius.clone()),
        })
    };
    Ok(ExtensionResult {
        phi_prime,
        hat: Arc::new(hat),
        n_max,
        d_phi,
        d_prime,
        d_hat,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionReport {
    pub checked: usize,
    pub mismatches: Vec<usize>,
}

impl RestrictionReport {
    /// Passing requires at least one sample; an empty sample proves nothing.
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.mismatches.is_empty()
    }

    pub fn insufficient(&self) -> bool {
        self.checked == 0
    }
}

/// `φ̂(g) = φ(g)` exactly for each sample of `Ḡ`.
pub fn restriction_check<E>(
    hat: impl Fn(&E) -> Result<Interval, EvalError>,
    phi: &Quasimorphism<E>,
    samples: &[E],
) -> Result<RestrictionReport, EvalError>
where
    E: 'static,
{
    let mut mismatches = Vec::new();
    for (i, g) in samples.iter().enumerate() {
        let h = hat(g)?;
        if !h.is_exact() || h.center != phi.eval(g)? {
            mismatches.push(i);
        }
    }
    Ok(RestrictionReport {
        checked: samples.len(),
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectChainReport {
    pub radius: usize,
    pub prime_lower: Rational,
    pub hat_lower: Rational,
    pub d_phi: Rational,
}

impl DefectChainReport {
    pub fn passed(&self) -> bool {
        self.prime_lower <= self.d_phi && self.hat_lower <= int(2) * &self.d_phi
    }
}

/// Searched defect lower bounds of `φ′` and `φ̂` over pairs with
/// `|g| + |h| ≤ radius` in `ball`, compared with `D(φ)` and `2D(φ)`.
pub fn defect_chain_check<G: Group>(
    group: &G,
    result: &ExtensionResult<G::Elem>,
    ball: &Ball<G::Elem>,
    radius: usize,
) -> Result<DefectChainReport, EvalError>
where
    G::Elem: 'static,
{
    let prime = defect_search_intervals(group, ball, radius, |g| result.phi_prime.eval(g).map(Interval::exact))?;
    let hat = defect_search_intervals(group, ball, radius, |g| result.eval_hat(g))?;
    Ok(DefectChainReport {
        radius,
        prime_lower: prime.map(|w| w.lower).unwrap_or_default(),
        hat_lower: hat.map(|w| w.lower).unwrap_or_default(),
        d_phi: result.d_phi.value.clone(),
    })
}

/// A `B₃`-invariant homogeneous quasimorphism on `[B₃, B₃]`:
/// `g ↦ Σ_{j<6} h̄_w(coords(σ₁ʲ g σ₁⁻ʲ))`.
///
/// `h̄_w` on the free coordinates is invariant under `[B₃, B₃]`, and
/// `B₃ = [B₃, B₃] ⋊ ⟨σ₁⟩`; since `σ₁⁶ = Δ² · c` with `Δ²` central and `c`
/// in the commutator subgroup, summing over `σ₁ʲ`, `j < 6`, gives full
/// invariance. The defect is at most `6 · D(h̄_w)`.
pub fn commutator_subgroup_brooks(w: &str) -> Result<Quasimorphism<Braid>, EvalError> {
    let f2 = FreeGroup::new(2);
    let cw = CountingWord::new(&f2, f2.parse(w)?)?;
    let hbar = brooks_homogenized(&cw);
    let base = Quasimorphism::new(alloc::format!("{} on [B3,B3]", hbar.name), true, move |b: &Braid| {
        let coords = commutator_coordinates(b).map_err(|e| EvalError::Domain(alloc::format!("{e}")))?;
        hbar.eval(&coords)
    })
    .with_defect(DefectBound::new(int(6), "2 x homogenization of: junction bound"));
    let b3 = BraidGroup::new(3);
    let s1 = b3.from_letters(&[1]).expect("valid");
    let conjugators: Vec<Braid> = (0..6).map(|j| b3.pow(&s1, j)).collect();
    Ok(base.symmetrize(b3, conjugators, "s1, 6").with_invariance("B3"))
}

/// `s(k) = σ₁ᵏ` with the index sum as projection.
pub fn index_sum_section(strands: u32) -> SectionData<Braid> {
    let g = BraidGroup::new(strands);
    SectionData::new(
        "section(quotient=Z, map=s1^k)",
        move |k| g.pow(&g.from_letters(&[1]).expect("valid"), k),
        |b: &Braid| b.index_sum(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ball, DirectProduct, Integers};
    use crate::quasimorphism::invariance_check;
    use crate::word::Word;

    type Pair = (Word, i64);

    fn product_setup() -> (DirectProduct<FreeGroup, Integers>, Quasimorphism<Pair>, SectionData<Pair>) {
        let f2 = FreeGroup::new(2);
        let g = DirectProduct::new(f2.clone(), Integers);
        let hbar = brooks_homogenized(&CountingWord::new(&f2, f2.parse("xyXY").unwrap()).unwrap());
        let d = hbar.defect_upper.clone().unwrap();
        let phi = Quasimorphism::new("hbar on F2", true, move |e: &Pair| {
            if e.1 != 0 {
                return Err(EvalError::Domain(String::from("not in F2 x 0")));
            }
            hbar.eval(&e.0)
        })
        .with_defect(d);
        let s = SectionData::new("central", |k| (Word::identity(), k), |e: &Pair| e.1);
        (g, phi, s)
    }

    fn no_violations() -> InvarianceEvidence {
        InvarianceEvidence {
            scope: String::from("test"),
            conjugators: 1,
            targets: 1,
            violations: 0,
        }
    }

    #[test]
    fn central_section_extension() {
        let (g, phi, s) = product_setup();
        check_section(&g, &s, 5).unwrap();
        let r = extend_via_section(g.clone(), &phi, &s, &no_violations(), 64).unwrap();
        let w = FreeGroup::new(2).parse("xyXY").unwrap();
        assert_eq!(r.eval_hat(&(w.clone(), 0)).unwrap(), Interval::exact(int(1)));
        let off = r.eval_hat(&(w, 3)).unwrap();
        assert!(off.contains(&int(1)));
        let samples: Vec<Pair> = ball(&FreeGroup::new(2), &FreeGroup::new(2).generators(), 3)
            .elements
            .into_iter()
            .map(|w| (w, 0))
            .collect();
        assert!(restriction_check(|e| r.eval_hat(e), &phi, &samples).unwrap().passed());
        assert!(restriction_check(|e| r.eval_hat(e), &phi, &[]).unwrap().insufficient());
        let gens = alloc::vec![(FreeGroup::new(2).generator(1), 0), (FreeGroup::new(2).generator(2), 0), (Word::identity(), 1)];
        let b = ball(&g, &gens, 3);
        assert!(defect_chain_check(&g, &r, &b, 3).unwrap().passed());
    }

    #[test]
    fn corrupted_hat_is_caught() {
        let (g, phi, s) = product_setup();
        let r = extend_via_section(g, &phi, &s, &no_violations(), 8).unwrap();
        let w = FreeGroup::new(2).parse("xy").unwrap();
        let bad = w.clone();
        let corrupted = |e: &Pair| {
            let mut v = r.eval_hat(e)?;
            if e.0 == bad {
                v.center += int(1);
            }
            Ok(v)
        };
        let report = restriction_check(corrupted, &phi, &[(Word::identity(), 0), (w, 0)]).unwrap();
        assert_eq!(report.mismatches, alloc::vec![1]);
    }

    #[test]
    fn refusals() {
        let (g, phi, s) = product_setup();
        let mut bad = no_violations();
        bad.violations = 2;
        assert!(matches!(
            extend_via_section(g.clone(), &phi, &s, &bad, 8),
            Err(ExtensionError::InvarianceViolated(2))
        ));
        let unknown = Quasimorphism::new("u", true, |_: &Pair| Ok(int(0)));
        assert!(matches!(
            extend_via_section(g.clone(), &unknown, &s, &no_violations(), 8),
            Err(ExtensionError::DefectUnknown)
        ));
        let broken = SectionData::new("broken", |k| (Word::identity(), 2 * k), |e: &Pair| e.1);
        assert!(check_section(&g, &broken, 2).is_err());
    }

    #[test]
    fn braid_section_and_invariant_qm() {
        let b3 = BraidGroup::new(3);
        let s = index_sum_section(3);
        check_section(&b3, &s, 4).unwrap();
        let phi = commutator_subgroup_brooks("xyXY").unwrap();
        assert_eq!(phi.defect_upper.as_ref().unwrap().value, int(36));
        let c = b3.commutator(&b3.from_letters(&[1]).unwrap(), &b3.from_letters(&[2]).unwrap());
        let targets = alloc::vec![c.clone(), b3.from_letters(&[1, -2, 1, -2]).unwrap()];
        let conj = b3.generators();
        assert!(invariance_check(&b3, &phi, &conj, &targets).unwrap().is_empty());
        let r = extend_via_section(b3, &phi, &s, &no_violations(), 4).unwrap();
        assert!(restriction_check(|e| r.eval_hat(e), &phi, &targets).unwrap().passed());
    }
}
