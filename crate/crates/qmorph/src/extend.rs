//! The `extend` pipeline: an invariant homogeneous quasimorphism on the
//! normal subgroup, a section of the quotient map to ℤ, the extension and
//! its checks.

use qmorph_core::braid::commutator_assemble;
use qmorph_core::extension::{check_section, defect_chain_check, extend_via_section, restriction_check};
use qmorph_core::group::ball;
use qmorph_core::quasimorphism::invariance_check;
use qmorph_core::sample::random_word;
use qmorph_core::scl::InvarianceEvidence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::certificate::compile_with_override;
use crate::context::{Element, GroupKind, GroupSpec, SpecError, Subgroup};
use crate::qmspec::parse_section;

#[derive(Clone, Debug)]
pub struct ExtendOptions {
    pub n_max: u32,
    /// Defect chain search over pairs with `|g| + |h| ≤ radius`.
    pub radius: usize,
    pub samples: usize,
    pub seed: u64,
    pub defect_const: Option<String>,
}

/// Random elements of the normal subgroup.
fn subgroup_samples(spec: &GroupSpec, count: usize, seed: u64) -> Vec<Element> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match spec.ambient {
            GroupKind::Product(r) => Element::Pair(random_word(&mut rng, r, 10), 0),
            _ => Element::Braid(commutator_assemble(&random_word(&mut rng, 2, 6))),
        })
        .collect()
}

/// Runs the extension and returns the JSON report; `passed` is true when
/// restriction and defect chain checks both hold.
pub fn extension_report(
    spec: &GroupSpec,
    qm: &str,
    section: &str,
    target: Option<&Element>,
    opts: &ExtendOptions,
) -> Result<(bool, Value), SpecError> {
    if !matches!(spec.subgroup, Subgroup::Commutator | Subgroup::FreeFactor) {
        return Err(SpecError::Unsupported(format!(
            "extend needs a group pair with quotient Z (braid:3/commutator or product:free:N,z/free), got {}",
            spec.text
        )));
    }
    let g = spec.ambient;
    let phi = compile_with_override(spec, qm, opts.defect_const.as_deref())?;
    let s = parse_section(section, g)?;
    check_section(&g, &s, 4).map_err(|e| SpecError::Unsupported(e.to_string()))?;

    let conjugators = spec.ball_of_ambient(1);
    let targets = spec.ball_of_subgroup(2);
    let violations = invariance_check(&g, &phi, &conjugators, &targets).map_err(|e| SpecError::Unsupported(e.to_string()))?;
    let evidence = InvarianceEvidence {
        scope: format!("ambient ball of radius 1 ({} conjugators) on subgroup ball of radius 2", conjugators.len()),
        conjugators: conjugators.len(),
        targets: targets.len(),
        violations: violations.len(),
    };
    let result = extend_via_section(g, &phi, &s, &evidence, opts.n_max).map_err(|e| SpecError::Unsupported(e.to_string()))?;

    let samples = subgroup_samples(spec, opts.samples, opts.seed);
    let restriction = restriction_check(|e| result.eval_hat(e), &phi, &samples).map_err(|e| SpecError::Unsupported(e.to_string()))?;
    let b = ball(&g, &g.generators(), opts.radius);
    let chain = defect_chain_check(&g, &result, &b, opts.radius).map_err(|e| SpecError::Unsupported(e.to_string()))?;
    let passed = restriction.passed() && chain.passed();

    let mut report = json!({
        "group_pair": spec.text,
        "qm": qm,
        "section": s.name,
        "n_max": opts.n_max,
        "seed": opts.seed,
        "invariance_sample": {
            "scope": evidence.scope,
            "conjugators": evidence.conjugators,
            "targets": evidence.targets,
            "violations": evidence.violations,
        },
        "defect_chain": {
            "d_phi": result.d_phi.value.to_string(),
            "d_phi_provenance": result.d_phi.provenance,
            "d_prime_upper": result.d_prime.to_string(),
            "d_hat_upper": result.d_hat.to_string(),
            "radius": chain.radius,
            "ball_size": b.len(),
            "prime_lower": chain.prime_lower.to_string(),
            "hat_lower": chain.hat_lower.to_string(),
            "passed": chain.passed(),
        },
        "restriction": {
            "checked": restriction.checked,
            "mismatches": restriction.mismatches.len(),
            "insufficient": restriction.insufficient(),
            "passed": restriction.passed(),
        },
        "passed": passed,
    });
    if let Some(t) = target {
        let v = result.eval_hat(t).map_err(|e| SpecError::Unsupported(e.to_string()))?;
        report["value"] = json!({
            "element": spec.format(t),
            "center": v.center.to_string(),
            "radius": v.radius.map(|r| r.to_string()),
        });
    }
    Ok((passed, report))
}

/// Default group, quasimorphism and section for the two standard cases.
pub fn standard_cases() -> [(&'static str, &'static str, &'static str); 2] {
    [
        (
            "product:free:2,z/free",
            "pullback(homog(brooks(w=xyXY)), pr1)",
            "section(quotient=Z, map=z^k)",
        ),
        (
            "braid:3/commutator",
            "symmetrize(pullback(homog(brooks(w=xyXY)), comm3), s1, 6)",
            "section(quotient=Z, map=s1^k)",
        ),
    ]
}
