//! Bound certificates for (mixed) stable commutator length: generation,
//! the JSON format, and re-verification from the embedded data alone.
//!
//! A bundle holds one target and any number of one-sided certificates:
//!
//! * `decomposition`, direction `upper`: `targetⁿ = Π [aᵢ, bᵢ]` with `m`
//!   factors, so `scl(target) ≤ m/n`.
//! * `quasimorphism`, direction `lower`: `scl(target) ≥ |φ(target)| / 2D(φ)`
//!   for a homogeneous `φ` with certified defect `D(φ)` and sampled
//!   invariance evidence.
//!
//! In mixed mode the second commutator components must lie in the normal
//! subgroup and the invariance sample uses ambient conjugators; in ordinary
//! mode both components and all conjugators come from the subgroup.

use num_traits::{Signed, Zero};
use qmorph_core::braid::BraidGroup;
use qmorph_core::quasimorphism::{invariance_check, Quasimorphism};
use qmorph_core::rational::{self, int, ratio};
use qmorph_core::scl::{mixed_cl_search, product_of_commutators, MixedSearch};
use qmorph_core::{Group, Rational};
use serde::{Deserialize, Serialize};

use crate::context::{Element, GroupKind, GroupSpec, SpecError};
use crate::qmspec::{compile, parse_qm};

pub const SCHEMA: &str = "qmorph-scl-bounds/1";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Interval {
    pub lower: Option<String>,
    pub upper: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub radius: usize,
    pub cap: usize,
    pub n_max: u32,
    pub defect_const: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qm: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InvarianceSample {
    /// `ambient` or `subgroup`: where the conjugators come from.
    pub scope: String,
    pub radius: usize,
    pub conjugators: usize,
    pub targets: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Evidence {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub defect_provenance: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariance_sample: Option<InvarianceSample>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub kind: String,
    pub target: String,
    pub group_pair: String,
    pub mode: String,
    pub direction: String,
    pub bound: String,
    pub witness: Witness,
    pub evidence: Evidence,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bundle {
    pub schema: String,
    pub group_pair: String,
    pub target: String,
    pub mode: String,
    pub interval: Interval,
    /// The target is outside the commutator subgroup (a homomorphism is
    /// nonzero on it).
    pub unbounded: bool,
    pub certificates: Vec<Certificate>,
    pub refusals: Vec<String>,
    pub config: Config,
}

impl Bundle {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }
}

fn mode_name(spec: &GroupSpec) -> &'static str {
    if spec.mixed {
        "mixed"
    } else {
        "ordinary"
    }
}

/// Second components always lie in the subgroup; in ordinary mode the first
/// ones do too.
fn first_component_ok(spec: &GroupSpec, a: &Element) -> bool {
    spec.mixed || spec.contains(a)
}

/// Builds an upper-bound certificate for `targetᵖ = Π [a, b]`, checking it.
pub fn decomposition_certificate(
    spec: &GroupSpec,
    target: &Element,
    power: u32,
    factors: &[(Element, Element)],
    method: &str,
) -> Certificate {
    let g = spec.ambient;
    let lhs = g.pow(target, i64::from(power));
    let verified = power > 0
        && factors.iter().all(|(a, b)| spec.contains(b) && first_component_ok(spec, a))
        && product_of_commutators(&g, factors) == lhs;
    Certificate {
        kind: String::from("decomposition"),
        target: spec.format(target),
        group_pair: spec.text.clone(),
        mode: mode_name(spec).to_string(),
        direction: String::from("upper"),
        bound: ratio(factors.len() as i64, i64::from(power.max(1))).to_string(),
        witness: Witness {
            power: Some(power),
            factors: Some(factors.iter().map(|(a, b)| [spec.format(a), spec.format(b)]).collect()),
            ..Witness::default()
        },
        evidence: Evidence {
            method: Some(method.to_string()),
            ..Evidence::default()
        },
        verified,
    }
}

/// Invariance evidence: conjugators from the ball of the given radius in the
/// ambient group (mixed) or the subgroup (ordinary); targets are the target
/// and the radius one ball of the subgroup.
fn invariance_sample(
    spec: &GroupSpec,
    phi: &Quasimorphism<Element>,
    target: &Element,
    radius: usize,
) -> Result<InvarianceSample, String> {
    let scope = if spec.mixed { "ambient" } else { "subgroup" };
    let conjugators = if spec.mixed {
        spec.ball_of_ambient(radius)
    } else {
        spec.ball_of_subgroup(radius)
    };
    let mut targets = vec![target.clone()];
    targets.extend(spec.ball_of_subgroup(1).into_iter().filter(|t| t != target));
    let violations = invariance_check(&spec.ambient, phi, &conjugators, &targets).map_err(|e| e.to_string())?;
    Ok(InvarianceSample {
        scope: scope.to_string(),
        radius,
        conjugators: conjugators.len(),
        targets: targets.len(),
        violations: violations.len(),
    })
}

/// Compiles `--qm`, applying a `--defect-const` override if given.
pub fn compile_with_override(
    spec: &GroupSpec,
    qm: &str,
    defect_const: Option<&str>,
) -> Result<Quasimorphism<Element>, SpecError> {
    let phi = compile(&parse_qm(qm)?, spec.ambient)?;
    match defect_const {
        None => Ok(phi),
        Some(text) => {
            let d = rational::parse(text)
                .filter(|d| !d.is_negative())
                .ok_or_else(|| SpecError::Unsupported(format!("--defect-const: expected a nonnegative rational, found '{text}'")))?;
            Ok(phi.with_defect_override(d))
        }
    }
}

pub enum LowerOutcome {
    Certificate(Certificate),
    /// `D = 0` and `φ(target) ≠ 0`.
    Unbounded(String),
    Refused(String),
}

/// The `|φ(x)| / 2D` certificate, or the reason it cannot be issued.
pub fn lower_certificate(
    spec: &GroupSpec,
    target: &Element,
    qm: &str,
    defect_const: Option<&str>,
    radius: usize,
) -> Result<LowerOutcome, SpecError> {
    let phi = compile_with_override(spec, qm, defect_const)?;
    if !phi.homogeneous {
        return Ok(LowerOutcome::Refused(format!("{}: not homogeneous; use homog(...)", phi.name)));
    }
    let Some(defect) = phi.defect_upper.clone() else {
        return Ok(LowerOutcome::Refused(format!("{}: missing defect certificate", phi.name)));
    };
    let value = match phi.eval(target) {
        Ok(v) => v,
        Err(e) => return Ok(LowerOutcome::Refused(format!("{}: {e}", phi.name))),
    };
    let sample = match invariance_sample(spec, &phi, target, radius) {
        Ok(s) => s,
        Err(e) => return Ok(LowerOutcome::Refused(format!("{}: invariance check failed: {e}", phi.name))),
    };
    if sample.violations > 0 {
        return Ok(LowerOutcome::Refused(format!(
            "{}: {} invariance violations under {} conjugation (radius {})",
            phi.name, sample.violations, sample.scope, radius
        )));
    }
    if defect.value.is_zero() && !value.is_zero() {
        return Ok(LowerOutcome::Unbounded(format!(
            "{} = {value} with defect 0: target is not in the commutator subgroup",
            phi.name
        )));
    }
    let bound = if defect.value.is_zero() {
        Rational::zero()
    } else {
        value.abs() / (int(2) * &defect.value)
    };
    let note = if spec.mixed {
        Some(String::from("lower bound from a single invariant quasimorphism; no duality claim"))
    } else {
        None
    };
    Ok(LowerOutcome::Certificate(Certificate {
        kind: String::from("quasimorphism"),
        target: spec.format(target),
        group_pair: spec.text.clone(),
        mode: mode_name(spec).to_string(),
        direction: String::from("lower"),
        bound: bound.to_string(),
        witness: Witness {
            qm: Some(qm.to_string()),
            value: Some(value.to_string()),
            defect: Some(defect.value.to_string()),
            ..Witness::default()
        },
        evidence: Evidence {
            defect_provenance: Some(defect.provenance.clone()),
            invariance_sample: Some(sample),
            note,
            ..Evidence::default()
        },
        verified: true,
    }))
}

/// Elements `c` with `c t c⁻¹ = t⁻¹` that are allowed as first components.
fn flip_candidates(spec: &GroupSpec) -> Vec<Element> {
    match spec.ambient {
        GroupKind::Braid(n) => vec![Element::Braid(BraidGroup::new(n).delta())],
        _ => Vec::new(),
    }
}

/// Upper-bound certificates: the empty decomposition for the identity, the
/// family `t^{2n} = [c, t^{-n}]` when some `c` inverts `t` by conjugation,
/// and otherwise a bounded exhaustive search.
pub fn upper_certificates(spec: &GroupSpec, target: &Element, config: &Config) -> (Vec<Certificate>, Vec<String>) {
    let g = spec.ambient;
    if g.is_identity(target) {
        return (vec![decomposition_certificate(spec, target, 1, &[], "identity")], Vec::new());
    }
    let inverse = g.invert(target);
    for c in flip_candidates(spec) {
        if g.conjugate(&c, target) != inverse || !first_component_ok(spec, &c) {
            continue;
        }
        let certs: Vec<Certificate> = (1..=config.n_max.max(1))
            .map(|n| {
                let b = g.pow(target, -i64::from(n));
                decomposition_certificate(spec, target, 2 * n, &[(c.clone(), b)], "flip: t^(2n) = [c, t^-n]")
            })
            .collect();
        if certs.iter().all(|c| c.verified) {
            return (certs, Vec::new());
        }
    }
    let ambient = if spec.mixed {
        spec.ball_of_ambient(config.radius)
    } else {
        spec.ball_of_subgroup(config.radius)
    };
    let normal = spec.ball_of_subgroup(config.radius);
    match mixed_cl_search(&g, target, &ambient, &normal, config.cap) {
        MixedSearch::Found(d) => {
            let method = format!("search: radius {}, cap {}", config.radius, config.cap);
            (vec![decomposition_certificate(spec, target, 1, &d.factors, &method)], Vec::new())
        }
        MixedSearch::NotFound { cap } => (
            Vec::new(),
            vec![format!(
                "no decomposition with at most {cap} commutators from balls of radius {}",
                config.radius
            )],
        ),
    }
}

fn best(certs: &[Certificate], direction: &str) -> Option<Rational> {
    let values = certs
        .iter()
        .filter(|c| c.direction == direction && c.verified)
        .filter_map(|c| rational::parse(&c.bound));
    if direction == "upper" {
        values.min()
    } else {
        values.max()
    }
}

pub fn assemble(
    spec: &GroupSpec,
    target: &Element,
    certificates: Vec<Certificate>,
    refusals: Vec<String>,
    unbounded: bool,
    config: Config,
) -> Bundle {
    let interval = Interval {
        lower: best(&certificates, "lower").map(|r| r.to_string()),
        upper: best(&certificates, "upper").map(|r| r.to_string()),
    };
    Bundle {
        schema: SCHEMA.to_string(),
        group_pair: spec.text.clone(),
        target: spec.format(target),
        mode: mode_name(spec).to_string(),
        interval,
        unbounded,
        certificates,
        refusals,
        config,
    }
}

/// The `scl-bounds` pipeline: upper certificates, then (with a quasimorphism)
/// a lower certificate.
pub fn scl_bounds(spec: &GroupSpec, target: &Element, qm: Option<&str>, config: Config) -> Result<Bundle, SpecError> {
    if !spec.contains(target) {
        return Err(SpecError::Unsupported(format!(
            "target {} is not in the subgroup of {}",
            spec.format(target),
            spec.text
        )));
    }
    let (mut certs, mut refusals) = upper_certificates(spec, target, &config);
    let mut unbounded = false;
    match qm {
        None => refusals.push(String::from("no quasimorphism given: lower bound not attempted")),
        Some(q) => match lower_certificate(spec, target, q, config.defect_const.as_deref(), config.radius)? {
            LowerOutcome::Certificate(c) => certs.push(c),
            LowerOutcome::Unbounded(why) => {
                unbounded = true;
                refusals.push(why);
            }
            LowerOutcome::Refused(why) => refusals.push(why),
        },
    }
    Ok(assemble(spec, target, certs, refusals, unbounded, config))
}

/// One named verification step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub step: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub steps: Vec<Step>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        !self.steps.is_empty() && self.steps.iter().all(|s| s.ok)
    }

    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.ok)
    }

    fn push(&mut self, step: impl Into<String>, ok: bool, detail: impl Into<String>) -> bool {
        self.steps.push(Step {
            step: step.into(),
            ok,
            detail: detail.into(),
        });
        ok
    }
}

/// Re-verifies every claim in a bundle from its text.
pub fn verify_text(text: &str) -> VerifyReport {
    let mut r = VerifyReport::default();
    let bundle: Bundle = match serde_json::from_str(text) {
        Ok(b) => b,
        Err(e) => {
            r.push("schema", false, e.to_string());
            return r;
        }
    };
    verify_bundle(&bundle, &mut r);
    r
}

pub fn verify_bundle(b: &Bundle, r: &mut VerifyReport) {
    let spec = match GroupSpec::parse(&b.group_pair) {
        Ok(s) => s,
        Err(e) => {
            r.push("schema", false, format!("group_pair: {e}"));
            return;
        }
    };
    if b.schema != SCHEMA {
        r.push("schema", false, format!("unknown schema '{}'", b.schema));
        return;
    }
    if b.mode != mode_name(&spec) {
        r.push("schema", false, format!("mode '{}' does not match '{}'", b.mode, b.group_pair));
        return;
    }
    let target = match spec.parse_element(&b.target) {
        Ok(t) => t,
        Err(e) => {
            r.push("schema", false, format!("target: {e}"));
            return;
        }
    };
    for (i, c) in b.certificates.iter().enumerate() {
        if c.target != b.target || c.group_pair != b.group_pair || c.mode != b.mode {
            r.push("schema", false, format!("certificates[{i}] refers to a different target or group pair"));
            return;
        }
    }
    r.push("schema", true, "");
    if !r.push("target", spec.contains(&target), format!("target must lie in the subgroup of {}", spec.text)) {
        return;
    }
    for (i, c) in b.certificates.iter().enumerate() {
        verify_certificate(&spec, &target, i, c, b.config.defect_const.as_deref(), r);
    }
    let lower = best(&b.certificates, "lower");
    let upper = best(&b.certificates, "upper");
    let claimed = Interval {
        lower: lower.as_ref().map(|x| x.to_string()),
        upper: upper.as_ref().map(|x| x.to_string()),
    };
    let consistent = match (&lower, &upper) {
        (Some(l), Some(u)) => l <= u,
        _ => true,
    };
    let ok = consistent && claimed == b.interval && !(b.unbounded && upper.is_some());
    r.push(
        "interval",
        ok,
        if ok {
            String::new()
        } else {
            format!(
                "certified [{:?}, {:?}], recorded [{:?}, {:?}]",
                claimed.lower, claimed.upper, b.interval.lower, b.interval.upper
            )
        },
    );
}

fn verify_certificate(
    spec: &GroupSpec,
    target: &Element,
    i: usize,
    c: &Certificate,
    defect_const: Option<&str>,
    r: &mut VerifyReport,
) {
    let name = |s: &str| format!("certificates[{i}].{s}");
    if !r.push(name("verified"), c.verified, "certificate is not marked verified") {
        return;
    }
    let Some(bound) = rational::parse(&c.bound) else {
        r.push(name("bound"), false, format!("cannot parse bound '{}'", c.bound));
        return;
    };
    match (c.kind.as_str(), c.direction.as_str()) {
        ("decomposition", "upper") => verify_decomposition_cert(spec, target, c, &bound, &name, r),
        ("quasimorphism", "lower") => verify_qm_cert(spec, target, c, &bound, defect_const, &name, r),
        (k, d) => {
            r.push(name("schema"), false, format!("unknown kind/direction {k}/{d}"));
        }
    }
}

fn verify_decomposition_cert(
    spec: &GroupSpec,
    target: &Element,
    c: &Certificate,
    bound: &Rational,
    name: &dyn Fn(&str) -> String,
    r: &mut VerifyReport,
) {
    let (Some(power), Some(factors)) = (c.witness.power, c.witness.factors.as_ref()) else {
        r.push(name("schema"), false, "decomposition needs witness.power and witness.factors");
        return;
    };
    if power == 0 {
        r.push(name("schema"), false, "power must be positive");
        return;
    }
    let mut parsed = Vec::with_capacity(factors.len());
    for (j, [a, b]) in factors.iter().enumerate() {
        let pair = match (spec.parse_element(a), spec.parse_element(b)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                r.push(name(&format!("membership[{j}]")), false, format!("cannot parse factor: {e}"));
                return;
            }
        };
        let ok = spec.contains(&pair.1) && first_component_ok(spec, &pair.0);
        if !r.push(name(&format!("membership[{j}]")), ok, "component outside the required subgroup") {
            return;
        }
        parsed.push(pair);
    }
    let g = spec.ambient;
    let ok = product_of_commutators(&g, &parsed) == g.pow(target, i64::from(power));
    if !r.push(name("product"), ok, "product of commutators differs from target^power") {
        return;
    }
    let expected = ratio(parsed.len() as i64, i64::from(power));
    r.push(name("bound"), *bound == expected, format!("expected {expected}, found {bound}"));
}

fn verify_qm_cert(
    spec: &GroupSpec,
    target: &Element,
    c: &Certificate,
    bound: &Rational,
    defect_const: Option<&str>,
    name: &dyn Fn(&str) -> String,
    r: &mut VerifyReport,
) {
    let (Some(qm), Some(value), Some(defect)) = (&c.witness.qm, &c.witness.value, &c.witness.defect) else {
        r.push(name("schema"), false, "quasimorphism needs witness.qm, witness.value and witness.defect");
        return;
    };
    let phi = match compile_with_override(spec, qm, defect_const) {
        Ok(p) => p,
        Err(e) => {
            r.push(name("qm_eval"), false, e.to_string());
            return;
        }
    };
    let recorded = rational::parse(value);
    let actual = phi.eval(target).ok();
    let ok = phi.homogeneous && actual.is_some() && recorded == actual;
    if !r.push(
        name("qm_eval"),
        ok,
        format!("recorded {value}, evaluated {}", actual.map_or(String::from("error"), |v| v.to_string())),
    ) {
        return;
    }
    let certified = phi.defect_upper.as_ref();
    let provenance_ok = c.evidence.defect_provenance.as_deref() == certified.map(|d| d.provenance.as_str());
    let ok = certified.is_some_and(|d| rational::parse(defect).as_ref() == Some(&d.value)) && provenance_ok;
    if !r.push(
        name("defect"),
        ok,
        format!(
            "recorded {defect}, certified {}",
            certified.map_or(String::from("unknown"), |d| format!("{} [{}]", d.value, d.provenance))
        ),
    ) {
        return;
    }
    let Some(sample) = &c.evidence.invariance_sample else {
        r.push(name("invariance"), false, "missing invariance sample");
        return;
    };
    let expected_scope = if spec.mixed { "ambient" } else { "subgroup" };
    let ok = sample.scope == expected_scope
        && invariance_sample(spec, &phi, target, sample.radius).is_ok_and(|s| s == *sample && s.violations == 0);
    if !r.push(name("invariance"), ok, "invariance sample does not reproduce with zero violations") {
        return;
    }
    let d = &certified.expect("checked above").value;
    let v = recorded.expect("checked above");
    let expected = if d.is_zero() {
        if !v.is_zero() {
            r.push(name("bound"), false, "defect 0 with nonzero value gives no finite bound");
            return;
        }
        Rational::zero()
    } else {
        v.abs() / (int(2) * d)
    };
    r.push(name("bound"), *bound == expected, format!("expected {expected}, found {bound}"));
}
