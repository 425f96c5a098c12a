//! The `verify-paper` reproduction suite: each item recomputes one of the
//! library's headline facts and reports pass/fail with its data.

use num_traits::Zero;
use qmorph_core::braid::{p3_assemble, p3_coordinates, BraidGroup};
use qmorph_core::group::{ball, DirectProduct, SwapProduct};
use qmorph_core::norms::{check_norm_axioms, fragmentation_norm, fragmentation_table, Extended};
use qmorph_core::perm::{Permutation, SymmetricGroup};
use qmorph_core::quasimorphism::{
    brooks, brooks_homogenized, count_copies, defect_search, homogenize, homogenize_counting_exact, CountingWord,
};
use qmorph_core::rational::{int, ratio};
use qmorph_core::sample::{random_pure_braid, random_word, random_word_of_length};
use qmorph_core::scl::{alpha, commutator_identity_xy, power_commutator, separation_demo, verify_decomposition};
use qmorph_core::word::{FreeGroup, Letter, Word};
use qmorph_core::group::FiniteGroup;
use qmorph_core::Group;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::certificate::{assemble, decomposition_certificate, scl_bounds, verify_text, Bundle, Config};
use crate::context::{Element, GroupSpec};
use crate::extend::{extension_report, standard_cases, ExtendOptions};

pub const ALPHA: &str = "1,1,2,2,-1,-1,-2,-2";
pub const PURE_QM: &str = "pullback(homog(brooks(w=xyXY)), pr1)";

/// Item names with their tags, in run order.
pub const ITEMS: &[(&str, &[&str])] = &[
    ("brooks-counts", &["separation"]),
    ("flip-identity", &["separation"]),
    ("mixed-upper", &["separation", "certificates"]),
    ("ordinary-lower", &["separation", "certificates"]),
    ("separation", &["separation"]),
    ("power-commutator", &["norms", "certificates"]),
    ("commutator-packing", &["certificates"]),
    ("extension", &["extension"]),
    ("fragmentation", &["norms"]),
    ("p3-splitting", &["separation", "braids"]),
    ("word-algebra", &["words"]),
    ("certificates", &["certificates"]),
];

#[derive(Clone, Debug)]
pub struct ItemReport {
    pub item: &'static str,
    pub passed: bool,
    pub details: Value,
}

/// Resolves `--only` values (item names or tags) to item names.
pub fn select(only: &[String]) -> Result<Vec<&'static str>, String> {
    if only.is_empty() {
        return Ok(ITEMS.iter().map(|(n, _)| *n).collect());
    }
    for o in only {
        if !ITEMS.iter().any(|(n, tags)| n == o || tags.contains(&o.as_str())) {
            let names: Vec<&str> = ITEMS.iter().map(|(n, _)| *n).collect();
            return Err(format!("unknown item or tag '{o}'; items: {}", names.join(", ")));
        }
    }
    Ok(ITEMS
        .iter()
        .filter(|(n, tags)| only.iter().any(|o| n == o || tags.contains(&o.as_str())))
        .map(|(n, _)| *n)
        .collect())
}

pub fn run(only: &[String], seed: u64) -> Result<Vec<ItemReport>, String> {
    Ok(select(only)?.into_iter().map(|name| run_item(name, seed)).collect())
}

pub fn run_item(name: &'static str, seed: u64) -> ItemReport {
    let (passed, details) = match name {
        "brooks-counts" => brooks_counts(),
        "flip-identity" => flip_identity(),
        "mixed-upper" => mixed_upper(),
        "ordinary-lower" => ordinary_lower(),
        "separation" => separation(),
        "power-commutator" => power_commutator_item(),
        "commutator-packing" => packing(seed),
        "extension" => extension(seed),
        "fragmentation" => fragmentation(),
        "p3-splitting" => p3_splitting(seed),
        "word-algebra" => word_algebra(seed),
        "certificates" => certificates(seed),
        _ => (false, json!({"error": "unknown item"})),
    };
    ItemReport { item: name, passed, details }
}

fn f2() -> FreeGroup {
    FreeGroup::new(2)
}

fn brooks_counts() -> (bool, Value) {
    let f = f2();
    let w = CountingWord::new(&f, f.parse("xyXY").expect("valid")).expect("nonempty");
    let c = f.parse("xyXY").expect("valid");
    let counts_ok = (1..=64).all(|n| {
        let g = c.pow(n);
        count_copies(&w, &g) == Ok(n as usize) && count_copies(&w.inverse(), &g) == Ok(0)
    });
    let h = brooks(&w);
    let interval = homogenize(&f, &h, &c, 64).expect("in domain");
    let exact = homogenize_counting_exact(&w, &c).expect("in domain");
    let ok = counts_ok && exact == int(1) && interval.contains(&int(1));
    (
        ok,
        json!({
            "counts_n_1_to_64": counts_ok,
            "homogenized_exact": exact.to_string(),
            "homogenized_interval": interval.to_string(),
        }),
    )
}

fn flip_identity() -> (bool, Value) {
    let b3 = BraidGroup::new(3);
    let a = alpha();
    let d = b3.delta();
    let product = b3.multiply(&b3.conjugate(&d, &a), &a);
    let ok = b3.is_identity(&product);
    (
        ok,
        json!({
            "alpha": a.normal_form_string(),
            "delta_alpha_delta_inv": b3.conjugate(&d, &a).normal_form_string(),
            "alpha_inverse": b3.invert(&a).normal_form_string(),
            "product_is_identity": ok,
        }),
    )
}

fn config(n_max: u32) -> Config {
    Config {
        seed: 0,
        radius: 1,
        cap: 1,
        n_max,
        defect_const: None,
    }
}

pub fn mixed_upper_bundle() -> Bundle {
    let spec = GroupSpec::parse("braid:3/pure").expect("valid");
    let t = spec.parse_element(ALPHA).expect("valid");
    scl_bounds(&spec, &t, None, config(32)).expect("target is pure")
}

pub fn ordinary_lower_bundle() -> Bundle {
    let spec = GroupSpec::parse("pure:3").expect("valid");
    let t = spec.parse_element(ALPHA).expect("valid");
    scl_bounds(&spec, &t, Some(PURE_QM), config(1)).expect("target is pure")
}

fn mixed_upper() -> (bool, Value) {
    let b = mixed_upper_bundle();
    let all = b.certificates.len() == 32 && b.certificates.iter().all(|c| c.verified);
    let bounds_ok = b
        .certificates
        .iter()
        .zip(1..=32i64)
        .all(|(c, n)| c.bound == ratio(1, 2 * n).to_string());
    let ok = all && bounds_ok && b.interval.upper.as_deref() == Some("1/64");
    (
        ok,
        json!({"certificates": b.certificates.len(), "upper": b.interval.upper}),
    )
}

/// Searched defect lower bounds of `h̄_{xyXY}` on the `F₂` ball of radius 8,
/// and of its pullback on a small ball of pure braids.
pub fn defect_consistency(radius: usize) -> (String, String, String) {
    let f = f2();
    let w = CountingWord::new(&f, f.parse("xyXY").expect("valid")).expect("nonempty");
    let mut hbar = brooks_homogenized(&w);
    let b = ball(&f, &f.generators(), radius);
    defect_search(&f, &mut hbar, &b, radius).expect("in domain");
    let spec = GroupSpec::parse("pure:3").expect("valid");
    let mut phi = crate::qmspec::compile(&crate::qmspec::parse_qm(PURE_QM).expect("valid"), spec.ambient).expect("valid");
    let pb = ball(&spec.ambient, &spec.subgroup_generators(), 3);
    defect_search(&spec.ambient, &mut phi, &pb, 3).expect("in domain");
    let d = hbar.defect_upper.expect("certified").value;
    (hbar.defect_lower.to_string(), phi.defect_lower.to_string(), d.to_string())
}

fn ordinary_lower() -> (bool, Value) {
    let b = ordinary_lower_bundle();
    let (f2_lower, p3_lower, d) = defect_consistency(8);
    let lower = b.interval.lower.clone();
    let d_r = qmorph_core::rational::parse(&d).expect("rational");
    let consistent = [&f2_lower, &p3_lower]
        .iter()
        .all(|l| qmorph_core::rational::parse(l).is_some_and(|l| l <= d_r));
    let expected = (int(1) / (int(2) * &d_r)).to_string();
    let ok = consistent && lower.as_deref() == Some(expected.as_str()) && !d_r.is_zero();
    (
        ok,
        json!({
            "lower": lower,
            "certified_defect": d,
            "searched_defect_f2_radius_8": f2_lower,
            "searched_defect_p3_radius_3": p3_lower,
        }),
    )
}

fn separation() -> (bool, Value) {
    match separation_demo(32) {
        Ok(r) => (
            r.passed(),
            json!({
                "mixed_upper_best": r.mixed_upper.last().map(|s| s.bound.to_string()),
                "ordinary_lower": r.ordinary_lower.bound.to_string(),
                "flip_violation": r.violation.magnitude().to_string(),
                "mixed_lower_refused": r.mixed_lower_refused,
                "sandwich_consistent": r.sandwich.consistent(),
            }),
        ),
        Err(e) => (false, json!({"error": e.to_string()})),
    }
}

/// `[f,g]ⁿ = [fⁿ,g]` bundles in `B₃` for `f = αᵏ`, `g = Δ`.
pub fn power_commutator_bundles() -> Vec<Bundle> {
    let spec = GroupSpec::parse("braid:3").expect("valid");
    let b3 = BraidGroup::new(3);
    let d = b3.delta();
    let mut out = Vec::new();
    for k in 1..=2 {
        let f = b3.pow(&alpha(), k);
        let t = Element::Braid(b3.commutator(&f, &d));
        let certs = [1u32, 2, 8, 32]
            .iter()
            .map(|&n| {
                let dec = power_commutator(&b3, &f, &d, n).expect("hypothesis holds");
                let factors: Vec<(Element, Element)> = dec
                    .factors
                    .into_iter()
                    .map(|(a, b)| (Element::Braid(a), Element::Braid(b)))
                    .collect();
                decomposition_certificate(&spec, &t, n, &factors, "[f,g]^n = [f^n, g]")
            })
            .collect();
        out.push(assemble(&spec, &t, certs, Vec::new(), false, config(32)));
    }
    out
}

fn power_commutator_item() -> (bool, Value) {
    let f = f2();
    let (x, y) = (f.generator(1), f.generator(2));
    let prod = DirectProduct::new(f.clone(), f.clone());
    let swap = SwapProduct::new(f.clone());
    let b3 = BraidGroup::new(3);
    let mut ok_models = true;
    for n in 0..=32 {
        let d = power_commutator(&prod, &(x.clone(), Word::identity()), &(Word::identity(), y.clone()), n);
        ok_models &= d.is_ok_and(|d| verify_decomposition(&prod, &d, |_| true) == Ok(true));
        let d = power_commutator(&swap, &(x.clone(), Word::identity(), false), &swap.swap(), n);
        ok_models &= d.is_ok_and(|d| verify_decomposition(&swap, &d, |_| true) == Ok(true));
        for k in 1..=2 {
            let d = power_commutator(&b3, &b3.pow(&alpha(), k), &b3.delta(), n);
            ok_models &= d.is_ok_and(|d| verify_decomposition(&b3, &d, |_| true) == Ok(true));
        }
    }
    let rejected = power_commutator(&f, &x, &y, 2).is_err() && power_commutator(&b3, &b3.delta(), &alpha(), 2).is_err();
    let bundles = power_commutator_bundles();
    let certs_ok = bundles.iter().all(|b| b.certificates.iter().all(|c| c.verified));
    (
        ok_models && rejected && certs_ok,
        json!({
            "models_n_le_32": ok_models,
            "precondition_rejected": rejected,
            "braid_certificates": bundles.iter().map(|b| b.certificates.len()).sum::<usize>(),
        }),
    )
}

/// `(xy)^{2n} x^{-2n} y^{-2n}` as `n` commutators for random short `x, y`.
pub fn packing_bundles(seed: u64, trials: usize) -> Vec<Bundle> {
    let spec = GroupSpec::parse("free:2").expect("valid");
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let x = random_word(&mut rng, 2, 4);
        let y = random_word(&mut rng, 2, 4);
        let n = rng.random_range(1..=8u32);
        let d = commutator_identity_xy(&f, &x, &y, n);
        let t = Element::Word(d.target.clone());
        let factors: Vec<(Element, Element)> = d
            .factors
            .into_iter()
            .map(|(a, b)| (Element::Word(a), Element::Word(b)))
            .collect();
        let cert = decomposition_certificate(&spec, &t, 1, &factors, "(xy)^(2n) x^(-2n) y^(-2n) packing");
        out.push(assemble(&spec, &t, vec![cert], Vec::new(), false, config(n)));
    }
    out
}

fn packing(seed: u64) -> (bool, Value) {
    let f = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    let mut checked = 0;
    for _ in 0..20 {
        let x = random_word(&mut rng, 2, 4);
        let y = random_word(&mut rng, 2, 4);
        for n in 0..=8 {
            let d = commutator_identity_xy(&f, &x, &y, n);
            all &= d.len() == n as usize && verify_decomposition(&f, &d, |_| true) == Ok(true);
            checked += 1;
        }
    }
    let bundles = packing_bundles(seed, 20);
    let certs_ok = bundles.iter().all(|b| b.certificates.iter().all(|c| c.verified));
    (all && certs_ok, json!({"decompositions": checked, "certificates": bundles.len()}))
}

fn extension(seed: u64) -> (bool, Value) {
    let opts = ExtendOptions {
        n_max: 64,
        radius: 4,
        samples: 1000,
        seed,
        defect_const: None,
    };
    let mut ok = true;
    let mut reports = Vec::new();
    for (g, q, s) in standard_cases() {
        let spec = GroupSpec::parse(g).expect("valid");
        match extension_report(&spec, q, s, None, &opts) {
            Ok((passed, r)) => {
                ok &= passed;
                reports.push(r);
            }
            Err(e) => {
                ok = false;
                reports.push(json!({"group_pair": g, "error": e.to_string()}));
            }
        }
    }
    (ok, json!({ "cases": reports }))
}

fn fragmentation() -> (bool, Value) {
    let s5 = SymmetricGroup::new(5);
    let t = Permutation::transposition(5, 0, 1);
    let table = fragmentation_table(&s5, std::slice::from_ref(&t));
    let matches = s5
        .elements()
        .iter()
        .all(|p| table.norm(p) == Extended::from_int(5 - p.cycle_count() as i64));
    let s4 = SymmetricGroup::new(4);
    let nu = fragmentation_norm(fragmentation_table(&s4, &[Permutation::transposition(4, 0, 1)]), "nu_H");
    let violations = check_norm_axioms(&s4, &nu, &s4.elements()).len();
    (
        matches && violations == 0,
        json!({"s5_matches_five_minus_cycles": matches, "s4_axiom_violations": violations}),
    )
}

fn p3_splitting(seed: u64) -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut round_trip = 0;
    for _ in 0..1000 {
        let (b, w, k) = random_pure_braid(&mut rng, 40, 5);
        if p3_coordinates(&b).is_ok_and(|c| c.f2_part == w && c.center_exponent == k) {
            round_trip += 1;
        }
    }
    let b3 = BraidGroup::new(3);
    let mut hom = 0;
    for _ in 0..1000 {
        let (a, _, _) = random_pure_braid(&mut rng, 12, 3);
        let (b, _, _) = random_pure_braid(&mut rng, 12, 3);
        let lhs = p3_coordinates(&b3.multiply(&a, &b)).map(|c| c.f2_part);
        let rhs = p3_coordinates(&a).and_then(|x| p3_coordinates(&b).map(|y| x.f2_part.multiply(&y.f2_part)));
        if lhs.is_ok() && lhs == rhs {
            hom += 1;
        }
    }
    let sanity = p3_assemble(&Word::identity(), 1) == b3.pow(&b3.delta(), 2);
    (
        round_trip == 1000 && hom == 1000 && sanity,
        json!({"round_trips": round_trip, "pr1_homomorphism_pairs": hom}),
    )
}

/// Free reduction by a stack, independent of the library's reduction.
fn naive_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn word_algebra(seed: u64) -> (bool, Value) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0usize;
    for _ in 0..100_000 {
        let a = random_word(&mut rng, 2, 12);
        let b = random_word(&mut rng, 2, 12);
        let len = rng.random_range(0..=12);
        let c = random_word_of_length(&mut rng, 2, len);
        let assoc = a.multiply(&b).multiply(&c) == a.multiply(&b.multiply(&c));
        let inv = a.multiply(&a.inverse()).is_empty();
        let concat: Vec<Letter> = a.letters().iter().chain(b.letters()).copied().collect();
        let reduced = Word::reduce(concat.clone());
        let idem = Word::reduce(reduced.letters().to_vec()) == reduced && reduced.letters() == naive_reduce(&concat);
        if !(assoc && inv && idem) {
            failures += 1;
        }
    }
    (failures == 0, json!({"triples": 100_000, "failures": failures}))
}

/// Every bundle the other items emit.
pub fn emitted_bundles(seed: u64) -> Vec<Bundle> {
    let mut out = vec![mixed_upper_bundle(), ordinary_lower_bundle()];
    out.extend(power_commutator_bundles());
    out.extend(packing_bundles(seed, 20));
    out
}

/// Named fault injections: each must fail at the given step.
pub fn fault_injections(ordinary: &Bundle, mixed: &Bundle) -> Vec<(&'static str, String, String)> {
    let lower = ordinary
        .certificates
        .iter()
        .position(|c| c.direction == "lower")
        .expect("lower certificate");
    let mut out = Vec::new();
    let mut b = mixed.clone();
    b.certificates[0].bound = String::from("1/4");
    out.push(("inflated upper bound", b.to_json(), String::from("certificates[0].bound")));
    let mut b = mixed.clone();
    if let Some(f) = b.certificates[0].witness.factors.as_mut() {
        f[0][1] = String::from("1,1,2,2,-1,-1,-2,-2");
    }
    out.push(("wrong factor", b.to_json(), String::from("certificates[0].product")));
    let mut b = mixed.clone();
    if let Some(f) = b.certificates[0].witness.factors.as_mut() {
        f[0][1] = String::from("1");
    }
    out.push(("non-pure factor", b.to_json(), String::from("certificates[0].membership[0]")));
    let mut b = ordinary.clone();
    b.certificates[lower].bound = String::from("1/2");
    out.push(("inflated lower bound", b.to_json(), format!("certificates[{lower}].bound")));
    let mut b = ordinary.clone();
    b.certificates[lower].witness.value = Some(String::from("3"));
    out.push(("edited value", b.to_json(), format!("certificates[{lower}].qm_eval")));
    let mut b = ordinary.clone();
    b.certificates[lower].witness.defect = Some(String::from("2"));
    out.push(("edited defect", b.to_json(), format!("certificates[{lower}].defect")));
    let mut b = ordinary.clone();
    b.interval.lower = Some(String::from("1"));
    out.push(("edited interval", b.to_json(), String::from("interval")));
    out.push(("empty file", String::new(), String::from("schema")));
    out
}

fn certificates(seed: u64) -> (bool, Value) {
    let bundles = emitted_bundles(seed);
    let count: usize = bundles.iter().map(|b| b.certificates.len()).sum();
    let failures: Vec<String> = bundles
        .iter()
        .filter_map(|b| {
            let r = verify_text(&b.to_json());
            (!r.passed()).then(|| format!("{} {}: {:?}", b.group_pair, b.target, r.first_failure()))
        })
        .collect();
    let faults: Vec<Value> = fault_injections(&bundles[1], &bundles[0])
        .into_iter()
        .map(|(name, text, expected)| {
            let r = verify_text(&text);
            let got = r.first_failure().map(|s| s.step.clone());
            json!({"fault": name, "expected": expected, "failed_at": got, "ok": got.as_deref() == Some(expected.as_str())})
        })
        .collect();
    let faults_ok = faults.iter().all(|f| f["ok"] == true);
    (
        failures.is_empty() && faults_ok,
        json!({"bundles": bundles.len(), "certificates": count, "failures": failures, "faults": faults}),
    )
}

pub fn report_json(items: &[ItemReport], seed: u64) -> Value {
    json!({
        "seed": seed,
        "passed": items.iter().all(|i| i.passed),
        "items": items.iter().map(|i| json!({"item": i.item, "passed": i.passed, "details": i.details})).collect::<Vec<_>>(),
    })
}
