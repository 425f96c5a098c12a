//! One line per acceptance criterion, each with its tolerance and a pinned
//! runtime limit. All criteria run even when one fails; the test fails at
//! the end if any line is red.

use std::process::Command;
use std::time::{Duration, Instant};

use qmorph::certificate::Bundle;
use qmorph::context::GroupSpec;
use qmorph::extend::{extension_report, standard_cases, ExtendOptions};
use qmorph::suite;
use qmorph_core::braid::{p3_assemble, p3_coordinates, Braid, BraidGroup};
use qmorph_core::group::{DirectProduct, FiniteGroup, Group, SwapProduct};
use qmorph_core::norms::{check_norm_axioms, fragmentation_norm, fragmentation_table, Extended};
use qmorph_core::perm::{Permutation, SymmetricGroup};
use qmorph_core::quasimorphism::{brooks, count_copies, homogenize, homogenize_counting_exact, CountingWord};
use qmorph_core::rational::{int, parse, ratio, Rational};
use qmorph_core::sample::{random_pure_braid, random_word, random_word_of_length};
use qmorph_core::scl::{alpha, commutator_identity_xy, power_commutator, verify_decomposition};
use qmorph_core::word::{FreeGroup, Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---- independent oracles ----

/// Stack-based free reduction.
fn naive_reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in letters {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Greedy leftmost disjoint occurrences of `pat` in `text`, which is optimal
/// for equal-length intervals.
fn disjoint_occurrences(text: &str, pat: &str) -> usize {
    let (t, p) = (text.as_bytes(), pat.as_bytes());
    let (mut i, mut count) = (0, 0);
    while i + p.len() <= t.len() {
        if &t[i..i + p.len()] == p {
            count += 1;
            i += p.len();
        } else {
            i += 1;
        }
    }
    count
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

type Mat = [[u64; 3]; 3];

fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0u64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0u64;
            for k in 0..3 {
                s = (s + mulmod(a[i][k], b[k][j])) % P;
            }
            c[i][j] = s;
        }
    }
    c
}

/// Unreduced Burau matrix of a 3-strand braid word at `t`, modulo a prime.
/// Faithful on `B₃` over `ℤ[t^±1]`; several evaluation points make
/// accidental agreement negligible.
fn burau(letters: &[i32], t: u64) -> Mat {
    let tinv = powmod(t, P - 2);
    let one_minus = |v: u64| (1 + P - v) % P;
    let mut acc: Mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
    for &l in letters {
        let i = (l.unsigned_abs() - 1) as usize;
        let mut m: Mat = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let block = if l > 0 {
            [[one_minus(t), t], [1, 0]]
        } else {
            [[0, 1], [tinv, one_minus(tinv)]]
        };
        for r in 0..2 {
            for c in 0..2 {
                m[i + r][i + c] = block[r][c];
            }
        }
        acc = matmul(&acc, &m);
    }
    acc
}

const BURAU_POINTS: [u64; 3] = [2, 7, 1_000_003];

fn burau_equal(a: &[i32], b: &[i32]) -> bool {
    BURAU_POINTS.iter().all(|&t| burau(a, t) == burau(b, t))
}

fn letters(b: &Braid) -> Vec<i32> {
    b.to_word().letters().to_vec()
}

fn inverse_letters(l: &[i32]) -> Vec<i32> {
    l.iter().rev().map(|x| -x).collect()
}

fn commutator_letters(a: &[i32], b: &[i32]) -> Vec<i32> {
    [a, b, &inverse_letters(a), &inverse_letters(b)].concat()
}

fn rat(s: &str) -> Result<Rational, String> {
    parse(s).ok_or_else(|| format!("not a rational: {s}"))
}

// ---- criteria ----

fn c1_brooks_counts() -> Outcome {
    let f = FreeGroup::new(2);
    let w = CountingWord::new(&f, f.parse("xyXY").unwrap()).unwrap();
    let c = f.parse("xyXY").unwrap();
    for n in 1..=64i64 {
        let g = c.pow(n);
        let text = f.format(&g);
        let oracle = (disjoint_occurrences(&text, "xyXY"), disjoint_occurrences(&text, "yxYX"));
        ensure(oracle == (n as usize, 0), || format!("oracle disagrees with the count at n={n}"))?;
        let lib = (count_copies(&w, &g).unwrap(), count_copies(&w.inverse(), &g).unwrap());
        ensure(lib == oracle, || format!("n={n}: library {lib:?}, oracle {oracle:?}"))?;
    }
    let interval = homogenize(&f, &brooks(&w), &c, 64).map_err(|e| e.to_string())?;
    let exact = homogenize_counting_exact(&w, &c).map_err(|e| e.to_string())?;
    ensure(exact == int(1), || format!("exact h̄ = {exact}"))?;
    ensure(interval.contains(&int(1)), || format!("interval {interval} misses 1"))?;
    Ok(format!("counts n=1..64 match oracle; h̄([x,y]) exact 1, interval {interval}"))
}

fn c2_flip_identity() -> Outcome {
    let b3 = BraidGroup::new(3);
    let (a, d) = (alpha(), b3.delta());
    let product = b3.multiply(&b3.conjugate(&d, &a), &a);
    ensure(b3.is_identity(&product), || format!("normal form {}", product.normal_form_string()))?;
    let raw = [letters(&d), letters(&a), inverse_letters(&letters(&d)), letters(&a)].concat();
    ensure(burau_equal(&raw, &[]), || "Burau image of Δ α Δ⁻¹ α is not the identity".into())?;
    ensure(!burau_equal(&letters(&a), &[]), || "Burau oracle cannot see α".into())?;
    Ok(format!("Δ·α·Δ⁻¹·α normal form {}; Burau oracle agrees", product.normal_form_string()))
}

fn c3_mixed_upper() -> Outcome {
    let b3 = BraidGroup::new(3);
    let (a, d) = (alpha(), b3.delta());
    let al = letters(&a);
    for n in 1..=32i64 {
        let dec = qmorph_core::scl::MixedCommutatorDecomposition {
            factors: vec![(d.clone(), b3.pow(&a, -n))],
            target: b3.pow(&a, 2 * n),
        };
        let ok = verify_decomposition(&b3, &dec, |g| g.is_pure()).map_err(|e| e.to_string())?;
        ensure(ok, || format!("α^{} ≠ [Δ, α^-{n}]", 2 * n))?;
        let an: Vec<i32> = inverse_letters(&al).repeat(n as usize);
        ensure(burau_equal(&al.repeat(2 * n as usize), &commutator_letters(&letters(&d), &an)), || {
            format!("Burau oracle rejects n={n}")
        })?;
    }
    let b = suite::mixed_upper_bundle();
    ensure(b.certificates.len() == 32 && b.certificates.iter().all(|c| c.verified), || {
        "bundle certificates not all verified".into()
    })?;
    for (c, n) in b.certificates.iter().zip(1..=32i64) {
        ensure(rat(&c.bound)? == ratio(1, 2 * n), || format!("certificate {n} bound {}", c.bound))?;
    }
    Ok(format!("32 decompositions verified, bounds 1/2 .. {}", b.interval.upper.unwrap_or_default()))
}

fn c4_ordinary_lower() -> Outcome {
    let b = suite::ordinary_lower_bundle();
    let lower = b
        .certificates
        .iter()
        .find(|c| c.direction == "lower")
        .ok_or("no lower certificate")?;
    let d = rat(lower.witness.defect.as_deref().ok_or("no defect")?)?;
    let value = rat(lower.witness.value.as_deref().ok_or("no value")?)?;
    // φ(α) = h̄([x,y]) since pr₁(α) = [x,y]; the cyclic word xyXY holds one copy per period.
    let f = FreeGroup::new(2);
    let pr1 = p3_coordinates(&alpha()).map_err(|e| e.to_string())?.f2_part;
    ensure(f.format(&pr1) == "xyXY", || format!("pr₁(α) = {}", f.format(&pr1)))?;
    let text = f.format(&pr1.pow(8));
    let h = disjoint_occurrences(&text, "xyXY") as i64 - disjoint_occurrences(&text, "yxYX") as i64;
    let oracle_value = int(h) / int(8);
    ensure(value == oracle_value, || format!("φ(α) = {value}, oracle {oracle_value}"))?;
    let expected = value.clone() / (int(2) * &d);
    ensure(d > int(0) && rat(&lower.bound)? == expected, || format!("bound {} ≠ {expected}", lower.bound))?;
    ensure(b.interval.lower.as_deref() == Some(expected.to_string().as_str()), || "interval lower".into())?;
    let (f2_lower, p3_lower, d_lib) = suite::defect_consistency(8);
    ensure(rat(&d_lib)? == d, || "certified defects disagree".into())?;
    ensure(rat(&f2_lower)? <= d && rat(&p3_lower)? <= d, || {
        format!("searched lower {f2_lower} / {p3_lower} exceeds D = {d}")
    })?;
    Ok(format!("scl ≥ {expected} with D = {d}; searched defect {f2_lower} (F₂ radius 8) ≤ D"))
}

fn c5_power_commutator() -> Outcome {
    let f = FreeGroup::new(2);
    let (x, y) = (f.generator(1), f.generator(2));
    let prod = DirectProduct::new(f.clone(), f.clone());
    let swap = SwapProduct::new(f.clone());
    let b3 = BraidGroup::new(3);
    let nf = |w: &Word| naive_reduce(w.letters().iter().copied());
    for n in 0..=32u32 {
        let (fx, gy) = ((x.clone(), Word::identity()), (Word::identity(), y.clone()));
        let dec = power_commutator(&prod, &fx, &gy, n).map_err(|e| e.to_string())?;
        ensure(verify_decomposition(&prod, &dec, |_| true) == Ok(true), || format!("F₂×F₂ n={n}"))?;
        // [x,y]ⁿ in the product is trivial componentwise.
        ensure(nf(&dec.target.0).is_empty() && nf(&dec.target.1).is_empty(), || "product target".into())?;
        let dec = power_commutator(&swap, &(x.clone(), Word::identity(), false), &swap.swap(), n).map_err(|e| e.to_string())?;
        ensure(verify_decomposition(&swap, &dec, |_| true) == Ok(true), || format!("swap model n={n}"))?;
        for k in 1..=2 {
            let fk = b3.pow(&alpha(), k);
            let dec = power_commutator(&b3, &fk, &b3.delta(), n).map_err(|e| e.to_string())?;
            ensure(verify_decomposition(&b3, &dec, |_| true) == Ok(true), || format!("B₃ k={k} n={n}"))?;
            let lhs = commutator_letters(&letters(&fk), &letters(&b3.delta())).repeat(n as usize);
            let rhs = commutator_letters(&letters(&fk).repeat(n as usize), &letters(&b3.delta()));
            ensure(burau_equal(&lhs, &rhs), || format!("Burau oracle rejects k={k} n={n}"))?;
        }
    }
    ensure(power_commutator(&f, &x, &y, 2).is_err(), || "F₂ precondition accepted".into())?;
    ensure(power_commutator(&b3, &b3.delta(), &alpha(), 2).is_err(), || "B₃ precondition accepted".into())?;
    // The identity really fails there: [x,y]² ≠ [x², y] in F₂.
    let xyxy = [x.clone(), y.clone(), x.inverse(), y.inverse()];
    let lhs = naive_reduce(xyxy.iter().chain(&xyxy).flat_map(|w| w.letters().to_vec()));
    let rhs = naive_reduce([x.pow(2), y.clone(), x.pow(-2), y.inverse()].iter().flat_map(|w| w.letters().to_vec()));
    ensure(lhs != rhs, || "oracle: identity holds in F₂".into())?;
    Ok("n ≤ 32 in F₂×F₂, swap product and B₃ (α, α²); F₂ and (Δ, α) rejected".into())
}

fn c6_packing() -> Outcome {
    let f = FreeGroup::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    for _ in 0..20 {
        let x = random_word(&mut rng, 2, 4);
        let y = random_word(&mut rng, 2, 4);
        for n in 1..=8u32 {
            let d = commutator_identity_xy(&f, &x, &y, n);
            ensure(d.len() == n as usize, || format!("{} factors for n={n}", d.len()))?;
            let flat: Vec<Letter> = d
                .factors
                .iter()
                .flat_map(|(a, b)| [a.clone(), b.clone(), a.inverse(), b.inverse()])
                .flat_map(|w| w.letters().to_vec())
                .collect();
            let n = i64::from(n);
            let target: Vec<Letter> = [x.multiply(&y).pow(2 * n), x.pow(-2 * n), y.pow(-2 * n)]
                .iter()
                .flat_map(|w| w.letters().to_vec())
                .collect();
            ensure(naive_reduce(flat) == naive_reduce(target), || {
                format!("x={} y={} n={n}", f.format(&x), f.format(&y))
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} decompositions match the reduction oracle"))
}

fn c7_extension() -> Outcome {
    let opts = ExtendOptions {
        n_max: 64,
        radius: 4,
        samples: 1000,
        seed: 0,
        defect_const: None,
    };
    let mut lines = Vec::new();
    for (g, q, s) in standard_cases() {
        let spec = GroupSpec::parse(g).map_err(|e| e.to_string())?;
        let (passed, r) = extension_report(&spec, q, s, None, &opts).map_err(|e| format!("{g}: {e}"))?;
        ensure(passed, || format!("{g}: {r}"))?;
        ensure(r["restriction"]["checked"] == 1000, || format!("{g}: restriction sample size"))?;
        let chain = &r["defect_chain"];
        let d = rat(chain["d_phi"].as_str().unwrap_or(""))?;
        let hat_upper = rat(chain["d_hat_upper"].as_str().unwrap_or(""))?;
        let hat_lower = rat(chain["hat_lower"].as_str().unwrap_or(""))?;
        ensure(hat_upper <= int(2) * &d && hat_lower <= hat_upper, || format!("{g}: {chain}"))?;
        lines.push(format!("{g}: searched D(φ̂) ≥ {hat_lower} ≤ 2·{d}"));
    }
    Ok(lines.join("; "))
}

/// Distances from the identity in the Cayley graph of `Sₙ` on all
/// transpositions.
fn transposition_bfs(n: usize) -> std::collections::HashMap<Vec<u16>, usize> {
    let start: Vec<u16> = (0..n as u16).collect();
    let mut dist = std::collections::HashMap::from([(start.clone(), 0)]);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for i in 0..n {
            for j in i + 1..n {
                let mut q = p.clone();
                q.swap(i, j);
                if !dist.contains_key(&q) {
                    dist.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
    }
    dist
}

fn c8_fragmentation() -> Outcome {
    let s5 = SymmetricGroup::new(5);
    let table = fragmentation_table(&s5, &[Permutation::transposition(5, 0, 1)]);
    let oracle = transposition_bfs(5);
    let elements = s5.elements();
    ensure(elements.len() == 120 && oracle.len() == 120, || "S₅ order".into())?;
    for p in &elements {
        let want = oracle[p.images()] as i64;
        ensure(want == 5 - p.cycle_count() as i64, || "oracle vs cycle formula".into())?;
        ensure(table.norm(p) == Extended::from_int(want), || format!("ν_H({}) = {}", p.one_line(), table.norm(p)))?;
    }
    let s4 = SymmetricGroup::new(4);
    let nu = fragmentation_norm(fragmentation_table(&s4, &[Permutation::transposition(4, 0, 1)]), "nu_H");
    let violations = check_norm_axioms(&s4, &nu, &s4.elements());
    ensure(violations.is_empty(), || format!("{} axiom violations on S₄", violations.len()))?;
    Ok("S₅: 120/120 match BFS and 5 − cycles; S₄ axioms exhaustive, 0 violations".into())
}

fn c9_p3_splitting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..1000 {
        let (b, w, k) = random_pure_braid(&mut rng, 40, 5);
        let c = p3_coordinates(&b).map_err(|e| e.to_string())?;
        ensure(c.f2_part == w && c.center_exponent == k, || format!("round trip k={k}"))?;
        ensure(b.is_pure(), || "assembled braid not pure".into())?;
    }
    let b3 = BraidGroup::new(3);
    for _ in 0..1000 {
        let (a, wa, _) = random_pure_braid(&mut rng, 12, 3);
        let (b, wb, _) = random_pure_braid(&mut rng, 12, 3);
        let ab = p3_coordinates(&b3.multiply(&a, &b)).map_err(|e| e.to_string())?;
        let want = naive_reduce(wa.letters().iter().chain(wb.letters()).copied());
        ensure(ab.f2_part.letters() == want, || "pr₁ not multiplicative".into())?;
    }
    let delta2 = letters(&b3.pow(&b3.delta(), 2));
    ensure(burau_equal(&letters(&p3_assemble(&Word::identity(), 1)), &delta2), || "center is not Δ²".into())?;
    Ok("1000 round trips (|w| ≤ 40, |k| ≤ 5); pr₁ multiplicative on 1000 pairs".into())
}

fn c10_word_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for i in 0..100_000 {
        let a = random_word(&mut rng, 2, 12);
        let b = random_word(&mut rng, 2, 12);
        let len = rng.random_range(0..=12);
        let c = random_word_of_length(&mut rng, 2, len);
        let ab_c = a.multiply(&b).multiply(&c);
        let abc: Vec<Letter> = [&a, &b, &c].iter().flat_map(|w| w.letters().to_vec()).collect();
        ensure(ab_c == a.multiply(&b.multiply(&c)), || format!("associativity, triple {i}"))?;
        ensure(ab_c.letters() == naive_reduce(abc), || format!("reduction oracle, triple {i}"))?;
        ensure(a.multiply(&a.inverse()).is_empty() && a.inverse().multiply(&a).is_empty(), || {
            format!("inverse, triple {i}")
        })?;
        ensure(Word::reduce(ab_c.letters().to_vec()) == ab_c, || format!("idempotence, triple {i}"))?;
    }
    Ok("100000 triples exact".into())
}

fn run_verify(path: &std::path::Path) -> Result<(Option<i32>, Value), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qmorph"))
        .arg("verify")
        .arg(path)
        .output()
        .map_err(|e| e.to_string())?;
    let report = serde_json::from_slice(&out.stdout).map_err(|e| format!("verify output: {e}"))?;
    Ok((out.status.code(), report))
}

fn c11_certificates() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let bundles: Vec<Bundle> = suite::emitted_bundles(0);
    let mut count = 0;
    for (i, b) in bundles.iter().enumerate() {
        let path = dir.path().join(format!("bundle{i}.json"));
        std::fs::write(&path, b.to_json()).map_err(|e| e.to_string())?;
        let (code, report) = run_verify(&path)?;
        ensure(code == Some(0), || format!("bundle {i} ({}): {report}", b.group_pair))?;
        count += b.certificates.len();
    }
    let faults = suite::fault_injections(&bundles[1], &bundles[0]);
    for (i, (name, text, step)) in faults.iter().enumerate() {
        let path = dir.path().join(format!("fault{i}.json"));
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        let (code, report) = run_verify(&path)?;
        ensure(code == Some(1), || format!("{name}: exit {code:?}"))?;
        ensure(report["failed_step"] == step.as_str(), || {
            format!("{name}: failed at {}, expected {step}", report["failed_step"])
        })?;
    }
    Ok(format!(
        "{} bundles / {count} certificates re-verified by the binary; {} faults named correctly",
        bundles.len(),
        faults.len()
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome, u64, &'static str);
    let criteria: [Criterion; 11] = [
        ("Brooks counts", c1_brooks_counts, 1, "exact"),
        ("flip identity", c2_flip_identity, 1, "exact"),
        ("mixed-scl upper family", c3_mixed_upper, 10, "exact"),
        ("ordinary-scl lower certificate", c4_ordinary_lower, 60, "exact rational"),
        ("[f,g]^n = [f^n,g]", c5_power_commutator, 5, "exact"),
        ("commutator packing", c6_packing, 30, "exact"),
        ("extension along a section", c7_extension, 120, "exact rational"),
        ("fragmentation norm", c8_fragmentation, 30, "exact"),
        ("P3 splitting", c9_p3_splitting, 30, "exact"),
        ("word algebra", c10_word_algebra, 10, "exact"),
        ("certificate integrity", c11_certificates, 10, "exact"),
    ];
    let mut failed = Vec::new();
    for (i, (name, check, limit, tolerance)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let (ok, detail) = match outcome {
            Ok(d) if in_time => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        println!(
            "[{}] criterion {}: {name}: {detail} (runtime {:.3}s, limit {limit}s, tolerance {tolerance})",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            elapsed.as_secs_f64(),
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
