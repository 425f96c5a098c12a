use std::collections::{BTreeMap, VecDeque};

use qmorph_core::braid::BraidGroup;
use qmorph_core::group::{DirectProduct, FiniteGroup, SwapProduct};
use qmorph_core::norms::{
    check_norm_axioms, fragmentation_norm, fragmentation_table, reassemble, vanishing_on_split_commutators, Extended,
    PartialQuasimorphism, PreconditionError, trivial_norm,
};
use qmorph_core::perm::{Permutation, SymmetricGroup};
use qmorph_core::quasimorphism::Quasimorphism;
use qmorph_core::rational::int;
use qmorph_core::sample::random_word;
use qmorph_core::scl::{alpha, commutator_identity_xy, power_commutator, verify_decomposition, SclError};
use qmorph_core::word::{FreeGroup, Word};
use qmorph_core::Group;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Cayley-graph distance in Sₙ with all transpositions as generators.
fn transposition_distances(n: usize) -> BTreeMap<Permutation, usize> {
    let mut dist = BTreeMap::new();
    let start = Permutation::identity(n);
    dist.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for a in 0..n {
            for b in a + 1..n {
                let q = p.compose(&Permutation::transposition(n, a, b));
                if !dist.contains_key(&q) {
                    dist.insert(q.clone(), d + 1);
                    queue.push_back(q);
                }
            }
        }
    }
    dist
}

#[test]
fn s5_transposition_fragmentation() {
    let s5 = SymmetricGroup::new(5);
    let table = fragmentation_table(&s5, &[Permutation::transposition(5, 0, 1)]);
    let oracle = transposition_distances(5);
    let elements = s5.elements();
    assert_eq!(elements.len(), 120);
    for p in &elements {
        let expected = 5 - p.cycle_count() as i64;
        assert_eq!(table.norm(p), Extended::from_int(expected));
        assert_eq!(oracle[p] as i64, expected);
        let witness = table.witness(p).unwrap();
        assert_eq!(witness.len() as i64, expected);
        assert_eq!(reassemble(&s5, &witness), *p);
    }
    // layers partition the group
    let total: usize = (0..=table.max_finite()).map(|k| table.layer(k).len()).sum();
    assert_eq!(total, 120);
    let nu = fragmentation_norm(table, "frag");
    let sample: Vec<Permutation> = elements.iter().step_by(3).cloned().collect();
    assert!(check_norm_axioms(&s5, &nu, &sample).is_empty());
}

#[test]
fn s4_axioms_exhaustive() {
    let s4 = SymmetricGroup::new(4);
    let all = s4.elements();
    for gen in [Permutation::transposition(4, 0, 1), Permutation::from_one_line(&[2, 3, 1, 4]).unwrap()] {
        let table = fragmentation_table(&s4, &[gen]);
        for p in &all {
            if let Some(w) = table.witness(p) {
                assert_eq!(reassemble(&s4, &w), *p);
            }
        }
        let nu = fragmentation_norm(table, "frag");
        assert!(check_norm_axioms(&s4, &nu, &all).is_empty());
    }
    let three_cycle = fragmentation_table(&s4, &[Permutation::from_one_line(&[2, 3, 1, 4]).unwrap()]);
    let double = Permutation::from_one_line(&[2, 1, 4, 3]).unwrap();
    assert_eq!(three_cycle.norm(&double), Extended::from_int(2));
    assert!(check_norm_axioms(&s4, &trivial_norm(Permutation::identity(4)), &all).is_empty());
}

#[test]
fn packing_identity_random() {
    let f2 = FreeGroup::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let x = random_word(&mut rng, 2, 4);
        let y = random_word(&mut rng, 2, 4);
        for n in 1..=8 {
            let d = commutator_identity_xy(&f2, &x, &y, n);
            assert_eq!(d.len(), n as usize);
            assert!(verify_decomposition(&f2, &d, |_| true).unwrap());
        }
    }
}

#[test]
fn eq_one_in_models() {
    let f2 = FreeGroup::new(2);
    let g = DirectProduct::new(f2.clone(), f2.clone());
    let x = f2.generator(1);
    let y = f2.generator(2);
    // (x,1) and (1,x) commute; g = (1,y) does not disturb the first factor
    let f = (x.clone(), Word::identity());
    let swap = SwapProduct::new(f2.clone());
    let sf = (x.clone(), Word::identity(), false);
    for n in 0..=32 {
        let d = power_commutator(&swap, &sf, &swap.swap(), n).unwrap();
        assert!(verify_decomposition(&swap, &d, |_| true).unwrap());
        let d = power_commutator(&g, &f, &(Word::identity(), y.clone()), n).unwrap();
        assert!(verify_decomposition(&g, &d, |_| true).unwrap());
    }
    let b3 = BraidGroup::new(3);
    let a = alpha();
    for k in 1..=2 {
        let f = b3.pow(&a, k);
        for n in 0..=32 {
            let d = power_commutator(&b3, &f, &b3.delta(), n).unwrap();
            assert!(verify_decomposition(&b3, &d, |_| true).unwrap());
        }
    }
    assert_eq!(power_commutator(&b3, &b3.delta(), &a, 2).unwrap_err(), SclError::NotCommuting);
    assert_eq!(power_commutator(&f2, &x, &y, 3).unwrap_err(), SclError::NotCommuting);
    let pq = PartialQuasimorphism {
        phi: Quasimorphism::zero(),
        norm: trivial_norm(Word::identity()),
        constant: int(1),
        semi_homogeneous: true,
    };
    assert_eq!(
        vanishing_on_split_commutators(&f2, &pq, &x, &y, 4).unwrap_err(),
        PreconditionError::NotCommuting
    );
}
