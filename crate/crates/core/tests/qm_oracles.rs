use proptest::prelude::*;
use qmorph_core::group::ball;
use qmorph_core::quasimorphism::{
    brooks, brooks_homogenized, count_copies, defect_bound_counting, defect_search, homogeneity_check, homogenize,
    homogenize_counting_exact, CountingWord,
};
use qmorph_core::rational::int;
use qmorph_core::sample::{random_word, random_word_of_length};
use qmorph_core::word::{FreeGroup, Letter, Word};
use qmorph_core::Group;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest set of pairwise disjoint occurrences, by trying every subset of
/// occurrence positions.
fn exhaustive_count(w: &[Letter], g: &[Letter]) -> usize {
    let k = w.len();
    if k > g.len() {
        return 0;
    }
    let starts: Vec<usize> = (0..=g.len() - k).filter(|&i| &g[i..i + k] == w).collect();
    let mut best = 0;
    for mask in 0u32..(1 << starts.len()) {
        let chosen: Vec<usize> = (0..starts.len()).filter(|i| mask & (1 << i) != 0).map(|i| starts[i]).collect();
        if chosen.windows(2).all(|p| p[1] >= p[0] + k) {
            best = best.max(chosen.len());
        }
    }
    best
}

fn reduced_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1u32..=2, any::<bool>()), 0..max)
        .prop_map(|v| Word::reduce(v.into_iter().map(|(g, inv)| Letter::new(g, inv))))
}

fn counting_word(max: usize) -> impl Strategy<Value = CountingWord> {
    reduced_word(max)
        .prop_filter("nonempty", |w| !w.is_empty())
        .prop_map(|w| CountingWord::new(&FreeGroup::new(2), w).unwrap())
}

/// Words over a two-letter alphabet make repeated occurrences common.
fn dense_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![Letter::new(1, false), Letter::new(2, false), Letter::new(1, true)]), 0..max)
        .prop_map(Word::reduce)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn greedy_count_is_maximal(w in counting_word(4), g in dense_word(15)) {
        prop_assume!(g.len() <= 14);
        let expected = exhaustive_count(w.word().letters(), g.letters());
        prop_assert_eq!(count_copies(&w, &g).unwrap(), expected);
        prop_assert!(expected * w.len() <= g.len());
    }

    #[test]
    fn brooks_is_antisymmetric(w in counting_word(4), g in reduced_word(20)) {
        let h = brooks(&w);
        prop_assert_eq!(h.eval(&g.inverse()).unwrap(), -h.eval(&g).unwrap());
    }

    #[test]
    fn exact_homogenization_is_conjugation_invariant(w in counting_word(4), g in reduced_word(12), a in reduced_word(8)) {
        let conj = a.multiply(&g).multiply(&a.inverse());
        prop_assert_eq!(
            homogenize_counting_exact(&w, &g).unwrap(),
            homogenize_counting_exact(&w, &conj).unwrap()
        );
    }

    #[test]
    fn homogenized_is_homogeneous(w in counting_word(4), g in reduced_word(10)) {
        let f2 = FreeGroup::new(2);
        let hb = brooks_homogenized(&w);
        prop_assert_eq!(homogeneity_check(&f2, &hb, &[g], 8).unwrap(), None);
    }
}

#[test]
fn exact_value_lies_in_truncated_interval() {
    let f2 = FreeGroup::new(2);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let wlen = 1 + (rand::Rng::random_range(&mut rng, 0..4usize));
        let w = CountingWord::new(&f2, random_word_of_length(&mut rng, 2, wlen)).unwrap();
        let g = random_word(&mut rng, 2, 10);
        let exact = homogenize_counting_exact(&w, &g).unwrap();
        let iv = homogenize(&f2, &brooks(&w), &g, 1024).unwrap();
        assert!(iv.contains(&exact), "w={:?} g={:?} exact={} interval={}", w, g, exact, iv);
    }
}

#[test]
fn searched_defect_never_exceeds_bound() {
    let f2 = FreeGroup::new(2);
    let b = ball(&f2, &f2.generators(), 6);
    let words = ["x", "xy", "xx", "xyx", "xyXY", "xxy", "xyxy", "xYxy"];
    for text in words {
        let w = CountingWord::new(&f2, f2.parse(text).unwrap()).unwrap();
        let bound = defect_bound_counting(&w).value;
        let mut h = brooks(&w);
        let mut previous = int(0);
        for r in 0..=6 {
            let found = defect_search(&f2, &mut h, &b, r).unwrap().unwrap();
            assert!(found.lower >= previous, "monotone in radius");
            previous = found.lower.clone();
        }
        assert!(previous <= bound, "{text}: searched {previous} > bound {bound}");
        let mut hb = brooks_homogenized(&w);
        let found = defect_search(&f2, &mut hb, &b, 6).unwrap().unwrap();
        assert!(found.lower <= hb.defect_upper.clone().unwrap().value);
    }
}

#[test]
fn searched_defect_radius_eight() {
    let f2 = FreeGroup::new(2);
    let b = ball(&f2, &f2.generators(), 8);
    let w = CountingWord::new(&f2, f2.parse("xyXY").unwrap()).unwrap();
    let mut h = brooks(&w);
    let found = defect_search(&f2, &mut h, &b, 8).unwrap().unwrap();
    assert!(found.lower >= int(1) && found.lower <= int(3));
    let g = found.g.clone();
    let direct = h.eval(&f2.multiply(&g, &found.h)).unwrap() - h.eval(&g).unwrap() - h.eval(&found.h).unwrap();
    assert_eq!(num_traits::Signed::abs(&direct), found.lower);
}
