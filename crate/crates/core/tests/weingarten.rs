use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use wml_core::weingarten::{
    laurent, moment, stable_inner_product, wg, word_moment, word_moment_by_contraction, Partition, RationalFunction,
    TraceMonomial,
};
use wml_core::Word;

fn w(s: &str) -> Word {
    Word::parse(s, 3).unwrap()
}

fn t(s: &str) -> TraceMonomial {
    s.parse().unwrap()
}

fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
    use wml_core::weingarten::Poly;
    RationalFunction::new(Poly::from_i64(num), Poly::from_i64(den))
}

/// A random word and a shuffled word of inverse letters, so the pair is balanced.
fn balanced_pair() -> impl Strategy<Value = (Vec<i32>, Vec<i32>)> {
    prop::collection::vec((1..=2i32, any::<bool>()).prop_map(|(g, i)| if i { -g } else { g }), 1..=4)
        .prop_flat_map(|u| {
            let inv: Vec<i32> = u.iter().map(|l| -l).collect();
            (Just(u), Just(inv).prop_shuffle())
        })
}

fn per_sign_counts_at_most(words: &[Word], cap: usize) -> bool {
    (1..=3).all(|g| {
        let count = |neg: bool| {
            words.iter().flat_map(|w| w.signed_letters()).filter(|&l| l == if neg { -g } else { g }).count()
        };
        count(false) <= cap && count(true) <= cap
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn engines_agree((u, v) in balanced_pair()) {
        let words = vec![Word::from_signed(&u, 2), Word::from_signed(&v, 2)];
        let fast = word_moment(&words).unwrap();
        let slow = word_moment_by_contraction(&words, 100_000_000).unwrap();
        prop_assert_eq!(&fast.value, &slow.value);
        prop_assert_eq!(fast.n_min, slow.n_min);
    }

    #[test]
    fn symmetries((u, v) in balanced_pair(), k in 0usize..4) {
        let a = Word::from_signed(&u, 2);
        let b = Word::from_signed(&v, 2);
        let base = word_moment(&[a.clone(), b.clone()]).unwrap().value;

        let rot = a.cyclic_core().rotate(k);
        prop_assert_eq!(&word_moment(&[rot, b.clone()]).unwrap().value, &base);

        let swap = |w: &Word| Word::from_signed(&w.signed_letters().iter().map(|&l| if l.abs() == 1 { l.signum() * 2 } else { l.signum() }).collect::<Vec<_>>(), 2);
        prop_assert_eq!(&word_moment(&[swap(&a), swap(&b)]).unwrap().value, &base);
        prop_assert_eq!(&word_moment(&[a.inverse(), b.inverse()]).unwrap().value, &base);
        prop_assert_eq!(&word_moment(&[b, a]).unwrap().value, &base);
    }

    /// On U(1) the traces are scalars, so a balanced list integrates to exactly 1.
    #[test]
    fn one_by_one_unitaries((u, v) in balanced_pair()) {
        let words = vec![Word::from_signed(&u, 2), Word::from_signed(&v, 2)];
        prop_assume!(per_sign_counts_at_most(&words, 1));
        let m = word_moment(&words).unwrap();
        prop_assert_eq!(m.n_min, 1);
        prop_assert_eq!(m.eval(1).unwrap(), BigRational::one());
    }
}

#[test]
fn documented_values() {
    assert!(word_moment(&[w("x")]).unwrap().value.is_zero());
    assert_eq!(word_moment(&[w("[x,y]")]).unwrap().value, RationalFunction::n_pow(-1));
    assert_eq!(word_moment(&[w("x"), w("X")]).unwrap().value, RationalFunction::one());
    assert_eq!(word_moment(&[w("x X")]).unwrap().value, RationalFunction::n_pow(1));
    assert_eq!(moment(&w("x"), &t("2,-2")).unwrap().value, RationalFunction::from_i64(2));
    assert!(moment(&w("x x y y"), &t("1")).unwrap().value.is_zero());
    assert_eq!(moment(&w("[x,y]"), &t("1")).unwrap().value, RationalFunction::n_pow(-1));
}

#[test]
fn weingarten_function_values() {
    assert_eq!(wg(&Partition::new(vec![1])), RationalFunction::n_pow(-1));
    assert_eq!(wg(&Partition::new(vec![1, 1])), rf(&[1], &[-1, 0, 1]));
    assert_eq!(wg(&Partition::new(vec![2])), rf(&[-1], &[0, -1, 0, 1]));
}

#[test]
fn stable_inner_products() {
    assert_eq!(stable_inner_product(&t("1,-1"), &t("")), 1.into());
    assert_eq!(stable_inner_product(&t("1"), &t("1")), 1.into());
    assert_eq!(stable_inner_product(&t("2,-2"), &t("")), 2.into());
    assert_eq!(stable_inner_product(&t("1,1,-1,-1"), &t("")), 2.into());
    assert_eq!(stable_inner_product(&t("1,-1"), &t("1")), 0.into());
}

/// `E|tr U^p|^2 = p` for every fixed `n >= p`, and `E|tr U|^4 = 2` once `n >= 2`.
#[test]
fn diaconis_shahshahani_small_cases() {
    for p in 1..=4i64 {
        let m = moment(&w("x"), &TraceMonomial::new(vec![p, -p]).unwrap()).unwrap();
        assert_eq!(m.value, RationalFunction::from_i64(p), "p = {p}");
    }
    let m = moment(&w("x"), &t("1,1,-1,-1")).unwrap();
    assert_eq!(m.value, RationalFunction::from_i64(2));
    assert_eq!(m.n_min, 2);
}

#[test]
fn expansions() {
    let l = laurent(&rf(&[1], &[-1, 0, 1]), 4);
    assert_eq!(l.leading, Some(-2));
    let terms: Vec<(i64, BigRational)> = l.terms();
    assert_eq!(terms, vec![(-2, BigRational::one()), (-4, BigRational::one()), (-6, BigRational::one())]);

    let pair = moment(&w("[x,y]"), &t("1,-1")).unwrap().value;
    let l = laurent(&pair, 4);
    assert_eq!(l.coefficient(0), BigRational::one());
    assert!(l.coefficient(-1).is_zero());
    let rest = &pair - &RationalFunction::one();
    assert!(rest.order().is_none_or(|o| o <= -2));
}

#[test]
fn moments_of_longer_words_match_across_engines() {
    for (text, tr) in [("[x,y^2]", "1"), ("[x,y]", "2,-2"), ("x y X Y x X", "1"), ("[x,y][x,z]", "1")] {
        let word = w(text);
        let words: Vec<Word> = t(tr).exponents().iter().map(|&m| word.pow(m)).collect();
        let fast = word_moment(&words).unwrap();
        let slow = word_moment_by_contraction(&words, 100_000_000).unwrap();
        assert_eq!(fast.value, slow.value, "{text} {tr}");
    }
}
