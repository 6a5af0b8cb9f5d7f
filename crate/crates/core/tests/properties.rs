use nilsep::canon::nilpotent_jordan;
use nilsep::document::{parse_tuple, render_tuple};
use nilsep::linalg::{solve, Dense};
use nilsep::sampling::{random_invertible, random_tuple, stream};
use nilsep::scalar::{self, frac};
use nilsep::sets::builtin;
use nilsep::{
    builtin_set, eval_word, evaluate_set, permute_tuple, separate, NilTuple, Permutation, Scalar,
    SetName, SmallMatrix, TraceWord,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn tuple_from_seed(seed: u64, size: usize, d: usize) -> NilTuple {
    random_tuple(&mut stream(seed, 0), size, d)
}

fn word_strategy(d: usize, max_len: usize) -> impl Strategy<Value = TraceWord> {
    prop::collection::vec(1..=d, 1..=max_len).prop_map(|l| TraceWord::new(l).unwrap())
}

fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_is_cyclic(seed in any::<u64>(), size in 2usize..=3, w in word_strategy(3, 7)) {
        let t = tuple_from_seed(seed, size, 3);
        let v = eval_word(&t, &w).unwrap();
        for r in w.rotations() {
            prop_assert_eq!(&eval_word(&t, &r).unwrap(), &v);
        }
        prop_assert_eq!(eval_word(&t, &w.canonical()).unwrap(), v);
    }

    #[test]
    fn invariants_survive_conjugation(seed in any::<u64>()) {
        let t = tuple_from_seed(seed, 3, 3);
        let g = random_invertible(&mut stream(seed, 1), 3);
        let u = t.conjugate(&g).unwrap();
        let p33 = builtin(SetName::P33);
        prop_assert_eq!(evaluate_set(&t, &p33).unwrap(), evaluate_set(&u, &p33).unwrap());
        prop_assert!(separate(&t, &u, &builtin(SetName::S33)).unwrap().is_none());
    }

    #[test]
    fn two_by_two_invariants_survive_conjugation(seed in any::<u64>(), d in 2usize..=4) {
        let t = tuple_from_seed(seed, 2, d);
        let g = random_invertible(&mut stream(seed, 1), 2);
        let s = builtin_set(SetName::S2, d).unwrap();
        prop_assert!(separate(&t, &t.conjugate(&g).unwrap(), &s).unwrap().is_none());
    }

    #[test]
    fn relabelling_matrices_relabels_words(seed in any::<u64>(), pi_idx in 0usize..6, w in word_strategy(3, 6)) {
        let t = tuple_from_seed(seed, 3, 3);
        let pi = Permutation::all(3)[pi_idx].clone();
        let moved = permute_tuple(&t, &pi).unwrap();
        prop_assert_eq!(
            eval_word(&moved, &w).unwrap(),
            eval_word(&t, &w.permute(&pi.inverse()).unwrap()).unwrap()
        );
    }

    #[test]
    fn nilpotency_means_vanishing_cube(entries in prop::collection::vec(-2i64..=2, 9)) {
        let m = SmallMatrix::from_ints(3, &entries).unwrap();
        prop_assert_eq!(m.is_nilpotent(), m.pow(3).is_zero());
        let n = SmallMatrix::from_ints(2, &entries[..4]).unwrap();
        prop_assert_eq!(n.is_nilpotent(), n.pow(2).is_zero());
    }

    #[test]
    fn sampled_matrices_are_nilpotent_and_reduce_to_jordan_form(seed in any::<u64>()) {
        let t = tuple_from_seed(seed, 3, 3);
        for a in t.mats() {
            prop_assert!(a.pow(3).is_zero());
            let (g, tag) = nilpotent_jordan(a).unwrap();
            prop_assert_eq!(g.apply(a), tag.matrix());
            prop_assert_eq!(a.rank(), tag.rank());
        }
    }

    #[test]
    fn scalars_form_a_field(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &Scalar::zero(), a.clone());
        prop_assert_eq!(&a * &Scalar::one(), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(&a * &a.recip(), Scalar::one());
        }
    }

    #[test]
    fn scalar_text_roundtrip(a in scalar_strategy()) {
        let text = scalar::format(&a);
        prop_assert_eq!(scalar::parse(&text).unwrap(), a);
    }

    #[test]
    fn documents_roundtrip(seed in any::<u64>(), size in 2usize..=3, d in 1usize..=4, scale in 1i64..=6) {
        let t = tuple_from_seed(seed, size, d);
        let mats = t.mats().iter().map(|m| m.scale(&frac(1, scale))).collect();
        let t = NilTuple::new(size, mats).unwrap();
        let text = render_tuple(&t);
        let back = parse_tuple(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(render_tuple(&back), text);
    }

    #[test]
    fn separation_is_symmetric(sa in any::<u64>(), sb in any::<u64>()) {
        let a = tuple_from_seed(sa, 3, 3);
        let b = tuple_from_seed(sb, 3, 3);
        let s33 = builtin(SetName::S33);
        let ab = separate(&a, &b, &s33).unwrap();
        let ba = separate(&b, &a, &s33).unwrap();
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn exact_solve_satisfies_system(entries in prop::collection::vec(-4i64..=4, 12), x in prop::collection::vec(-4i64..=4, 4)) {
        let rows: Vec<Vec<Scalar>> = entries.chunks(4).map(|r| r.iter().map(|&v| scalar::int(v)).collect()).collect();
        let m = Dense::from_rows(rows.clone(), 4);
        let x: Vec<Scalar> = x.iter().map(|&v| scalar::int(v)).collect();
        let rhs: Vec<Scalar> = rows.iter().map(|r| r.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
        let sol = solve(&m, &rhs).expect("consistent by construction");
        for (r, want) in rows.iter().zip(&rhs) {
            let got: Scalar = r.iter().zip(&sol).map(|(a, b)| a * b).sum();
            prop_assert_eq!(&got, want);
        }
        prop_assert_eq!(m.rank() + m.kernel().len(), 4);
    }
}
