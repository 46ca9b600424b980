use cycle_monoid::tower::{abelianize, multiset_quotient, reduce_coset};
use cycle_monoid::tree::word_to_tree;
use cycle_monoid::word::{class_of, pair};
use cycle_monoid::{
    AbelianVector, CanonicalPolicy, PairingTree, PresentationClass, RelationLattice, RootedPresentation, Sign,
    SignedLetter, SignedWord,
};
use proptest::prelude::*;

const RANK: usize = 4;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

fn word(max_len: usize) -> impl Strategy<Value = SignedWord> {
    prop::collection::vec((0..RANK, sign()), 0..=max_len)
        .prop_map(|ls| SignedWord::from_letters(ls.into_iter().map(|(g, s)| SignedLetter::new(g, s)).collect()))
}

fn tree() -> impl Strategy<Value = PairingTree> {
    (0..RANK).prop_map(PairingTree::Leaf).prop_recursive(5, 24, 2, |inner| {
        (sign(), sign(), inner.clone(), inner).prop_map(|(s, t, l, r)| PairingTree::node(s, t, l, r))
    })
}

proptest! {
    #[test]
    fn involution_reverses_products(u in word(12), v in word(12)) {
        prop_assert_eq!(u.concat(&v).involution(), v.involution().concat(&u.involution()));
        prop_assert_eq!(u.involution().involution(), u.clone());
        prop_assert_eq!(u.involution().len(), u.len());
    }

    #[test]
    fn sign_swap_commutes_with_the_operations(u in word(10), v in word(10), g in 0..RANK, s in sign(), t in sign()) {
        let swap = |w: &SignedWord| w.swap_generator_sign(g);
        prop_assert_eq!(swap(&u.concat(&v)), swap(&u).concat(&swap(&v)));
        prop_assert_eq!(swap(&u.involution()), swap(&u).involution());
        let lex = CanonicalPolicy::LexLeast;
        let (a, b) = (class_of(&u, &lex), class_of(&v, &lex));
        let swapped_a = PresentationClass::with_canonical(swap(a.canonical()));
        let swapped_b = PresentationClass::with_canonical(swap(b.canonical()));
        prop_assert_eq!(swap(&pair(&a, s, t, &b)), pair(&swapped_a, s, t, &swapped_b));
    }

    #[test]
    fn classes_ignore_the_chosen_section(w in word(8)) {
        let mut prefer_anti = CanonicalPolicy::LexLeast;
        prefer_anti.prefer(class_of(&w, &CanonicalPolicy::LexLeast).anti().clone());
        let a = class_of(&w, &CanonicalPolicy::LexLeast);
        let b = class_of(&w, &prefer_anti);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.contains(&w) && a.contains(&w.involution()));
        prop_assert_eq!(a.is_degenerate(), w == w.involution());
    }

    #[test]
    fn flip_reverses_the_word(t in tree(), root in sign()) {
        if let Ok(f) = t.flip() {
            prop_assert_eq!(f.eval(), t.eval().involution());
        }
        let r = RootedPresentation::new(t.clone(), root);
        prop_assert_eq!(r.eval().len(), t.leaf_count());
        let back = word_to_tree(&r.eval()).unwrap();
        prop_assert_eq!(back.eval(), r.eval());
    }

    #[test]
    fn abelianization_is_a_homomorphism(u in word(16), v in word(16)) {
        let uv = u.concat(&v);
        prop_assert_eq!(abelianize(&uv, RANK), &abelianize(&u, RANK) + &abelianize(&v, RANK));
        prop_assert_eq!(multiset_quotient(&uv, RANK), &multiset_quotient(&u, RANK) + &multiset_quotient(&v, RANK));
        prop_assert_eq!(abelianize(&u.involution(), RANK), -&abelianize(&u, RANK));
        prop_assert!(abelianize(&u.concat(&u.involution()), RANK).is_zero());
    }

    #[test]
    fn cosets_are_shift_invariant(
        rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 0..4),
        v in prop::collection::vec(-20i64..=20, 3),
        coeffs in prop::collection::vec(-4i64..=4, 4),
    ) {
        let lattice = RelationLattice::new(3, rows.clone()).unwrap();
        let mut shifted = v.clone();
        for (row, c) in rows.iter().zip(&coeffs) {
            for (x, r) in shifted.iter_mut().zip(row) {
                *x += c * r;
            }
        }
        let a = reduce_coset(&AbelianVector(v), &lattice).unwrap();
        let b = reduce_coset(&AbelianVector(shifted), &lattice).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(reduce_coset(&a.rep, &lattice).unwrap(), a);
    }
}
