use gquot::report::random_test_words;
use gquot::tree::{is_trivial_g, level_perm, nucleus_depth, section, Vertex};
use gquot::word::{letter, Alphabet, FreeWord};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = FreeWord> {
    prop::collection::vec((0usize..4, any::<bool>()), 0..=64)
        .prop_map(|v| FreeWord::from_letters(Alphabet::Abcd, v.into_iter().map(|(g, i)| letter(g, i)).collect()).unwrap())
}

fn w(s: &str) -> FreeWord {
    FreeWord::parse(Alphabet::Abcd, s).unwrap()
}

#[test]
fn seeded_words_agree_with_level_12() {
    let words = random_test_words(11, 400);
    let trivial = words.iter().filter(|w| level_perm(w, 12).unwrap().is_identity()).count();
    assert!(trivial > 100, "only {trivial} trivial words");
    for x in &words {
        assert_eq!(is_trivial_g(x).unwrap().verdict, level_perm(x, 12).unwrap().is_identity(), "{x}");
    }
}

#[test]
fn element_orders() {
    for (s, order) in [("ab", 16u32), ("ac", 8), ("ad", 4), ("abc", 4), ("bc", 2)] {
        let x = w(s);
        let mut k = 1;
        while !is_trivial_g(&x.pow(k)).unwrap().verdict {
            k += 1;
        }
        assert_eq!(k as u32, order, "{s}");
    }
}

proptest! {
    #[test]
    fn trivial_words_act_trivially(x in word()) {
        let cert = is_trivial_g(&x).unwrap();
        if cert.verdict {
            for n in 1..=12 {
                prop_assert!(level_perm(&x, n).unwrap().is_identity());
            }
        } else {
            // a nucleus letter first moves a vertex on level 1 (a), 2 (b, c) or 3 (d)
            let depth = cert.trace.depth() + 3;
            prop_assert!((1..=depth.min(20)).any(|n| !level_perm(&x, n).unwrap().is_identity()));
        }
    }

    #[test]
    fn contraction(x in word()) {
        let bound = (x.len().max(1) as f64).log2().ceil() as usize + 3;
        prop_assert!(nucleus_depth(&x).unwrap() <= bound);
    }

    #[test]
    fn sections_are_multiplicative(x in word(), y in word(), bits in prop::collection::vec(any::<bool>(), 1..6)) {
        let v = Vertex::from_bits(bits);
        let xy = x.mul(&y);
        let y_v = gquot::tree::act(&y, &v).unwrap();
        let lhs = level_perm(&section(&xy, &v).unwrap(), 4).unwrap();
        let rhs = level_perm(&section(&x, &y_v).unwrap().mul(&section(&y, &v).unwrap()), 4).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
