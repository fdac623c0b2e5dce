use std::sync::OnceLock;

use proptest::prelude::*;

use pureshard::arrangement::{builtin_arrangement, Family};
use pureshard::coxbraid::{braid_moves, Braids};
use pureshard::coxeter::CoxeterGroup;
use pureshard::salvetti::Salvetti;

fn a3_salvetti() -> &'static Salvetti {
    static SAL: OnceLock<Salvetti> = OnceLock::new();
    SAL.get_or_init(|| Salvetti::new(builtin_arrangement(Family::A(3)).unwrap()).unwrap())
}

fn a3() -> CoxeterGroup {
    CoxeterGroup::new(Family::A(3)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normal_form_projects_to_product(word in prop::collection::vec(0usize..3, 0..16)) {
        let g = a3();
        let b = Braids::new(&g);
        let x = b.from_word(&word);
        prop_assert_eq!(b.phi(&x), g.product(&word));
        prop_assert_eq!(b.word(&x).unwrap().len(), word.len());
        prop_assert_eq!(b.from_word(&b.word(&x).unwrap()), x);
    }

    #[test]
    fn braid_moves_preserve_normal_form(word in prop::collection::vec(0usize..3, 0..12)) {
        let g = a3();
        let b = Braids::new(&g);
        let x = b.from_word(&word);
        for w in braid_moves(&g, &word) {
            prop_assert_eq!(&b.from_word(&w), &x);
        }
    }

    #[test]
    fn prefix_divides(word in prop::collection::vec(0usize..2, 1..14), cut in 0usize..14) {
        let g = CoxeterGroup::new(Family::I2(5)).unwrap();
        let b = Braids::new(&g);
        let cut = cut.min(word.len());
        let whole = b.from_word(&word);
        let prefix = b.from_word(&word[..cut]);
        prop_assert!(b.left_divides(&prefix, &whole));
        let inv = b.inv(&whole);
        prop_assert!(b.mul(&whole, &inv).is_identity());
    }

    #[test]
    fn loop_inverse_cancels(word in prop::collection::vec(0usize..11, 0..8)) {
        let sal = a3_salvetti();
        let x = sal.loop_of_word(&word).unwrap();
        prop_assert!(sal.mul(&x, &sal.inv(&x)).is_identity());
        let twist = sal.full_twist().unwrap();
        prop_assert_eq!(sal.mul(&twist, &x), sal.mul(&x, &twist));
    }
}
