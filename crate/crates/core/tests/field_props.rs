use std::sync::OnceLock;

use lrcgeom::Field;
use proptest::prelude::*;

const ORDERS: [u64; 16] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 32, 49, 64, 256, 1024];

fn fields() -> &'static [Field] {
    static F: OnceLock<Vec<Field>> = OnceLock::new();
    F.get_or_init(|| ORDERS.iter().map(|&q| Field::with_order(q).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms(which in 0..ORDERS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[which];
        let q = f.order();
        let (a, b, c) = (a % q, b % q, c % q);

        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, 0), a);
        prop_assert_eq!(f.mul(a, 1), a);
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            let inv = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, inv), 1);
            prop_assert_eq!(f.inv_euclid(a), Some(inv));
            prop_assert_eq!(f.div(b, a).map(|x| f.mul(x, a)), Some(b));
            prop_assert_eq!(f.pow(a, i64::from(q) - 1), Some(1));
        } else {
            prop_assert_eq!(f.inv(a), None);
        }
        // Frobenius is additive
        let p = i64::from(f.characteristic());
        prop_assert_eq!(f.pow(f.add(a, b), p), Some(f.add(f.pow(a, p).unwrap(), f.pow(b, p).unwrap())));
    }
}

#[test]
fn primitive_element_generates() {
    for f in fields() {
        let g = f.primitive_element();
        assert_eq!(f.multiplicative_order(g), Some(u64::from(f.order()) - 1));
        let mut all = f.nonzero_elements();
        all.sort_unstable();
        assert_eq!(all, (1..f.order()).collect::<Vec<_>>());
    }
}

#[test]
fn table_and_polynomial_products_agree() {
    for f in fields().iter().filter(|f| f.order() <= 64) {
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), f.mul_poly(a, b), "GF({}) {a}*{b}", f.order());
            }
        }
    }
}
