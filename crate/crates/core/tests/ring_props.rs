use num_bigint::BigInt;
use piexp::{CycInt, CycRing, Valuation};
use proptest::prelude::*;

fn ring_for(p: u64, d: u32) -> CycRing {
    CycRing::new(p, d, 6)
}

fn elem(ring: &CycRing, coeffs: &[i64]) -> CycInt {
    let e = ring.e();
    let v: Vec<BigInt> = coeffs.iter().take(e).map(|&c| BigInt::from(c)).collect();
    ring.from_coeffs(&v).unwrap()
}

fn same(ring: &CycRing, x: &CycInt, y: &CycInt) -> bool {
    ring.is_zero(&ring.sub(x, y))
}

fn setup() -> impl Strategy<Value = (u64, u32, Vec<i64>, Vec<i64>, Vec<i64>)> {
    (prop::sample::select(vec![(2u64, 1u32), (2, 2), (3, 1), (5, 0), (5, 1)])).prop_flat_map(|(p, d)| {
        let e = (p.pow(d) * (p - 1)) as usize;
        let c = prop::collection::vec(-50i64..50, e);
        (Just(p), Just(d), c.clone(), c.clone(), c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((p, d, a, b, c) in setup()) {
        let r = ring_for(p, d);
        let (x, y, z) = (elem(&r, &a), elem(&r, &b), elem(&r, &c));
        prop_assert!(same(&r, &r.mul(&x, &y), &r.mul(&y, &x)));
        prop_assert!(same(&r, &r.mul(&r.mul(&x, &y), &z), &r.mul(&x, &r.mul(&y, &z))));
        prop_assert!(same(&r, &r.mul(&x, &r.add(&y, &z)), &r.add(&r.mul(&x, &y), &r.mul(&x, &z))));
        prop_assert!(same(&r, &r.add(&x, &r.neg(&x)), &r.zero()));
        prop_assert!(same(&r, &r.mul(&x, &r.one()), &x));
    }

    #[test]
    fn valuation_is_additive((p, d, a, b, _c) in setup()) {
        let r = ring_for(p, d);
        let (x, y) = (elem(&r, &a), elem(&r, &b));
        match (r.valuation(&x), r.valuation(&y)) {
            (Valuation::Finite(vx), Valuation::Finite(vy)) => {
                prop_assert_eq!(r.valuation(&r.mul(&x, &y)), Valuation::Finite(vx + vy));
            }
            _ => prop_assert!(r.is_zero(&r.mul(&x, &y))),
        }
    }

    #[test]
    fn pi_division_roundtrip((p, d, a, _b, _c) in setup(), m in 0u64..6) {
        let r = ring_for(p, d);
        let x = elem(&r, &a);
        let y = r.mul_pi_pow(&x, m);
        prop_assert!(same(&r, &r.div_by_pi(&y, m).unwrap(), &x));
    }

    #[test]
    fn units_invert((p, d, a, _b, _c) in setup()) {
        let r = ring_for(p, d);
        let mut a = a;
        if (a[0] as i128).rem_euclid(p as i128) == 0 {
            a[0] += 1;
        }
        let x = elem(&r, &a);
        let inv = r.unit_inverse(&x).unwrap();
        prop_assert!(same(&r, &r.mul(&x, &inv), &r.one()));
    }
}

#[test]
fn uniformizers_have_expected_valuation() {
    for (p, d) in [(2u64, 2u32), (3, 1), (5, 1)] {
        let r = ring_for(p, d);
        for i in 0..=d {
            let v = p.pow(d - i) as i64;
            assert_eq!(r.valuation(r.uniformizer(i).unwrap()), Valuation::Finite(v));
            assert_eq!(r.uniformizer_valuation(i), v as u64);
        }
        let pv = r.valuation(&r.from_i64(p as i64));
        assert_eq!(pv, Valuation::Finite(r.e() as i64));
    }
}
