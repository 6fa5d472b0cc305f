use std::sync::Arc;

use gg_lattice::arith::{is_pm_integral, rank, rat, CycField, CycNum, ExactSolver, LocalRingSpec, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const CONDUCTORS: [u32; 4] = [8, 12, 15, 24];

fn coords(deg: usize) -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec((-12i64..=12, 1i64..=9), deg).prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
}

fn cyc_in(field: Arc<CycField>) -> impl Strategy<Value = CycNum> {
    coords(field.degree()).prop_map(move |c| CycNum::from_coords(&field, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
    prop::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| {
        let f = CycField::get(n);
        (cyc_in(f.clone()), cyc_in(f.clone()), cyc_in(f))
    })
}

/// Primes of `d` outside `allowed`, by trial division.
fn has_foreign_prime(d: &BigInt, allowed: u64) -> bool {
    let mut d = d.abs();
    for p in 2..=allowed {
        if allowed.is_multiple_of(p) && (2..p).all(|k| p % k != 0) {
            let bp = BigInt::from(p);
            while (&d % &bp).is_zero() {
                d /= &bp;
            }
        }
    }
    !d.is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let k = a.field().clone();
        let zero = CycNum::zero(&k);
        let one = CycNum::one(&k);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &zero, a.clone());
        prop_assert_eq!(&a * &one, a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
            prop_assert_eq!((&b * &a).checked_div(&a).unwrap(), b.clone());
        }
    }

    #[test]
    fn conj_is_an_involutive_automorphism((a, b, _c) in triple()) {
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        let n = &a * &a.conj();
        prop_assert_eq!(n.conj(), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pm_integrality_matches_denominators(
        n in prop::sample::select(CONDUCTORS.to_vec()),
        ring in prop::sample::select(vec![(2u64, 1u64), (3, 1), (5, 1), (3, 2), (5, 6), (7, 30)]),
        raw in prop::collection::vec((-30i64..=30, prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 7, 9, 10, 14, 25, 49])), 16),
    ) {
        let k = CycField::get(n);
        let c: Vec<Rat> = raw.iter().take(k.degree()).map(|&(a, d)| rat(a, d)).collect();
        let x = CycNum::from_coords(&k, &c).unwrap();
        let spec = LocalRingSpec::new(ring.0, ring.1).unwrap();
        let oracle = c.iter().all(|r| !has_foreign_prime(r.denom(), ring.0 * ring.1));
        prop_assert_eq!(is_pm_integral(&x, &spec), oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solve_round_trip(
        n in prop::sample::select(vec![8u32, 12]),
        size in 1usize..=4,
        seed in prop::collection::vec((-6i64..=6, 1i64..=4), 4 * 4 * 4 + 4 * 4),
    ) {
        let k = CycField::get(n);
        let d = k.degree();
        let mut it = seed.iter().cycle().map(|&(a, b)| rat(a, b));
        let mut next = |k: &Arc<CycField>| {
            let c: Vec<Rat> = (0..d).map(|_| it.next().unwrap()).collect();
            CycNum::from_coords(k, &c).unwrap()
        };
        let a: Vec<Vec<CycNum>> = (0..size).map(|_| (0..size).map(|_| next(&k)).collect()).collect();
        let x: Vec<CycNum> = (0..size).map(|_| next(&k)).collect();
        prop_assume!(rank(&k, &a).unwrap() == size);
        let b: Vec<CycNum> = a.iter().map(|row| row.iter().zip(&x).fold(CycNum::zero(&k), |acc, (p, q)| acc + p * q)).collect();
        let solver = ExactSolver::new(&k, &a).unwrap();
        prop_assert_eq!(solver.solve(&b).unwrap(), x);
    }
}

#[test]
fn oracle_sanity() {
    assert!(!has_foreign_prime(&BigInt::from(27), 3));
    assert!(has_foreign_prime(&BigInt::from(12), 3));
    assert!(!has_foreign_prime(&BigInt::from(12), 6));
}
