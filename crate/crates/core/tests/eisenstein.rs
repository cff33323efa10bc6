use num_bigint::BigInt;
use proptest::prelude::*;

use pcl_core::arith::primes_up_to;
use pcl_core::eisenstein::*;

fn e(a: i64, b: i64) -> EisensteinInt {
    EisensteinInt::new(a, b)
}

/// All primary `a + bζ` of norm `p`, found by solving `b² − ab + a² − p = 0`
/// for every `|a| ≤ √(4p/3)`.
fn primary_elements_of_norm(p: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let bound = ((4 * p) as f64 / 3.0).sqrt() as i64 + 1;
    for a in -bound..=bound {
        let disc = 4 * p - 3 * a * a;
        if disc < 0 {
            continue;
        }
        let r = (disc as f64).sqrt() as i64;
        for s in [r - 1, r, r + 1] {
            if s >= 0 && s * s == disc {
                for b2 in [a + s, a - s] {
                    if b2 % 2 == 0 {
                        let b = b2 / 2;
                        if a.rem_euclid(3) == 1 && b.rem_euclid(3) == 0 && !out.contains(&(a, b)) {
                            out.push((a, b));
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn split_primes() -> Vec<u64> {
    primes_up_to(100_000).into_iter().filter(|p| p % 3 == 1).collect()
}

fn coords(x: &EisensteinInt) -> (i64, i64) {
    (x.a.to_string().parse().unwrap(), x.b.to_string().parse().unwrap())
}

#[test]
fn split_matches_quadratic_search() {
    for p in split_primes() {
        let s = split_prime(p).unwrap();
        let mut got = vec![coords(&s.pi1), coords(&s.pi2)];
        got.sort();
        assert_eq!(got, primary_elements_of_norm(p as i64), "p={p}");
        assert_eq!(&s.pi1 * &s.pi2, e(p as i64, 0));
        assert_eq!(s.pi2, s.pi1.conj());
        assert!(s.pi1.is_primary() && s.pi2.is_primary());
        assert!(s.pi1.b > BigInt::from(0));
        assert_eq!(s.pi1, EisensteinInt::new(3 * s.m + 1, 3 * s.n));
    }
}

#[test]
fn norm_congruence_for_primary_splits() {
    for p in split_primes() {
        let s = split_prime(p).unwrap();
        for pi in [&s.pi1, &s.pi2] {
            let (a, b) = coords(pi);
            let (m, n) = ((a - 1) / 3, b / 3);
            assert_eq!((p as i64).rem_euclid(9), (6 * m - 3 * n + 1).rem_euclid(9), "p={p}");
        }
    }
}

#[test]
fn zeta_symbol_trivial_only_for_one_mod_nine() {
    for p in split_primes() {
        let s = split_prime(p).unwrap();
        let z = zeta3_symbol(&s);
        // the closed form agrees with Euler's criterion at both primes
        assert_eq!(cubic_symbol(&EisensteinInt::zeta(), &s.pi1).unwrap(), z, "p={p}");
        assert_eq!(cubic_symbol(&EisensteinInt::zeta(), &s.pi2).unwrap(), z, "p={p}");
        if z.is_trivial() {
            assert_eq!(p % 9, 1, "p={p}");
        }
        assert_eq!(qstar(p).unwrap(), u8::from(p % 9 == 1));
    }
}

#[test]
fn three_is_minus_zeta_squared_lambda_squared() {
    let z = EisensteinInt::zeta();
    let l = EisensteinInt::lambda();
    assert_eq!(-&(&(&z * &z) * &(&l * &l)), e(3, 0));
    assert_eq!(lambda_valuation(&e(3, 0)).unwrap(), 2);
}

#[test]
fn ambiguous_order_is_three_for_all_split_primes() {
    for p in primes_up_to(20_000).into_iter().filter(|p| p % 3 == 1) {
        assert_eq!(ambiguous_order_formula(ramified_count(p), qstar(p).unwrap()).unwrap(), 3);
    }
}

/// A primary prime: a split factor of a prime ≡ 1 (mod 3) or `−q` for an
/// inert `q ≡ 2 (mod 3)`.
fn primary_prime(idx: usize, which: bool) -> EisensteinInt {
    let primes: Vec<u64> = primes_up_to(3000).into_iter().filter(|&p| p != 3).collect();
    let p = primes[idx % primes.len()];
    if p % 3 == 1 {
        let s = split_prime(p).unwrap();
        if which {
            s.pi1
        } else {
            s.pi2
        }
    } else {
        e(-(p as i64), 0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn norm_is_multiplicative(a in any::<i64>(), b in any::<i64>(), c in any::<i64>(), d in any::<i64>()) {
        let (x, y) = (e(a, b), e(c, d));
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
        prop_assert!(x.norm() >= BigInt::from(0));
        prop_assert_eq!(x.norm() == BigInt::from(0), x.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]
    #[test]
    fn product_uses_zeta_squared_relation(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bd(−1 − ζ)
        prop_assert_eq!(&e(a, b) * &e(c, d), e(a * c - b * d, a * d + b * c - b * d));
    }

    #[test]
    fn exactly_one_primary_associate(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let x = e(a, b);
        if x.norm() % BigInt::from(3) == BigInt::from(0) {
            prop_assert!(primary_associate(&x).is_err());
            return Ok(());
        }
        let primary: Vec<EisensteinInt> = EisensteinInt::units().iter().map(|u| u * &x).filter(|y| y.is_primary()).collect();
        prop_assert_eq!(primary.len(), 1);
        prop_assert_eq!(&primary[0], &primary_associate(&x).unwrap());
    }

    #[test]
    fn lambda_valuation_is_exact(a in -100_000i64..100_000, b in -100_000i64..100_000) {
        let x = e(a, b);
        prop_assume!(!x.is_zero());
        let v = lambda_valuation(&x).unwrap();
        let l = EisensteinInt::lambda();
        let mut y = x.clone();
        for _ in 0..v {
            y = y.div_exact(&l).expect("λ divides");
        }
        prop_assert!(y.div_exact(&l).is_none());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn euler_criterion_two_ways(a in -1_000_000i64..1_000_000, b in -1_000_000i64..1_000_000, idx in 0usize..1000, which in any::<bool>()) {
        let pi = primary_prime(idx, which);
        let alpha = e(a, b);
        prop_assume!(!pi.divides(&alpha));
        prop_assert_eq!(cubic_symbol(&alpha, &pi).unwrap(), cubic_symbol_direct(&alpha, &pi).unwrap());
    }

    #[test]
    fn symbol_is_multiplicative(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000, idx in 0usize..1000) {
        let pi = primary_prime(idx, true);
        let (x, y) = (e(a, b), e(c, d));
        prop_assume!(!pi.divides(&x) && !pi.divides(&y));
        prop_assert_eq!(cubic_symbol(&(&x * &y), &pi).unwrap(), cubic_symbol(&x, &pi).unwrap() * cubic_symbol(&y, &pi).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]
    #[test]
    fn cubic_reciprocity(i in 0usize..430, j in 0usize..430, w1 in any::<bool>(), w2 in any::<bool>()) {
        let (pi, rho) = (primary_prime(i, w1), primary_prime(j, w2));
        prop_assume!(pi.norm() != rho.norm());
        prop_assert_eq!(cubic_symbol(&pi, &rho).unwrap(), cubic_symbol(&rho, &pi).unwrap());
    }
}

#[test]
fn rational_symbol_matches_cube_roots() {
    for p in primes_up_to(400).into_iter().filter(|p| p % 3 == 1) {
        let cubes: Vec<u64> = (1..p).map(|x| x * x % p * x % p).collect();
        for c in 1..p.min(40) {
            assert_eq!(rational_cubic_symbol_is_trivial(c as i64, p).unwrap(), cubes.contains(&c), "c={c} p={p}");
        }
    }
}
