//! Library results against independent computations: value-level recursion,
//! closed-form group orders, and direct substitution.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use thetak::arith::{int, is_p_unit, rat, valuation, Prime, Rational};
use thetak::free::{free_q, specialize, Assignment, ThetaPoly};
use thetak::kk::{einvariant, is_numerical, q, theta, theta_basis_expand, Family, NumFun, ThetaBasis};
use thetak::suites::{random_numfun, random_unit};

fn prime(p: u32) -> Prime {
    Prime::new(p).unwrap()
}

/// θₙ(a) by iterating x ↦ (x − xᵖ)/p on the value itself.
fn theta_value(p: Prime, n: u32, start: Rational) -> Rational {
    let mut x = start;
    for _ in 0..n {
        x = (&x - num_traits::pow(x.clone(), p.get() as usize)) / Rational::from_integer(p.big());
    }
    x
}

#[test]
fn theta_families_agree_with_value_recursion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in [2, 3, 5] {
        let p = prime(p);
        let top = if p.get() == 5 { 3 } else { 5 };
        for n in 0..=top {
            let f = theta(p, n, Family::Theta).unwrap();
            for _ in 0..10 {
                let a = random_unit(&mut rng, p);
                assert_eq!(f.eval(&a).unwrap(), theta_value(p, n, a.clone()), "p = {p}, n = {n}, a = {a}");
            }
        }
    }
    let p = Prime::TWO;
    for n in 0..=6 {
        let f = theta(p, n, Family::BigTheta).unwrap();
        for a in [-3, 5, 7, 11, 13] {
            // Θ₀(a) = (1 − a)/2
            let start = rat(1 - a, 2);
            assert_eq!(f.eval(&int(a)).unwrap(), theta_value(p, n, start), "n = {n}, a = {a}");
        }
    }
}

/// Order of the image-of-J summand in degree 2n − 1.
fn image_of_j_order(p: Prime, n: u32) -> BigInt {
    let v = |m: u32| valuation(&int(m as i64), p).finite().unwrap() as u32;
    match p.get() {
        2 if n % 2 == 1 => BigInt::from(2),
        2 => p.pow(v(n) + 2),
        q if n.is_multiple_of(q - 1) => p.pow(1 + v(n / (q - 1))),
        _ => BigInt::one(),
    }
}

#[test]
fn einvariant_orders_match_image_of_j() {
    for n in 1..=16 {
        let e = einvariant(Prime::TWO, n, 6, 16).unwrap();
        assert_eq!(e.order(), image_of_j_order(Prime::TWO, n), "p = 2, n = {n}");
    }
    for (p, top) in [(3, 18), (5, 20)] {
        for n in 1..=top {
            let e = einvariant(prime(p), n, 2, 6).unwrap();
            assert_eq!(e.order(), image_of_j_order(prime(p), n), "p = {p}, n = {n}");
        }
    }
}

#[test]
fn einvariant_generators_have_the_claimed_order() {
    // ord·g must be (1 − wⁿ)·c with c a p-adic unit constant.
    for (p, n) in [(2, 1), (2, 2), (2, 4), (2, 6), (3, 2), (3, 6), (5, 4)] {
        let p = prime(p);
        let level = if p.get() == 2 { 4 } else { 2 };
        let e = einvariant(p, n, level, 8).unwrap();
        let one_minus = thetak::arith::Laurent::from_terms([(0, int(1)), (n as i64, int(-1))]);
        let scaled = e.generator.body().scale(&Rational::from_integer(e.order()));
        let c = scaled.div_exact(&one_minus).and_then(|c| c.as_constant()).expect("multiple of 1 - w^n");
        assert!(is_p_unit(&c, p), "p = {p}, n = {n}: c = {c}");
    }
}

#[test]
fn basis_expansions_are_exact_modulo_p_to_the_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, family, level, precision) in [(2, Family::BigTheta, 5, 12), (3, Family::Theta, 3, 6), (5, Family::Theta, 2, 3)] {
        let p = prime(p);
        let basis = ThetaBasis::new(p, family, level).unwrap();
        for _ in 0..8 {
            let f = random_numfun(&mut rng, p);
            let expansion = theta_basis_expand(&f, &basis, precision).unwrap();
            let residual = (f.body() - &expansion.to_laurent(&basis)).scale(&Rational::new(BigInt::one(), p.pow(precision)));
            assert!(is_numerical(&residual, p).numerical, "p = {p}, f = {f}");
        }
    }
}

#[test]
fn specialization_is_a_theta_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in [2, 3, 5] {
        let p = prime(p);
        for _ in 0..10 {
            let target = random_numfun(&mut rng, p);
            let assignment: Assignment = [("x".to_string(), target.clone())].into();
            let mut e = ThetaPoly::zero();
            for _ in 0..rng.gen_range(1..=3) {
                let m = ThetaPoly::var("x", rng.gen_range(0..=1)).pow(rng.gen_range(1..=2));
                e = e.add(&m.scale(&int(rng.gen_range(-3..=3))));
            }
            let lhs = specialize(&free_q(&e, p).unwrap(), &assignment, p).unwrap();
            let rhs = q(&specialize(&e, &assignment, p).unwrap());
            assert_eq!(lhs, rhs, "p = {p}, x -> {target}");
        }
    }
}

#[test]
fn q_is_not_additive() {
    // Q(1 + 1) = (2 − 2ᵖ)/p ≠ 0 = Q1 + Q1: the correction term is essential.
    for p in [2, 3, 5] {
        let p = prime(p);
        let two = NumFun::constant(p, int(2)).unwrap();
        let expected = (int(2) - num_traits::pow(int(2), p.get() as usize)) / Rational::from_integer(p.big());
        assert_eq!(q(&two).body().as_constant().unwrap(), expected);
        assert!(!expected.is_zero());
    }
}
