//! Exact rationals, Laurent polynomial rings over ℚ, truncated p-adic numbers
//! and modular linear algebra over ℤ/pᴺ.

mod laurent;
mod multi;
mod padic;
pub mod zmod;

pub use laurent::Laurent;
pub(crate) use laurent::{format_term, power_string, rational_pow};
pub use multi::{Laurent2, Laurent3, LaurentN};
pub use padic::PadicNum;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced fractions with a positive denominator.
pub type Rational = BigRational;

/// A rational prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        if p >= 2 && (2..).take_while(|d: &u32| d * d <= p).all(|d| !p.is_multiple_of(d)) {
            Ok(Prime(p))
        } else {
            Err(Error::NotPrime(p as u64))
        }
    }

    pub const TWO: Prime = Prime(2);

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn big(self) -> BigInt {
        BigInt::from(self.0)
    }

    /// pᵏ as a big integer.
    pub fn pow(self, k: u32) -> BigInt {
        num_traits::pow(self.big(), k as usize)
    }
}

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A p-adic valuation, with +∞ for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Valuation of a nonzero integer; panics on zero.
pub(crate) fn int_valuation(n: &BigInt, p: Prime) -> i64 {
    debug_assert!(!n.is_zero());
    if p.0 == 2 {
        return n.trailing_zeros().expect("nonzero") as i64;
    }
    let pb = p.big();
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn valuation(x: &Rational, p: Prime) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(int_valuation(x.numer(), p) - int_valuation(x.denom(), p))
    }
}

pub fn is_p_integral(x: &Rational, p: Prime) -> bool {
    x.denom().is_one() || !x.denom().is_multiple_of(&p.big())
}

pub fn is_p_unit(x: &Rational, p: Prime) -> bool {
    valuation(x, p) == Valuation::Finite(0)
}

pub(crate) fn require_unit(x: &Rational, p: Prime) -> Result<()> {
    if is_p_unit(x, p) {
        Ok(())
    } else {
        Err(Error::NotUnit { value: x.to_string(), p: p.0 })
    }
}

/// The Fermat quotient (a − aᵖ)/p of a p-integral rational.
pub fn fermat_quotient(a: &Rational, p: Prime) -> Result<Rational> {
    if !is_p_integral(a, p) {
        return Err(Error::NotPLocal { value: a.to_string(), p: p.0 });
    }
    let ap = num_traits::pow(a.clone(), p.0 as usize);
    Ok((a - ap) / Rational::from_integer(p.big()))
}

/// Representatives in [1, pᵏ] of the units of ℤ/pᵏ.
pub fn unit_residues(p: Prime, k: u32) -> Vec<u64> {
    assert!(k >= 1, "unit_residues needs k >= 1");
    let m = (p.0 as u64).checked_pow(k).expect("p^k overflows u64");
    (1..=m).filter(|a| a % p.0 as u64 != 0).collect()
}

/// Legendre's formula: v_p(n!) = (n − s_p(n))/(p − 1).
pub fn factorial_valuation(n: u64, p: Prime) -> u64 {
    let p = p.0 as u64;
    let (mut digits, mut m) = (0, n);
    while m > 0 {
        digits += m % p;
        m /= p;
    }
    (n - digits) / (p - 1)
}

/// v_p of the multinomial coefficient (p^{r+1}; p^r, …, p^r) with p equal parts.
pub fn multinomial_valuation(p: Prime, r: u32) -> u64 {
    let top = (p.0 as u64).pow(r + 1);
    let part = (p.0 as u64).pow(r);
    factorial_valuation(top, p) - p.0 as u64 * factorial_valuation(part, p)
}

/// Modular inverse of a unit, or `None` when `a` is not invertible.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Reduces a p-integral rational modulo m = pᵏ.
pub fn rational_mod(x: &Rational, m: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(x.denom(), m)?;
    Some((x.numer() * inv).mod_floor(m))
}

/// Symmetric lift of a residue into (−m/2, m/2].
pub(crate) fn symmetric_lift(r: &BigInt, m: &BigInt) -> BigInt {
    let r = r.mod_floor(m);
    if (&r << 1u32) > *m {
        r - m
    } else {
        r
    }
}

/// `n` or `n/d`, the canonical text of a rational.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Joins signed terms `c*body` as "a - b + c", or "0" when empty.
pub(crate) fn join_terms<I: IntoIterator<Item = (Rational, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (i, (c, body)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&format_term(&c.abs(), &body));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn primes() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(97).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn fermat_quotient_examples() {
        assert_eq!(fermat_quotient(&int(1), p(2)).unwrap(), int(0));
        assert_eq!(fermat_quotient(&int(3), p(2)).unwrap(), int(-3));
        assert_eq!(fermat_quotient(&rat(1, 3), p(2)).unwrap(), rat(1, 9));
        assert!(matches!(fermat_quotient(&rat(1, 2), p(2)), Err(Error::NotPLocal { .. })));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&int(80), p(2)), Valuation::Finite(4));
        assert_eq!(valuation(&int(0), p(3)), Valuation::Infinite);
        assert_eq!(valuation(&rat(1, 2), p(2)), Valuation::Finite(-1));
        assert_eq!(valuation(&rat(-50, 27), p(3)), Valuation::Finite(-3));
    }

    #[test]
    fn unit_residue_examples() {
        assert_eq!(unit_residues(p(2), 2), vec![1, 3]);
        assert_eq!(unit_residues(p(3), 1), vec![1, 2]);
        assert_eq!(unit_residues(p(2), 1), vec![1]);
        for (q, k) in [(2u32, 5u32), (3, 3), (5, 2), (7, 2)] {
            let expected = q.pow(k - 1) * (q - 1);
            assert_eq!(unit_residues(p(q), k).len() as u32, expected);
        }
    }

    fn factorial(n: u64) -> BigInt {
        (1..=n).map(BigInt::from).product()
    }

    fn brute_multinomial_valuation(q: u32, r: u32) -> i64 {
        let top = factorial((q as u64).pow(r + 1));
        let part = factorial((q as u64).pow(r));
        let coeff = top / num_traits::pow(part, q as usize);
        int_valuation(&coeff, p(q))
    }

    #[test]
    fn multinomial_valuation_matches_factorial_oracle() {
        // (2; 1, 1) = 2, (4; 2, 2) = 6, (3; 1, 1, 1) = 6
        assert_eq!(brute_multinomial_valuation(2, 0), 1);
        assert_eq!(brute_multinomial_valuation(2, 1), 1);
        assert_eq!(brute_multinomial_valuation(3, 0), 1);
        for (q, rmax) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            for r in 0..=rmax {
                let oracle = brute_multinomial_valuation(q, r);
                assert_eq!(oracle, 1, "p={q} r={r}");
                assert_eq!(multinomial_valuation(p(q), r) as i64, oracle);
            }
        }
    }

    #[test]
    fn legendre_matches_direct_factorial() {
        for q in [2, 3, 5] {
            for n in 0..60u64 {
                let f = factorial(n);
                assert_eq!(factorial_valuation(n, p(q)) as i64, int_valuation(&f, p(q)));
            }
        }
    }

    #[test]
    fn symmetric_lift_range() {
        let m = BigInt::from(16);
        assert_eq!(symmetric_lift(&BigInt::from(13), &m), BigInt::from(-3));
        assert_eq!(symmetric_lift(&BigInt::from(8), &m), BigInt::from(8));
        assert_eq!(symmetric_lift(&BigInt::from(-3), &m), BigInt::from(-3));
    }

    proptest! {
        #[test]
        fn fermat_quotient_is_p_integral(n in -500i64..500, d in 1i64..500, q in prop::sample::select(vec![2u32, 3, 5, 7])) {
            let a = rat(n, d);
            let pr = p(q);
            prop_assume!(is_p_integral(&a, pr));
            let fq = fermat_quotient(&a, pr).unwrap();
            prop_assert!(is_p_integral(&fq, pr));
        }

        #[test]
        fn rational_mod_is_a_ring_map(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let m = BigInt::from(3u32.pow(7));
            let pr = p(3);
            let x = rat(a, b);
            let y = rat(c, d);
            prop_assume!(is_p_integral(&x, pr) && is_p_integral(&y, pr));
            let xm = rational_mod(&x, &m).unwrap();
            let ym = rational_mod(&y, &m).unwrap();
            prop_assert_eq!(rational_mod(&(&x * &y), &m).unwrap(), (&xm * &ym).mod_floor(&m));
            prop_assert_eq!(rational_mod(&(&x + &y), &m).unwrap(), (&xm + &ym).mod_floor(&m));
            prop_assert!(xm.to_i64().is_some());
        }
    }
}
