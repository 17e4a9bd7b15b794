use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{int_valuation, mod_inverse, rational_mod, valuation, Prime, Rational, Valuation};
use crate::error::{Error, Result};

/// Absolute precision used for exact zeros.
const EXACT: i64 = i64::MAX / 8;

/// A p-adic number known modulo a power of p.
///
/// The value is `p^offset · residue`, determined modulo `p^(offset + precision)`.
/// Nonzero residues are kept prime to p; a zero residue means the value is
/// indistinguishable from 0 at the stored absolute precision.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PadicNum {
    p: Prime,
    offset: i64,
    precision: i64,
    residue: BigInt,
}

impl PadicNum {
    /// Zero known modulo `p^abs`.
    pub fn zero(p: Prime, abs: i64) -> Self {
        PadicNum { p, offset: abs, precision: 0, residue: BigInt::zero() }
    }

    pub fn one(p: Prime, abs: i64) -> Self {
        Self::from_parts(p, 0, abs, BigInt::one())
    }

    /// `q` known modulo `p^abs`.
    pub fn from_rational(q: &Rational, p: Prime, abs: i64) -> Result<Self> {
        match valuation(q, p) {
            Valuation::Infinite => Ok(Self::zero(p, abs)),
            Valuation::Finite(v) if v >= abs => Ok(Self::zero(p, abs)),
            Valuation::Finite(v) => {
                let unit = q / rational_pow_p(p, v);
                let m = p.pow((abs - v) as u32);
                let residue = rational_mod(&unit, &m).expect("unit part is p-integral");
                Ok(Self::from_parts(p, v, abs - v, residue))
            }
        }
    }

    /// `q` with `rel` significant p-adic digits (exact zero for q = 0).
    pub fn from_rational_relative(q: &Rational, p: Prime, rel: i64) -> Result<Self> {
        match valuation(q, p) {
            Valuation::Infinite => Ok(Self::zero(p, EXACT)),
            Valuation::Finite(v) => Self::from_rational(q, p, v + rel),
        }
    }

    pub fn from_integer(n: i64, p: Prime, abs: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)), p, abs).expect("integers are p-integral")
    }

    fn from_parts(p: Prime, offset: i64, precision: i64, residue: BigInt) -> Self {
        let mut x = PadicNum { p, offset, precision, residue };
        x.normalize();
        x
    }

    fn normalize(&mut self) {
        if self.precision <= 0 {
            *self = Self::zero(self.p, self.offset + self.precision.max(0));
            return;
        }
        let m = self.p.pow(self.precision as u32);
        self.residue = self.residue.mod_floor(&m);
        if self.residue.is_zero() {
            *self = Self::zero(self.p, self.offset + self.precision);
            return;
        }
        let v = int_valuation(&self.residue, self.p);
        if v > 0 {
            self.residue /= self.p.pow(v as u32);
            self.offset += v;
            self.precision -= v;
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// The value is known modulo p^absolute_precision.
    pub fn absolute_precision(&self) -> i64 {
        self.offset + self.precision
    }

    pub fn relative_precision(&self) -> i64 {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !self.is_zero() && self.offset == 0
    }

    /// Valuation; +∞ when the value cannot be told apart from zero.
    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::Finite(self.offset)
        }
    }

    /// The value reduced modulo pᵏ, provided it is known that far and lies in ℤ_p.
    pub fn residue_mod(&self, k: u32) -> Result<BigInt> {
        if self.absolute_precision() < k as i64 {
            return Err(Error::PrecisionInsufficient { needed: k as i64, available: self.absolute_precision() });
        }
        if self.is_zero() || self.offset >= k as i64 {
            return Ok(BigInt::zero());
        }
        if self.offset < 0 {
            return Err(Error::NotPLocal { value: self.to_string(), p: self.p.get() });
        }
        let m = self.p.pow(k);
        Ok((&self.residue * self.p.pow(self.offset as u32)).mod_floor(&m))
    }

    /// Whether the exact rational `q` is congruent to this value at its precision.
    pub fn agrees_with(&self, q: &Rational) -> bool {
        let diff = q - self.to_rational_lift();
        match valuation(&diff, self.p) {
            Valuation::Infinite => true,
            Valuation::Finite(v) => v >= self.absolute_precision(),
        }
    }

    /// The canonical rational representative p^offset · residue.
    pub fn to_rational_lift(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        Rational::from_integer(self.residue.clone()) * rational_pow_p(self.p, self.offset)
    }

    pub fn add(&self, other: &PadicNum) -> PadicNum {
        assert_eq!(self.p, other.p, "mixed primes");
        let abs = self.absolute_precision().min(other.absolute_precision());
        let off = self.offset.min(other.offset);
        if abs <= off {
            return Self::zero(self.p, abs);
        }
        let lift = |x: &PadicNum| -> BigInt {
            if x.is_zero() || x.offset >= abs {
                BigInt::zero()
            } else {
                &x.residue * self.p.pow((x.offset - off) as u32)
            }
        };
        Self::from_parts(self.p, off, abs - off, lift(self) + lift(other))
    }

    pub fn neg(&self) -> PadicNum {
        let mut out = self.clone();
        if !out.is_zero() {
            out.residue = (-&out.residue).mod_floor(&self.p.pow(self.precision as u32));
        }
        out
    }

    pub fn sub(&self, other: &PadicNum) -> PadicNum {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNum) -> PadicNum {
        assert_eq!(self.p, other.p, "mixed primes");
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Self::zero(self.p, sat_add(self.absolute_precision(), other.absolute_precision())),
            (true, false) => Self::zero(self.p, sat_add(self.absolute_precision(), other.offset)),
            (false, true) => Self::zero(self.p, sat_add(other.absolute_precision(), self.offset)),
            (false, false) => {
                let prec = self.precision.min(other.precision);
                Self::from_parts(self.p, self.offset + other.offset, prec, &self.residue * &other.residue)
            }
        }
    }

    pub fn inverse(&self) -> Result<PadicNum> {
        if self.is_zero() {
            return Err(Error::PrecisionInsufficient { needed: self.absolute_precision() + 1, available: self.absolute_precision() });
        }
        let m = self.p.pow(self.precision as u32);
        let inv = mod_inverse(&self.residue, &m).expect("residue is a unit");
        Ok(Self::from_parts(self.p, -self.offset, self.precision, inv))
    }

    /// Division by pᵏ: exact, but the absolute precision drops by k.
    pub fn div_p_power(&self, k: i64) -> PadicNum {
        let mut out = self.clone();
        out.offset -= k;
        out
    }

    pub fn pow(&self, n: u32) -> PadicNum {
        if n == 0 {
            return Self::one(self.p, self.precision.max(1));
        }
        let mut result: Option<PadicNum> = None;
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            n >>= 1;
            if n == 0 {
                return result.expect("n > 0");
            }
            base = base.mul(&base);
        }
    }

    /// The θ-operation (x − xᵖ)/p; one digit of absolute precision is lost.
    pub fn theta(&self) -> PadicNum {
        self.sub(&self.pow(self.p.get())).div_p_power(1)
    }
}

fn sat_add(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

fn rational_pow_p(p: Prime, k: i64) -> Rational {
    if k >= 0 {
        Rational::from_integer(p.pow(k as u32))
    } else {
        Rational::new(BigInt::one(), p.pow((-k) as u32))
    }
}

impl fmt::Display for PadicNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abs = self.absolute_precision();
        if self.is_zero() {
            if abs >= EXACT {
                return write!(f, "0");
            }
            return write!(f, "O({}^{})", self.p, abs);
        }
        if self.offset >= 0 {
            write!(f, "{} + O({}^{})", &self.residue * self.p.pow(self.offset as u32), self.p, abs)
        } else {
            write!(f, "{}/{}^{} + O({}^{})", self.residue, self.p, -self.offset, self.p, abs)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn construction_and_reduction() {
        let x = PadicNum::from_rational(&rat(1, 3), p(2), 8).unwrap();
        assert_eq!(x.residue_mod(8).unwrap(), BigInt::from(171));
        assert!(x.is_unit());
        let y = PadicNum::from_rational(&int(80), p(2), 10).unwrap();
        assert_eq!(y.valuation(), Valuation::Finite(4));
        assert_eq!(y.relative_precision(), 6);
        let z = PadicNum::from_rational(&int(1024), p(2), 10).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.valuation(), Valuation::Infinite);
    }

    #[test]
    fn division_by_p_lowers_precision() {
        let x = PadicNum::from_rational(&int(6), p(2), 10).unwrap();
        let y = x.div_p_power(1);
        assert_eq!(y.absolute_precision(), 9);
        assert!(y.agrees_with(&int(3)));
        let z = y.div_p_power(3);
        assert_eq!(z.valuation(), Valuation::Finite(-3));
        assert!(z.residue_mod(2).is_err());
    }

    #[test]
    fn theta_operation_loses_one_digit() {
        let x = PadicNum::from_rational(&int(3), p(2), 12).unwrap();
        let t = x.theta();
        assert_eq!(t.absolute_precision(), 11);
        assert!(t.agrees_with(&int(-3)));
        let u = PadicNum::from_rational(&int(7), p(3), 9).unwrap().theta();
        // (7 - 343)/3 = -112
        assert!(u.agrees_with(&int(-112)));
        assert_eq!(u.absolute_precision(), 8);
    }

    #[test]
    fn residue_requires_precision() {
        let x = PadicNum::from_rational(&int(5), p(2), 4).unwrap();
        assert_eq!(
            x.residue_mod(6),
            Err(Error::PrecisionInsufficient { needed: 6, available: 4 })
        );
    }

    proptest! {
        #[test]
        fn agrees_with_exact_arithmetic(
            a in -10_000i64..10_000, b in 1i64..300, c in -10_000i64..10_000, d in 1i64..300,
            q in prop::sample::select(vec![2u32, 3, 5]), n in 4i64..20,
        ) {
            let pr = p(q);
            let x = rat(a, b);
            let y = rat(c, d);
            prop_assume!(crate::arith::is_p_integral(&x, pr) && crate::arith::is_p_integral(&y, pr));
            let px = PadicNum::from_rational(&x, pr, n).unwrap();
            let py = PadicNum::from_rational(&y, pr, n).unwrap();
            let m = pr.pow(n as u32);
            let reduce = |r: &Rational| rational_mod(r, &m).unwrap();
            prop_assert_eq!(px.add(&py).residue_mod(n as u32).unwrap(), reduce(&(&x + &y)));
            prop_assert_eq!(px.sub(&py).residue_mod(n as u32).unwrap(), reduce(&(&x - &y)));
            prop_assert_eq!(px.mul(&py).residue_mod(n as u32).unwrap(), reduce(&(&x * &y)));
            prop_assert!(px.pow(3).agrees_with(&(&x * &x * &x)));
            if crate::arith::is_p_unit(&y, pr) {
                prop_assert_eq!(px.mul(&py.inverse().unwrap()).residue_mod(n as u32).unwrap(), reduce(&(&x / &y)));
            }
        }
    }
}
