use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, valuation, PadicNum, Prime, Rational};
use crate::error::{Error, Result};

/// Above this many coefficient products, multiplication packs both operands
/// into single big integers (Kronecker substitution).
const KRONECKER_THRESHOLD: usize = 2048;

/// An element of ℚ[w, w⁻¹], stored sparsely with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, Rational>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The coordinate function w.
    pub fn w() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(iter: I) -> Self {
        let mut out = Laurent::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, exp: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// maxExp − minExp, or 0 for the zero polynomial.
    pub fn span(&self) -> u64 {
        match (self.min_exp(), self.max_exp()) {
            (Some(a), Some(b)) => (b - a) as u64,
            _ => 0,
        }
    }

    /// The value if this is a constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    pub fn has_only_even_exponents(&self) -> bool {
        self.terms.keys().all(|e| e % 2 == 0)
    }

    pub fn scale(&self, c: &Rational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Multiplies by wᵏ.
    pub fn shift(&self, k: i64) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// w ↦ a·w.
    pub fn scale_var(&self, a: &Rational) -> Laurent {
        assert!(!a.is_zero(), "cannot rescale the variable by zero");
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c * rational_pow(a, *e)))
                .collect(),
        }
    }

    /// w ↦ w⁻¹.
    pub fn invert_var(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// w ↦ wᵏ.
    pub fn pow_var(&self, k: i64) -> Laurent {
        assert!(k != 0, "w -> w^0 is not a ring endomorphism of interest");
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// Largest e ≥ 0 with pᵉ appearing in some coefficient's denominator.
    pub fn denominator_exponent(&self, p: Prime) -> u64 {
        self.terms
            .values()
            .filter_map(|c| valuation(c, p).finite())
            .map(|v| (-v).max(0) as u64)
            .max()
            .unwrap_or(0)
    }

    pub fn pow(&self, n: u32) -> Laurent {
        let mut result = Laurent::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient in ℚ[w, w⁻¹], or `None` when `divisor` does not divide.
    pub fn div_exact(&self, divisor: &Laurent) -> Option<Laurent> {
        let dmin = divisor.min_exp()?;
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let fmin = self.min_exp().unwrap();
        // Both shifted to polynomials with nonzero constant term in the divisor.
        let g: Vec<Rational> = dense(&divisor.shift(-dmin));
        let mut r: Vec<Rational> = dense(&self.shift(-fmin));
        if r.len() < g.len() {
            return None;
        }
        let lead = g.last().unwrap().clone();
        let mut q = vec![Rational::zero(); r.len() - g.len() + 1];
        for i in (0..q.len()).rev() {
            let c = &r[i + g.len() - 1] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, gj) in g.iter().enumerate() {
                r[i + j] -= &c * gj;
            }
            q[i] = c;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Laurent::from_terms(
            q.into_iter().enumerate().map(|(i, c)| (i as i64 + fmin - dmin, c)),
        ))
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        if x.is_zero() {
            if self.min_exp().unwrap() < 0 {
                return Err(Error::NegativePowerAtNonUnit(x.to_string()));
            }
            return Ok(self.coeff(0));
        }
        Ok(DenseInt::from_laurent(self).eval(x))
    }

    /// Exact evaluation at many points, sharing the integer form.
    pub fn eval_many(&self, xs: &[Rational]) -> Result<Vec<Rational>> {
        if self.is_zero() || xs.iter().any(Zero::is_zero) {
            return xs.iter().map(|x| self.eval(x)).collect();
        }
        let dense = DenseInt::from_laurent(self);
        Ok(xs.iter().map(|x| dense.eval(x)).collect())
    }

    /// Evaluation at a truncated p-adic number; precision losses from
    /// coefficients with negative valuation are tracked in the result.
    pub fn eval_padic(&self, x: &PadicNum) -> Result<PadicNum> {
        let p = x.prime();
        if self.min_exp().is_some_and(|e| e < 0) && !x.is_unit() {
            return Err(Error::NegativePowerAtNonUnit(x.to_string()));
        }
        let inv = if self.min_exp().is_some_and(|e| e < 0) { Some(x.inverse()?) } else { None };
        let rel = x.relative_precision().max(1);
        let mut acc: Option<PadicNum> = None;
        for (e, c) in self.terms() {
            let xe = if e >= 0 { x.pow(e as u32) } else { inv.as_ref().unwrap().pow((-e) as u32) };
            let term = PadicNum::from_rational_relative(c, p, rel)?.mul(&xe);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        Ok(acc.unwrap_or_else(|| PadicNum::zero(p, x.absolute_precision())))
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&format_term(&mag, &power_string(var, e)));
        }
        out
    }
}

pub(crate) fn power_string(var: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// `c*body` with unit coefficients suppressed; `mag` is nonnegative.
pub(crate) fn format_term(mag: &Rational, body: &str) -> String {
    if body.is_empty() {
        fmt_rational(mag)
    } else if mag.is_one() {
        body.to_string()
    } else {
        format!("{}*{}", fmt_rational(mag), body)
    }
}

pub(crate) fn rational_pow(a: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(a.clone(), e as usize)
    } else {
        num_traits::pow(a.recip(), (-e) as usize)
    }
}

fn dense(f: &Laurent) -> Vec<Rational> {
    let n = f.max_exp().map_or(0, |m| m + 1) as usize;
    let mut v = vec![Rational::zero(); n];
    for (e, c) in f.terms() {
        v[e as usize] = c.clone();
    }
    v
}

/// A Laurent polynomial as integer coefficients over a common denominator:
/// f = w^offset · Σ coeffs[i]·wⁱ / denom.
#[derive(Clone, Debug)]
pub(crate) struct DenseInt {
    pub offset: i64,
    pub coeffs: Vec<BigInt>,
    pub denom: BigInt,
}

impl DenseInt {
    pub fn from_laurent(f: &Laurent) -> Self {
        let offset = f.min_exp().unwrap_or(0);
        let denom = f.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut coeffs = vec![BigInt::zero(); f.span() as usize + 1];
        for (e, c) in f.terms() {
            coeffs[(e - offset) as usize] = c.numer() * (&denom / c.denom());
        }
        DenseInt { offset, coeffs, denom }
    }

    pub fn into_laurent(self) -> Laurent {
        let DenseInt { offset, coeffs, denom } = self;
        Laurent {
            terms: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (offset + i as i64, Rational::new(c, denom.clone())))
                .collect(),
        }
    }

    /// Exact value at a nonzero rational x.
    pub fn eval(&self, x: &Rational) -> Rational {
        let (n, d) = (x.numer(), x.denom());
        let deg = self.coeffs.len() - 1;
        // Σ a_j n^j d^(deg-j) by Horner, carrying the d powers.
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for (j, a) in self.coeffs.iter().enumerate().rev() {
            if j == deg {
                acc = a.clone();
            } else {
                dpow *= d;
                acc = acc * n + a * &dpow;
            }
        }
        let mut value = Rational::new(acc, &self.denom * dpow);
        if self.offset != 0 {
            value *= rational_pow(x, self.offset);
        }
        value
    }
}

fn mul_schoolbook(a: &DenseInt, b: &DenseInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|x| x.bits()).max().unwrap_or(0)
}

fn pack(coeffs: &[BigInt], slot: usize) -> BigInt {
    let words = (coeffs.len() * slot).div_ceil(32) + 2;
    let mut pos = vec![0u32; words];
    let mut neg = vec![0u32; words];
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let buf = if c.is_negative() { &mut neg } else { &mut pos };
        let base = i * slot;
        for (j, d) in c.magnitude().to_u32_digits().into_iter().enumerate() {
            let bit = base + 32 * j;
            let (w, s) = (bit / 32, bit % 32);
            buf[w] |= d << s;
            if s > 0 {
                buf[w + 1] |= d >> (32 - s);
            }
        }
    }
    BigInt::from_biguint(Sign::Plus, BigUint::new(pos)) - BigInt::from_biguint(Sign::Plus, BigUint::new(neg))
}

fn extract_bits(limbs: &[u32], start: usize, len: usize) -> BigUint {
    let nwords = len.div_ceil(32);
    let mut out = Vec::with_capacity(nwords);
    let get = |i: usize| limbs.get(i).copied().unwrap_or(0);
    for k in 0..nwords {
        let bit = start + 32 * k;
        let (w, s) = (bit / 32, bit % 32);
        let mut word = get(w) >> s;
        if s > 0 {
            word |= get(w + 1) << (32 - s);
        }
        out.push(word);
    }
    let rem = len % 32;
    if rem != 0 {
        if let Some(last) = out.last_mut() {
            *last &= (1u32 << rem) - 1;
        }
    }
    BigUint::new(out)
}

fn mul_kronecker(a: &DenseInt, b: &DenseInt) -> Vec<BigInt> {
    let n = a.coeffs.len() + b.coeffs.len() - 1;
    let growth = 64 - (a.coeffs.len().min(b.coeffs.len()) as u64).leading_zeros() as u64;
    let slot = (max_bits(&a.coeffs) + max_bits(&b.coeffs) + growth + 2) as usize;
    let product = if std::ptr::eq(a, b) {
        let x = pack(&a.coeffs, slot);
        &x * &x
    } else {
        pack(&a.coeffs, slot) * pack(&b.coeffs, slot)
    };
    let negative = product.is_negative();
    let limbs = product.magnitude().to_u32_digits();
    let half = BigInt::one() << (slot - 1);
    let full = BigInt::one() << slot;
    let mut carry = BigInt::zero();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut c = BigInt::from_biguint(Sign::Plus, extract_bits(&limbs, i * slot, slot)) + &carry;
        if c >= half {
            c -= &full;
            carry = BigInt::one();
        } else {
            carry = BigInt::zero();
        }
        out.push(if negative { -c } else { c });
    }
    out
}

fn mul_dense(a: &DenseInt, b: &DenseInt, kronecker: bool) -> Laurent {
    let coeffs = if kronecker { mul_kronecker(a, b) } else { mul_schoolbook(a, b) };
    let denom = &a.denom * &b.denom;
    DenseInt { offset: a.offset + b.offset, coeffs, denom }.into_laurent()
}

impl Laurent {
    pub(crate) fn mul_with(&self, other: &Laurent, kronecker: bool) -> Laurent {
        if self.is_zero() || other.is_zero() {
            return Laurent::zero();
        }
        let a = DenseInt::from_laurent(self);
        if std::ptr::eq(self, other) {
            return mul_dense(&a, &a, kronecker);
        }
        let b = DenseInt::from_laurent(other);
        mul_dense(&a, &b, kronecker)
    }

    fn mul_sparse(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in other.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl<'a> Mul<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn mul(self, other: &'a Laurent) -> Laurent {
        let work = self.len() * other.len();
        if work <= 64 {
            return self.mul_sparse(other);
        }
        let dense_work = (self.span() as usize + 1) * (other.span() as usize + 1);
        if dense_work > 16 * work {
            return self.mul_sparse(other);
        }
        self.mul_with(other, work > KRONECKER_THRESHOLD)
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, other: Laurent) -> Laurent {
        &self * &other
    }
}

impl<'a> Add<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn add(self, other: &'a Laurent) -> Laurent {
        let mut out = self.clone();
        out += other;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, other: Laurent) -> Laurent {
        self += &other;
        self
    }
}

impl<'a> AddAssign<&'a Laurent> for Laurent {
    fn add_assign(&mut self, other: &'a Laurent) {
        for (e, c) in other.terms() {
            self.add_term(e, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Laurent> for Laurent {
    fn sub_assign(&mut self, other: &'a Laurent) {
        for (e, c) in other.terms() {
            self.add_term(e, -c.clone());
        }
    }
}

impl<'a> Sub<&'a Laurent> for &'a Laurent {
    type Output = Laurent;
    fn sub(self, other: &'a Laurent) -> Laurent {
        let mut out = self.clone();
        out -= other;
        out
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, other: Laurent) -> Laurent {
        self -= &other;
        self
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl From<Rational> for Laurent {
    fn from(c: Rational) -> Self {
        Laurent::constant(c)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("w"))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, Valuation};
    use proptest::prelude::*;

    fn w() -> Laurent {
        Laurent::w()
    }

    fn c(n: i64, d: i64) -> Laurent {
        Laurent::constant(rat(n, d))
    }

    #[test]
    fn canonical_form_strips_zeros() {
        let f = &w() - &w();
        assert!(f.is_zero());
        assert_eq!(f.len(), 0);
        let g = Laurent::from_terms([(3, int(1)), (3, int(-1)), (-2, int(5))]);
        assert_eq!(g.len(), 1);
        assert_eq!(g.min_exp(), Some(-2));
        assert_eq!(g.max_exp(), Some(-2));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(w().eval(&int(5)).unwrap(), int(5));
        let f = (&w() - &w().pow(2)).scale(&rat(1, 2));
        assert_eq!(f.eval(&int(3)).unwrap(), int(-3));
        let g = (&Laurent::one() - &w()).scale(&rat(1, 2));
        assert_eq!(g.eval(&int(1)).unwrap(), int(0));
        let h = w().pow_var(-1);
        assert_eq!(h.eval(&int(3)).unwrap(), rat(1, 3));
        assert!(matches!(h.eval(&int(0)), Err(Error::NegativePowerAtNonUnit(_))));
    }

    #[test]
    fn display() {
        let f = (&Laurent::one() - &w()).scale(&rat(1, 2));
        assert_eq!(f.to_string(), "1/2 - 1/2*w");
        let g = Laurent::from_terms([(-1, int(1)), (2, int(-3)), (0, rat(-2, 3))]);
        assert_eq!(g.to_string(), "w^-1 - 2/3 - 3*w^2");
        assert_eq!(Laurent::zero().to_string(), "0");
        assert_eq!((-w()).to_string(), "-w");
    }

    #[test]
    fn exact_division() {
        let num = &Laurent::one() - &w().pow(2);
        let den = &Laurent::one() - &w();
        assert_eq!(num.div_exact(&den).unwrap(), &Laurent::one() + &w());
        assert_eq!(num.div_exact(&c(8, 1)).unwrap(), num.scale(&rat(1, 8)));
        assert!(num.div_exact(&(&Laurent::one() + &w().pow(2))).is_none());
        let shifted = w().pow_var(-3);
        assert_eq!(num.div_exact(&shifted).unwrap(), num.shift(3));
        assert!(num.div_exact(&Laurent::zero()).is_none());
    }

    #[test]
    fn kronecker_matches_schoolbook_on_large_inputs() {
        // (1 - w)^200 / 3^50 with mixed signs and denominators
        let base = (&c(1, 3) - &w().scale(&rat(7, 2))).shift(-4);
        let f = base.pow(37);
        let g = (&f + &w().pow(5)).scale(&rat(-5, 11));
        assert_eq!(f.mul_with(&g, true), f.mul_with(&g, false));
        assert_eq!(f.mul_with(&f, true), f.mul_with(&f, false));
    }

    #[test]
    fn padic_evaluation_tracks_losses() {
        let p = Prime::new(2).unwrap();
        let f = (&Laurent::one() - &w()).scale(&rat(1, 4));
        let three = PadicNum::from_rational(&int(3), p, 10).unwrap();
        let v = f.eval_padic(&three).unwrap();
        // f(3) = -1/2; the 1/4 coefficient costs two digits of precision
        assert_eq!(v.absolute_precision(), 8);
        assert_eq!(v.valuation(), Valuation::Finite(-1));
        assert!(v.agrees_with(&rat(-1, 2)));
        let g = Laurent::from_terms([(-2, rat(1, 3)), (1, int(5))]);
        let x = PadicNum::from_rational(&rat(7, 5), Prime::new(3).unwrap(), 12).unwrap();
        let gv = g.eval_padic(&x).unwrap();
        assert!(gv.agrees_with(&g.eval(&rat(7, 5)).unwrap()));
        assert_eq!(gv.absolute_precision(), 11);
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-6i64..7, -20i64..20, 1i64..13), 0..6)
            .prop_map(|ts| Laurent::from_terms(ts.into_iter().map(|(e, n, d)| (e, rat(n, d)))))
    }

    fn arb_big_laurent() -> impl Strategy<Value = Laurent> {
        prop::collection::vec((-40i64..40, -2000i64..2000, 1i64..64), 40..90)
            .prop_map(|ts| Laurent::from_terms(ts.into_iter().map(|(e, n, d)| (e, rat(n, d)))))
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_laurent(), g in arb_laurent(), h in arb_laurent()) {
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &Laurent::one(), f.clone());
            prop_assert_eq!(&f + &Laurent::zero(), f.clone());
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn multiplication_routes_agree(f in arb_big_laurent(), g in arb_big_laurent()) {
            let sparse = f.mul_sparse(&g);
            prop_assert_eq!(&f.mul_with(&g, false), &sparse);
            prop_assert_eq!(&f.mul_with(&g, true), &sparse);
        }

        #[test]
        fn evaluation_is_a_ring_map(f in arb_laurent(), g in arb_laurent(), n in 1i64..50, d in 1i64..50) {
            let x = rat(n, d);
            let fx = f.eval(&x).unwrap();
            let gx = g.eval(&x).unwrap();
            prop_assert_eq!((&f * &g).eval(&x).unwrap(), &fx * &gx);
            prop_assert_eq!((&f + &g).eval(&x).unwrap(), &fx + &gx);
        }

        #[test]
        fn division_inverts_multiplication(f in arb_laurent(), g in arb_laurent()) {
            prop_assume!(!g.is_zero());
            prop_assert_eq!((&f * &g).div_exact(&g).unwrap(), f);
        }
    }
}
