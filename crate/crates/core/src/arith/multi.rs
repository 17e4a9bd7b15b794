use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::{format_term, power_string};
use super::{Laurent, Rational};
use crate::error::Result;

/// A Laurent polynomial over ℚ in N commuting variables w₁, …, w_N.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentN<const N: usize> {
    terms: BTreeMap<[i64; N], Rational>,
}

pub type Laurent2 = LaurentN<2>;
pub type Laurent3 = LaurentN<3>;

impl<const N: usize> Default for LaurentN<N> {
    fn default() -> Self {
        LaurentN { terms: BTreeMap::new() }
    }
}

impl<const N: usize> LaurentN<N> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_terms([([0; N], Rational::one())])
    }

    /// The i-th coordinate variable (0-based).
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::from_terms([(e, Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = ([i64; N], Rational)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: [i64; N], c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64; N], &Rational)> {
        self.terms.iter()
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

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    /// f(w) ↦ f(w_i), a Laurent polynomial in the single variable w_i.
    pub fn embed(f: &Laurent, i: usize) -> Self {
        Self::from_terms(f.terms().map(|(k, c)| {
            let mut e = [0; N];
            e[i] = k;
            (e, c.clone())
        }))
    }

    /// f(w) ↦ f(w_{i₁}·w_{i₂}·…) for the listed variables.
    pub fn embed_product(f: &Laurent, vars: &[usize]) -> Self {
        Self::from_terms(f.terms().map(|(k, c)| {
            let mut e = [0; N];
            for &i in vars {
                e[i] += k;
            }
            (e, c.clone())
        }))
    }

    /// Substitutes the rational value `x` for variable `i` and drops it,
    /// returning a polynomial in the remaining variables in order.
    pub fn eval_var<const M: usize>(&self, i: usize, x: &Rational) -> Result<LaurentN<M>> {
        assert_eq!(M + 1, N, "eval_var removes exactly one variable");
        let mut out = LaurentN::<M>::zero();
        for (e, c) in &self.terms {
            let value = Laurent::monomial(c.clone(), e[i]).eval(x)?;
            let mut rest = [0; M];
            let mut k = 0;
            for (j, ej) in e.iter().enumerate() {
                if j != i {
                    rest[k] = *ej;
                    k += 1;
                }
            }
            out.add_term(rest, value);
        }
        Ok(out)
    }

    /// Exact evaluation at a point.
    pub fn eval(&self, point: &[Rational; N]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, k) in point.iter().zip(e) {
                term *= Laurent::monomial(Rational::one(), *k).eval(x)?;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Applies a map to the exponent vectors.
    pub fn map_exponents<const M: usize>(&self, f: impl Fn(&[i64; N]) -> [i64; M]) -> LaurentN<M> {
        LaurentN::<M>::from_terms(self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        for _ in 0..n {
            result = &result * self;
        }
        result
    }

    pub fn display_with(&self, vars: &[&str; N]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let body: Vec<String> = e
                .iter()
                .zip(vars)
                .filter(|(k, _)| **k != 0)
                .map(|(k, v)| power_string(v, *k))
                .collect();
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&format_term(&c.abs(), &body.join("*")));
        }
        out
    }
}

impl<'a, const N: usize> Mul<&'a LaurentN<N>> for &'a LaurentN<N> {
    type Output = LaurentN<N>;
    fn mul(self, other: &'a LaurentN<N>) -> LaurentN<N> {
        if self.is_zero() || other.is_zero() {
            return LaurentN::zero();
        }
        // integer accumulation over a common denominator
        let da = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let db = other.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ia: Vec<([i64; N], BigInt)> =
            self.terms.iter().map(|(e, c)| (*e, c.numer() * (&da / c.denom()))).collect();
        let ib: Vec<([i64; N], BigInt)> =
            other.terms.iter().map(|(e, c)| (*e, c.numer() * (&db / c.denom()))).collect();
        let mut acc: HashMap<[i64; N], BigInt> = HashMap::new();
        for (ea, ca) in &ia {
            for (eb, cb) in &ib {
                let mut e = *ea;
                for k in 0..N {
                    e[k] += eb[k];
                }
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let denom = da * db;
        LaurentN {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e, Rational::new(c, denom.clone())))
                .collect(),
        }
    }
}

impl<'a, const N: usize> Add<&'a LaurentN<N>> for &'a LaurentN<N> {
    type Output = LaurentN<N>;
    fn add(self, other: &'a LaurentN<N>) -> LaurentN<N> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a, const N: usize> Sub<&'a LaurentN<N>> for &'a LaurentN<N> {
    type Output = LaurentN<N>;
    fn sub(self, other: &'a LaurentN<N>) -> LaurentN<N> {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<const N: usize> Neg for &LaurentN<N> {
    type Output = LaurentN<N>;
    fn neg(self) -> LaurentN<N> {
        LaurentN { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl<const N: usize> fmt::Debug for LaurentN<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=N).map(|i| format!("w{i}")).collect();
        let refs: [&str; N] = std::array::from_fn(|i| names[i].as_str());
        write!(f, "LaurentN({})", self.display_with(&refs))
    }
}

impl fmt::Display for Laurent2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(&["w1", "w2"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn embedding_and_products() {
        let f = Laurent::from_terms([(1, int(1)), (-2, rat(1, 2))]);
        let diag = Laurent2::embed_product(&f, &[0, 1]);
        assert_eq!(diag.to_string(), "1/2*w1^-2*w2^-2 + w1*w2");
        let a = Laurent2::embed(&f, 0);
        let b = Laurent2::embed(&f, 1);
        let prod = &a * &b;
        assert_eq!(prod.len(), 4);
        let at = prod.eval(&[int(2), int(3)]).unwrap();
        assert_eq!(at, f.eval(&int(2)).unwrap() * f.eval(&int(3)).unwrap());
    }

    #[test]
    fn partial_evaluation() {
        let f = &Laurent2::var(0) * &Laurent2::var(1);
        let g: crate::arith::LaurentN<1> = f.eval_var(0, &rat(1, 3)).unwrap();
        assert_eq!(g, crate::arith::LaurentN::<1>::var(0).scale(&rat(1, 3)));
    }
}
