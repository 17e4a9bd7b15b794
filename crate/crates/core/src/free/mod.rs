//! Free θ-algebras ℤₚ[θˢx : s ≥ 0] on even-degree generators, and their
//! tensor products with K∨₀K.
//!
//! Elements are polynomials in the formal variables θˢ(x). The power
//! operation is computed through its additive, multiplicative companion:
//! Q̃(θˢx) = p·θˢ⁺¹x + (θˢx)ᵖ extends to a ring map, and then
//! Q(e) = (Q̃e − eᵖ)/p. On K∨₀K ⊗ (free algebra) Q̃ acts as the identity on
//! the K∨₀K factor.

mod coaction;

pub use coaction::{
    coaction, coassociativity_check, comodule_morphism_check, counit_check, specialize, Assignment, ThetaGen,
};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::{fmt_rational, is_p_integral, join_terms, power_string, Laurent, Prime, Rational};
use crate::error::{Error, Result};
use crate::kk::{is_numerical, ThetaCombination};

/// The formal variable θˢ(gen).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub gen: String,
    pub level: u32,
}

impl Var {
    pub fn new(gen: &str, level: u32) -> Self {
        Var { gen: gen.to_string(), level }
    }

    /// `x2`, `Q(x2)`, `Q(Q(x2))`, …
    pub fn display(&self) -> String {
        let mut s = self.gen.clone();
        for _ in 0..self.level {
            s = format!("Q({s})");
        }
        s
    }
}

/// A product of variables with positive exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Var, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial(BTreeMap::from([(v, 1)]))
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Var, u32)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (v, e) in &other.0 {
            *out.entry(v.clone()).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// Σ e·pˢ over the factors (θˢx)ᵉ.
    pub fn weight(&self, p: Prime) -> u128 {
        self.0.iter().map(|(v, &e)| e as u128 * (p.get() as u128).pow(v.level)).sum()
    }

    /// Factors by generator, then increasing level: `x2^2*Q(x2)`.
    pub fn display(&self) -> String {
        self.0.iter().map(|(v, &e)| power_string(&v.display(), e as i64)).collect::<Vec<_>>().join("*")
    }

    fn max_level(&self) -> u32 {
        self.0.keys().map(|v| v.level).max().unwrap_or(0)
    }
}

/// Printing order: decreasing weight, then the higher θ-level first, then
/// by variables.
pub(crate) fn printing_order(a: &Monomial, b: &Monomial, p: Prime) -> Ordering {
    b.weight(p)
        .cmp(&a.weight(p))
        .then_with(|| b.max_level().cmp(&a.max_level()))
        .then_with(|| a.cmp(b))
}

/// Coefficient rings for free-algebra polynomials.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(c: &Rational) -> Self;
    /// Division by p, or `None` when the quotient leaves the p-integral
    /// coefficient ring.
    fn div_p(&self, p: Prime) -> Option<Self>;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(c: &Rational) -> Self {
        c.clone()
    }
    fn div_p(&self, p: Prime) -> Option<Self> {
        let q = self / Rational::from_integer(p.big());
        is_p_integral(&q, p).then_some(q)
    }
}

impl Coefficient for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn one() -> Self {
        Laurent::one()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(c: &Rational) -> Self {
        Laurent::constant(c.clone())
    }
    fn div_p(&self, p: Prime) -> Option<Self> {
        let q = self.scale(&Rational::new(One::one(), p.big()));
        is_numerical(&q, p).numerical.then_some(q)
    }
}

/// Σ cₘ·m over monomials m in the θˢ-variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

/// An element of a free θ-algebra, with p-integral rational coefficients.
pub type ThetaPoly = Poly<Rational>;

/// An element of K∨₀K ⊗ (free θ-algebra): Laurent coefficients in w.
pub type MixedTensor = Poly<Laurent>;

impl<C: Coefficient> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<C: Coefficient> Poly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C) -> Self {
        Self::from_terms([(Monomial::one(), c)])
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    /// θˢ(gen).
    pub fn var(gen: &str, level: u32) -> Self {
        Self::from_terms([(Monomial::var(Var::new(gen, level)), C::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (m, c) in iter {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Applies a ring map determined by the images of the variables, with
    /// coefficients mapped by `coeff`.
    pub fn substitute<D: Coefficient>(
        &self,
        coeff: impl Fn(&C) -> D,
        mut image: impl FnMut(&Var) -> Result<Poly<D>>,
    ) -> Result<Poly<D>> {
        let mut cache: BTreeMap<Var, Poly<D>> = BTreeMap::new();
        let mut out = Poly::<D>::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::<D>::constant(coeff(c));
            for (v, e) in m.factors() {
                if !cache.contains_key(v) {
                    let img = image(v)?;
                    cache.insert(v.clone(), img);
                }
                term = term.mul(&cache[v].pow(e));
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Divides every coefficient by p; `None` if some quotient leaves the
    /// coefficient ring.
    fn div_p(&self, p: Prime) -> Option<Self> {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.div_p(p)?);
        }
        Some(out)
    }

    /// The ring map Q̃, identity on coefficients.
    pub fn qtilde(&self, p: Prime) -> Self {
        self.substitute(Clone::clone, |v| {
            let up = Poly::var(&v.gen, v.level + 1).scale(&C::from_rational(&Rational::from_integer(p.big())));
            Ok(up.add(&Poly::var(&v.gen, v.level).pow(p.get())))
        })
        .expect("infallible substitution")
    }

    /// Q(e) = (Q̃e − eᵖ)/p, or `None` when the division is not exact in the
    /// coefficient ring.
    pub fn q_checked(&self, p: Prime) -> Option<Self> {
        self.qtilde(p).sub(&self.pow(p.get())).div_p(p)
    }

    /// Sorted in printing order.
    pub fn sorted_terms(&self, p: Prime) -> Vec<(&Monomial, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| printing_order(a, b, p));
        v
    }
}

/// The power operation on a free θ-algebra.
pub fn free_q(e: &ThetaPoly, p: Prime) -> Result<ThetaPoly> {
    e.q_checked(p).ok_or_else(|| Error::InexactDivision(p.to_string()))
}

/// Rewrites (θˢx)ᵖ ↦ θˢx − p·θˢ⁺¹x until every exponent is below p.
/// Each step lowers the total degree, so this terminates.
pub fn as_quotient_normal_form(e: &ThetaPoly, p: Prime) -> ThetaPoly {
    let q = p.get();
    let mut pending: Vec<(Monomial, Rational)> = e.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
    let mut out = ThetaPoly::zero();
    while let Some((m, c)) = pending.pop() {
        let Some((v, k)) = m.0.iter().find(|(_, &k)| k >= q).map(|(v, &k)| (v.clone(), k)) else {
            out.add_term(m, c);
            continue;
        };
        let mut rest = m.0.clone();
        if k == q {
            rest.remove(&v);
        } else {
            rest.insert(v.clone(), k - q);
        }
        let rest = Monomial(rest);
        pending.push((rest.mul(&Monomial::var(v.clone())), c.clone()));
        let up = Var::new(&v.gen, v.level + 1);
        pending.push((rest.mul(&Monomial::var(up)), -c * Rational::from_integer(p.big())));
    }
    out
}

impl ThetaPoly {
    pub fn display(&self, p: Prime) -> String {
        join_terms(self.sorted_terms(p).into_iter().map(|(m, c)| (c.clone(), m.display())))
    }

    pub fn is_p_integral(&self, p: Prime) -> bool {
        self.terms.values().all(|c| is_p_integral(c, p))
    }

    /// Canonical JSON: monomials in printing order, coefficients as strings.
    pub fn to_json(&self, p: Prime) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms(p)
            .into_iter()
            .map(|(m, c)| json!({ "monomial": monomial_json(m), "coefficient": fmt_rational(c) }))
            .collect();
        json!({ "p": p.get(), "terms": terms, "text": self.display(p) })
    }
}

fn monomial_json(m: &Monomial) -> Value {
    Value::Array(
        m.factors().map(|(v, e)| json!({ "generator": v.gen, "level": v.level, "exponent": e })).collect(),
    )
}

impl MixedTensor {
    /// Evaluates the K∨₀K factor at w = 1 (the counit).
    pub fn counit(&self) -> ThetaPoly {
        ThetaPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.eval(&One::one()).expect("w = 1"))))
    }

    /// Canonical text. At p = 2 each coefficient is written as wᵏ times an
    /// exact Θ-polynomial (in compact form); otherwise as Laurent terms.
    /// Coefficients are distributed so the output is a flat sum.
    pub fn display(&self, p: Prime) -> String {
        let mut pieces: Vec<(Rational, String)> = Vec::new();
        for (m, c) in self.sorted_terms(p) {
            let free = m.display();
            let with = |parts: &[String]| {
                parts.iter().chain(std::iter::once(&free)).filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join("*")
            };
            let theta = (p.get() == 2).then(|| theta_form(c)).flatten();
            match theta {
                Some((shift, form)) => {
                    let wpart = power_string("w", shift);
                    for (e, r) in form.sorted_terms() {
                        pieces.push((r.clone(), with(&[wpart.clone(), form.monomial_string(e, false)])));
                    }
                }
                None => {
                    for (e, r) in c.terms() {
                        pieces.push((r.clone(), with(&[power_string("w", e)])));
                    }
                }
            }
        }
        join_terms(pieces)
    }

    pub fn to_json(&self, p: Prime) -> Value {
        let terms: Vec<Value> = self
            .sorted_terms(p)
            .into_iter()
            .map(|(m, c)| {
                let coeff: Vec<Value> = c.terms().map(|(e, r)| json!([e, fmt_rational(r)])).collect();
                json!({ "monomial": monomial_json(m), "coefficient": coeff })
            })
            .collect();
        json!({ "p": p.get(), "terms": terms, "text": self.display(p) })
    }
}

/// c = wᵏ·g with g a polynomial, g(0) ≠ 0, and g written in the Θ-family.
fn theta_form(c: &Laurent) -> Option<(i64, ThetaCombination)> {
    let k = c.min_exp()?;
    let g = c.shift(-k);
    Some((k, ThetaCombination::exact_big_theta(&g)?.compact()))
}
