//! Rational combinations of θ-monomials, used both as exact rewrites of
//! polynomials in the Θ-family at p = 2 and as the printed form of basis
//! expansions.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{theta_sequence, Family};
use crate::arith::{format_term, power_string, Laurent, Prime, Rational};
use crate::error::Result;

/// Σ c_e · g₀^{e₀}···g_ℓ^{e_ℓ} for one generator family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaCombination {
    p: Prime,
    family: Family,
    /// Exponent vectors carry no trailing zeros.
    terms: BTreeMap<Vec<u32>, Rational>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl ThetaCombination {
    pub fn zero(p: Prime, family: Family) -> Self {
        ThetaCombination { p, family, terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rational)>>(p: Prime, family: Family, iter: I) -> Self {
        let mut out = Self::zero(p, family);
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let e = trim(e);
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &[u32]) -> Rational {
        self.terms.get(&trim(e.to_vec())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The exact multilinear Θ-expansion of a polynomial at p = 2.
    ///
    /// The Θ-monomial with exponent bits S has degree S in w (Θₖ has degree
    /// 2ᵏ), so these monomials are triangular against 1, w, w², … and the
    /// expansion is obtained by peeling off leading terms. Returns `None`
    /// for Laurent polynomials with negative exponents.
    pub fn exact_big_theta(f: &Laurent) -> Option<Self> {
        if !f.is_polynomial() {
            return None;
        }
        let two = Prime::TWO;
        let degree = f.max_exp().unwrap_or(0) as u64;
        let levels = (64 - degree.leading_zeros()).max(1);
        let gens = theta_sequence(two, levels - 1, Family::BigTheta).expect("p = 2");
        let size = 1usize << levels;
        let mut monomials: Vec<Laurent> = Vec::with_capacity(size);
        monomials.push(Laurent::one());
        for t in 1..size {
            let k = usize::BITS - 1 - t.leading_zeros();
            let m = &monomials[t - (1 << k)] * gens[k as usize].body();
            monomials.push(m);
        }
        let mut rest = f.clone();
        let mut out = Self::zero(two, Family::BigTheta);
        while let Some(d) = rest.max_exp() {
            let m = &monomials[d as usize];
            let c = rest.coeff(d) / m.coeff(d);
            rest -= &m.scale(&c);
            let bits = (0..levels).map(|k| ((d >> k) & 1) as u32).collect();
            out.add_term(bits, c);
        }
        Some(out)
    }

    fn l1(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// A shorter equivalent combination: a lone factor gₖ is traded for
    /// p·gₖ₊₁ + gₖᵖ (the defining relation of gₖ₊₁ = Q(gₖ)) whenever that
    /// lowers the sum of absolute coefficients.
    pub fn compact(&self) -> Self {
        let q = self.p.get();
        let mut current = self.clone();
        loop {
            let mut improved = false;
            let linear: Vec<(Vec<u32>, Rational)> = current
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == 1)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect();
            for (e, c) in linear {
                let k = e.len() - 1;
                let mut next = current.clone();
                next.add_term(e.clone(), -c.clone());
                let mut up = vec![0; k + 2];
                up[k + 1] = 1;
                next.add_term(up, &c * Rational::from_integer(q.into()));
                let mut pow = vec![0; k + 1];
                pow[k] = q;
                next.add_term(pow, c);
                if next.l1() < current.l1() {
                    current = next;
                    improved = true;
                    break;
                }
            }
            if !improved {
                return current;
            }
        }
    }

    pub fn max_level(&self) -> Option<usize> {
        self.terms.keys().map(|e| e.len().saturating_sub(1)).max()
    }

    pub fn to_laurent(&self) -> Result<Laurent> {
        let Some(top) = self.max_level() else { return Ok(Laurent::zero()) };
        let gens = theta_sequence(self.p, top as u32, self.family)?;
        let mut acc = Laurent::zero();
        for (e, c) in &self.terms {
            let mut m = Laurent::constant(c.clone());
            for (k, &ek) in e.iter().enumerate() {
                if ek > 0 {
                    m = &m * &gens[k].body().pow(ek);
                }
            }
            acc += &m;
        }
        Ok(acc)
    }

    /// Terms in printing order: decreasing weight Σ eₖpᵏ, ties broken by
    /// the higher level first.
    pub fn sorted_terms(&self) -> Vec<(&Vec<u32>, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        let p = self.p.get() as u64;
        v.sort_by(|(a, _), (b, _)| monomial_order(a, b, p).reverse());
        v
    }

    /// `bracketed` selects `Theta[1]` over `Theta1`.
    pub fn display(&self, bracketed: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let body = self.monomial_string(e, bracketed);
            if i == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&format_term(&c.abs(), &body));
        }
        out
    }

    pub fn monomial_string(&self, e: &[u32], bracketed: bool) -> String {
        let symbol = self.family.symbol();
        e.iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(level, &k)| {
                let name = if bracketed { format!("{symbol}[{level}]") } else { format!("{symbol}{level}") };
                power_string(&name, k as i64)
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }
}

/// Orders exponent vectors by weight Σ eₖpᵏ, then by the exponents read from
/// the top level down.
pub(crate) fn monomial_order(a: &[u32], b: &[u32], p: u64) -> Ordering {
    let weight = |e: &[u32]| -> u128 {
        e.iter().enumerate().map(|(k, &x)| x as u128 * (p as u128).pow(k as u32)).sum()
    };
    weight(a).cmp(&weight(b)).then_with(|| {
        let n = a.len().max(b.len());
        (0..n)
            .rev()
            .map(|k| a.get(k).copied().unwrap_or(0).cmp(&b.get(k).copied().unwrap_or(0)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}
