//! Expansion of numerical functions in monomials of the θ- or Θ-generators.
//!
//! The monomials used are
//! * Θ-family (p = 2): Θ₀^{ε₀}···Θ_ℓ^{ε_ℓ} with every εₖ ∈ {0, 1};
//! * θ-family: θ₀^{e₀}···θ_ℓ^{e_ℓ} with e₀ ∈ {0, …, p−2} and eₖ ∈ {0, …, p−1}
//!   for k ≥ 1.
//!
//! The θ-family needs the shorter range at level 0 because wᵖ⁻¹ ≡ 1 mod p on
//! units, so the full range would give a singular system. In both cases the
//! generators are triangular mod p in the p-adic digits of the argument:
//! θₖ(x + pᵏt) ≡ θₖ(x) + t, and with 1 − α = Σ 2ʲ⁺¹aⱼ the residue Θₖ(α) mod 2
//! depends only on a₀, …, aₖ and flips with aₖ. The
//! canonical sample points (α = 1 − 2t for the Θ-family, the units in
//! [1, pˡ⁺¹] for the θ-family) therefore give a square system that is
//! invertible mod p, which is solved over ℤ/pᴺ. The result is then verified
//! exactly: f − Σ cₑmₑ must be pᴺ times a numerical function.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::theta_form::ThetaCombination;
use super::{theta_sequence, Family, NumFun};
use crate::arith::zmod::{Matrix, ZMod};
use crate::arith::{rational_mod, symmetric_lift, Laurent, PadicNum, Prime, Rational};
use crate::error::{Error, Result};

/// The monomial basis up to a given level, with its generators.
#[derive(Debug)]
pub struct ThetaBasis {
    p: Prime,
    family: Family,
    level: u32,
    generators: Vec<NumFun>,
    /// Mixed radix of the exponent at each level.
    radix: Vec<u32>,
    /// For t ≥ 1: monomial t is monomial `parents[t].0` times generator
    /// `parents[t].1`.
    parents: Vec<(usize, usize)>,
    monomials: OnceLock<Vec<Laurent>>,
}

impl ThetaBasis {
    pub fn new(p: Prime, family: Family, level: u32) -> Result<Self> {
        let generators = theta_sequence(p, level, family)?;
        let q = p.get();
        let radix = (0..=level)
            .map(|k| match family {
                Family::BigTheta => 2,
                Family::Theta if k == 0 => q - 1,
                Family::Theta => q,
            })
            .collect();
        let mut basis =
            ThetaBasis { p, family, level, generators, radix, parents: Vec::new(), monomials: OnceLock::new() };
        basis.parents = (0..basis.len())
            .map(|t| {
                if t == 0 {
                    return (0, 0);
                }
                let mut e = basis.exponents(t);
                let k = e.iter().rposition(|&x| x > 0).unwrap();
                e[k] -= 1;
                (basis.index(&e).unwrap(), k)
            })
            .collect();
        Ok(basis)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[NumFun] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.radix.iter().map(|&r| r as usize).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Exponent vector of the t-th monomial (least significant level first).
    pub fn exponents(&self, mut t: usize) -> Vec<u32> {
        self.radix
            .iter()
            .map(|&r| {
                let d = (t % r as usize) as u32;
                t /= r as usize;
                d
            })
            .collect()
    }

    fn index(&self, e: &[u32]) -> Option<usize> {
        let mut t = 0usize;
        for (k, &r) in self.radix.iter().enumerate().rev() {
            let d = e.get(k).copied().unwrap_or(0);
            if d >= r {
                return None;
            }
            t = t * r as usize + d as usize;
        }
        (e.len() <= self.radix.len() || e[self.radix.len()..].iter().all(|&x| x == 0)).then_some(t)
    }

    /// The monomials as exact Laurent polynomials, in index order.
    pub fn monomials(&self) -> &[Laurent] {
        self.monomials.get_or_init(|| {
            let mut out: Vec<Laurent> = Vec::with_capacity(self.len());
            out.push(Laurent::one());
            for &(parent, k) in &self.parents[1..] {
                let next = &out[parent] * self.generators[k].body();
                out.push(next);
            }
            out
        })
    }

    /// The sample points on which the monomial matrix is invertible mod p.
    pub fn canonical_points(&self) -> Vec<Rational> {
        let count = self.len() as u64;
        match self.family {
            Family::BigTheta => (0..count).map(|t| Rational::from_integer((1 - 2 * t as i64).into())).collect(),
            Family::Theta => {
                let q = self.p.get() as u64;
                (1u64..)
                    .filter(|a| a % q != 0)
                    .take(count as usize)
                    .map(|a| Rational::from_integer(a.into()))
                    .collect()
            }
        }
    }

    /// All monomials evaluated at the unit `x`, modulo pᴺ.
    ///
    /// Generator values come from the p-adic recursion x ↦ (x − xᵖ)/p started
    /// at N + ℓ digits, since each level costs one digit.
    pub fn values_mod(&self, x: &Rational, n: u32) -> Result<Vec<BigInt>> {
        let p = self.p;
        let modulus = p.pow(n);
        let start_digits = (n + self.level) as i64;
        let start = match self.family {
            Family::Theta => x.clone(),
            Family::BigTheta => (Rational::one() - x) / Rational::from_integer(2.into()),
        };
        let mut g = PadicNum::from_rational(&start, p, start_digits)?;
        let mut gens = Vec::with_capacity(self.radix.len());
        for k in 0..self.radix.len() {
            if k > 0 {
                g = g.theta();
            }
            gens.push(g.residue_mod(n)?);
        }
        if let Some(m) = modulus.to_u64().filter(|m| *m < 1 << 63) {
            let gens: Vec<u64> = gens.iter().map(|x| x.to_u64().expect("reduced")).collect();
            let mut values = vec![1u64; self.len()];
            for (t, &(parent, k)) in self.parents.iter().enumerate().skip(1) {
                values[t] = ((values[parent] as u128 * gens[k] as u128) % m as u128) as u64;
            }
            return Ok(values.into_iter().map(BigInt::from).collect());
        }
        let mut values = vec![BigInt::one(); self.len()];
        for (t, &(parent, k)) in self.parents.iter().enumerate().skip(1) {
            values[t] = (&values[parent] * &gens[k]) % &modulus;
        }
        Ok(values)
    }

    fn matrix(&self, points: &[Rational], n: u32) -> Result<Matrix> {
        points.iter().map(|x| self.values_mod(x, n)).collect()
    }
}

/// Coefficients cₑ ∈ ℤ/pᴺ with f ≡ Σ cₑ·g₀^{e₀}···g_ℓ^{e_ℓ} mod pᴺ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaBasisExpansion {
    pub p: Prime,
    pub family: Family,
    pub level: u32,
    pub precision: u32,
    coefficients: BTreeMap<Vec<u32>, PadicNum>,
    /// The residual f − Σ cₑmₑ is known to vanish modulo p to this power.
    pub residual_bound: u32,
}

impl ThetaBasisExpansion {
    fn from_solution(basis: &ThetaBasis, precision: u32, x: &[BigInt], residual_bound: u32) -> Self {
        let modulus = basis.p.pow(precision);
        let coefficients = x
            .iter()
            .enumerate()
            .filter(|(_, c)| !(*c % &modulus).is_zero())
            .map(|(t, c)| {
                let value = Rational::from_integer(symmetric_lift(c, &modulus));
                let padic = PadicNum::from_rational(&value, basis.p, precision as i64).expect("integer");
                (basis.exponents(t), padic)
            })
            .collect();
        ThetaBasisExpansion { p: basis.p, family: basis.family, level: basis.level, precision, coefficients, residual_bound }
    }

    /// The nonzero coefficients, keyed by exponent vector.
    pub fn coefficients(&self) -> impl Iterator<Item = (&Vec<u32>, &PadicNum)> {
        self.coefficients.iter()
    }

    /// The coefficient as an integer in (−pᴺ/2, pᴺ/2].
    pub fn coefficient(&self, e: &[u32]) -> BigInt {
        let mut key = e.to_vec();
        key.resize(self.level as usize + 1, 0);
        self.coefficients.get(&key).map_or_else(BigInt::zero, |c| lift(c, self.precision))
    }

    /// Σ cₑmₑ with symmetric integer lifts of the coefficients.
    pub fn to_laurent(&self, basis: &ThetaBasis) -> Laurent {
        let monomials = basis.monomials();
        let mut acc = Laurent::zero();
        for (e, c) in &self.coefficients {
            let t = basis.index(e).expect("exponent in range");
            acc += &monomials[t].scale(&Rational::from_integer(lift(c, self.precision)));
        }
        acc
    }

    /// Σ cₑmₑ(x) mod pᴺ.
    pub fn eval_mod(&self, basis: &ThetaBasis, x: &Rational) -> Result<BigInt> {
        let values = basis.values_mod(x, self.precision)?;
        let modulus = self.p.pow(self.precision);
        let mut acc = BigInt::zero();
        for (e, c) in &self.coefficients {
            acc += lift(c, self.precision) * &values[basis.index(e).expect("exponent in range")];
        }
        Ok(acc % &modulus)
    }

    pub fn as_combination(&self) -> ThetaCombination {
        ThetaCombination::from_terms(
            self.p,
            self.family,
            self.coefficients.iter().map(|(e, c)| (e.clone(), Rational::from_integer(lift(c, self.precision)))),
        )
    }
}

impl fmt::Display for ThetaBasisExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_combination().display(true))
    }
}

fn lift(c: &PadicNum, precision: u32) -> BigInt {
    let modulus = c.prime().pow(precision);
    symmetric_lift(&c.residue_mod(precision).expect("coefficient precision"), &modulus)
}

/// Expands a numerical function to precision N, verified exactly.
pub fn theta_basis_expand(f: &NumFun, basis: &ThetaBasis, precision: u32) -> Result<ThetaBasisExpansion> {
    let p = basis.p;
    assert_eq!(f.prime(), p, "function and basis at different primes");
    let points = basis.canonical_points();
    let modulus = p.pow(precision);
    let values = f.body().eval_many(&points)?;
    let rhs: Matrix = values
        .iter()
        .zip(&points)
        .map(|(v, a)| {
            rational_mod(v, &modulus).map(|r| vec![r]).ok_or_else(|| Error::NotNumerical {
                p: p.get(),
                witness: a.to_string(),
                value: v.to_string(),
            })
        })
        .collect::<Result<_>>()?;
    let ring = ZMod::new(p, precision);
    let solution = ring.solve(&basis.matrix(&points, precision)?, &rhs)?;
    let expansion = ThetaBasisExpansion::from_solution(basis, precision, &solution.x[0], precision);
    if !residual_vanishes(f, basis, &expansion)? {
        return Err(Error::LevelInsufficient);
    }
    Ok(expansion)
}

/// Whether (f − Σcₑmₑ)/pᴺ is numerical. The residual is a Laurent polynomial
/// of known span, so the decision points of `is_numerical` suffice; its
/// values there are computed mod pᴺ from the p-adic monomial values instead
/// of expanding the monomials exactly.
fn residual_vanishes(f: &NumFun, basis: &ThetaBasis, expansion: &ThetaBasisExpansion) -> Result<bool> {
    let p = basis.p;
    let q = p.get() as u64;
    let n = expansion.precision;
    let modulus = p.pow(n);
    let top_degree: u64 = (0..basis.len())
        .map(|t| {
            basis.exponents(t).iter().enumerate().map(|(k, &e)| e as u64 * generator_degree(basis, k)).sum::<u64>()
        })
        .max()
        .unwrap_or(0);
    let lo = f.body().min_exp().unwrap_or(0).min(0);
    let hi = (f.body().max_exp().unwrap_or(0) as i128).max(top_degree as i128);
    let span = (hi - lo as i128) as u64;
    let points: Vec<Rational> = (1u64..)
        .filter(|a| a % q != 0)
        .take(((q - 1) * (span + 1)) as usize)
        .map(|a| Rational::from_integer(a.into()))
        .collect();
    let values = f.body().eval_many(&points)?;
    for (x, v) in points.iter().zip(values) {
        let Some(fx) = rational_mod(&v, &modulus) else { return Ok(false) };
        let approx = expansion.eval_mod(basis, x)?;
        if !((fx - approx) % &modulus).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degree in w of the k-th generator (θₖ and Θₖ have degree pᵏ).
fn generator_degree(basis: &ThetaBasis, k: usize) -> u64 {
    (basis.p.get() as u64).pow(k as u32)
}

/// Interpolates sampled values (one column per function) at the given unit
/// points. With more points than monomials the surplus rows must be
/// consistent.
pub fn expand_samples(
    basis: &ThetaBasis,
    precision: u32,
    points: &[Rational],
    columns: &[Vec<BigInt>],
) -> Result<Vec<ThetaBasisExpansion>> {
    let ring = ZMod::new(basis.p, precision);
    let rhs: Matrix = (0..points.len()).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let solution = ring.solve(&basis.matrix(points, precision)?, &rhs)?;
    if !solution.is_consistent() {
        return Err(Error::SamplesInconsistent);
    }
    Ok(solution
        .x
        .iter()
        .map(|x| ThetaBasisExpansion::from_solution(basis, precision, x, precision))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn lp(terms: &[(i64, i64, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().map(|&(e, n, d)| (e, rat(n, d))))
    }

    fn big_theta(level: u32) -> ThetaBasis {
        ThetaBasis::new(Prime::TWO, Family::BigTheta, level).unwrap()
    }

    #[test]
    fn theta_identities() {
        let basis = big_theta(3);
        let theta1 = NumFun::new(Prime::TWO, lp(&[(0, 1, 8), (2, -1, 8)])).unwrap();
        let e = theta_basis_expand(&theta1, &basis, 16).unwrap();
        assert_eq!(e.coefficient(&[0, 1]), BigInt::from(1));
        assert_eq!(e.coefficients().count(), 1);

        let sigma = NumFun::new(Prime::TWO, lp(&[(0, 1, 16), (4, -1, 16)])).unwrap();
        let e = theta_basis_expand(&sigma, &basis, 16).unwrap();
        // 2Θ₂ − 3Θ₁² with Θ₁² = Θ₁ − 2Θ₂
        assert_eq!(e.to_string(), "8*Theta[2] - 3*Theta[1]");

        let e = theta_basis_expand(&NumFun::one(Prime::TWO), &basis, 16).unwrap();
        assert_eq!(e.coefficient(&[]), BigInt::from(1));
        assert_eq!(e.coefficients().count(), 1);
    }

    #[test]
    fn canonical_matrix_is_invertible_mod_p() {
        for (p, family, level) in [(2, Family::BigTheta, 4), (2, Family::Theta, 3), (3, Family::Theta, 2), (5, Family::Theta, 1)] {
            let basis = ThetaBasis::new(Prime::new(p).unwrap(), family, level).unwrap();
            let m = basis.matrix(&basis.canonical_points(), 1).unwrap();
            assert_eq!(ZMod::new(basis.p, 1).rank_mod_p(&m), basis.len());
        }
    }

    #[test]
    fn monomial_values_match_exact_evaluation() {
        for (p, family, level) in [(2, Family::BigTheta, 3), (2, Family::Theta, 3), (3, Family::Theta, 2), (5, Family::Theta, 1)] {
            let basis = ThetaBasis::new(Prime::new(p).unwrap(), family, level).unwrap();
            let modulus = basis.p.pow(10);
            for x in [int(1), int(7), rat(-5, 11), rat(13, 17)] {
                let values = basis.values_mod(&x, 10).unwrap();
                for (m, v) in basis.monomials().iter().zip(&values) {
                    assert_eq!(&rational_mod(&m.eval(&x).unwrap(), &modulus).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn theta_family_polynomials() {
        for p in [2u32, 3, 5] {
            let pr = Prime::new(p).unwrap();
            let basis = ThetaBasis::new(pr, Family::Theta, 2).unwrap();
            // θ₁ itself is a basis element
            let t1 = basis.generators()[1].clone();
            let e = theta_basis_expand(&t1, &basis, 6).unwrap();
            assert_eq!(e.coefficient(&[0, 1]), BigInt::from(1));
            assert_eq!(e.coefficients().count(), 1);
        }
    }

    #[test]
    fn level_too_small_is_reported() {
        let basis = big_theta(1);
        let theta3 = super::super::theta(Prime::TWO, 3, Family::BigTheta).unwrap();
        assert_eq!(theta_basis_expand(&theta3, &basis, 8), Err(Error::LevelInsufficient));
    }

    #[test]
    fn sample_interpolation() {
        let basis = big_theta(2);
        let theta1 = basis.generators()[1].clone();
        let modulus = Prime::TWO.pow(8);
        let points: Vec<Rational> = (0..16).map(|t| int(1 - 2 * t)).collect();
        let values: Vec<BigInt> =
            points.iter().map(|x| rational_mod(&theta1.eval(x).unwrap(), &modulus).unwrap()).collect();
        let e = expand_samples(&basis, 8, &points, std::slice::from_ref(&values)).unwrap();
        assert_eq!(e[0].coefficient(&[0, 1]), BigInt::from(1));
        let mut bad = values;
        bad[12] += 1;
        assert_eq!(expand_samples(&basis, 8, &points, &[bad]), Err(Error::SamplesInconsistent));
    }
}
