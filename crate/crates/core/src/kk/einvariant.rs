//! The cyclic groups Pr K∨₂ₙK / (η_L − η_R), detecting the image of J.
//!
//! η_L(uⁿ) − η_R(uⁿ) = uⁿ(1 − wⁿ), and the group is generated by
//! uⁿ(1 − wⁿ)/pᵏ where pᵏ is the largest power for which this is still
//! numerical, i.e. k = min v_p(αⁿ − 1) over topological generators α of ℤₚ^×.

use num_bigint::BigInt;
use num_traits::One;

use super::basis::{theta_basis_expand, ThetaBasis, ThetaBasisExpansion};
use super::theta_form::ThetaCombination;
use super::{primitive_check, Family, GradedElt, NumFun};
use crate::arith::{valuation, Laurent, PadicNum, Prime, Rational, Valuation};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct EInvariant {
    pub p: Prime,
    pub n: u32,
    /// The group has order p^order_exponent.
    pub order_exponent: u32,
    pub generator: NumFun,
    /// Basis expansion of the generator, when it exists at the requested
    /// level and precision.
    pub expansion: Option<ThetaBasisExpansion>,
    /// At p = 2, an exact and compact Θ-polynomial for the generator.
    pub theta_form: Option<ThetaCombination>,
}

impl EInvariant {
    pub fn order(&self) -> BigInt {
        self.p.pow(self.order_exponent)
    }

    /// The generator as text: its Θ-form at p = 2, the Laurent body otherwise.
    pub fn generator_string(&self) -> String {
        match &self.theta_form {
            Some(form) => form.display(true),
            None => self.generator.to_string(),
        }
    }
}

impl std::fmt::Display for EInvariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "order {}, generator {}", self.order(), self.generator_string())
    }
}

/// The smallest primitive root mod p.
fn primitive_root(p: u32) -> u32 {
    let q = p as u64;
    let phi = q - 1;
    let factors: Vec<u64> = (2..=phi).filter(|d| phi.is_multiple_of(*d) && (2..*d).all(|e| d % e != 0)).collect();
    (1..p)
        .find(|&g| {
            factors.iter().all(|f| {
                let mut acc = 1u64;
                for _ in 0..phi / f {
                    acc = acc * g as u64 % q;
                }
                acc != 1
            })
        })
        .expect("primitive roots exist")
}

/// The Teichmüller lift of the smallest primitive root, to `digits` digits.
pub(crate) fn teichmuller_generator(p: Prime, digits: u32) -> PadicNum {
    let g = primitive_root(p.get());
    let mut x = PadicNum::from_integer(g as i64, p, digits as i64);
    for _ in 0..digits {
        x = x.pow(p.get());
    }
    x
}

/// v_p(αⁿ − 1) for the generators of ℤₚ^×; `None` means "at least N".
fn generator_valuations(p: Prime, n: u32, precision: u32) -> Vec<Option<u32>> {
    let exact = |a: i64| -> Option<u32> {
        let x = num_traits::pow(Rational::from_integer(a.into()), n as usize) - Rational::one();
        match valuation(&x, p) {
            Valuation::Infinite => None,
            Valuation::Finite(v) => Some(v as u32),
        }
    };
    if p.get() == 2 {
        vec![exact(-1), exact(3)]
    } else {
        let omega = teichmuller_generator(p, precision);
        let diff = omega.pow(n).sub(&PadicNum::one(p, precision as i64));
        let teich = match diff.valuation() {
            Valuation::Finite(v) => Some(v as u32),
            Valuation::Infinite => None,
        };
        vec![teich, exact(1 + p.get() as i64)]
    }
}

pub fn einvariant(p: Prime, n: u32, level: u32, precision: u32) -> Result<EInvariant> {
    if n == 0 {
        return Err(Error::Invalid("einvariant needs n >= 1".into()));
    }
    let k = generator_valuations(p, n, precision)
        .into_iter()
        .flatten()
        .min()
        .ok_or(Error::PrecisionInsufficient { needed: precision as i64 + 1, available: precision as i64 })?;
    let body = Laurent::from_terms([(0, Rational::one()), (n as i64, -Rational::one())])
        .scale(&Rational::new(One::one(), p.pow(k)));
    let generator = NumFun::new(p, body)?;
    debug_assert!(primitive_check(&GradedElt::new(n as i64, generator.clone())));
    let (family, theta_form) = if p.get() == 2 {
        let form = ThetaCombination::exact_big_theta(generator.body()).map(|f| f.compact());
        (Family::BigTheta, form)
    } else {
        (Family::Theta, None)
    };
    let level = match family {
        // the exact expansion needs levels up to ⌊log₂ n⌋
        Family::BigTheta => level.max(31 - n.leading_zeros()),
        Family::Theta => level,
    };
    let expansion = match theta_basis_expand(&generator, &ThetaBasis::new(p, family, level)?, precision) {
        Ok(e) => Some(e),
        Err(Error::LevelInsufficient | Error::BasisSolveFailed) => None,
        Err(e) => return Err(e),
    };
    Ok(EInvariant { p, n, order_exponent: k, generator, expansion, theta_form })
}
