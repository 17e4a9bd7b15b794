//! The θ-Hopf algebra K∨₀K, modelled by numerical Laurent polynomials
//! f(w) ∈ ℚ[w, w⁻¹] with f(ℤ_(p)^×) ⊆ ℤ_(p).
//!
//! The power operation is Q(f) = (f − fᵖ)/p, its additive companion
//! Q̃ = p·Q + (·)ᵖ is the identity here, Adams operations act by
//! ψᵃf(w) = f(a⁻¹w), the coproduct is f(w) ↦ f(w₁w₂) and the antipode is
//! f(w) ↦ f(w⁻¹).

mod basis;
mod einvariant;
mod numerical;
mod relations;
mod theta_form;

pub use basis::{expand_samples, theta_basis_expand, ThetaBasis, ThetaBasisExpansion};
pub use einvariant::{einvariant, EInvariant};
pub use numerical::{is_numerical, is_numerical_by_residues, NumericalReport};
pub use relations::{artin_schreier_check, etale_idempotents, idempotents_are_complete, PolyModP};
pub use theta_form::ThetaCombination;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{
    is_p_integral, require_unit, Laurent, Laurent2, Laurent3, LaurentN, PadicNum, Prime, Rational,
};
use crate::error::{Error, Result};

/// Read-only defaults shared by a computation at a fixed prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub p: Prime,
    /// Digits N of p-adic precision.
    pub precision: u32,
    /// Top θ-level ℓ used by basis expansions.
    pub level: u32,
}

impl Context {
    pub fn new(p: Prime) -> Self {
        Context { p, precision: 16, level: 6 }
    }
}

/// Which recursively defined generator family to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// θ₀ = w, θₙ = Q(θₙ₋₁); defined at every prime.
    Theta,
    /// Θ₀ = (1 − w)/2, Θₙ = Q(Θₙ₋₁); only at p = 2.
    BigTheta,
}

impl Family {
    pub fn symbol(self) -> &'static str {
        match self {
            Family::Theta => "theta",
            Family::BigTheta => "Theta",
        }
    }
}

/// An element of K∨₀K.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NumFun {
    p: Prime,
    body: Laurent,
}

impl NumFun {
    /// Wraps `body` after checking that it is numerical.
    pub fn new(p: Prime, body: Laurent) -> Result<Self> {
        let report = is_numerical(&body, p);
        match report.witness {
            None => Ok(NumFun { p, body }),
            Some((point, value)) => Err(Error::NotNumerical {
                p: p.get(),
                witness: point.to_string(),
                value: value.to_string(),
            }),
        }
    }

    /// For bodies that are numerical by construction.
    pub(crate) fn trusted(p: Prime, body: Laurent) -> Self {
        debug_assert!(body.len() > 64 || is_numerical(&body, p).numerical, "not numerical: {body}");
        NumFun { p, body }
    }

    pub fn zero(p: Prime) -> Self {
        NumFun { p, body: Laurent::zero() }
    }

    pub fn one(p: Prime) -> Self {
        NumFun { p, body: Laurent::one() }
    }

    pub fn w(p: Prime) -> Self {
        NumFun { p, body: Laurent::w() }
    }

    /// wᵏ for any integer k.
    pub fn w_pow(p: Prime, k: i64) -> Self {
        NumFun { p, body: Laurent::monomial(Rational::one(), k) }
    }

    pub fn constant(p: Prime, c: Rational) -> Result<Self> {
        NumFun::new(p, Laurent::constant(c))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn body(&self) -> &Laurent {
        &self.body
    }

    pub fn into_body(self) -> Laurent {
        self.body
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn pow(&self, n: u32) -> NumFun {
        NumFun { p: self.p, body: self.body.pow(n) }
    }

    /// Multiplication by a p-integral scalar.
    pub fn scale(&self, c: &Rational) -> Result<NumFun> {
        if !is_p_integral(c, self.p) {
            return Err(Error::NotPLocal { value: c.to_string(), p: self.p.get() });
        }
        Ok(NumFun { p: self.p, body: self.body.scale(c) })
    }

    pub fn eval(&self, a: &Rational) -> Result<Rational> {
        self.body.eval(a)
    }

    fn check_prime(&self, other: &NumFun) {
        assert_eq!(self.p, other.p, "mixing elements at different primes");
    }
}

impl fmt::Display for NumFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

impl fmt::Debug for NumFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumFun[p={}]({})", self.p, self.body)
    }
}

macro_rules! numfun_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a NumFun> for &'a NumFun {
            type Output = NumFun;
            fn $method(self, other: &'a NumFun) -> NumFun {
                self.check_prime(other);
                NumFun { p: self.p, body: $trait::$method(&self.body, &other.body) }
            }
        }
        impl $trait for NumFun {
            type Output = NumFun;
            fn $method(self, other: NumFun) -> NumFun {
                $trait::$method(&self, &other)
            }
        }
    };
}

numfun_binop!(Add, add);
numfun_binop!(Sub, sub);
numfun_binop!(Mul, mul);

impl Neg for &NumFun {
    type Output = NumFun;
    fn neg(self) -> NumFun {
        NumFun { p: self.p, body: -&self.body }
    }
}

impl Neg for NumFun {
    type Output = NumFun;
    fn neg(self) -> NumFun {
        -&self
    }
}

/// An element of K∨₀K ⊗ K∨₀K, written as a function of (w₁, w₂).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NumFun2 {
    p: Prime,
    body: Laurent2,
}

impl NumFun2 {
    pub fn new(p: Prime, body: Laurent2) -> Self {
        NumFun2 { p, body }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn body(&self) -> &Laurent2 {
        &self.body
    }

    /// (F − Fᵖ)/p in two variables.
    pub fn q(&self) -> NumFun2 {
        let fp = self.body.pow(self.p.get());
        let inv_p = Rational::new(One::one(), self.p.big());
        NumFun2 { p: self.p, body: (&self.body - &fp).scale(&inv_p) }
    }

    /// Applies the counit (w ↦ 1) in the given slot.
    pub fn counit(&self, slot: usize) -> NumFun {
        let g: LaurentN<1> = self.body.eval_var(slot, &Rational::one()).expect("w = 1 is a unit");
        NumFun { p: self.p, body: from_single(&g) }
    }
}

impl fmt::Display for NumFun2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// uⁿ·f(w) ∈ K∨₂ₙK.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedElt {
    pub degree: i64,
    pub body: NumFun,
}

impl GradedElt {
    pub fn new(degree: i64, body: NumFun) -> Self {
        GradedElt { degree, body }
    }
}

pub(crate) fn from_single(g: &LaurentN<1>) -> Laurent {
    Laurent::from_terms(g.terms().map(|(e, c)| (e[0], c.clone())))
}

/// (f − fᵖ)/p on a bare Laurent body.
pub fn q_body(f: &Laurent, p: Prime) -> Laurent {
    let fp = f.pow(p.get());
    (f - &fp).scale(&Rational::new(One::one(), p.big()))
}

/// The power operation Q(f) = (f − fᵖ)/p.
pub fn q(f: &NumFun) -> NumFun {
    NumFun::trusted(f.p, q_body(&f.body, f.p))
}

/// Q̃(f) = p·Q(f) + fᵖ, computed literally.
pub fn qtilde(f: &NumFun) -> NumFun {
    let pq = q(f).body.scale(&Rational::from_integer(f.p.big()));
    NumFun::trusted(f.p, &pq + &f.body.pow(f.p.get()))
}

/// ψᵃf(w) = f(a⁻¹w) for a rational unit a.
pub fn adams(f: &NumFun, a: &Rational) -> Result<NumFun> {
    require_unit(a, f.p)?;
    Ok(NumFun::trusted(f.p, f.body.scale_var(&a.recip())))
}

/// Values of ψᵃf at the given sample units, for a p-adic unit a.
pub fn adams_values(f: &NumFun, a: &PadicNum, samples: &[Rational]) -> Result<Vec<PadicNum>> {
    if !a.is_unit() {
        return Err(Error::NotUnit { value: a.to_string(), p: f.p.get() });
    }
    let inv = a.inverse()?;
    samples
        .iter()
        .map(|x| {
            require_unit(x, f.p)?;
            let xp = PadicNum::from_rational(x, f.p, a.absolute_precision())?;
            f.body.eval_padic(&inv.mul(&xp))
        })
        .collect()
}

/// The duality pairing ⟨ψᵃ | f⟩ = f(a).
pub fn pair(a: &Rational, f: &NumFun) -> Result<Rational> {
    require_unit(a, f.p)?;
    f.body.eval(a)
}

/// The left action of the dual, α·f = Σ⟨α | χ(f′ᵢ)⟩ f″ᵢ, computed from the
/// coproduct, the antipode on the left factor and the pairing.
pub fn dual_action(alpha: &Rational, f: &NumFun) -> Result<NumFun> {
    require_unit(alpha, f.p)?;
    let psi = coproduct(f);
    let chi_left = psi.body.map_exponents(|&[a, b]| [-a, b]);
    let paired: LaurentN<1> = chi_left.eval_var(0, alpha)?;
    Ok(NumFun::trusted(f.p, from_single(&paired)))
}

/// Ψ(f)(w₁, w₂) = f(w₁w₂).
pub fn coproduct(f: &NumFun) -> NumFun2 {
    NumFun2 { p: f.p, body: Laurent2::embed_product(&f.body, &[0, 1]) }
}

/// (Ψ ⊗ id)Ψ and (id ⊗ Ψ)Ψ as functions of (w₁, w₂, w₃).
pub fn double_coproducts(f: &NumFun) -> (Laurent3, Laurent3) {
    let psi = coproduct(f);
    let left = psi.body.map_exponents(|&[a, b]| [a, a, b]);
    let right = psi.body.map_exponents(|&[a, b]| [a, b, b]);
    (left, right)
}

/// χ(f)(w) = f(w⁻¹).
pub fn antipode(f: &NumFun) -> NumFun {
    NumFun::trusted(f.p, f.body.invert_var())
}

/// Whether uⁿf(w) is primitive, i.e. f(w₁w₂) = f(w₁) + w₁ⁿ·f(w₂).
///
/// The coproduct of u is u⊗1 under the left unit and 1⊗u under the right,
/// and w = η_R(u)/η_L(u); so Ψ(uⁿf) = uⁿf(w₁w₂) must equal
/// uⁿf(w₁)⊗1 + uⁿw₁ⁿ⊗f(w₂) for primitivity.
pub fn primitive_check(x: &GradedElt) -> bool {
    let f = &x.body.body;
    let lhs = Laurent2::embed_product(f, &[0, 1]);
    let twist = Laurent2::embed(&Laurent::monomial(Rational::one(), x.degree), 0);
    let rhs = &Laurent2::embed(f, 0) + &(&twist * &Laurent2::embed(f, 1));
    lhs == rhs
}

/// θ₀, …, θₙ (or Θ₀, …, Θₙ).
pub fn theta_sequence(p: Prime, n: u32, family: Family) -> Result<Vec<NumFun>> {
    let first = match family {
        Family::Theta => Laurent::w(),
        Family::BigTheta => {
            if p.get() != 2 {
                return Err(Error::ThetaFamilyNeedsTwo(p.get()));
            }
            Laurent::from_terms([(0, Rational::new(1.into(), 2.into())), (1, Rational::new((-1).into(), 2.into()))])
        }
    };
    let mut out = vec![NumFun::trusted(p, first)];
    for _ in 0..n {
        let next = q(out.last().unwrap());
        out.push(next);
    }
    Ok(out)
}

/// θₙ (or Θₙ).
pub fn theta(p: Prime, n: u32, family: Family) -> Result<NumFun> {
    Ok(theta_sequence(p, n, family)?.pop().unwrap())
}
