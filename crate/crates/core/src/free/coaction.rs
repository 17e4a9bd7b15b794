//! Coactions of K∨₀K on free θ-algebras.
//!
//! A generator x of degree 2m carries Ψ(x) = wᵐ ⊗ x + c ⊗ 1 with c ∈ K∨₀K.
//! Ψ is a map of θ-algebras, so Ψ(θˢx) = Qˢ(wᵐx + c); coassociativity
//! amounts to c being primitive of twist m, and the counit to c(1) = 0.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{MixedTensor, Monomial, Poly, ThetaPoly, Var};
use crate::arith::{Laurent, Laurent2, Prime, Rational};
use crate::error::{Error, Result};
use crate::kk::{primitive_check, q, GradedElt, NumFun};

/// Values for the generators of a free θ-algebra.
pub type Assignment = BTreeMap<String, NumFun>;

/// A generator together with its coaction data.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaGen {
    pub name: String,
    pub twist: i64,
    pub constant: NumFun,
}

impl ThetaGen {
    pub fn new(name: &str, twist: i64, constant: NumFun) -> Result<Self> {
        if !constant.eval(&Rational::one())?.is_zero() {
            return Err(Error::CoactionInconsistent(format!("constant term of {name} does not vanish at w = 1")));
        }
        Ok(ThetaGen { name: name.to_string(), twist, constant })
    }

    /// The generators attached to η, ν, σ at p = 2, with constants
    /// Θ₀, 2Θ₁ and 2Θ₂ − 3Θ₁², i.e. (1 − wᵐ)/d for d = 2, 4, 16.
    pub fn fixture(name: &str) -> Result<Self> {
        let (gen, twist, denominator) = match name {
            "eta" => ("x2", 1, 2),
            "nu" => ("x4", 2, 4),
            "sigma" => ("x8", 4, 16),
            _ => return Err(Error::Invalid(format!("unknown generator fixture `{name}` (eta, nu, sigma)"))),
        };
        let c = Laurent::from_terms([(0, Rational::one()), (twist, -Rational::one())])
            .scale(&Rational::new(1.into(), denominator.into()));
        ThetaGen::new(gen, twist, NumFun::new(Prime::TWO, c)?)
    }

    pub fn prime(&self) -> Prime {
        self.constant.prime()
    }

    /// The topological degree 2m of the generator.
    pub fn degree(&self) -> i64 {
        2 * self.twist
    }

    /// Ψ(x) = wᵐx + c.
    pub fn coaction_of_generator(&self) -> MixedTensor {
        MixedTensor::var(&self.name, 0)
            .scale(&Laurent::monomial(Rational::one(), self.twist))
            .add(&MixedTensor::constant(self.constant.body().clone()))
    }

    /// Whether wᵐ ⊗ x + c ⊗ 1 is coassociative, i.e. uᵐc is primitive.
    pub fn is_coassociative(&self) -> bool {
        primitive_check(&GradedElt::new(self.twist, self.constant.clone()))
    }
}

fn find<'a>(gens: &'a [ThetaGen], name: &str) -> Result<&'a ThetaGen> {
    gens.iter()
        .find(|g| g.name == name)
        .ok_or_else(|| Error::Invalid(format!("no coaction data for generator `{name}`")))
}

/// Ψ(θ⁰g), …, Ψ(θˢg) for each generator g met, computed once.
struct CoactionCache<'a> {
    gens: &'a [ThetaGen],
    levels: BTreeMap<String, Vec<MixedTensor>>,
}

impl<'a> CoactionCache<'a> {
    fn new(gens: &'a [ThetaGen]) -> Self {
        CoactionCache { gens, levels: BTreeMap::new() }
    }

    fn get(&mut self, v: &Var) -> Result<MixedTensor> {
        let gen = find(self.gens, &v.gen)?;
        let p = gen.prime();
        let seq = self.levels.entry(v.gen.clone()).or_insert_with(|| vec![gen.coaction_of_generator()]);
        while seq.len() <= v.level as usize {
            let next = seq.last().unwrap().q_checked(p).ok_or_else(|| {
                Error::CoactionInconsistent(format!("Q of the coaction of {} is not integral", v.gen))
            })?;
            seq.push(next);
        }
        Ok(seq[v.level as usize].clone())
    }
}

/// Ψ(e) ∈ K∨₀K ⊗ F for an element of the free θ-algebra F.
pub fn coaction(e: &ThetaPoly, gens: &[ThetaGen]) -> Result<MixedTensor> {
    let mut cache = CoactionCache::new(gens);
    e.substitute(|c| Laurent::constant(c.clone()), |v| cache.get(v))
}

/// The θ-algebra map F → K∨₀K sending each generator to its assigned value.
pub fn specialize(e: &ThetaPoly, assignment: &Assignment, p: Prime) -> Result<NumFun> {
    let image = e.substitute(
        |c| Laurent::constant(c.clone()),
        |v| {
            let f = assignment
                .get(&v.gen)
                .ok_or_else(|| Error::Invalid(format!("no value assigned to `{}`", v.gen)))?;
            let mut g = f.clone();
            for _ in 0..v.level {
                g = q(&g);
            }
            Ok(MixedTensor::constant(g.into_body()))
        },
    )?;
    NumFun::new(p, image.coefficient(&Monomial::one()))
}

/// Whether x ↦ f (for each generator) is a map of comodules on θˢx for
/// s ≤ `level`: f(w₁w₂)-style coproduct of the image equals (id ⊗ φ)Ψ.
pub fn comodule_morphism_check(gens: &[ThetaGen], assignment: &Assignment, level: u32) -> Result<bool> {
    for gen in gens {
        let p = gen.prime();
        for s in 0..=level {
            let x = ThetaPoly::var(&gen.name, s);
            let image = specialize(&x, assignment, p)?;
            let lhs = Laurent2::embed_product(image.body(), &[0, 1]);
            let psi = coaction(&x, gens)?;
            let mut rhs = Laurent2::zero();
            for (m, c) in psi.terms() {
                let value = specialize(&ThetaPoly::from_terms([(m.clone(), Rational::one())]), assignment, p)?;
                rhs = &rhs + &(&Laurent2::embed(c, 0) * &Laurent2::embed(value.body(), 1));
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// (Δ ⊗ id)Ψ = (id ⊗ Ψ)Ψ on θˢx for every generator and s ≤ `level`,
/// compared as polynomials with coefficients in ℚ[w₁±, w₂±].
pub fn coassociativity_check(gens: &[ThetaGen], level: u32) -> Result<bool> {
    for gen in gens {
        for s in 0..=level {
            let psi = coaction(&ThetaPoly::var(&gen.name, s), gens)?;
            let left: Poly<Laurent2> = Poly::from_terms(
                psi.terms().map(|(m, c)| (m.clone(), Laurent2::embed_product(c, &[0, 1]))),
            );
            let mut cache = CoactionCache::new(gens);
            let right = psi.substitute(
                |c| Laurent2::embed(c, 0),
                |v| {
                    let inner = cache.get(v)?;
                    Ok(Poly::from_terms(inner.terms().map(|(m, c)| (m.clone(), Laurent2::embed(c, 1)))))
                },
            )?;
            if left != right {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// (ε ⊗ id)Ψ = id on θˢx for every generator and s ≤ `level`.
pub fn counit_check(gens: &[ThetaGen], level: u32) -> Result<bool> {
    for gen in gens {
        for s in 0..=level {
            let x = ThetaPoly::var(&gen.name, s);
            if coaction(&x, gens)?.counit() != x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl super::Coefficient for Laurent2 {
    fn zero() -> Self {
        Laurent2::zero()
    }
    fn one() -> Self {
        Laurent2::one()
    }
    fn is_zero(&self) -> bool {
        Laurent2::is_zero(self)
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
        Laurent2::one().scale(c)
    }
    /// Division in ℚ[w₁±, w₂±]; integrality is not tracked in two variables.
    fn div_p(&self, p: Prime) -> Option<Self> {
        Some(self.scale(&Rational::new(1.into(), p.big())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;
    use crate::kk::{theta, Family};

    fn big_theta(n: u32) -> Laurent {
        theta(Prime::TWO, n, Family::BigTheta).unwrap().into_body()
    }

    #[test]
    fn fixture_constants() {
        let eta = ThetaGen::fixture("eta").unwrap();
        assert_eq!(eta.constant.body(), &big_theta(0));
        let nu = ThetaGen::fixture("nu").unwrap();
        assert_eq!(nu.constant.body(), &big_theta(1).scale(&int(2)));
        let sigma = ThetaGen::fixture("sigma").unwrap();
        let expected = &big_theta(2).scale(&int(2)) - &big_theta(1).pow(2).scale(&int(3));
        assert_eq!(sigma.constant.body(), &expected);
        for g in [eta, nu, sigma] {
            assert!(g.is_coassociative());
        }
    }

    #[test]
    fn coaction_texts() {
        let p = Prime::TWO;
        let eta = ThetaGen::fixture("eta").unwrap();
        let gens = [eta];
        let psi = coaction(&ThetaPoly::var("x2", 1), &gens).unwrap();
        assert_eq!(psi.display(p), "w*Q(x2) + w*Theta0*x2^2 - w*Theta0*x2 + Theta1");
        let nu = [ThetaGen::fixture("nu").unwrap()];
        assert_eq!(coaction(&ThetaPoly::var("x4", 0), &nu).unwrap().display(p), "w^2*x4 + 2*Theta1");
        let sigma = [ThetaGen::fixture("sigma").unwrap()];
        assert_eq!(
            coaction(&ThetaPoly::var("x8", 0), &sigma).unwrap().display(p),
            "w^4*x8 + 2*Theta2 - 3*Theta1^2"
        );
    }

    #[test]
    fn structure_checks() {
        let gens: Vec<_> = ["eta", "nu", "sigma"].iter().map(|n| ThetaGen::fixture(n).unwrap()).collect();
        assert!(counit_check(&gens, 2).unwrap());
        assert!(coassociativity_check(&gens, 2).unwrap());
    }

    #[test]
    fn broken_twist_is_not_coassociative() {
        let mut g = ThetaGen::fixture("nu").unwrap();
        g.twist = 1;
        assert!(!g.is_coassociative());
        assert!(!coassociativity_check(&[g], 0).unwrap());
    }

    #[test]
    fn nonvanishing_constant_rejected() {
        let c = NumFun::constant(Prime::TWO, int(1)).unwrap();
        assert!(matches!(ThetaGen::new("x", 1, c), Err(Error::CoactionInconsistent(_))));
    }

    #[test]
    fn constant_is_a_comodule_map() {
        // x ↦ c is a comodule map exactly because c is primitive of twist m
        let gens: Vec<_> = ["eta", "nu"].iter().map(|n| ThetaGen::fixture(n).unwrap()).collect();
        let assignment: Assignment = gens.iter().map(|g| (g.name.clone(), g.constant.clone())).collect();
        assert!(comodule_morphism_check(&gens, &assignment, 2).unwrap());
        let mut wrong = assignment.clone();
        wrong.insert("x2".into(), NumFun::w(Prime::TWO));
        assert!(!comodule_morphism_check(&gens, &wrong, 0).unwrap());
    }

    #[test]
    fn specialization_commutes_with_q() {
        let p = Prime::TWO;
        let assignment: Assignment = [("x".to_string(), NumFun::w(p))].into();
        let e = ThetaPoly::var("x", 0).pow(2).add(&ThetaPoly::var("x", 1));
        let direct = specialize(&super::super::free_q(&e, p).unwrap(), &assignment, p).unwrap();
        assert_eq!(direct, q(&specialize(&e, &assignment, p).unwrap()));
    }
}
