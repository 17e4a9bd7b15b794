//! Finite comodules over K∨₀K ≅ Map^c(ℤₚ^×, ℤₚ) and continuous actions of
//! ℤₚ^×.
//!
//! A comodule of rank r is given by its coaction matrix E with
//! Ψ(mⱼ) = Σᵢ Eᵢⱼ ⊗ mᵢ. Coassociativity reads E(w₁w₂) = E(w₂)·E(w₁) and the
//! counit law E(1) = I. The corresponding action is γ ↦ A(γ) = E(γ⁻¹):
//! evaluating the function coordinate at γ⁻¹ turns the anti-homomorphism
//! identity into A(γ₁)A(γ₂) = A(γ₁γ₂).
//!
//! Everything is truncated at ℤ/pᴺ.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::arith::zmod::{Matrix, ZMod};
use crate::arith::{is_p_unit, rational_mod, Laurent2, Prime, Rational};
use crate::error::{Error, Result};
use crate::expr::{evaluate, parse};
use crate::kk::{expand_samples, Family, NumFun, ThetaBasis};

/// The on-disk form: `{p, N, rank, entries: [[expression]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct ComoduleFile {
    p: u32,
    #[serde(rename = "N")]
    n: u32,
    rank: usize,
    entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FinComodule {
    p: Prime,
    precision: u32,
    entries: Vec<Vec<NumFun>>,
}

impl FinComodule {
    pub fn new(p: Prime, precision: u32, entries: Vec<Vec<NumFun>>) -> Result<Self> {
        let r = entries.len();
        if entries.iter().any(|row| row.len() != r) {
            return Err(Error::Invalid(format!("coaction matrix must be {r}×{r}")));
        }
        if entries.iter().flatten().any(|f| f.prime() != p) {
            return Err(Error::Invalid("entries at a different prime".into()));
        }
        Ok(FinComodule { p, precision, entries })
    }

    /// The same coaction, read modulo a different power of p.
    pub fn with_precision(&self, precision: u32) -> Self {
        FinComodule { precision, ..self.clone() }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComoduleFile =
            serde_json::from_str(text).map_err(|e| Error::Invalid(format!("bad comodule file: {e}")))?;
        let p = Prime::new(file.p)?;
        if file.entries.len() != file.rank {
            return Err(Error::Invalid(format!("rank {} but {} rows", file.rank, file.entries.len())));
        }
        let entries = file
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        let f = evaluate(&parse(s)?, p)?
                            .as_laurent()
                            .ok_or_else(|| Error::Invalid(format!("entry `{s}` is not an element of K∨₀K")))?;
                        NumFun::new(p, f)
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        FinComodule::new(p, file.n, entries)
    }

    pub fn to_json(&self) -> Json {
        let file = ComoduleFile {
            p: self.p.get(),
            n: self.precision,
            rank: self.rank(),
            entries: self.entries.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        };
        serde_json::to_value(file).expect("serializable")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &NumFun {
        &self.entries[i][j]
    }

    fn ring(&self) -> ZMod {
        ZMod::new(self.p, self.precision)
    }

    /// E(x) mod pᴺ at a unit x.
    pub fn matrix_at(&self, x: &Rational) -> Result<Matrix> {
        let ring = self.ring();
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| {
                        let v = f.eval(x)?;
                        rational_mod(&v, ring.modulus())
                            .ok_or_else(|| Error::NotPLocal { value: v.to_string(), p: self.p.get() })
                    })
                    .collect()
            })
            .collect()
    }

    /// E(1) = I, exactly.
    pub fn counit_holds(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, f)| {
                let expected = if i == j { Rational::one() } else { Rational::zero() };
                f.eval(&Rational::one()).is_ok_and(|v| v == expected)
            })
        })
    }

    /// E(w₁w₂) = E(w₂)·E(w₁) as exact Laurent identities.
    pub fn is_coassociative(&self) -> bool {
        let r = self.rank();
        let at = |slot: usize| -> Vec<Vec<Laurent2>> {
            self.entries.iter().map(|row| row.iter().map(|f| Laurent2::embed(f.body(), slot)).collect()).collect()
        };
        let (e1, e2) = (at(0), at(1));
        (0..r).all(|i| {
            (0..r).all(|j| {
                let lhs = Laurent2::embed_product(self.entries[i][j].body(), &[0, 1]);
                let rhs = (0..r).fold(Laurent2::zero(), |acc, k| &acc + &(&e2[i][k] * &e1[k][j]));
                lhs == rhs
            })
        })
    }
}

/// A(γ) = E(γ⁻¹) mod pᴺ.
pub fn comodule_to_action(m: &FinComodule, gamma: &Rational) -> Result<Matrix> {
    if !is_p_unit(gamma, m.p) {
        return Err(Error::NotUnit { value: gamma.to_string(), p: m.p.get() });
    }
    m.matrix_at(&gamma.recip())
}

/// Action matrices sampled at integer units γ.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionTable {
    pub p: Prime,
    pub precision: u32,
    pub rank: usize,
    pub samples: Vec<(BigInt, Matrix)>,
}

/// The units in [1, pᵏ).
pub fn units_below(p: Prime, k: u32) -> Vec<BigInt> {
    let bound = p.pow(k).to_u64().expect("sample bound fits in u64");
    (1..bound).filter(|a| a % p.get() as u64 != 0).map(BigInt::from).collect()
}

impl ActionTable {
    /// Samples the action of a comodule at the units in [1, pᵏ).
    pub fn sweep(m: &FinComodule, k: u32) -> Result<Self> {
        let samples = units_below(m.p, k)
            .into_iter()
            .map(|g| Ok((g.clone(), comodule_to_action(m, &Rational::from_integer(g))?)))
            .collect::<Result<_>>()?;
        Ok(ActionTable { p: m.p, precision: m.precision, rank: m.rank(), samples })
    }

    fn lookup(&self, g: &BigInt) -> Option<&Matrix> {
        self.samples.iter().find(|(h, _)| h == g).map(|(_, a)| a)
    }

    /// Every matrix is invertible mod p, and A(γ₁)A(γ₂) = A(γ₁γ₂) whenever
    /// γ₁γ₂ is itself sampled.
    pub fn is_consistent(&self) -> bool {
        let ring = ZMod::new(self.p, self.precision);
        if self.samples.iter().any(|(_, a)| ring.rank_mod_p(a) != self.rank) {
            return false;
        }
        self.samples.iter().all(|(g1, a1)| {
            self.samples.iter().all(|(g2, a2)| match self.lookup(&(g1 * g2)) {
                Some(a12) => ring.mat_mul(a1, a2) == *a12,
                None => true,
            })
        })
    }
}

/// Recovers the coaction matrix by Θ/θ-basis interpolation of each entry of
/// E(x) = A(x⁻¹). The samples must cover the units mod p^{ℓ+2}.
pub fn action_to_comodule(table: &ActionTable, level: u32) -> Result<FinComodule> {
    let p = table.p;
    let cover = p.pow(level + 2);
    let seen: BTreeSet<BigInt> = table.samples.iter().map(|(g, _)| g.mod_floor(&cover)).collect();
    if seen.len() < units_below(p, level + 2).len() {
        return Err(Error::Invalid(format!("samples must cover the units mod {p}^{}", level + 2)));
    }
    let family = if p.get() == 2 { Family::BigTheta } else { Family::Theta };
    let basis = ThetaBasis::new(p, family, level)?;
    let points: Vec<Rational> = table.samples.iter().map(|(g, _)| Rational::from_integer(g.clone()).recip()).collect();
    let r = table.rank;
    let columns: Vec<Vec<BigInt>> = (0..r * r)
        .map(|t| table.samples.iter().map(|(_, a)| a[t / r][t % r].clone()).collect())
        .collect();
    let expansions = expand_samples(&basis, table.precision, &points, &columns)?;
    let mut entries = vec![Vec::with_capacity(r); r];
    for (t, e) in expansions.iter().enumerate() {
        entries[t / r].push(NumFun::new(p, e.to_laurent(&basis))?);
    }
    FinComodule::new(p, table.precision, entries)
}

/// Generators of the invariants {m : Ψ(m) = 1 ⊗ m}, computed as the common
/// kernel of A(γ) − I over the units γ in [1, pᵏ). Each generator comes with
/// the exponent e of its additive order pᵉ.
pub fn invariants(m: &FinComodule, k: u32) -> Result<Vec<(Vec<BigInt>, u32)>> {
    let ring = m.ring();
    let r = m.rank();
    let mut stacked: Matrix = Vec::new();
    for g in units_below(m.p, k) {
        let a = comodule_to_action(m, &Rational::from_integer(g))?;
        for (i, row) in a.into_iter().enumerate() {
            stacked.push(row.into_iter().enumerate().map(|(j, x)| if i == j { ring.reduce(&(x - 1)) } else { x }).collect());
        }
    }
    Ok(ring.kernel(&stacked, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, mod_inverse};

    const TRIVIAL: &str = include_str!("../fixtures/trivial.json");
    const SCALAR: &str = include_str!("../fixtures/scalar_w.json");
    const UPPER: &str = include_str!("../fixtures/upper_theta0.json");
    const SYM2: &str = include_str!("../fixtures/sym2_upper_theta0.json");
    const SCALAR3: &str = include_str!("../fixtures/scalar_w_p3.json");

    fn all() -> Vec<FinComodule> {
        [TRIVIAL, SCALAR, UPPER, SYM2, SCALAR3].iter().map(|s| FinComodule::from_json(s).unwrap()).collect()
    }

    #[test]
    fn fixtures_are_comodules() {
        for m in all() {
            assert!(m.counit_holds(), "{:?}", m.to_json());
            assert!(m.is_coassociative(), "{:?}", m.to_json());
        }
    }

    #[test]
    fn swapped_product_order_is_not_coassociative_in_general() {
        // E(w₁w₂) = E(w₁)E(w₂) fails for a non-commuting family.
        let p = Prime::TWO;
        let c = NumFun::new(p, crate::arith::Laurent::from_terms([(0, int(1)), (1, int(-1))]).scale(&crate::arith::rat(1, 2))).unwrap();
        let w = NumFun::w(p);
        let m = FinComodule::new(p, 8, vec![vec![NumFun::one(p), c], vec![NumFun::zero(p), w]]).unwrap();
        assert!(m.is_coassociative());
        let broken = FinComodule::new(p, 8, vec![vec![NumFun::w(p), NumFun::one(p)], vec![NumFun::zero(p), NumFun::one(p)]])
            .unwrap();
        assert!(!broken.is_coassociative());
    }

    #[test]
    fn actions() {
        let [trivial, scalar, upper, ..] = &all()[..] else { unreachable!() };
        let g = Rational::from_integer(3.into());
        assert_eq!(comodule_to_action(trivial, &g).unwrap(), vec![vec![BigInt::one(), BigInt::zero()], vec![BigInt::zero(), BigInt::one()]]);
        let inv3 = mod_inverse(&BigInt::from(3), &BigInt::from(256)).unwrap();
        assert_eq!(comodule_to_action(scalar, &g).unwrap(), vec![vec![inv3]]);
        let a = comodule_to_action(upper, &Rational::from_integer(5.into())).unwrap();
        let ring = ZMod::new(Prime::TWO, 16);
        // Θ₀(1/5) = 2/5 and w = 1/5
        let two_fifths = rational_mod(&crate::arith::rat(2, 5), ring.modulus()).unwrap();
        let fifth = rational_mod(&crate::arith::rat(1, 5), ring.modulus()).unwrap();
        assert_eq!(a, vec![vec![BigInt::one(), two_fifths], vec![BigInt::zero(), fifth]]);
        assert!(comodule_to_action(scalar, &int(2)).is_err());
    }

    #[test]
    fn homomorphism_on_samples() {
        for m in all() {
            let table = ActionTable::sweep(&m, 4).unwrap();
            assert!(table.is_consistent());
        }
    }

    #[test]
    fn round_trips() {
        for m in all() {
            let level = if m.prime().get() == 2 { 2 } else { 1 };
            let table = ActionTable::sweep(&m, level + 3).unwrap();
            let back = action_to_comodule(&table, level).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn too_few_samples_or_too_low_level() {
        let m = FinComodule::from_json(SYM2).unwrap();
        assert!(action_to_comodule(&ActionTable::sweep(&m, 2).unwrap(), 2).is_err());
        // w² needs Θ₁, which level 0 lacks
        let table = ActionTable::sweep(&m, 4).unwrap();
        assert_eq!(action_to_comodule(&table, 0), Err(Error::SamplesInconsistent));
    }

    /// Brute force over (ℤ/2⁴)^r: the fixed vectors are exactly the span of
    /// the kernel generators.
    #[test]
    fn invariants_match_brute_force() {
        for text in [TRIVIAL, SCALAR, UPPER, SYM2] {
            let mut m = FinComodule::from_json(text).unwrap();
            m.precision = 4;
            let ring = m.ring();
            let r = m.rank();
            let gens = invariants(&m, 3).unwrap();
            let actions: Vec<Matrix> =
                units_below(m.p, 3).iter().map(|g| comodule_to_action(&m, &Rational::from_integer(g.clone())).unwrap()).collect();
            let all_vectors = (0..16u32.pow(r as u32)).map(|mut t| {
                (0..r)
                    .map(|_| {
                        let d = t % 16;
                        t /= 16;
                        BigInt::from(d)
                    })
                    .collect::<Vec<_>>()
            });
            let fixed: BTreeSet<Vec<BigInt>> =
                all_vectors.filter(|v| actions.iter().all(|a| ring.mat_vec(a, v) == *v)).collect();
            let mut span: BTreeSet<Vec<BigInt>> = BTreeSet::from([vec![BigInt::zero(); r]]);
            for (g, _) in &gens {
                let mut next = BTreeSet::new();
                for v in &span {
                    for c in 0..16 {
                        next.insert(v.iter().zip(g).map(|(x, y)| ring.reduce(&(x + y * c))).collect());
                    }
                }
                span = next;
            }
            assert_eq!(span, fixed, "{text}");
        }
        let scalar = FinComodule::from_json(SCALAR).unwrap();
        assert_eq!(invariants(&scalar, 3).unwrap(), vec![(vec![BigInt::from(128)], 1)]);
        let upper = FinComodule::from_json(UPPER).unwrap();
        assert_eq!(invariants(&upper, 3).unwrap(), vec![(vec![BigInt::one(), BigInt::zero()], 16)]);
    }
}
