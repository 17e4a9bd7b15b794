//! KO∨₀KO at p = 2: the even numerical functions inside K∨₀K.
//!
//! Squaring maps ℤ₂^× onto 1 + 8ℤ₂, and the real theory sees exactly the
//! functions that factor through it. On Laurent bodies this is the
//! condition that only even powers of w occur.
//!
//! Which Θ-monomials form a topological basis is decided empirically by
//! [`ko_basis_check`]. The family starting at Θ₀ cannot qualify, since
//! Θ₀ = (1 − w)/2 is not even; the check reports this rather than assuming
//! an answer.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arith::zmod::{Matrix, ZMod};
use crate::arith::{Prime, Rational};
use crate::error::{Error, Result};
use crate::kk::{adams, is_numerical, q, theta_sequence, Family, NumFun};

/// Whether f lies in the even subalgebra: p = 2, even exponents, numerical.
pub fn is_in_ko(f: &NumFun) -> bool {
    f.prime() == Prime::TWO && f.body().has_only_even_exponents() && is_numerical(f.body(), Prime::TWO).numerical
}

/// A numerical function at p = 2 with only even powers of w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenNumFun(NumFun);

impl EvenNumFun {
    pub fn new(f: NumFun) -> Result<Self> {
        if f.prime() != Prime::TWO {
            return Err(Error::Invalid(format!("KO is only considered at p = 2 (got p = {})", f.prime())));
        }
        if !f.body().has_only_even_exponents() {
            return Err(Error::Invalid(format!("{f} has odd powers of w, so it is not in KO")));
        }
        Ok(EvenNumFun(f))
    }

    pub fn as_numfun(&self) -> &NumFun {
        &self.0
    }

    pub fn into_numfun(self) -> NumFun {
        self.0
    }

    /// ψᵃ for a rational unit a; substituting a⁻¹w keeps exponents.
    pub fn adams(&self, a: &Rational) -> Result<EvenNumFun> {
        Ok(EvenNumFun(adams(&self.0, a)?))
    }
}

impl fmt::Display for EvenNumFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Add for &EvenNumFun {
    type Output = EvenNumFun;
    fn add(self, rhs: &EvenNumFun) -> EvenNumFun {
        EvenNumFun(&self.0 + &rhs.0)
    }
}

impl Sub for &EvenNumFun {
    type Output = EvenNumFun;
    fn sub(self, rhs: &EvenNumFun) -> EvenNumFun {
        EvenNumFun(&self.0 - &rhs.0)
    }
}

impl Mul for &EvenNumFun {
    type Output = EvenNumFun;
    fn mul(self, rhs: &EvenNumFun) -> EvenNumFun {
        EvenNumFun(&self.0 * &rhs.0)
    }
}

/// Q(f) = (f − f²)/2, which stays even.
pub fn q_ko(f: &EvenNumFun) -> EvenNumFun {
    EvenNumFun(q(&f.0))
}

/// A candidate generating family for the basis check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KoCandidate {
    /// Θₐ, …, Θ_ℓ with a ∈ {0, 1}.
    StartingAt(u32),
    /// Θ₀(w²), …, Θ_ℓ(w²): reading w as a coordinate that maps to w².
    Squared,
}

impl KoCandidate {
    pub fn label(self) -> String {
        match self {
            KoCandidate::StartingAt(a) => format!("Theta[{a}..]"),
            KoCandidate::Squared => "Theta[0..](w^2)".to_string(),
        }
    }

    fn generator_name(self, n: u32) -> String {
        match self {
            KoCandidate::StartingAt(_) => format!("Theta[{n}]"),
            KoCandidate::Squared => format!("Theta[{n}](w^2)"),
        }
    }

    fn levels(self, level: u32) -> std::ops::RangeInclusive<u32> {
        match self {
            KoCandidate::StartingAt(a) => a..=level,
            KoCandidate::Squared => 0..=level,
        }
    }
}

/// Outcome for one candidate family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub candidate: KoCandidate,
    pub generators: Vec<String>,
    /// Generators that are not even numerical functions.
    pub outside_ko: Vec<String>,
    pub monomials: usize,
    pub rank_mod_2: usize,
    /// Whether every target function is an integral combination mod 2ᴺ.
    pub spans: bool,
    pub witness: Option<String>,
}

impl CandidateReport {
    pub fn is_basis(&self) -> bool {
        self.outside_ko.is_empty() && self.spans && self.rank_mod_2 == self.monomials
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoBasisReport {
    pub level: u32,
    pub precision: u32,
    /// Dimension of the even functions on units mod 2^{ℓ+3}, namely the
    /// number of square classes 2^ℓ.
    pub dimension: usize,
    pub candidates: Vec<CandidateReport>,
}

impl KoBasisReport {
    /// The first candidate that passes every test.
    pub fn succeeded(&self) -> Option<&CandidateReport> {
        self.candidates.iter().find(|c| c.is_basis())
    }

    pub fn to_json(&self) -> Value {
        let candidates: Vec<Value> = self
            .candidates
            .iter()
            .map(|c| {
                json!({
                    "candidate": c.candidate.label(),
                    "generators": c.generators,
                    "outside_ko": c.outside_ko,
                    "monomials": c.monomials,
                    "rank_mod_2": c.rank_mod_2,
                    "spans": c.spans,
                    "basis": c.is_basis(),
                    "witness": c.witness,
                })
            })
            .collect();
        json!({
            "level": self.level,
            "precision": self.precision,
            "dimension": self.dimension,
            "candidates": candidates,
            "succeeded": self.succeeded().map(|c| c.candidate.label()),
        })
    }
}

impl fmt::Display for KoBasisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "KO basis check at level {}, precision 2^{}: {} square classes",
            self.level, self.precision, self.dimension
        )?;
        for c in &self.candidates {
            let verdict = if c.is_basis() { "basis" } else { "not a basis" };
            write!(f, "  {}: {verdict}; {} monomials, rank mod 2 = {}", c.candidate.label(), c.monomials, c.rank_mod_2)?;
            if !c.outside_ko.is_empty() {
                write!(f, "; not even: {}", c.outside_ko.join(", "))?;
            }
            if let Some(w) = &c.witness {
                write!(f, "; {w}")?;
            }
            writeln!(f)?;
        }
        match self.succeeded() {
            Some(c) => write!(f, "result: {} spans KO", c.candidate.label()),
            None => write!(f, "result: no candidate spans KO"),
        }
    }
}

/// Integer values of Θₙ(x) for n = 0, …, level at an odd integer x.
fn theta_values(x: &BigInt, level: u32) -> Vec<BigInt> {
    let mut t: BigInt = (BigInt::one() - x) / 2;
    let mut out = vec![t.clone()];
    for _ in 0..level {
        t = (&t - &t * &t) / 2;
        out.push(t.clone());
    }
    out
}

/// C(t, k) with t = (x² − 1)/8: an integral basis of the even numerical
/// polynomials, with degrees 0, 2, 4, ….
fn square_binomial(x: &BigInt, k: u64) -> BigInt {
    let t: BigInt = (x * x - 1) / 8;
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (&t - i) / (i + 1);
    }
    acc
}

/// Tests each candidate family Θₐ^{εₐ}⋯Θ_ℓ^{ε_ℓ} (ε ∈ {0, 1}) against the
/// even numerical polynomials C((w² − 1)/8, k), k < 2^ℓ, by evaluation at
/// the units mod 2^{ℓ+3} over ℤ/2ᴺ.
pub fn ko_basis_check(level: u32, precision: u32) -> Result<KoBasisReport> {
    if level > 10 {
        return Err(Error::Invalid("ko check-basis supports levels up to 10".into()));
    }
    let p = Prime::TWO;
    let ring = ZMod::new(p, precision);
    let points: Vec<BigInt> = (1..1u64 << (level + 3)).step_by(2).map(BigInt::from).collect();
    let dimension = 1usize << level;
    let targets: Matrix = points
        .iter()
        .map(|x| (0..dimension as u64).map(|k| ring.reduce(&square_binomial(x, k))).collect())
        .collect();
    let thetas = theta_sequence(p, level, Family::BigTheta)?;

    let candidates = [KoCandidate::StartingAt(0), KoCandidate::StartingAt(1), KoCandidate::Squared]
        .into_iter()
        .map(|candidate| {
            let levels: Vec<u32> = candidate.levels(level).collect();
            let mut outside_ko = Vec::new();
            for &n in &levels {
                let body = match candidate {
                    KoCandidate::Squared => NumFun::new(p, thetas[n as usize].body().pow_var(2))?,
                    KoCandidate::StartingAt(_) => thetas[n as usize].clone(),
                };
                if !is_in_ko(&body) {
                    outside_ko.push(candidate.generator_name(n));
                }
            }
            let matrix: Matrix = points
                .iter()
                .map(|x| {
                    let point = match candidate {
                        KoCandidate::Squared => x * x,
                        KoCandidate::StartingAt(_) => x.clone(),
                    };
                    let values = theta_values(&point, level);
                    let factors: Vec<&BigInt> = levels.iter().map(|&n| &values[n as usize]).collect();
                    (0..1usize << factors.len())
                        .map(|mask| {
                            let mut v = BigInt::one();
                            for (i, f) in factors.iter().enumerate() {
                                if mask >> i & 1 == 1 {
                                    v *= *f;
                                }
                            }
                            ring.reduce(&v)
                        })
                        .collect()
                })
                .collect();
            let monomials = 1usize << levels.len();
            let rank_mod_2 = ring.rank_mod_p(&matrix);
            let (spans, witness) = match ring.solve(&matrix, &targets) {
                Err(Error::BasisSolveFailed) => {
                    (false, Some(format!("evaluation matrix has rank {rank_mod_2} < {monomials} mod 2")))
                }
                Err(e) => return Err(e),
                Ok(solution) => {
                    let bad = (0..dimension).find(|&k| solution.residuals.iter().any(|row| !row[k].is_zero()));
                    match bad {
                        None => (true, None),
                        Some(k) => (false, Some(format!("C((w^2-1)/8, {k}) is not in the span mod 2^{precision}"))),
                    }
                }
            };
            Ok(CandidateReport {
                candidate,
                generators: levels.iter().map(|&n| candidate.generator_name(n)).collect(),
                outside_ko,
                monomials,
                rank_mod_2,
                spans,
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KoBasisReport { level, precision, dimension, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Laurent};
    use crate::kk::theta;

    fn nf(terms: &[(i64, i64, i64)]) -> NumFun {
        NumFun::new(Prime::TWO, Laurent::from_terms(terms.iter().map(|&(e, n, d)| (e, rat(n, d))))).unwrap()
    }

    #[test]
    fn membership() {
        assert!(is_in_ko(&nf(&[(2, 1, 1)])));
        assert!(!is_in_ko(&theta(Prime::TWO, 0, Family::BigTheta).unwrap()));
        let theta1 = nf(&[(0, 1, 8), (2, -1, 8)]);
        assert_eq!(theta1, theta(Prime::TWO, 1, Family::BigTheta).unwrap());
        assert!(is_in_ko(&theta1));
        assert!(!is_in_ko(&NumFun::w(Prime::new(3).unwrap()).pow(2)));
    }

    #[test]
    fn restricted_q() {
        let one = EvenNumFun::new(NumFun::one(Prime::TWO)).unwrap();
        assert!(q_ko(&one).as_numfun().is_zero());
        let w2 = EvenNumFun::new(nf(&[(2, 1, 1)])).unwrap();
        assert_eq!(q_ko(&w2).into_numfun(), nf(&[(2, 1, 2), (4, -1, 2)]));
        let t1 = EvenNumFun::new(theta(Prime::TWO, 1, Family::BigTheta).unwrap()).unwrap();
        let t2 = q_ko(&t1);
        assert_eq!(t2.as_numfun(), &theta(Prime::TWO, 2, Family::BigTheta).unwrap());
        assert!(is_in_ko(t2.as_numfun()));
        assert!(EvenNumFun::new(NumFun::w(Prime::TWO)).is_err());
    }

    /// The binomial targets really are even numerical functions.
    #[test]
    fn targets_are_even_numerical() {
        let t = nf(&[(0, -1, 8), (2, 1, 8)]);
        let mut acc = NumFun::one(Prime::TWO);
        for k in 0..8i64 {
            let body = acc.body().clone();
            assert!(is_in_ko(&acc));
            for x in [1i64, 3, 5, 7, 9, 11] {
                let v = body.eval(&Rational::from_integer(x.into())).unwrap();
                assert_eq!(v, Rational::from_integer(square_binomial(&BigInt::from(x), k as u64)));
            }
            let step = (t.body() - &Laurent::constant(Rational::from_integer(k.into())))
                .scale(&Rational::new(1.into(), (k + 1).into()));
            acc = NumFun::new(Prime::TWO, acc.body() * &step).unwrap();
        }
    }

    #[test]
    fn basis_report() {
        let report = ko_basis_check(3, 4).unwrap();
        assert_eq!(report.dimension, 8);
        let [zero, one, squared] = &report.candidates[..] else { panic!("three candidates") };
        assert_eq!(zero.outside_ko, vec!["Theta[0]".to_string()]);
        assert!(!zero.is_basis());
        assert!(one.is_basis(), "{report}");
        assert_eq!(one.monomials, 8);
        assert!(squared.outside_ko.is_empty());
        assert!(!squared.spans);
        assert_eq!(report.succeeded().unwrap().candidate, KoCandidate::StartingAt(1));
        assert_eq!(report, ko_basis_check(3, 4).unwrap());
    }

    #[test]
    fn closure_under_operations() {
        let a = EvenNumFun::new(theta(Prime::TWO, 1, Family::BigTheta).unwrap()).unwrap();
        let b = EvenNumFun::new(nf(&[(-2, 1, 1)])).unwrap();
        for x in [&a + &b, &a * &b, &a - &b, q_ko(&a), a.adams(&rat(3, 5)).unwrap()] {
            assert!(is_in_ko(x.as_numfun()));
        }
    }
}
