//! Deciding whether a Laurent polynomial is numerical at p.
//!
//! Write f = w⁻ᵐ·P(w) with P a polynomial of degree d = span(f). Since w is a
//! unit on ℤ_(p)^×, f is numerical iff P(r + p·y) ∈ ℤ_(p) for every residue
//! r ∈ {1, …, p−1} and every y ∈ ℤ_(p). A rational polynomial of degree d in y
//! maps ℤ_(p) into itself iff its values at y = 0, …, d are p-integral (the
//! forward differences at 0 are then p-integral, and the binomial basis is
//! integer valued), so (p−1)(d+1) exact evaluations decide the question.

use num_traits::ToPrimitive;

use crate::arith::{is_p_integral, unit_residues, Laurent, Prime, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumericalReport {
    pub numerical: bool,
    /// A unit a with f(a) ∉ ℤ_(p), together with f(a).
    pub witness: Option<(Rational, Rational)>,
}

impl NumericalReport {
    fn from_witness(witness: Option<(Rational, Rational)>) -> Self {
        NumericalReport { numerical: witness.is_none(), witness }
    }
}

pub fn is_numerical(f: &Laurent, p: Prime) -> NumericalReport {
    if f.denominator_exponent(p) == 0 {
        return NumericalReport::from_witness(None);
    }
    let q = p.get() as u64;
    let count = (q - 1) * (f.span() + 1);
    // the first `count` units in increasing order are exactly r + p·j, j ≤ span
    let points: Vec<Rational> = (1u64..)
        .filter(|a| a % q != 0)
        .take(count as usize)
        .map(|a| Rational::from_integer(a.into()))
        .collect();
    first_failure(f, p, &points)
}

/// The residue-class procedure: with e the largest power of p in a
/// denominator, f is numerical iff f(a) is p-integral for every unit
/// a ∈ [1, pᵉ]. Exponential in e, so `None` is returned when pᵉ exceeds
/// `max_points`.
pub fn is_numerical_by_residues(f: &Laurent, p: Prime, max_points: u64) -> Option<NumericalReport> {
    let e = f.denominator_exponent(p);
    if e == 0 {
        return Some(NumericalReport::from_witness(None));
    }
    let size = (p.get() as u64).checked_pow(e.to_u32()?)?;
    if size > max_points {
        return None;
    }
    let points: Vec<Rational> =
        unit_residues(p, e as u32).into_iter().map(|a| Rational::from_integer(a.into())).collect();
    Some(first_failure(f, p, &points))
}

fn first_failure(f: &Laurent, p: Prime, points: &[Rational]) -> NumericalReport {
    let values = f.eval_many(points).expect("evaluation at units");
    let witness = points
        .iter()
        .zip(values)
        .find(|(_, v)| !is_p_integral(v, p))
        .map(|(a, v)| (a.clone(), v));
    NumericalReport::from_witness(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn lp(terms: &[(i64, Rational)]) -> Laurent {
        Laurent::from_terms(terms.iter().cloned())
    }

    #[test]
    fn examples() {
        let two = Prime::TWO;
        assert!(is_numerical(&lp(&[(0, rat(1, 2)), (1, rat(-1, 2))]), two).numerical);
        let r = is_numerical(&lp(&[(0, rat(1, 4)), (1, rat(-1, 4))]), two);
        assert!(!r.numerical);
        assert_eq!(r.witness, Some((int(3), rat(-1, 2))));
        assert!(is_numerical(&lp(&[(-5, int(7)), (3, rat(2, 3))]), two).numerical);
    }

    #[test]
    fn negative_exponents() {
        let three = Prime::new(3).unwrap();
        // (w⁻¹ − w⁻³)/3 = Q(w⁻¹) is numerical, (w⁻¹ − w⁻²)/3 is not
        assert!(is_numerical(&lp(&[(-1, rat(1, 3)), (-3, rat(-1, 3))]), three).numerical);
        assert!(!is_numerical(&lp(&[(-1, rat(1, 3)), (-2, rat(-1, 3))]), three).numerical);
    }

    #[test]
    fn agrees_with_residue_procedure() {
        let primes = [2u32, 3, 5];
        let mut state = 12345u64;
        let mut next = |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for _ in 0..300 {
            let p = Prime::new(primes[next(3) as usize]).unwrap();
            let q = p.get() as i64;
            let terms: Vec<(i64, Rational)> = (0..1 + next(4))
                .map(|_| {
                    let e = next(9) as i64 - 4;
                    let num = next(21) as i64 - 10;
                    let den = q.pow(next(3) as u32) * (1 + next(3) as i64 * (q + 1));
                    (e, rat(num, den))
                })
                .collect();
            let f = lp(&terms);
            let brute = is_numerical_by_residues(&f, p, 1 << 16).unwrap();
            assert_eq!(is_numerical(&f, p).numerical, brute.numerical, "{f} at p={p}");
        }
    }
}
