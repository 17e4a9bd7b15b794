//! The Artin–Schreier relations satisfied by the θₛ, and the étale algebra
//! 𝔽ₚ[X]/(Xᵖ − X) ≅ 𝔽ₚ^p that governs K∨₀K mod p.

use super::{theta_sequence, Family, NumFun};
use crate::arith::{Prime, Rational};
use crate::error::Result;

/// θₛᵖ − θₛ + p·θₛ₊₁, which must vanish identically.
///
/// θₛ₊₁ comes from the recursion (binary powering inside Q), while θₛᵖ is
/// formed here by repeated multiplication.
pub fn artin_schreier_check(p: Prime, s: u32) -> Result<NumFun> {
    let thetas = theta_sequence(p, s + 1, Family::Theta)?;
    let ts = &thetas[s as usize];
    let mut power = ts.clone();
    for _ in 1..p.get() {
        power = &power * ts;
    }
    let scaled = thetas[s as usize + 1].scale(&Rational::from_integer(p.big()))?;
    Ok(&(&power - ts) + &scaled)
}

/// A polynomial over 𝔽ₚ, coefficients from the constant term up.
pub type PolyModP = Vec<u64>;

fn trim(mut f: PolyModP) -> PolyModP {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Reduces modulo Xᵖ − X, i.e. Xᵖ⁺ᵏ ↦ X¹⁺ᵏ.
fn reduce(f: &[u64], p: u64) -> PolyModP {
    let mut out = vec![0u64; p as usize];
    for (i, &c) in f.iter().enumerate() {
        let mut e = i as u64;
        while e >= p {
            e -= p - 1;
        }
        out[e as usize] = (out[e as usize] + c) % p;
    }
    trim(out)
}

fn mul(f: &[u64], g: &[u64], p: u64) -> PolyModP {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    reduce(&out, p)
}

/// eᵣ = 1 − (X − r)ᵖ⁻¹ for r = 0, …, p−1, reduced modulo Xᵖ − X.
///
/// By Fermat, eᵣ(x) is 1 at x = r and 0 at the other points of 𝔽ₚ.
pub fn etale_idempotents(p: Prime) -> Vec<PolyModP> {
    let q = p.get() as u64;
    (0..q)
        .map(|r| {
            let linear = vec![(q - r) % q, 1];
            let mut power = vec![1u64];
            for _ in 0..q - 1 {
                power = mul(&power, &linear, q);
            }
            let mut e: PolyModP = power.iter().map(|c| (q - c) % q).collect();
            if e.is_empty() {
                e.push(0);
            }
            e[0] = (e[0] + 1) % q;
            reduce(&e, q)
        })
        .collect()
}

/// Idempotent, pairwise orthogonal and summing to 1 in 𝔽ₚ[X]/(Xᵖ − X).
pub fn idempotents_are_complete(p: Prime, idempotents: &[PolyModP]) -> bool {
    let q = p.get() as u64;
    let mut sum = Vec::new();
    for (i, e) in idempotents.iter().enumerate() {
        if mul(e, e, q) != reduce(e, q) {
            return false;
        }
        if idempotents[i + 1..].iter().any(|f| !mul(e, f, q).is_empty()) {
            return false;
        }
        sum.resize(sum.len().max(e.len()), 0);
        for (s, c) in sum.iter_mut().zip(e) {
            *s = (*s + c) % q;
        }
    }
    reduce(&sum, q) == vec![1]
}
