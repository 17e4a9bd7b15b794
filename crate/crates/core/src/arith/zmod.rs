//! Linear algebra over ℤ/pᴺ: unit-pivot elimination, ranks mod p and
//! Smith-normal-form kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{int_valuation, mod_inverse, Prime};
use crate::error::{Error, Result};

/// The ring ℤ/pᴺ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMod {
    pub p: Prime,
    pub n: u32,
    modulus: BigInt,
}

pub type Matrix = Vec<Vec<BigInt>>;

impl ZMod {
    pub fn new(p: Prime, n: u32) -> Self {
        ZMod { p, n, modulus: p.pow(n) }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn reduce(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn is_unit(&self, x: &BigInt) -> bool {
        !x.is_multiple_of(&self.p.big())
    }

    /// Valuation of a residue; `n` (i.e. "at least N") for zero.
    pub fn valuation(&self, x: &BigInt) -> u32 {
        let r = self.reduce(x);
        if r.is_zero() {
            self.n
        } else {
            int_valuation(&r, self.p) as u32
        }
    }

    pub fn inverse(&self, x: &BigInt) -> Option<BigInt> {
        mod_inverse(x, &self.modulus)
    }

    pub fn mat_mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| self.reduce(&(0..inner).map(|k| &row[k] * &b[k][j]).sum::<BigInt>()))
                    .collect()
            })
            .collect()
    }

    pub fn mat_vec(&self, a: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
        a.iter()
            .map(|row| self.reduce(&row.iter().zip(v).map(|(x, y)| x * y).sum::<BigInt>()))
            .collect()
    }

    pub fn identity(&self, n: usize) -> Matrix {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect()
    }

    /// Solves `a · x = b` for every column of `b`, where `a` may have more rows
    /// than columns. Each column of `a` must admit a unit pivot; the surplus
    /// rows are returned as residuals (all zero iff the system is consistent).
    pub fn solve(&self, a: &Matrix, b: &Matrix) -> Result<Solution> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let k = b.first().map_or(0, Vec::len);
        if rows < cols {
            return Err(Error::BasisSolveFailed);
        }
        if let Some(m) = self.modulus.to_u64().filter(|m| *m < 1 << 63) {
            return self.solve_word(a, b, m, cols, k);
        }
        let mut aug: Matrix = a
            .iter()
            .zip(b)
            .map(|(ra, rb)| ra.iter().chain(rb).map(|x| self.reduce(x)).collect())
            .collect();
        for c in 0..cols {
            let pivot = (c..rows).find(|&r| self.is_unit(&aug[r][c])).ok_or(Error::BasisSolveFailed)?;
            aug.swap(c, pivot);
            let inv = self.inverse(&aug[c][c]).expect("unit pivot");
            for x in aug[c].iter_mut() {
                *x = (&*x * &inv).mod_floor(&self.modulus);
            }
            let pivot_row = aug[c].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == c || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (&*x - &factor * y).mod_floor(&self.modulus);
                }
            }
        }
        let x = (0..k).map(|j| (0..cols).map(|i| aug[i][cols + j].clone()).collect()).collect();
        let residuals = aug[cols..].iter().map(|row| row[cols..].to_vec()).collect();
        Ok(Solution { x, residuals })
    }

    /// `solve` with machine-word residues, for moduli below 2⁶³.
    fn solve_word(&self, a: &Matrix, b: &Matrix, m: u64, cols: usize, k: usize) -> Result<Solution> {
        let p = self.p.get() as u64;
        let red = |x: &BigInt| x.mod_floor(&self.modulus).to_u64().expect("reduced residue fits");
        let mut aug: Vec<Vec<u64>> = a.iter().zip(b).map(|(ra, rb)| ra.iter().chain(rb).map(red).collect()).collect();
        let rows = aug.len();
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % m as u128) as u64;
        for c in 0..cols {
            let pivot = (c..rows).find(|&r| !aug[r][c].is_multiple_of(p)).ok_or(Error::BasisSolveFailed)?;
            aug.swap(c, pivot);
            let inv = self.inverse(&BigInt::from(aug[c][c])).expect("unit pivot").to_u64().unwrap();
            for x in aug[c].iter_mut() {
                *x = mulmod(*x, inv);
            }
            let pivot_row = aug[c].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r == c || row[c] == 0 {
                    continue;
                }
                let factor = m - row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = ((*x as u128 + factor as u128 * *y as u128) % m as u128) as u64;
                }
            }
        }
        let x = (0..k).map(|j| (0..cols).map(|i| BigInt::from(aug[i][cols + j])).collect()).collect();
        let residuals = aug[cols..].iter().map(|row| row[cols..].iter().map(|&v| BigInt::from(v)).collect()).collect();
        Ok(Solution { x, residuals })
    }

    /// Generators of the kernel {x : a·x ≡ 0}, each with the exponent e such
    /// that the generator has additive order pᵉ.
    pub fn kernel(&self, a: &Matrix, ncols: usize) -> Vec<(Vec<BigInt>, u32)> {
        let mut m: Matrix = a.iter().map(|r| r.iter().map(|x| self.reduce(x)).collect()).collect();
        let rows = m.len();
        let mut v = self.identity(ncols);
        let mut diag = vec![self.n; ncols];
        for t in 0..rows.min(ncols) {
            // entry of minimal valuation in the trailing block
            let mut best: Option<(usize, usize, u32)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, x) in row.iter().enumerate().skip(t) {
                    let val = self.valuation(x);
                    if val < self.n && best.is_none_or(|(_, _, b)| val < b) {
                        best = Some((i, j, val));
                    }
                }
            }
            let Some((i, j, k)) = best else { break };
            m.swap(t, i);
            for row in m.iter_mut() {
                row.swap(t, j);
            }
            for row in v.iter_mut() {
                row.swap(t, j);
            }
            let pk = self.p.pow(k);
            let unit = &m[t][t] / &pk;
            let inv = self.inverse(&unit).expect("unit part");
            for x in m[t].iter_mut() {
                *x = (&*x * &inv).mod_floor(&self.modulus);
            }
            let pivot_row = m[t].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == t || row[t].is_zero() {
                    continue;
                }
                let factor = &row[t] / &pk;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (&*x - &factor * y).mod_floor(&self.modulus);
                }
            }
            for c in 0..ncols {
                if c == t || m[t][c].is_zero() {
                    continue;
                }
                let factor = &m[t][c] / &pk;
                for row in m.iter_mut() {
                    let d = &factor * &row[t];
                    row[c] = (&row[c] - d).mod_floor(&self.modulus);
                }
                for row in v.iter_mut() {
                    let d = &factor * &row[t];
                    row[c] = (&row[c] - d).mod_floor(&self.modulus);
                }
            }
            diag[t] = k;
        }
        (0..ncols)
            .filter(|&i| diag[i] > 0)
            .map(|i| {
                let scale = self.p.pow(self.n - diag[i]);
                let g: Vec<BigInt> = v.iter().map(|row| self.reduce(&(&row[i] * &scale))).collect();
                (g, diag[i])
            })
            .collect()
    }

    /// Rank of the reduction mod p.
    pub fn rank_mod_p(&self, a: &Matrix) -> usize {
        let field = ZMod::new(self.p, 1);
        let mut m: Matrix = a.iter().map(|r| r.iter().map(|x| field.reduce(x)).collect()).collect();
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
            m.swap(rank, pivot);
            let inv = field.inverse(&m[rank][c]).unwrap();
            for x in m[rank].iter_mut() {
                *x = field.reduce(&(&*x * &inv));
            }
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        *x = field.reduce(&(&*x - &f * y));
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// One solution vector per right-hand side.
    pub x: Vec<Vec<BigInt>>,
    /// Leftover rows after elimination; all zero iff consistent.
    pub residuals: Matrix,
}

impl Solution {
    pub fn is_consistent(&self) -> bool {
        self.residuals.iter().flatten().all(Zero::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn z(p: u32, n: u32) -> ZMod {
        ZMod::new(Prime::new(p).unwrap(), n)
    }

    #[test]
    fn solve_square_and_tall() {
        let r = z(2, 8);
        let a = m(&[&[1, 2], &[3, 1], &[5, 7]]);
        let x_true = vec![BigInt::from(17), BigInt::from(200)];
        let b: Matrix = r.mat_vec(&a, &x_true).into_iter().map(|v| vec![v]).collect();
        let sol = r.solve(&a, &b).unwrap();
        assert_eq!(sol.x[0], x_true);
        assert!(sol.is_consistent());
        let mut bad = b.clone();
        bad[2][0] += 1;
        assert!(!r.solve(&a, &bad).unwrap().is_consistent());
    }

    #[test]
    fn solve_needs_unit_pivots() {
        let r = z(2, 8);
        let a = m(&[&[2, 1], &[4, 3]]);
        assert_eq!(r.solve(&a, &m(&[&[1], &[1]])).unwrap_err(), Error::BasisSolveFailed);
    }

    #[test]
    fn kernel_of_scalar() {
        // (γ⁻¹ − 1) for γ = 3, 5 mod 2^8: kernel is 128·ℤ/2^8
        let r = z(2, 8);
        let a = m(&[&[170], &[204]]);
        let ker = r.kernel(&a, 1);
        assert_eq!(ker, vec![(vec![BigInt::from(128)], 1)]);
    }

    #[test]
    fn kernel_matches_brute_force() {
        let r = z(2, 4);
        let a = m(&[&[2, 4, 6], &[0, 8, 4], &[6, 12, 2]]);
        let ker = r.kernel(&a, 3);
        let modulus = 16i64;
        let mut brute = std::collections::BTreeSet::new();
        for x in 0..modulus {
            for y in 0..modulus {
                for zz in 0..modulus {
                    let v = vec![BigInt::from(x), BigInt::from(y), BigInt::from(zz)];
                    if r.mat_vec(&a, &v).iter().all(Zero::is_zero) {
                        brute.insert(v);
                    }
                }
            }
        }
        // span of the generators
        let mut span = std::collections::BTreeSet::new();
        span.insert(vec![BigInt::zero(); 3]);
        for (g, _) in &ker {
            let current: Vec<_> = span.iter().cloned().collect();
            for v in current {
                for t in 0..modulus {
                    let w: Vec<BigInt> = v.iter().zip(g).map(|(a, b)| r.reduce(&(a + b * t))).collect();
                    span.insert(w);
                }
            }
        }
        assert_eq!(span, brute);
    }

    #[test]
    fn rank_mod_p() {
        let r = z(3, 5);
        assert_eq!(r.rank_mod_p(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(r.rank_mod_p(&m(&[&[1, 2], &[1, 1]])), 2);
        assert_eq!(r.rank_mod_p(&m(&[&[3, 6], &[9, 0]])), 0);
    }
}
