//! Exact linear algebra over `Q` for homogeneous integer systems.
//!
//! Independent rows are picked cheaply modulo a large prime, the reduced
//! row echelon form is then computed exactly over the rationals, and the
//! resulting nullspace is checked against every original row. Rows the
//! prime failed to see are added back until the check passes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn to_mod(x: i64) -> u64 {
    x.rem_euclid(PRIME as i64) as u64
}

/// Indices of a maximal set of rows independent modulo the working prime.
pub fn independent_rows_mod_p(rows: &[Vec<i64>], cols: usize) -> Vec<usize> {
    // Echelon basis kept as (pivot column, normalized row).
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut chosen = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut r: Vec<u64> = row.iter().map(|&x| to_mod(x)).collect();
        for (pc, b) in &basis {
            let f = r[*pc];
            if f != 0 {
                for c in *pc..cols {
                    r[c] = (r[c] + PRIME - mul_mod(f, b[c])) % PRIME;
                }
            }
        }
        if let Some(pc) = r.iter().position(|&x| x != 0) {
            let inv = pow_mod(r[pc], PRIME - 2);
            for x in r.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            // keep the basis fully reduced so later rows only touch one entry per pivot
            for (_, b) in basis.iter_mut() {
                let f = b[pc];
                if f != 0 {
                    for c in pc..cols {
                        b[c] = (b[c] + PRIME - mul_mod(f, r[c])) % PRIME;
                    }
                }
            }
            basis.push((pc, r));
            chosen.push(idx);
            if basis.len() == cols {
                break;
            }
        }
    }
    chosen
}

/// Reduced row echelon form of a rational matrix, with its pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let (pivot_row, other) = if i < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[i])
            } else {
                let (a, b) = rows.split_at_mut(i);
                (&a[r], &mut b[0])
            };
            for (x, p) in other.iter_mut().zip(pivot_row).skip(c) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Solution space of a homogeneous system in reduced form.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub cols: usize,
    pub pivots: Vec<usize>,
    pub free: Vec<usize>,
    /// `pivot_rows[i][c]`: the RREF row whose leading entry sits at `pivots[i]`.
    pub pivot_rows: Vec<Vec<BigRational>>,
}

impl Nullspace {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    /// Basis vector attached to the `j`-th free column: 1 there, 0 at the
    /// other free columns.
    pub fn basis_vector(&self, j: usize) -> Vec<BigRational> {
        let f = self.free[j];
        let mut v = vec![BigRational::zero(); self.cols];
        v[f] = BigRational::one();
        for (p, row) in self.pivots.iter().zip(&self.pivot_rows) {
            v[*p] = -row[f].clone();
        }
        v
    }

    pub fn basis(&self) -> Vec<Vec<BigRational>> {
        (0..self.dimension()).map(|j| self.basis_vector(j)).collect()
    }
}

fn integer_rows(rows: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<BigRational>> {
    idx.iter()
        .map(|&i| {
            rows[i]
                .iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect()
}

/// Exact nullspace of the integer system `rows · x = 0`.
pub fn integer_nullspace(rows: &[Vec<i64>], cols: usize) -> Nullspace {
    let mut selected = independent_rows_mod_p(rows, cols);
    loop {
        let (pivot_rows, pivots) = rref(integer_rows(rows, &selected), cols);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        let space = Nullspace {
            cols,
            pivots,
            free,
            pivot_rows,
        };
        let basis: Vec<Vec<BigInt>> = space.basis().iter().map(|v| primitive_integer(v)).collect();
        let missed: Vec<usize> = rows
            .iter()
            .enumerate()
            .filter(|(_, row)| {
                basis.iter().any(|v| {
                    let dot: BigInt = row
                        .iter()
                        .zip(v)
                        .filter(|(a, _)| **a != 0)
                        .map(|(a, b)| BigInt::from(*a) * b)
                        .sum();
                    !dot.is_zero()
                })
            })
            .map(|(i, _)| i)
            .collect();
        if missed.is_empty() {
            return space;
        }
        selected.extend(missed);
        selected.sort_unstable();
        selected.dedup();
    }
}

/// Clears denominators and common factors; the first nonzero entry is made positive.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if gcd.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &gcd * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn rref_of_small_matrix() {
        let rows = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(7)]];
        let (r, pivots) = rref(rows, 3);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(r[0], vec![q(1), q(2), q(0)]);
        assert_eq!(r[1], vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn nullspace_of_rank_deficient_system() {
        let rows = vec![vec![1, 1, 0, 0], vec![0, 0, 1, -1], vec![1, 1, 1, -1]];
        let ns = integer_nullspace(&rows, 4);
        assert_eq!(ns.dimension(), 2);
        for v in ns.basis() {
            for row in &rows {
                let dot: BigRational = row.iter().zip(&v).map(|(a, b)| b * q(*a)).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn independent_rows_skip_duplicates() {
        let rows = vec![vec![2, 4], vec![1, 2], vec![0, 3]];
        assert_eq!(independent_rows_mod_p(&rows, 2), vec![0, 2]);
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![q(0), BigRational::new((-3).into(), 4.into()), BigRational::new(3.into(), 2.into())];
        assert_eq!(
            primitive_integer(&v),
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(-2)]
        );
    }
}
