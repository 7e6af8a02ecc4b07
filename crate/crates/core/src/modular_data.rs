//! Level-`k` modular data of affine `su(2)` and its modular invariants.
//!
//! Labels are 1-based: `λ = i + 1` indexes the character of `L(k, i)`, so
//! they run over `1..n` with `n = k + 2`. The normalized `S` matrix is
//! `√(2/n)·Ŝ` with `Ŝ_{λμ} = sin(πλμ/n)`; the irrational prefactor never
//! enters exact code, which instead uses `Ŝ·Ŝ = (n/2)·I` and the equivalent
//! condition `Ŝ·N·Ŝ = (n/2)·N` for `S`-invariance.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cyclotomic::{sin_pi_rational, Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::linalg::{integer_nullspace, primitive_integer, Nullspace};

/// `S` and `T` for affine `su(2)` at a fixed level.
#[derive(Clone, Debug)]
pub struct ModularData {
    level: u32,
    n: usize,
    s_hat: Vec<Vec<Cyclotomic>>,
    t_exp: Vec<Rational64>,
}

impl ModularData {
    pub fn new(level: u32) -> Result<Self> {
        if level < 1 {
            return Err(Error::InvalidParameter("level must be >= 1".into()));
        }
        let n = level as usize + 2;
        let ni = n as i64;
        let s_hat: Vec<Vec<Cyclotomic>> = (1..ni)
            .map(|l| (1..ni).map(|m| sin_pi_rational(l * m, ni)).collect())
            .collect();
        let t_exp = (1..ni).map(|l| t_exponent(l, ni)).collect();
        let md = ModularData {
            level,
            n,
            s_hat,
            t_exp,
        };
        md.check_invariants()?;
        Ok(md)
    }

    fn check_invariants(&self) -> Result<()> {
        let d = self.n - 1;
        for l in 0..d {
            for m in 0..l {
                if self.s_hat[l][m] != self.s_hat[m][l] {
                    return Err(Error::Internal(format!("S is not symmetric at ({}, {})", l + 1, m + 1)));
                }
            }
            if self.s_hat[0][l].embed(15).re <= 0.0 {
                return Err(Error::Internal(format!("S_(1,{}) is not positive", l + 1)));
            }
        }
        if !self.s_squared_is_scalar() {
            return Err(Error::Internal(format!("S^2 != (n/2) I at n = {}", self.n)));
        }
        Ok(())
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `n = k + 2`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Period `2n` of the label fold; `8ρ` when `n = 4ρ`.
    pub fn period(&self) -> usize {
        2 * self.n
    }

    /// Number of labels, `n − 1`.
    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn labels(&self) -> std::ops::Range<usize> {
        1..self.n
    }

    /// `Ŝ_{λμ} = sin(πλμ/n)`, 1-based.
    pub fn s_hat(&self, lambda: usize, mu: usize) -> &Cyclotomic {
        &self.s_hat[lambda - 1][mu - 1]
    }

    pub fn s_hat_matrix(&self) -> &[Vec<Cyclotomic>] {
        &self.s_hat
    }

    /// `(λ²/4n − 1/8) mod 1`, 1-based.
    pub fn t_exp(&self, lambda: usize) -> Rational64 {
        self.t_exp[lambda - 1]
    }

    pub fn t_exponents(&self) -> &[Rational64] {
        &self.t_exp
    }

    /// `Ŝ·Ŝ = (n/2)·I`, checked in the group ring of `ζ_{2n}`.
    pub fn s_squared_is_scalar(&self) -> bool {
        let n = self.n as i64;
        let field = CyclotomicField::get(2 * self.n as u64);
        let mut weights = vec![0i64; 2 * self.n];
        for l in 1..n {
            for m in 1..n {
                weights.iter_mut().for_each(|w| *w = 0);
                for a in 1..n {
                    add_sine_product(&mut weights, n, l * a, a * m, 1);
                }
                if l == m {
                    weights[0] -= 2 * n;
                }
                if field.reduce_root_weights(&weights).iter().any(|&c| c != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Normalized real `S = √(2/n)·Ŝ`.
    pub fn s_numeric(&self) -> Vec<Vec<f64>> {
        let n = self.n as f64;
        let scale = (2.0 / n).sqrt();
        (1..self.n)
            .map(|l| {
                (1..self.n)
                    .map(|m| scale * (std::f64::consts::PI * (l * m) as f64 / n).sin())
                    .collect()
            })
            .collect()
    }

    /// Diagonal of `T`, `e(λ²/4n − 1/8)`.
    pub fn t_numeric(&self) -> Vec<num_complex::Complex64> {
        self.t_exp
            .iter()
            .map(|r| {
                let x = *r.numer() as f64 / *r.denom() as f64;
                num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
            })
            .collect()
    }
}

fn t_exponent(lambda: i64, n: i64) -> Rational64 {
    let r = Rational64::new(lambda * lambda, 4 * n) - Rational64::new(1, 8);
    r - r.floor()
}

/// Adds `4·w·sin(πa/n)·sin(πb/n)` to `weights`, indexed by powers of `ζ_{2n}`.
fn add_sine_product(weights: &mut [i64], n: i64, a: i64, b: i64, w: i64) {
    let p = 2 * n;
    weights[(a - b).rem_euclid(p) as usize] += w;
    weights[(b - a).rem_euclid(p) as usize] += w;
    weights[(a + b).rem_euclid(p) as usize] -= w;
    weights[(-a - b).rem_euclid(p) as usize] -= w;
}

/// Integer coefficient matrix of `Σ N_{λμ} χ_λ χ_μ*`, 1-based labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantMatrix {
    n: usize,
    entries: Vec<Vec<i64>>,
}

impl InvariantMatrix {
    pub fn zeros(n: usize) -> Self {
        InvariantMatrix {
            n,
            entries: vec![vec![0; n - 1]; n - 1],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n - 1 {
            m.entries[i][i] = 1;
        }
        m
    }

    /// Builds from an `(n−1)×(n−1)` row-major table.
    pub fn from_rows(n: usize, entries: Vec<Vec<i64>>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("n must be >= 3, got {n}")));
        }
        if entries.len() != n - 1 || entries.iter().any(|r| r.len() != n - 1) {
            return Err(Error::InvalidParameter(format!(
                "expected a {0}x{0} matrix for n = {n}",
                n - 1
            )));
        }
        Ok(InvariantMatrix { n, entries })
    }

    /// Infers `n` from a square table.
    pub fn from_square(entries: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(entries.len() + 1, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, lambda: usize, mu: usize) -> i64 {
        self.entries[lambda - 1][mu - 1]
    }

    pub fn set(&mut self, lambda: usize, mu: usize, value: i64) {
        self.entries[lambda - 1][mu - 1] = value;
    }

    /// Nonzero entries as `(λ, μ, value)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.entries.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i + 1, j + 1, *v))
        })
    }

    pub fn is_physical(&self) -> bool {
        self.get(1, 1) == 1 && self.entries.iter().flatten().all(|&v| v >= 0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n - 1).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(InvariantMatrix { n: self.n, entries })
    }
}

fn check_dims(m: &InvariantMatrix, md: &ModularData) -> Result<()> {
    if m.n != md.n {
        Err(Error::DimensionMismatch {
            expected: md.n,
            actual: m.n,
        })
    } else {
        Ok(())
    }
}

/// Canonical representative of an arbitrary label under `χ_{λ+2n} = χ_λ`
/// and `χ_{−λ} = −χ_λ`.
pub fn fold_label(lambda: i64, md: &ModularData) -> (i8, Option<usize>) {
    let n = md.n as i64;
    let r = lambda.rem_euclid(2 * n);
    if r == 0 || r == n {
        (0, None)
    } else if r < n {
        (1, Some(r as usize))
    } else {
        (-1, Some((2 * n - r) as usize))
    }
}

/// `N` commutes with `T` iff `λ² ≡ μ² (mod 4n)` on its support.
pub fn t_commutes(m: &InvariantMatrix, md: &ModularData) -> Result<bool> {
    check_dims(m, md)?;
    let modulus = 4 * md.n as i64;
    Ok(m.support().all(|(l, u, _)| {
        let (l, u) = (l as i64, u as i64);
        (l * l - u * u).rem_euclid(modulus) == 0
    }))
}

/// `N` commutes with `S` iff `Ŝ·N·Ŝ = (n/2)·N`, checked exactly.
pub fn s_commutes(m: &InvariantMatrix, md: &ModularData) -> Result<bool> {
    check_dims(m, md)?;
    let n = md.n as i64;
    let field = CyclotomicField::get(2 * md.n as u64);
    let support: Vec<_> = m.support().collect();
    let mut weights = vec![0i64; 2 * md.n];
    for l in 1..n {
        for u in 1..n {
            weights.iter_mut().for_each(|w| *w = 0);
            for &(a, b, v) in &support {
                add_sine_product(&mut weights, n, l * a as i64, b as i64 * u, v);
            }
            weights[0] -= 2 * n * m.get(l as usize, u as usize);
            if field.reduce_root_weights(&weights).iter().any(|&c| c != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Rational solution space of the `S`/`T` commutation conditions.
#[derive(Clone, Debug)]
pub struct Commutant {
    n: usize,
    /// Matrix positions `(λ, μ)` allowed by the `T` condition, in row-major order.
    positions: Vec<(usize, usize)>,
    space: Nullspace,
}

impl Commutant {
    pub fn compute(md: &ModularData) -> Self {
        let n = md.n as i64;
        let modulus = 4 * n;
        let positions: Vec<(usize, usize)> = (1..n)
            .flat_map(|l| (1..n).map(move |u| (l, u)))
            .filter(|(l, u)| (l * l - u * u).rem_euclid(modulus) == 0)
            .map(|(l, u)| (l as usize, u as usize))
            .collect();

        let field = CyclotomicField::get(2 * md.n as u64);
        let degree = field.degree();
        let cols = positions.len();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut rows = Vec::new();
        let mut weights = vec![0i64; 2 * md.n];
        for l in 1..n {
            for u in 1..n {
                // one coordinate row per power-basis element, one column per position
                let mut block = vec![vec![0i64; cols]; degree];
                for (c, &(a, b)) in positions.iter().enumerate() {
                    weights.iter_mut().for_each(|w| *w = 0);
                    add_sine_product(&mut weights, n, l * a as i64, b as i64 * u, 1);
                    if (a as i64, b as i64) == (l, u) {
                        weights[0] -= 2 * n;
                    }
                    for (j, v) in field.reduce_root_weights(&weights).into_iter().enumerate() {
                        block[j][c] = v;
                    }
                }
                for row in block {
                    if let Some(row) = normalize_row(row) {
                        if seen.insert(row.clone()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        let space = integer_nullspace(&rows, cols);
        Commutant {
            n: md.n,
            positions,
            space,
        }
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn positions(&self) -> &[(usize, usize)] {
        &self.positions
    }

    pub fn nullspace(&self) -> &Nullspace {
        &self.space
    }

    /// Basis matrices cleared to primitive integer form.
    pub fn primitive_basis(&self) -> Vec<InvariantMatrix> {
        self.space
            .basis()
            .iter()
            .map(|v| {
                let ints = primitive_integer(v);
                let mut m = InvariantMatrix::zeros(self.n);
                for (&(l, u), x) in self.positions.iter().zip(ints) {
                    m.set(l, u, x.to_i64().expect("commutant entry exceeds i64"));
                }
                m
            })
            .collect()
    }
}

fn normalize_row(mut row: Vec<i64>) -> Option<Vec<i64>> {
    let g = row.iter().fold(0i64, |acc, x| acc.gcd(x));
    if g == 0 {
        return None;
    }
    let sign = if row.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        -1
    } else {
        1
    };
    row.iter_mut().for_each(|x| *x = *x / g * sign);
    Some(row)
}

/// A rational basis of the `S`/`T` commutant, as primitive integer matrices
/// whose first nonzero entry is positive.
pub fn commutant_basis(md: &ModularData) -> Vec<InvariantMatrix> {
    Commutant::compute(md).primitive_basis()
}

/// Output of [`enumerate_invariants`].
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub invariants: Vec<InvariantMatrix>,
    pub commutant_dimension: usize,
    pub bound: i64,
    /// Some returned invariant has a free coordinate equal to the bound, so
    /// larger bounds might reveal more.
    pub bound_touched: bool,
}

/// A pivot entry of the commutant expressed as `(Σ_f coef_f·c_f) / denom`.
struct PivotForm {
    position: (usize, usize),
    coefs: Vec<i64>,
    denom: i64,
}

struct Search<'a> {
    free_ranges: Vec<(i64, i64)>,
    pivots: &'a [PivotForm],
    /// Index of the pivot holding entry (1,1), if (1,1) is not free.
    unit_pivot: Option<usize>,
    /// `suffix_max[t][p]`, `suffix_min[t][p]`: reach of free variables `t..`.
    suffix_max: Vec<Vec<i64>>,
    suffix_min: Vec<Vec<i64>>,
}

impl Search<'_> {
    fn run(&self, depth: usize, assignment: &mut Vec<i64>, partial: &mut [i64], out: &mut Vec<Vec<i64>>) {
        for (p, form) in self.pivots.iter().enumerate() {
            let hi = partial[p] + self.suffix_max[depth][p];
            if hi < 0 {
                return;
            }
            if self.unit_pivot == Some(p) {
                let lo = partial[p] + self.suffix_min[depth][p];
                if lo > form.denom || hi < form.denom {
                    return;
                }
            }
        }
        if depth == self.free_ranges.len() {
            let ok = self
                .pivots
                .iter()
                .zip(partial.iter())
                .all(|(f, &v)| v >= 0 && v % f.denom == 0);
            if ok {
                out.push(assignment.clone());
            }
            return;
        }
        let (lo, hi) = self.free_ranges[depth];
        for value in lo..=hi {
            for (p, form) in self.pivots.iter().enumerate() {
                partial[p] += form.coefs[depth] * value;
            }
            assignment.push(value);
            self.run(depth + 1, assignment, partial, out);
            assignment.pop();
            for (p, form) in self.pivots.iter().enumerate() {
                partial[p] -= form.coefs[depth] * value;
            }
        }
    }
}

/// All physical invariants (nonnegative integer commutant points with
/// `N_{1,1} = 1`) whose free commutant coordinates lie in `[0, bound]`.
///
/// The commutant is parametrized by its free positions in reduced echelon
/// form, so each coordinate equals a matrix entry and nonnegativity
/// restricts the coefficient window `[−bound, bound]` to `[0, bound]`.
pub fn enumerate_invariants(md: &ModularData, bound: i64) -> Result<Enumeration> {
    if bound < 1 {
        return Err(Error::InvalidParameter(format!("bound must be >= 1, got {bound}")));
    }
    let commutant = Commutant::compute(md);
    let space = commutant.nullspace();
    let positions = commutant.positions();
    let free = &space.free;

    let pivots: Vec<PivotForm> = space
        .pivots
        .iter()
        .zip(&space.pivot_rows)
        .map(|(&p, row)| {
            let denom = free
                .iter()
                .fold(BigInt::from(1), |acc, &f| acc.lcm(row[f].denom()));
            let coefs = free
                .iter()
                .map(|&f| {
                    (-&row[f] * BigRational::from_integer(denom.clone()))
                        .to_integer()
                        .to_i64()
                        .expect("commutant coefficient exceeds i64")
                })
                .collect();
            PivotForm {
                position: positions[p],
                coefs,
                denom: denom.to_i64().expect("commutant denominator exceeds i64"),
            }
        })
        .collect();

    let free_ranges: Vec<(i64, i64)> = free
        .iter()
        .map(|&f| if positions[f] == (1, 1) { (1, 1) } else { (0, bound) })
        .collect();
    let unit_pivot = pivots.iter().position(|p| p.position == (1, 1));
    if unit_pivot.is_none() && !free.iter().any(|&f| positions[f] == (1, 1)) {
        return Err(Error::Internal("entry (1,1) missing from the commutant".into()));
    }

    let d = free.len();
    let mut suffix_max = vec![vec![0i64; pivots.len()]; d + 1];
    let mut suffix_min = vec![vec![0i64; pivots.len()]; d + 1];
    for t in (0..d).rev() {
        let (lo, hi) = free_ranges[t];
        for (p, form) in pivots.iter().enumerate() {
            let (a, b) = (form.coefs[t] * lo, form.coefs[t] * hi);
            suffix_max[t][p] = suffix_max[t + 1][p] + a.max(b);
            suffix_min[t][p] = suffix_min[t + 1][p] + a.min(b);
        }
    }
    let search = Search {
        free_ranges: free_ranges.clone(),
        pivots: &pivots,
        unit_pivot,
        suffix_max,
        suffix_min,
    };

    // Shard on the first free coordinate; results are sorted afterwards.
    let assignments: Vec<Vec<i64>> = if d == 0 {
        let mut out = Vec::new();
        search.run(0, &mut Vec::new(), &mut vec![0; pivots.len()], &mut out);
        out
    } else {
        let (lo, hi) = free_ranges[0];
        (lo..=hi)
            .into_par_iter()
            .flat_map_iter(|value| {
                let mut partial: Vec<i64> = pivots.iter().map(|f| f.coefs[0] * value).collect();
                let mut out = Vec::new();
                search.run(1, &mut vec![value], &mut partial, &mut out);
                out
            })
            .collect()
    };

    let mut bound_touched = false;
    let mut invariants = Vec::with_capacity(assignments.len());
    for values in &assignments {
        let mut m = InvariantMatrix::zeros(md.n);
        for ((&f, &v), &(lo, hi)) in free.iter().zip(values).zip(&free_ranges) {
            let (l, u) = positions[f];
            m.set(l, u, v);
            if lo != hi && v == bound {
                bound_touched = true;
            }
        }
        for form in &pivots {
            let v: i64 = form.coefs.iter().zip(values).map(|(a, b)| a * b).sum();
            m.set(form.position.0, form.position.1, v / form.denom);
        }
        if !m.is_physical() || !t_commutes(&m, md)? || !s_commutes(&m, md)? {
            return Err(Error::Internal(format!(
                "enumerated matrix fails re-verification at n = {}",
                md.n
            )));
        }
        invariants.push(m);
    }
    invariants.sort_by_cached_key(|m| (ade_classify(m).map(|t| t.order_key()).unwrap_or(u8::MAX), m.clone()));
    Ok(Enumeration {
        invariants,
        commutant_dimension: d,
        bound,
        bound_touched,
    })
}

/// The `D_{2ρ+1}` invariant `Σ_{λ odd} |χ_λ|² + Σ_{λ even} χ_λ χ_{4ρ−λ}*`, `n = 4ρ`.
pub fn dodd_invariant(rho: usize) -> Result<InvariantMatrix> {
    if rho < 2 {
        return Err(Error::InvalidParameter(format!("rho must be >= 2, got {rho}")));
    }
    Ok(dodd_pattern(4 * rho))
}

fn dodd_pattern(n: usize) -> InvariantMatrix {
    let mut m = InvariantMatrix::zeros(n);
    for l in 1..n {
        if l % 2 == 1 {
            m.set(l, l, 1);
        } else {
            m.set(l, n - l, 1);
        }
    }
    m
}

/// The `D_{2ρ+2}` invariant `Σ_{λ odd < n/2} |χ_λ + χ_{n−λ}|² + 2|χ_{n/2}|²`
/// for `n ≡ 2 (mod 4)`, `n ≥ 6`.
pub fn deven_invariant(n: usize) -> Result<InvariantMatrix> {
    if n < 6 || n % 4 != 2 {
        return Err(Error::InvalidParameter(format!(
            "D-even invariant needs n = 2 (mod 4) and n >= 6, got {n}"
        )));
    }
    let mut m = InvariantMatrix::zeros(n);
    for l in (1..n / 2).step_by(2) {
        for a in [l, n - l] {
            for b in [l, n - l] {
                m.set(a, b, 1);
            }
        }
    }
    m.set(n / 2, n / 2, 2);
    Ok(m)
}

/// Type of a physical invariant in the A-D-E classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdeType {
    A,
    DOdd,
    DEven,
    Exceptional(usize),
}

impl AdeType {
    fn order_key(self) -> u8 {
        match self {
            AdeType::A => 0,
            AdeType::DOdd | AdeType::DEven => 1,
            AdeType::Exceptional(_) => 2,
        }
    }

    /// Dynkin diagram name at the given `n`, e.g. `A_7`, `D_5`, `E_6`.
    pub fn dynkin(self, n: usize) -> String {
        match self {
            AdeType::A => format!("A_{}", n - 1),
            AdeType::DOdd | AdeType::DEven => format!("D_{}", n / 2 + 1),
            AdeType::Exceptional(12) => "E_6".into(),
            AdeType::Exceptional(18) => "E_7".into(),
            AdeType::Exceptional(30) => "E_8".into(),
            AdeType::Exceptional(m) => format!("E?({m})"),
        }
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A => write!(f, "A"),
            AdeType::DOdd => write!(f, "D-odd"),
            AdeType::DEven => write!(f, "D-even"),
            AdeType::Exceptional(n) => write!(f, "Exceptional({n})"),
        }
    }
}

impl FromStr for AdeType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(AdeType::A),
            "D-odd" => Ok(AdeType::DOdd),
            "D-even" => Ok(AdeType::DEven),
            _ => s
                .strip_prefix("Exceptional(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.parse().ok())
                .map(AdeType::Exceptional)
                .ok_or_else(|| Error::InvalidParameter(format!("unknown ADE label '{s}'"))),
        }
    }
}

/// Classifies a physical invariant by comparison with the A and D patterns.
pub fn ade_classify(m: &InvariantMatrix) -> Result<AdeType> {
    if !m.is_physical() {
        return Err(Error::NotPhysical(
            "entries must be nonnegative with N(1,1) = 1".into(),
        ));
    }
    let n = m.n;
    if *m == InvariantMatrix::identity(n) {
        return Ok(AdeType::A);
    }
    if n.is_multiple_of(4) && *m == dodd_pattern(n) {
        return Ok(AdeType::DOdd);
    }
    if n % 4 == 2 && n >= 6 && *m == deven_invariant(n)? {
        return Ok(AdeType::DEven);
    }
    Ok(AdeType::Exceptional(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(n: usize, l: usize, u: usize) -> InvariantMatrix {
        let mut m = InvariantMatrix::zeros(n);
        m.set(l, u, 1);
        m
    }

    #[test]
    fn t_exponents_by_substitution() {
        let md = ModularData::new(2).unwrap();
        assert_eq!(md.n(), 4);
        assert_eq!(md.labels().collect::<Vec<_>>(), vec![1, 2, 3]);
        assert_eq!(
            md.t_exponents(),
            &[Rational64::new(15, 16), Rational64::new(1, 8), Rational64::new(7, 16)]
        );
        let md = ModularData::new(6).unwrap();
        assert_eq!(md.t_exp(1), Rational64::new(29, 32));
        assert_eq!(md.period(), 16);
    }

    #[test]
    fn t_exponent_matches_rho_form() {
        for rho in 2..=8i64 {
            let md = ModularData::new(4 * rho as u32 - 2).unwrap();
            for l in 1..4 * rho {
                let r = Rational64::new(l * l, 16 * rho) - Rational64::new(1, 8);
                assert_eq!(md.t_exp(l as usize), r - r.floor());
            }
        }
    }

    #[test]
    fn s_corner_is_positive() {
        for k in [1, 5, 17] {
            let md = ModularData::new(k).unwrap();
            let v = md.s_hat(1, 1).embed(12);
            assert!(v.re > 0.0 && v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn level_zero_rejected() {
        assert!(ModularData::new(0).is_err());
    }

    #[test]
    fn s_squared_for_many_levels() {
        for k in 1..=30 {
            assert!(ModularData::new(k).unwrap().s_squared_is_scalar(), "k = {k}");
        }
    }

    #[test]
    fn s_squared_via_cyclotomic_products() {
        // independent route through generic cyclotomic multiplication
        for k in [1, 2, 6] {
            let md = ModularData::new(k).unwrap();
            let d = md.rank();
            let half_n =
                Cyclotomic::from_rational(4, BigRational::new((md.n() as i64).into(), 2.into()));
            for i in 0..d {
                for j in 0..d {
                    let mut acc = Cyclotomic::zero(md.s_hat_matrix()[0][0].conductor());
                    for a in 0..d {
                        acc = &acc + &(&md.s_hat_matrix()[i][a] * &md.s_hat_matrix()[a][j]);
                    }
                    let expected = if i == j { half_n.clone() } else { Cyclotomic::zero(4) };
                    assert_eq!(acc, expected);
                }
            }
        }
    }

    #[test]
    fn numeric_s_matches_rho_coefficient() {
        for rho in 2..=4 {
            let md = ModularData::new(4 * rho as u32 - 2).unwrap();
            let s = md.s_numeric();
            for l in 1..4 * rho {
                for u in 1..4 * rho {
                    let rho_form = (1.0 / (2.0 * rho as f64).sqrt())
                        * (2.0 * std::f64::consts::PI * (l * u) as f64 / (8 * rho) as f64).sin();
                    let exact = md.s_hat(l, u).embed(15).re * (2.0 / md.n() as f64).sqrt();
                    assert!((s[l - 1][u - 1] - rho_form).abs() < 1e-12);
                    assert!((exact - rho_form).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn fold_examples() {
        let md4 = ModularData::new(2).unwrap();
        let md8 = ModularData::new(6).unwrap();
        assert_eq!(fold_label(0, &md8), (0, None));
        assert_eq!(fold_label(8, &md8), (0, None));
        assert_eq!(fold_label(9, &md8), (-1, Some(7)));
        assert_eq!(fold_label(-3, &md8), (-1, Some(3)));
        assert_eq!(fold_label(19, &md8), (1, Some(3)));
        assert_eq!(fold_label(4, &md4), (0, None));
    }

    #[test]
    fn t_commutation_examples() {
        let md = ModularData::new(6).unwrap();
        assert!(t_commutes(&InvariantMatrix::identity(8), &md).unwrap());
        assert!(t_commutes(&single(8, 2, 6), &md).unwrap());
        assert!(!t_commutes(&single(8, 1, 2), &md).unwrap());
        assert!(t_commutes(&single(4, 1, 1), &md).is_err());
    }

    #[test]
    fn s_commutation_examples() {
        let md = ModularData::new(6).unwrap();
        assert!(s_commutes(&InvariantMatrix::identity(8), &md).unwrap());
        assert!(s_commutes(&dodd_invariant(2).unwrap(), &md).unwrap());
        assert!(!s_commutes(&single(8, 2, 6), &md).unwrap());
    }

    #[test]
    fn dodd_shape() {
        let m = dodd_invariant(2).unwrap();
        let support: Vec<_> = m.support().map(|(a, b, _)| (a, b)).collect();
        assert_eq!(
            support,
            vec![(1, 1), (2, 6), (3, 3), (4, 4), (5, 5), (6, 2), (7, 7)]
        );
        assert!(m.is_symmetric() && m.is_physical());
        assert!(dodd_invariant(1).is_err());
    }

    #[test]
    fn commutant_at_small_levels() {
        let md = ModularData::new(2).unwrap();
        assert_eq!(commutant_basis(&md), vec![InvariantMatrix::identity(4)]);

        let md = ModularData::new(6).unwrap();
        let c = Commutant::compute(&md);
        for b in c.primitive_basis() {
            assert!(t_commutes(&b, &md).unwrap() && s_commutes(&b, &md).unwrap());
        }
        // identity and the D-odd matrix span a 2-dimensional subspace of the commutant
        assert_eq!(c.dimension(), 2);
    }

    #[test]
    fn enumeration_small_levels() {
        let e = enumerate_invariants(&ModularData::new(2).unwrap(), 3).unwrap();
        assert_eq!(e.invariants, vec![InvariantMatrix::identity(4)]);

        let e = enumerate_invariants(&ModularData::new(6).unwrap(), 3).unwrap();
        assert_eq!(
            e.invariants,
            vec![InvariantMatrix::identity(8), dodd_invariant(2).unwrap()]
        );
        assert!(!e.bound_touched);
    }

    #[test]
    fn enumeration_level_ten_has_exceptional() {
        let md = ModularData::new(10).unwrap();
        let e = enumerate_invariants(&md, 3).unwrap();
        let types: Vec<_> = e
            .invariants
            .iter()
            .map(|m| ade_classify(m).unwrap())
            .collect();
        assert_eq!(types, vec![AdeType::A, AdeType::DOdd, AdeType::Exceptional(12)]);
        let e6 = &e.invariants[2];
        // |χ1+χ7|² + |χ4+χ8|² + |χ5+χ11|²
        for (a, b) in [(1, 7), (4, 8), (5, 11)] {
            assert_eq!(e6.get(a, b), 1);
            assert_eq!(e6.get(b, a), 1);
            assert_eq!(e6.get(a, a), 1);
        }
        assert_eq!(e6.support().count(), 12);
        let basis = commutant_basis(&md);
        assert!(basis.len() >= 3);
    }

    #[test]
    fn bound_must_be_positive() {
        assert!(enumerate_invariants(&ModularData::new(2).unwrap(), 0).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(ade_classify(&InvariantMatrix::identity(9)).unwrap(), AdeType::A);
        assert_eq!(ade_classify(&dodd_invariant(2).unwrap()).unwrap(), AdeType::DOdd);
        assert_eq!(ade_classify(&deven_invariant(6).unwrap()).unwrap(), AdeType::DEven);
        let mut bad = InvariantMatrix::identity(5);
        bad.set(2, 3, -1);
        assert!(matches!(ade_classify(&bad), Err(Error::NotPhysical(_))));
        assert_eq!(AdeType::Exceptional(18).dynkin(18), "E_7");
        assert_eq!(AdeType::DOdd.dynkin(8), "D_5");
        for t in [AdeType::A, AdeType::DOdd, AdeType::DEven, AdeType::Exceptional(30)] {
            assert_eq!(t.to_string().parse::<AdeType>().unwrap(), t);
        }
    }

    #[test]
    fn deven_commutes() {
        for n in [6usize, 10, 14] {
            let md = ModularData::new(n as u32 - 2).unwrap();
            let m = deven_invariant(n).unwrap();
            assert!(t_commutes(&m, &md).unwrap() && s_commutes(&m, &md).unwrap());
        }
    }

    #[test]
    fn matrix_shape_validation() {
        assert!(InvariantMatrix::from_rows(4, vec![vec![1, 0], vec![0, 1]]).is_err());
        assert!(InvariantMatrix::from_square(vec![vec![1, 0], vec![0, 1]]).is_ok());
    }
}
