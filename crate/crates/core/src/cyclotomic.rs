//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! Elements are stored over the power basis `1, ζ, …, ζ^{φ(N)-1}` after
//! reduction modulo the cyclotomic polynomial `Φ_N`, so two elements of the
//! same conductor are equal exactly when their coordinates are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest number of decimal digits the `f64` embedding can honour.
pub const MAX_EMBED_DIGITS: u32 = 15;

/// Per-conductor data: `Φ_N` and the reduced coordinates of every `ζ_N^e`.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: u64,
    phi: Vec<BigInt>,
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    /// Returns the (shared, memoized) field of the given conductor.
    pub fn get(conductor: u64) -> Arc<CyclotomicField> {
        assert!(conductor >= 1, "conductor must be positive");
        static FIELDS: OnceLock<Mutex<HashMap<u64, Arc<CyclotomicField>>>> = OnceLock::new();
        let fields = FIELDS.get_or_init(Default::default);
        if let Some(f) = fields.lock().unwrap().get(&conductor) {
            return Arc::clone(f);
        }
        let field = Arc::new(Self::build(conductor));
        fields
            .lock()
            .unwrap()
            .entry(conductor)
            .or_insert(field)
            .clone()
    }

    fn build(conductor: u64) -> Self {
        let phi = cyclotomic_polynomial(conductor);
        let degree = phi.len() - 1;
        let phi_i64: Vec<i64> = phi
            .iter()
            .map(|c| c.to_i64().expect("cyclotomic coefficient exceeds i64"))
            .collect();

        // x^e mod Φ_N for e in 0..N, by repeated multiplication by x.
        let mut powers = Vec::with_capacity(conductor as usize);
        let mut current = vec![0i64; degree];
        current[0] = 1;
        for _ in 0..conductor {
            powers.push(current.clone());
            let top = current[degree - 1];
            current.rotate_right(1);
            current[0] = 0;
            if top != 0 {
                for (c, p) in current.iter_mut().zip(&phi_i64) {
                    *c = c
                        .checked_sub(top.checked_mul(*p).expect("overflow in power table"))
                        .expect("overflow in power table");
                }
            }
        }
        CyclotomicField {
            conductor,
            phi,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Degree `φ(N)` of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// Coefficients of `Φ_N`, constant term first.
    pub fn polynomial(&self) -> &[BigInt] {
        &self.phi
    }

    /// Integer coordinates of `ζ_N^e`.
    pub fn root_coords(&self, e: i64) -> &[i64] {
        &self.powers[e.rem_euclid(self.conductor as i64) as usize]
    }

    /// Reduces an integer combination `Σ_e weights[e]·ζ_N^e` (indices taken
    /// mod `N`) to integer coordinates over the power basis.
    pub fn reduce_root_weights(&self, weights: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; self.degree()];
        for (e, &w) in weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(self.root_coords(e as i64)) {
                *o += w * c;
            }
        }
        out
    }
}

/// The `N`-th cyclotomic polynomial, constant term first.
///
/// Computed as `(x^N − 1) / Π_{d | N, d < N} Φ_d` by exact division; results
/// are memoized.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let mut numerator = vec![BigInt::zero(); n as usize + 1];
    numerator[0] = -BigInt::one();
    numerator[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        numerator = divide_monic(&numerator, &cyclotomic_polynomial(d));
    }
    cache.lock().unwrap().insert(n, numerator.clone());
    numerator
}

/// Exact quotient of `a` by the monic polynomial `b`; panics on a remainder.
fn divide_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// An element of `Q(ζ_N)` in canonical reduced form.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coords: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(conductor: u64) -> Self {
        let field = CyclotomicField::get(conductor);
        let coords = vec![BigRational::zero(); field.degree()];
        Cyclotomic { field, coords }
    }

    pub fn from_rational(conductor: u64, value: BigRational) -> Self {
        let mut z = Self::zero(conductor);
        z.coords[0] = value;
        z
    }

    pub fn from_integer(conductor: u64, value: i64) -> Self {
        Self::from_rational(conductor, BigRational::from_integer(value.into()))
    }

    /// `ζ_N^a`, with the exponent taken mod `N`.
    pub fn root(conductor: u64, a: i64) -> Self {
        let field = CyclotomicField::get(conductor);
        let coords = field
            .root_coords(a)
            .iter()
            .map(|&c| BigRational::from_integer(c.into()))
            .collect();
        Cyclotomic { field, coords }
    }

    /// `Σ_e weights[e]·ζ_N^e` with integer weights indexed by exponent mod `N`.
    pub fn from_root_weights(conductor: u64, weights: &[i64]) -> Self {
        let field = CyclotomicField::get(conductor);
        let coords = field
            .reduce_root_weights(weights)
            .into_iter()
            .map(|c| BigRational::from_integer(c.into()))
            .collect();
        Cyclotomic { field, coords }
    }

    /// `Σ c·ζ_N^e` over arbitrary `(e, c)` pairs with rational coefficients.
    pub fn from_root_terms<I>(conductor: u64, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let field = CyclotomicField::get(conductor);
        let mut coords = vec![BigRational::zero(); field.degree()];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in coords.iter_mut().zip(field.root_coords(e)) {
                if r != 0 {
                    *o += &c * BigInt::from(r);
                }
            }
        }
        Cyclotomic { field, coords }
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    /// The integer value if the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    /// Rewrites the element in `Q(ζ_M)`; `M` must be a multiple of the conductor.
    pub fn lift(&self, conductor: u64) -> Result<Self> {
        let own = self.conductor();
        if !conductor.is_multiple_of(own) {
            return Err(Error::Conductor {
                from: own,
                to: conductor,
            });
        }
        if conductor == own {
            return Ok(self.clone());
        }
        let step = (conductor / own) as i64;
        Ok(Self::from_root_terms(
            conductor,
            self.coords
                .iter()
                .enumerate()
                .map(|(j, c)| (j as i64 * step, c.clone())),
        ))
    }

    fn lift_pair(&self, other: &Self) -> (Self, Self) {
        let m = self.conductor().lcm(&other.conductor());
        // lcm is a multiple of both conductors, so lifting cannot fail
        (self.lift(m).unwrap(), other.lift(m).unwrap())
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Cyclotomic {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Complex conjugation, `ζ_N ↦ ζ_N^{N−1}`.
    pub fn conj(&self) -> Self {
        Self::from_root_terms(
            self.conductor(),
            self.coords
                .iter()
                .enumerate()
                .map(|(j, c)| (-(j as i64), c.clone())),
        )
    }

    /// Value under `ζ_N ↦ e^{2πi/N}`. Accuracy is limited to `f64`, so
    /// requests beyond [`MAX_EMBED_DIGITS`] digits are served at that limit.
    pub fn embed(&self, _precision: u32) -> Complex64 {
        let n = self.conductor() as f64;
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| {
                let angle = 2.0 * std::f64::consts::PI * j as f64 / n;
                Complex64::from_polar(rational_to_f64(c), angle)
            })
            .sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        if self.conductor() == other.conductor() {
            Cyclotomic {
                field: Arc::clone(&self.field),
                coords: self
                    .coords
                    .iter()
                    .zip(&other.coords)
                    .map(|(a, b)| f(a, b))
                    .collect(),
            }
        } else {
            let (a, b) = self.lift_pair(other);
            a.zip_with(&b, f)
        }
    }

    fn multiply(&self, other: &Self) -> Self {
        if self.conductor() != other.conductor() {
            let (a, b) = self.lift_pair(other);
            return a.multiply(&b);
        }
        let d = self.coords.len();
        let mut product = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in other.coords.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                product[i + j] += a * b;
            }
        }
        let mut coords: Vec<BigRational> = product.drain(..d).collect();
        for (offset, c) in product.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &r) in coords.iter_mut().zip(self.field.root_coords((d + offset) as i64)) {
                if r != 0 {
                    *o += &c * BigInt::from(r);
                }
            }
        }
        Cyclotomic {
            field: Arc::clone(&self.field),
            coords,
        }
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor() == other.conductor() {
            self.coords == other.coords
        } else {
            (self - other).is_zero()
        }
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(N={}, ", self.conductor())?;
        f.debug_list()
            .entries(self.coords.iter().map(|c| c.to_string()))
            .finish()?;
        write!(f, ")")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match j {
                0 => write!(f, "{mag}")?,
                _ if mag.is_one() => write!(f, "z{}^{j}", self.conductor())?,
                _ => write!(f, "{mag}*z{}^{j}", self.conductor())?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.multiply(rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            field: Arc::clone(&self.field),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

fn trig_conductor(b: i64) -> u64 {
    4u64.lcm(&(2 * b as u64))
}

/// `sin(πa/b)` as an exact element of `Q(ζ_M)`, `M = lcm(4, 2b)`.
pub fn sin_pi_rational(a: i64, b: i64) -> Cyclotomic {
    assert!(b >= 1, "denominator must be positive");
    let m = trig_conductor(b);
    let e = a * (m as i64 / (2 * b));
    let quarter = m as i64 / 4;
    let half = BigRational::new(1.into(), 2.into());
    // (ζ^e − ζ^{−e}) / (2i) with 1/i = −ζ_4
    Cyclotomic::from_root_terms(m, [(e + quarter, -half.clone()), (quarter - e, half)])
}

/// `cos(πa/b)` as an exact element of `Q(ζ_M)`, `M = lcm(4, 2b)`.
pub fn cos_pi_rational(a: i64, b: i64) -> Cyclotomic {
    assert!(b >= 1, "denominator must be positive");
    let m = trig_conductor(b);
    let e = a * (m as i64 / (2 * b));
    let half = BigRational::new(1.into(), 2.into());
    Cyclotomic::from_root_terms(m, [(e, half.clone()), (-e, half)])
}

/// Which labels enter a cosine sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CosFilter {
    All,
    Odd,
    Even,
}

impl CosFilter {
    pub fn as_str(self) -> &'static str {
        match self {
            CosFilter::All => "all",
            CosFilter::Odd => "odd",
            CosFilter::Even => "even",
        }
    }
}

impl std::str::FromStr for CosFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(CosFilter::All),
            "odd" => Ok(CosFilter::Odd),
            "even" => Ok(CosFilter::Even),
            other => Err(Error::InvalidParameter(format!(
                "unknown filter '{other}' (expected all, odd or even)"
            ))),
        }
    }
}

/// `Σ_λ cos(πλΔ/4ρ)` over `λ ∈ 1..4ρ−1`, restricted by `filter`, computed in
/// `Q(ζ_{8ρ})` and returned as the integer it must be.
pub fn cos_sum(rho: i64, delta: i64, filter: CosFilter) -> Result<BigInt> {
    if rho < 2 {
        return Err(Error::InvalidParameter(format!("rho must be >= 2, got {rho}")));
    }
    let (lo, hi) = (2 - 4 * rho, 8 * rho - 2);
    if delta < lo || delta > hi {
        return Err(Error::OutOfRange(format!(
            "delta {delta} outside [{lo}, {hi}] for rho = {rho}"
        )));
    }
    let m = 4 * rho;
    let conductor = 2 * m as u64;
    // 2·cos(πλΔ/m) = ζ^{λΔ} + ζ^{−λΔ} with ζ = ζ_{2m}
    let mut weights = vec![0i64; conductor as usize];
    let labels = (1..m).filter(|l| match filter {
        CosFilter::All => true,
        CosFilter::Odd => l % 2 == 1,
        CosFilter::Even => l % 2 == 0,
    });
    for lambda in labels {
        let e = (lambda * delta).rem_euclid(conductor as i64) as usize;
        weights[e] += 1;
        weights[(conductor as usize - e) % conductor as usize] += 1;
    }
    let doubled = Cyclotomic::from_root_weights(conductor, &weights);
    let value = doubled
        .as_rational()
        .map(|r| r / BigInt::from(2))
        .filter(|r| r.is_integer())
        .ok_or_else(|| Error::Internal(format!("cosine sum is not an integer: {doubled}")))?;
    Ok(value.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn roots_of_unity_basics() {
        assert_eq!(Cyclotomic::root(1, 0), Cyclotomic::from_integer(1, 1));
        assert_eq!(Cyclotomic::root(8, 4), Cyclotomic::from_integer(8, -1));
        assert_eq!(Cyclotomic::root(8, -4), Cyclotomic::root(8, 12));
        let s = (1..5)
            .map(|a| Cyclotomic::root(5, a))
            .reduce(|a, b| &a + &b)
            .unwrap();
        assert_eq!(s, Cyclotomic::from_integer(5, -1));
    }

    #[test]
    fn known_polynomials() {
        let phi = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(phi(1), vec![-1, 1]);
        assert_eq!(phi(4), vec![1, 0, 1]);
        assert_eq!(phi(6), vec![1, -1, 1]);
        assert_eq!(phi(12), vec![1, 0, -1, 0, 1]);
        // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
        assert!(phi(105).contains(&-2));
    }

    #[test]
    fn phi_vanishes_at_its_root() {
        for n in 1..=64u64 {
            let phi = cyclotomic_polynomial(n);
            let value = Cyclotomic::from_root_terms(
                n,
                phi.iter()
                    .enumerate()
                    .map(|(j, c)| (j as i64, BigRational::from_integer(c.clone()))),
            );
            assert!(value.is_zero(), "Phi_{n}(zeta_{n}) != 0");
        }
    }

    #[test]
    fn ring_examples() {
        assert_eq!(
            &Cyclotomic::root(8, 1) * &Cyclotomic::root(8, 7),
            Cyclotomic::from_integer(8, 1)
        );
        assert_eq!(Cyclotomic::root(4, 1).conj(), -Cyclotomic::root(4, 1));
        let a = Cyclotomic::root(12, 2);
        let b = Cyclotomic::root(6, 1);
        let diff = &a - &b;
        assert_eq!(diff.conductor(), 12);
        assert!(diff.is_zero());
    }

    #[test]
    fn lift_rejects_non_multiple() {
        assert!(Cyclotomic::root(6, 1).lift(8).is_err());
        assert_eq!(Cyclotomic::root(6, 1).lift(18).unwrap().conductor(), 18);
    }

    #[test]
    fn embedding_examples() {
        let i = Cyclotomic::root(4, 1).embed(12);
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let z = &(&Cyclotomic::from_integer(3, 1) + &Cyclotomic::root(3, 1)) + &Cyclotomic::root(3, 2);
        assert!(z.embed(12).norm() < 1e-12);
        let s = sin_pi_rational(1, 4).embed(12);
        assert!((s.re - 0.707_106_781_186_547_5).abs() < 1e-12 && s.im.abs() < 1e-12);
    }

    #[test]
    fn exact_trig_values() {
        assert_eq!(sin_pi_rational(1, 2).as_rational(), Some(rat(1, 1)));
        assert_eq!(sin_pi_rational(1, 6).as_rational(), Some(rat(1, 2)));
        let s = sin_pi_rational(1, 4);
        assert_eq!((&s * &s).as_rational(), Some(rat(1, 2)));
        assert_eq!(cos_pi_rational(2, 3).as_rational(), Some(rat(-1, 2)));
        assert_eq!(sin_pi_rational(0, 7).as_rational(), Some(rat(0, 1)));
    }

    #[test]
    fn trig_values_are_real_and_pythagorean() {
        for b in 1..=12 {
            for a in -2 * b..=2 * b {
                let s = sin_pi_rational(a, b);
                let c = cos_pi_rational(a, b);
                assert_eq!(s.conj(), s);
                assert_eq!(c.conj(), c);
                let one = &(&s * &s) + &(&c * &c);
                assert_eq!(one.as_rational(), Some(rat(1, 1)), "a={a} b={b}");
            }
        }
    }

    #[test]
    fn cos_sum_examples() {
        assert_eq!(cos_sum(2, 0, CosFilter::All).unwrap(), 7.into());
        assert_eq!(cos_sum(3, 12, CosFilter::Odd).unwrap(), (-6).into());
        assert_eq!(cos_sum(2, 2, CosFilter::Even).unwrap(), (-1).into());
        assert_eq!(cos_sum(2, 3, CosFilter::All).unwrap(), 0.into());
    }

    #[test]
    fn cos_sum_range_errors() {
        assert!(matches!(cos_sum(2, -7, CosFilter::All), Err(Error::OutOfRange(_))));
        assert!(matches!(cos_sum(2, 15, CosFilter::All), Err(Error::OutOfRange(_))));
        assert!(cos_sum(2, -6, CosFilter::All).is_ok());
        assert!(cos_sum(2, 14, CosFilter::All).is_ok());
        assert!(matches!(cos_sum(1, 0, CosFilter::All), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn cos_sum_matches_float_summation() {
        for rho in 2..=8i64 {
            for delta in 2 - 4 * rho..=8 * rho - 2 {
                for filter in [CosFilter::All, CosFilter::Odd, CosFilter::Even] {
                    let direct: f64 = (1..4 * rho)
                        .filter(|l| match filter {
                            CosFilter::All => true,
                            CosFilter::Odd => l % 2 == 1,
                            CosFilter::Even => l % 2 == 0,
                        })
                        .map(|l| {
                            (std::f64::consts::PI * (l * delta) as f64 / (4 * rho) as f64).cos()
                        })
                        .sum();
                    let exact = cos_sum(rho, delta, filter).unwrap().to_f64().unwrap();
                    assert!((exact - direct).abs() < 1e-9, "rho={rho} delta={delta}");
                }
            }
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(Cyclotomic::zero(5).to_string(), "0");
        assert_eq!(Cyclotomic::root(8, 5).to_string(), "-z8^1");
        assert_eq!(sin_pi_rational(1, 6).to_string(), "1/2");
    }
}
