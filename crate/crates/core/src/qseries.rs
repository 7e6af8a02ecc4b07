//! Truncated q-series with rational leading exponent and exact integer
//! coefficients, and the affine `su(2)` characters built from them.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::modular_data::ModularData;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 200;

/// `q^{h0} · Σ_{m < order} a_m q^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    h0: Rational64,
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn new(h0: Rational64, coeffs: Vec<BigInt>) -> Self {
        QSeries { h0, coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries::new(Rational64::zero(), vec![BigInt::zero(); order])
    }

    pub fn constant(value: i64, order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = value.into();
        }
        s
    }

    pub fn h0(&self) -> Rational64 {
        self.h0
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Number of reliable coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient of `q^{h0 + m}`; zero beyond the stored range.
    pub fn coeff(&self, m: usize) -> BigInt {
        self.coeffs.get(m).cloned().unwrap_or_default()
    }

    /// Moves leading zeros into the exponent so that `a_0 ≠ 0`.
    pub fn normalized(mut self) -> Self {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(0) | None => self,
            Some(shift) => {
                self.coeffs.drain(..shift);
                self.h0 += Rational64::from_integer(shift as i64);
                self
            }
        }
    }

    /// Re-expresses both series on a common leading exponent.
    fn aligned(&self, other: &Self) -> Result<(Rational64, Vec<BigInt>, Vec<BigInt>)> {
        let shift = other.h0 - self.h0;
        if !shift.is_integer() {
            return Err(Error::InvalidParameter(format!(
                "exponents {} and {} differ by a non-integer",
                self.h0, other.h0
            )));
        }
        let shift = shift.to_integer();
        let (base, lo, hi, s) = if shift >= 0 {
            (self.h0, self, other, shift as usize)
        } else {
            (other.h0, other, self, (-shift) as usize)
        };
        // reliable up to min(lo.order, hi.order + s)
        let order = lo.order().min(hi.order() + s);
        let mut a = lo.coeffs[..order].to_vec();
        let mut b = vec![BigInt::zero(); order];
        for (m, c) in hi.coeffs.iter().enumerate() {
            if m + s < order {
                b[m + s] = c.clone();
            }
        }
        if shift < 0 {
            std::mem::swap(&mut a, &mut b);
        }
        Ok((base, a, b))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (h0, a, b) = self.aligned(other)?;
        Ok(QSeries::new(h0, a.into_iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let (h0, a, b) = self.aligned(other)?;
        Ok(QSeries::new(h0, a.into_iter().zip(b).map(|(x, y)| x - y).collect()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order];
        for (i, a) in self.coeffs.iter().take(order).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::new(self.h0 + other.h0, out)
    }

    /// Exact quotient; the divisor's leading coefficient must be `±1`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let lead = other.coeffs.first().cloned().unwrap_or_default();
        if !lead.abs().is_one() {
            return Err(Error::NonUnitLeading(lead.to_string()));
        }
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order];
        for m in 0..order {
            let mut acc = self.coeffs[m].clone();
            for j in 1..=m {
                if !other.coeffs[j].is_zero() {
                    acc -= &other.coeffs[j] * &out[m - j];
                }
            }
            out[m] = acc * &lead;
        }
        Ok(QSeries::new(self.h0 - other.h0, out))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^({}) * (", self.h0)?;
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).take(8) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{}))", self.order())
    }
}

/// Representative of `m` modulo `2·modulus` in `(−modulus, modulus]`.
fn centered(m: i64, modulus: i64) -> i64 {
    let r = m.rem_euclid(2 * modulus);
    if r > modulus {
        r - 2 * modulus
    } else {
        r
    }
}

/// Sum over `j ∈ Z + m/(2·modulus)` of `weight(j)·q^{modulus·j²}`, where `j`
/// is passed as the integer `2·modulus·j`.
fn coset_series(m: i64, modulus: i64, order: usize, weight: impl Fn(i64) -> i64) -> QSeries {
    assert!(modulus >= 1, "modulus must be positive");
    let base = centered(m, modulus);
    let four_n = 4 * modulus;
    let h0 = Rational64::new(base * base, four_n);
    let mut coeffs = vec![BigInt::zero(); order];
    // exponent offset of x = 2nl + base is (x² − base²)/4n, growing in |l|
    for dir in [1i64, -1] {
        let mut l = if dir == 1 { 0 } else { -1 };
        loop {
            let x = 2 * modulus * l + base;
            let offset = (x * x - base * base) / four_n;
            if offset >= order as i64 {
                break;
            }
            coeffs[offset as usize] += weight(x);
            l += dir;
        }
    }
    QSeries::new(h0, coeffs)
}

/// `Θ_{m,modulus}(τ) = Σ_{j ∈ Z + m/(2·modulus)} q^{modulus·j²}`.
pub fn theta(m: i64, modulus: i64, order: usize) -> QSeries {
    coset_series(m, modulus, order, |_| 1)
}

/// `Σ_{j ∈ Z + m/(2·modulus)} 2·modulus·j·q^{modulus·j²}`, the `z`-derivative
/// at `z = 0` of the two-variable theta function (up to `2πi`). The characters
/// are quotients of these; the plain difference `Θ_m − Θ_{−m}` vanishes at
/// `z = 0`.
pub fn weighted_theta(m: i64, modulus: i64, order: usize) -> QSeries {
    coset_series(m, modulus, order, |x| x)
}

/// Leading exponent `λ²/4n − 1/8` of `χ_λ`, `n = k + 2`.
pub fn character_exponent(lambda: i64, n: i64) -> Rational64 {
    Rational64::new(lambda * lambda, 4 * n) - Rational64::new(1, 8)
}

/// `χ_{i+1}(τ) = Tr_{L(k,i)} q^{L(0) − c/24}` as an exact q-series.
///
/// The leading coefficient is `i + 1`, the dimension of the top level.
pub fn affine_character(k: u32, i: u32, order: usize) -> Result<QSeries> {
    if k < 1 {
        return Err(Error::InvalidParameter("level must be >= 1".into()));
    }
    if i > k {
        return Err(Error::InvalidParameter(format!("module index {i} exceeds level {k}")));
    }
    if order < 1 {
        return Err(Error::InvalidParameter("order must be >= 1".into()));
    }
    let n = k as i64 + 2;
    let lambda = i as i64 + 1;
    let numerator = weighted_theta(lambda, n, order);
    let denominator = weighted_theta(1, 2, order);
    let chi = numerator.div(&denominator)?;

    if chi.h0 != character_exponent(lambda, n) {
        return Err(Error::Internal(format!("leading exponent {} for k={k}, i={i}", chi.h0)));
    }
    if chi.coeffs[0] != BigInt::from(lambda) {
        return Err(Error::Internal(format!("leading coefficient {} for k={k}, i={i}", chi.coeffs[0])));
    }
    if chi.coeffs.iter().any(Signed::is_negative) {
        return Err(Error::Internal(format!("negative coefficient for k={k}, i={i}")));
    }
    Ok(chi)
}

/// All characters `χ_1, …, χ_{k+1}` of level `k`.
pub fn affine_characters(k: u32, order: usize) -> Result<Vec<QSeries>> {
    (0..=k).map(|i| affine_character(k, i, order)).collect()
}

/// A numeric value together with an estimate of the neglected tail.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

fn check_upper_half_plane(tau: Complex64) -> Result<()> {
    if tau.im > 0.0 && tau.re.is_finite() && tau.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonConvergent(format!("Im(tau) must be positive, got tau = {tau}")))
    }
}

/// Value of the series at `q = e^{2πiτ}`. The tail estimate is the last
/// retained term continued as a geometric series in `|q|`.
pub fn qseries_eval(s: &QSeries, tau: Complex64, _precision: u32) -> Result<Evaluation> {
    check_upper_half_plane(tau)?;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let q = (two_pi_i * tau).exp();
    let h0 = *s.h0.numer() as f64 / *s.h0.denom() as f64;
    let lead = (two_pi_i * tau * h0).exp();
    let mut acc = Complex64::zero();
    for c in s.coeffs.iter().rev() {
        acc = acc * q + c.to_f64().unwrap_or(f64::INFINITY);
    }
    let abs_q = q.norm();
    let tail_bound = match s.coeffs.last() {
        Some(last) if !s.is_zero() => {
            let m = s.order() as f64 - 1.0;
            last.abs().to_f64().unwrap_or(f64::INFINITY).max(1.0)
                * lead.norm()
                * abs_q.powf(m + 1.0)
                / (1.0 - abs_q)
        }
        _ => 0.0,
    };
    Ok(Evaluation {
        value: lead * acc,
        tail_bound,
    })
}

/// Per-label outcome of the `T`-transformation check.
#[derive(Clone, Debug)]
pub struct TLabelCheck {
    pub label: usize,
    pub h0: Rational64,
    pub t_exp: Rational64,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct TTransformReport {
    pub level: u32,
    pub labels: Vec<TLabelCheck>,
    /// Largest distance between `h0 mod 1` and the `T` exponent; 0 on pass.
    pub max_residual: f64,
    pub pass: bool,
}

/// Checks `χ_λ(τ+1) = e(λ²/4n − 1/8)·χ_λ(τ)` exactly: every retained term
/// `q^{h0+m}` picks up `e(h0+m)`, which must equal the `T` phase.
pub fn verify_t_transform(k: u32, order: usize) -> Result<TTransformReport> {
    let md = ModularData::new(k)?;
    let mut labels = Vec::new();
    let mut max_residual = 0.0f64;
    for (i, chi) in affine_characters(k, order)?.into_iter().enumerate() {
        let label = i + 1;
        let t_exp = md.t_exp(label);
        let pass = chi
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .all(|(m, _)| (chi.h0 + Rational64::from_integer(m as i64) - t_exp).is_integer());
        let frac = chi.h0 - chi.h0.floor();
        let d = (frac - t_exp).abs();
        let d = d.min(Rational64::one() - d);
        max_residual = max_residual.max(*d.numer() as f64 / *d.denom() as f64);
        labels.push(TLabelCheck {
            label,
            h0: chi.h0,
            t_exp,
            pass,
        });
    }
    let pass = labels.iter().all(|l| l.pass);
    Ok(TTransformReport {
        level: k,
        labels,
        max_residual,
        pass,
    })
}

#[derive(Clone, Debug)]
pub struct STransformReport {
    pub level: u32,
    pub tau: Complex64,
    pub tau_image: Complex64,
    /// `|χ_λ(−1/τ) − Σ_μ S_{λμ} χ_μ(τ)|` per label.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub tail_bound: f64,
    pub pass: bool,
}

/// Numeric check of `χ_λ(−1/τ) = Σ_μ √(2/n)·sin(πλμ/n)·χ_μ(τ)`.
pub fn verify_s_transform(k: u32, tau: Complex64, order: usize, tol: f64) -> Result<STransformReport> {
    check_upper_half_plane(tau)?;
    let md = ModularData::new(k)?;
    let image = -tau.inv();
    let chars = affine_characters(k, order)?;
    let mut at_tau = Vec::with_capacity(chars.len());
    let mut at_image = Vec::with_capacity(chars.len());
    let mut tail_bound = 0.0f64;
    for chi in &chars {
        let a = qseries_eval(chi, tau, 15)?;
        let b = qseries_eval(chi, image, 15)?;
        tail_bound = tail_bound.max(a.tail_bound).max(b.tail_bound);
        at_tau.push(a.value);
        at_image.push(b.value);
    }
    if !tail_bound.is_finite() || tail_bound > tol {
        return Err(Error::NonConvergent(format!(
            "truncation at order {order} leaves a tail of {tail_bound:e} (tolerance {tol:e})"
        )));
    }
    let s = md.s_numeric();
    let residuals: Vec<f64> = s
        .iter()
        .zip(&at_image)
        .map(|(row, lhs)| {
            let rhs: Complex64 = row.iter().zip(&at_tau).map(|(a, b)| b * *a).sum();
            (lhs - rhs).norm()
        })
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(STransformReport {
        level: k,
        tau,
        tau_image: image,
        residuals,
        max_residual,
        tail_bound,
        pass: max_residual < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn theta_examples() {
        let t = theta(1, 2, 12);
        assert_eq!(t.h0(), Rational64::new(1, 8));
        // exponents (4l+1)²/8 = 1/8, 9/8, 25/8, 49/8, 81/8 → offsets 0, 1, 3, 6, 10
        assert_eq!(t.coeffs(), &ints(&[1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0])[..]);

        let t = theta(0, 1, 10);
        assert_eq!(t.h0(), Rational64::zero());
        assert_eq!(t.coeffs(), &ints(&[1, 2, 0, 0, 2, 0, 0, 0, 0, 2])[..]);

        for (m, n) in [(1, 3), (-2, 5), (4, 4), (7, 6)] {
            assert_eq!(theta(m, n, 30), theta(m + 2 * n, n, 30));
        }
    }

    #[test]
    fn denominator_identity() {
        let d = weighted_theta(1, 2, 20);
        assert_eq!(d.h0(), Rational64::new(1, 8));
        // η³ = Σ (−1)^j (2j+1) q^{j(j+1)/2}
        assert_eq!(d.coeffs()[..11], ints(&[1, -3, 0, 5, 0, 0, -7, 0, 0, 0, 9])[..]);
    }

    #[test]
    fn plain_theta_difference_vanishes() {
        for (m, n) in [(1, 2), (3, 8), (5, 12)] {
            assert!(theta(m, n, 40).sub(&theta(-m, n, 40)).unwrap().is_zero());
        }
    }

    #[test]
    fn level_one_vacuum_character() {
        let chi = affine_character(1, 0, 10).unwrap();
        assert_eq!(chi.h0(), Rational64::new(-1, 24));
        assert_eq!(chi.coeff(0), BigInt::from(1));
        assert_eq!(chi.coeff(1), BigInt::from(3));
        // θ_3(2τ)/η at level one: 1, 3, 4, 7, 13, 19, 29, 43, 62, 90
        assert_eq!(chi.coeffs(), &ints(&[1, 3, 4, 7, 13, 19, 29, 43, 62, 90])[..]);
    }

    #[test]
    fn conformal_weights() {
        let chi = affine_character(2, 2, 5).unwrap();
        assert_eq!(chi.h0(), Rational64::new(7, 16));
        // h = k/4 = 1/2 and c/24 = 1/16 at k = 2
        assert_eq!(chi.h0(), Rational64::new(1, 2) - Rational64::new(1, 16));
        for rho in 2..=5i64 {
            let k = 4 * rho - 2;
            let n = k + 2;
            let chi = affine_character(k as u32, k as u32, 5).unwrap();
            let c = Rational64::new(3 * k, n);
            let h = chi.h0() + c / 24;
            assert_eq!(h, Rational64::new(k, 4));
            assert_eq!(h - h.floor(), Rational64::new(1, 2));
        }
    }

    #[test]
    fn character_errors() {
        assert!(affine_character(3, 4, 10).is_err());
        assert!(affine_character(0, 0, 10).is_err());
        assert!(affine_character(3, 0, 0).is_err());
    }

    #[test]
    fn division_roundtrip() {
        let num = weighted_theta(3, 7, 60);
        let den = weighted_theta(1, 2, 60);
        let q = num.div(&den).unwrap();
        assert_eq!(q.mul(&den), num);
        assert!(matches!(
            num.div(&theta(0, 1, 60).mul(&QSeries::constant(2, 60))),
            Err(Error::NonUnitLeading(_))
        ));
    }

    #[test]
    fn alignment_rejects_fractional_shift() {
        assert!(theta(1, 2, 5).add(&theta(0, 1, 5)).is_err());
        let a = QSeries::new(Rational64::from_integer(1), ints(&[1, 1, 1]));
        let b = QSeries::new(Rational64::zero(), ints(&[1, 0, 0, 0]));
        let s = a.add(&b).unwrap();
        assert_eq!(s.h0(), Rational64::zero());
        assert_eq!(s.coeffs(), &ints(&[1, 1, 1, 1])[..]);
    }

    #[test]
    fn eval_trivial_series() {
        let tau = Complex64::new(0.3, 1.1);
        assert_eq!(qseries_eval(&QSeries::zero(5), tau, 12).unwrap().value, Complex64::zero());
        let one = qseries_eval(&QSeries::constant(1, 5), tau, 12).unwrap().value;
        assert!((one - 1.0).norm() < 1e-15);
        assert!(qseries_eval(&QSeries::constant(1, 5), Complex64::new(0.0, -1.0), 12).is_err());
    }

    #[test]
    fn character_matches_direct_theta_quotient() {
        // independent evaluation: sum the theta series directly at τ
        let tau = Complex64::new(0.0, 2.0);
        let q_pow = |e: f64| (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau * e).exp();
        let direct = |m: i64, n: i64| -> Complex64 {
            (-50i64..=50)
                .map(|l| {
                    let x = (2 * n * l + m) as f64;
                    q_pow(x * x / (4 * n) as f64) * x
                })
                .sum()
        };
        let expected = direct(1, 3) / direct(1, 2);
        let chi = affine_character(1, 0, 60).unwrap();
        let value = qseries_eval(&chi, tau, 12).unwrap().value;
        assert!((value - expected).norm() < 1e-10);
    }

    #[test]
    fn t_transform_level_six_and_ten() {
        let r = verify_t_transform(6, 50).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_residual, 0.0);
        assert_eq!(r.labels[0].t_exp, Rational64::new(29, 32));
        assert_eq!(r.labels[0].h0, Rational64::new(-3, 32));
        assert!(verify_t_transform(10, 50).unwrap().pass);
    }

    #[test]
    fn s_transform_examples() {
        let i = Complex64::new(0.0, 1.0);
        let r = verify_s_transform(2, 2.0 * i, 400, 1e-8).unwrap();
        assert!(r.pass, "{}", r.max_residual);
        let r = verify_s_transform(6, Complex64::new(1.0 / 3.0, 1.0), 200, 1e-6).unwrap();
        assert!(r.pass, "{}", r.max_residual);
        assert!(verify_s_transform(2, -i, 50, 1e-8).is_err());
    }

    #[test]
    fn s_residual_shrinks_with_order() {
        let i = Complex64::new(0.0, 1.0);
        let residual = |order| {
            let md = ModularData::new(4).unwrap();
            let s = md.s_numeric();
            let vals: Vec<Complex64> = affine_characters(4, order)
                .unwrap()
                .iter()
                .map(|c| qseries_eval(c, i, 15).unwrap().value)
                .collect();
            s.iter()
                .zip(&vals)
                .map(|(row, lhs)| {
                    let rhs: Complex64 = row.iter().zip(&vals).map(|(a, b)| b * *a).sum();
                    (lhs - rhs).norm()
                })
                .fold(0.0, f64::max)
        };
        let r: Vec<f64> = [1usize, 2, 3, 5].iter().map(|&o| residual(o)).collect();
        assert!(r[0] > r[1] && r[1] > r[2] && r[2] > r[3].max(1e-15) * 0.999);
        assert!(residual(40) < 1e-12);
    }
}
