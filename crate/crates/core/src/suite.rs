//! The verification battery: one runner per acceptance criterion, each with
//! its tolerance pinned here.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cyclotomic::{cos_sum, CosFilter, Cyclotomic};
use crate::error::Result;
use crate::modular_data::{
    ade_classify, dodd_invariant, enumerate_invariants, s_commutes, t_commutes, AdeType,
    InvariantMatrix, ModularData,
};
use crate::qseries::{affine_character, character_exponent, verify_s_transform, verify_t_transform};
use crate::superalgebra::{assemble_super_partition, conjecture_probe, verify_prop52};

pub const S_TRANSFORM_TOL_AT_I: f64 = 1e-8;
pub const S_TRANSFORM_TOL_AT_2I: f64 = 1e-6;
pub const PARTITION_TOL: f64 = 1e-6;
pub const STABILITY_TOL: f64 = 1e-10;
pub const UNITARITY_TOL: f64 = 1e-9;
pub const EMBED_TOL: f64 = 1e-12;
pub const ENUMERATION_BOUND: i64 = 3;

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {}: {} ({})",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail
        )
    }
}

fn outcome(id: u32, title: &'static str, result: Result<(bool, String)>) -> CriterionOutcome {
    match result {
        Ok((pass, detail)) => CriterionOutcome {
            id,
            title,
            pass,
            detail,
        },
        Err(e) => CriterionOutcome {
            id,
            title,
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

/// Closed-form values of the three cosine sums.
pub fn cos_sum_table(rho: i64, delta: i64, filter: CosFilter) -> i64 {
    let m = 4 * rho;
    match filter {
        CosFilter::All => match delta {
            0 => m - 1,
            d if d == m => -1,
            d if d % 2 != 0 => 0,
            _ => -1,
        },
        CosFilter::Odd => match delta {
            0 => 2 * rho,
            d if d == m => -2 * rho,
            _ => 0,
        },
        CosFilter::Even => match delta {
            0 => 2 * rho - 1,
            d if d == m => 2 * rho - 1,
            d if d % 2 != 0 => 0,
            _ => -1,
        },
    }
}

pub fn criterion_cos_tables() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut checked = 0;
        let mut failures = Vec::new();
        for rho in 2..=8i64 {
            for delta in 2 - 4 * rho..=8 * rho - 2 {
                for filter in [CosFilter::All, CosFilter::Odd, CosFilter::Even] {
                    let value = cos_sum(rho, delta, filter)?;
                    checked += 1;
                    if value != BigInt::from(cos_sum_table(rho, delta, filter)) {
                        failures.push(format!("rho={rho} delta={delta} {}", filter.as_str()));
                    }
                }
            }
        }
        Ok((
            failures.is_empty(),
            format!("{checked} sums checked, {} mismatches {:?}", failures.len(), failures),
        ))
    };
    outcome(1, "cosine sum tables, rho = 2..8", run())
}

pub fn criterion_prop52() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut failed = Vec::new();
        for rho in 2..=8 {
            if !verify_prop52(rho)?.pass {
                failed.push(rho);
            }
        }
        Ok((failed.is_empty(), format!("rho = 2..8 exact, failing rho: {failed:?}")))
    };
    outcome(2, "exact S/T invariance of I + D, I and D", run())
}

/// Expected ADE types at `n` for the bounded enumeration.
pub fn expected_types(n: usize) -> Vec<AdeType> {
    let mut types = vec![AdeType::A];
    if n >= 6 && n.is_multiple_of(4) {
        types.push(AdeType::DOdd);
    } else if n >= 6 && n % 4 == 2 {
        types.push(AdeType::DEven);
    }
    if matches!(n, 12 | 18 | 30) {
        types.push(AdeType::Exceptional(n));
    }
    types
}

pub fn criterion_ade() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut mismatches = Vec::new();
        let mut counts = Vec::new();
        for n in 4..=32usize {
            let md = ModularData::new(n as u32 - 2)?;
            let e = enumerate_invariants(&md, ENUMERATION_BOUND)?;
            let mut types = Vec::new();
            for m in &e.invariants {
                if !(t_commutes(m, &md)? && s_commutes(m, &md)?) {
                    mismatches.push(format!("n={n}: re-verification failed"));
                }
                types.push(ade_classify(m)?);
            }
            let names: Vec<String> = types.iter().map(|t| t.dynkin(n)).collect();
            let allowed = names.iter().all(|d| {
                d.starts_with("A_") || d.starts_with("D_") || ["E_6", "E_7", "E_8"].contains(&d.as_str())
            });
            if types != expected_types(n) || !allowed {
                mismatches.push(format!("n={n}: {names:?}"));
            }
            counts.push(e.invariants.len());
        }
        Ok((
            mismatches.is_empty(),
            format!("n = 4..32, counts {counts:?}, mismatches {mismatches:?}"),
        ))
    };
    outcome(3, "ADE reproduction with bound 3", run())
}

pub fn criterion_s_transform() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let i = Complex64::new(0.0, 1.0);
        let mut worst_i = 0.0f64;
        let mut worst_2i = 0.0f64;
        let mut pass = true;
        for k in 1..=10 {
            let a = verify_s_transform(k, i, 200, S_TRANSFORM_TOL_AT_I)?;
            let b = verify_s_transform(k, 2.0 * i, 400, S_TRANSFORM_TOL_AT_2I)?;
            worst_i = worst_i.max(a.max_residual);
            worst_2i = worst_2i.max(b.max_residual);
            pass &= a.pass && b.pass;
        }
        Ok((
            pass,
            format!("k = 1..10, max residual {worst_i:.2e} at tau=i, {worst_2i:.2e} at tau=2i"),
        ))
    };
    outcome(4, "S-transformation of characters", run())
}

pub fn criterion_t_transform() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut failed = Vec::new();
        for k in 1..=12 {
            if !verify_t_transform(k, 60)?.pass {
                failed.push(k);
            }
        }
        Ok((failed.is_empty(), format!("k = 1..12 exact, failing k: {failed:?}")))
    };
    outcome(5, "T-transformation exponents", run())
}

pub fn criterion_super_partition() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        for rho in 2..=8 {
            let pf = assemble_super_partition(rho)?;
            let expected = InvariantMatrix::identity(4 * rho).checked_add(&dodd_invariant(rho)?)?;
            if pf.matrix != expected {
                return Ok((false, format!("assembly mismatch at rho = {rho}")));
            }
        }
        let pf = assemble_super_partition(2)?;
        let tau = Complex64::new(0.5, 1.0);
        let a = pf.evaluate(tau, 300)?;
        let b = pf.evaluate(-tau.inv(), 300)?;
        let diff = (a - b).norm();
        Ok((
            diff < PARTITION_TOL,
            format!("rho = 2..8 exact; |Z(tau) - Z(-1/tau)| = {diff:.2e} at rho = 2"),
        ))
    };
    outcome(6, "super partition function assembly", run())
}

pub fn criterion_conjecture() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut pass = true;
        let mut parts = Vec::new();
        for rho in 2..=4 {
            let r = conjecture_probe(rho, 200, 10)?;
            pass &= r.stability_residual < STABILITY_TOL && r.unitarity_defect < UNITARITY_TOL;
            parts.push(format!(
                "rho={rho}: residual {:.1e}, defect {:.1e}",
                r.stability_residual, r.unitarity_defect
            ));
        }
        Ok((pass, parts.join("; ")))
    };
    outcome(7, "unitarity probe on the sector span", run())
}

fn random_element(rng: &mut ChaCha8Rng, conductor: u64) -> Cyclotomic {
    let degree = Cyclotomic::zero(conductor).coords().len();
    Cyclotomic::from_root_terms(
        conductor,
        (0..degree).map(|j| {
            let num: i64 = rng.gen_range(-3..=3);
            let den: i64 = rng.gen_range(1..=4);
            (j as i64, BigRational::new(num.into(), den.into()))
        }),
    )
}

/// Ring axioms and embedding homomorphism on `samples` random triples.
pub fn cyclotomic_properties(conductor: u64, samples: usize, seed: u64) -> (bool, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ conductor);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = random_element(&mut rng, conductor);
        let y = random_element(&mut rng, conductor);
        let z = random_element(&mut rng, conductor);
        ok &= &(&x * &y) * &z == &x * &(&y * &z);
        ok &= &x * &(&y + &z) == &(&x * &y) + &(&x * &z);
        ok &= &x * &y == &y * &x;
        ok &= &x + &y == &y + &x;
        ok &= (&(&x + &y) - &y) == x;
        let err = ((&x * &y).embed(15) - x.embed(15) * y.embed(15)).norm();
        worst = worst.max(err);
    }
    (ok && worst < EMBED_TOL, worst)
}

pub fn criterion_properties() -> CriterionOutcome {
    let run = || -> Result<(bool, String)> {
        let mut pass = true;
        let mut parts = Vec::new();
        for conductor in [8u64, 12, 24, 40] {
            let (ok, worst) = cyclotomic_properties(conductor, 1000, 0x5eed);
            pass &= ok;
            parts.push(format!("N={conductor}: {worst:.1e}"));
        }
        for k in 1..=30 {
            if !ModularData::new(k)?.s_squared_is_scalar() {
                pass = false;
                parts.push(format!("S^2 fails at k={k}"));
            }
        }
        for k in 1..=12u32 {
            for i in 0..=k {
                let chi = affine_character(k, i, 100)?;
                let lambda = i as i64 + 1;
                let good = chi.h0() == character_exponent(lambda, k as i64 + 2)
                    && chi.h0() + Rational64::new(1, 8) == Rational64::new(lambda * lambda, 4 * (k as i64 + 2))
                    && !chi.coeffs()[0].is_zero()
                    && chi.coeffs().iter().all(|c| !c.is_negative());
                if !good {
                    pass = false;
                    parts.push(format!("character k={k} i={i}"));
                }
            }
        }
        Ok((pass, format!("embedding errors {}; S^2 k<=30; characters k<=12", parts.join(", "))))
    };
    outcome(8, "property suites", run())
}

/// Every criterion, in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_cos_tables(),
        criterion_prop52(),
        criterion_ade(),
        criterion_s_transform(),
        criterion_t_transform(),
        criterion_super_partition(),
        criterion_conjecture(),
        criterion_properties(),
    ]
}
