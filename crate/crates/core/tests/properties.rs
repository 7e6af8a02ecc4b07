use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

use su2_modular::cyclotomic::cyclotomic_polynomial;
use su2_modular::qseries::weighted_theta;
use su2_modular::*;

fn element(conductor: u64) -> impl Strategy<Value = Cyclotomic> {
    let degree = Cyclotomic::zero(conductor).coords().len();
    prop::collection::vec((-4i64..=4, 1i64..=5), degree).prop_map(move |cs| {
        Cyclotomic::from_root_terms(
            conductor,
            cs.into_iter()
                .enumerate()
                .map(|(j, (n, d))| (j as i64, BigRational::new(n.into(), d.into()))),
        )
    })
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    (1u64..=64).prop_flat_map(|n| (element(n), element(n), element(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((x, y, z) in triple()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    }

    #[test]
    fn embedding_is_multiplicative((x, y, _) in triple()) {
        let lhs = (&x * &y).embed(15);
        let rhs = x.embed(15) * y.embed(15);
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        let c = x.conj().embed(15);
        prop_assert!((c - x.embed(15).conj()).norm() < 1e-12 * (1.0 + c.norm()));
    }

    #[test]
    fn lifting_preserves_value(x in (1u64..=24).prop_flat_map(element), factor in 1u64..=4) {
        let lifted = x.lift(x.conductor() * factor).unwrap();
        prop_assert_eq!(&lifted, &x);
        prop_assert!((lifted.embed(15) - x.embed(15)).norm() < 1e-12);
    }

    #[test]
    fn root_embeds_to_unit_circle(n in 1u64..=64, a in -200i64..200) {
        let expected = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / n as f64);
        prop_assert!((Cyclotomic::root(n, a).embed(15) - expected).norm() < 1e-12);
    }

    #[test]
    fn trig_identities(a in -60i64..60, b in 1i64..30) {
        let s = sin_pi_rational(a, b);
        let c = cos_pi_rational(a, b);
        prop_assert_eq!(s.conj(), s.clone());
        let one = &(&s * &s) + &(&c * &c);
        prop_assert_eq!(one.as_integer(), Some(1.into()));
        let angle = std::f64::consts::PI * a as f64 / b as f64;
        prop_assert!((s.embed(15).re - angle.sin()).abs() < 1e-12);
    }

    #[test]
    fn fold_is_consistent(k in 1u32..=20, lambda in -200i64..200) {
        let md = ModularData::new(k).unwrap();
        let n = md.n() as i64;
        let (sign, label) = fold_label(lambda, &md);
        prop_assert_eq!(fold_label(lambda + 2 * n, &md), (sign, label));
        let (neg_sign, neg_label) = fold_label(-lambda, &md);
        prop_assert_eq!(neg_label, label);
        prop_assert_eq!(neg_sign, -sign);
        if let Some(l) = label {
            prop_assert!((1..md.n()).contains(&l));
        }
    }

    #[test]
    fn series_division_roundtrip(m in 1i64..20, modulus in 1i64..12, order in 1usize..80) {
        let num = weighted_theta(m, modulus, order);
        let den = weighted_theta(1, 2, order);
        let q = num.div(&den).unwrap();
        prop_assert_eq!(q.mul(&den), num);
    }
}

#[test]
fn cyclotomic_polynomials_vanish_up_to_64() {
    for n in 1..=64u64 {
        let value = Cyclotomic::from_root_terms(
            n,
            cyclotomic_polynomial(n)
                .into_iter()
                .enumerate()
                .map(|(j, c)| (j as i64, BigRational::from_integer(c))),
        );
        assert!(value.is_zero());
    }
}

#[test]
fn enumeration_outputs_always_commute() {
    for k in 1..=30 {
        let md = ModularData::new(k).unwrap();
        let e = enumerate_invariants(&md, 3).unwrap();
        assert!(e.invariants.contains(&InvariantMatrix::identity(md.n())));
        for m in &e.invariants {
            assert!(t_commutes(m, &md).unwrap() && s_commutes(m, &md).unwrap());
            assert!(m.is_physical() && m.is_symmetric());
        }
    }
}

#[test]
fn dodd_is_found_for_every_rho() {
    for rho in 2..=8 {
        let md = ModularData::new(4 * rho as u32 - 2).unwrap();
        let e = enumerate_invariants(&md, 3).unwrap();
        assert!(e.invariants.contains(&dodd_invariant(rho).unwrap()));
    }
}

#[test]
fn commutant_spans_enumerated_invariants() {
    // every invariant found at n = 12 is a rational combination of the basis
    let md = ModularData::new(10).unwrap();
    let basis = commutant_basis(&md);
    for b in &basis {
        assert!(t_commutes(b, &md).unwrap() && s_commutes(b, &md).unwrap());
    }
    let flat = |m: &InvariantMatrix| -> Vec<BigRational> {
        m.rows()
            .iter()
            .flatten()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect()
    };
    let basis_rank = rank(basis.iter().map(flat).collect());
    assert_eq!(basis_rank, basis.len());
    for m in enumerate_invariants(&md, 3).unwrap().invariants {
        let mut rows: Vec<Vec<BigRational>> = basis.iter().map(flat).collect();
        rows.push(flat(&m));
        assert_eq!(rank(rows), basis_rank);
    }
}

fn rank(rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows[0].len();
    su2_modular::linalg::rref(rows, cols).1.len()
}

#[test]
fn character_leading_data_up_to_level_twelve() {
    for k in 1..=12u32 {
        let md = ModularData::new(k).unwrap();
        for i in 0..=k {
            let chi = affine_character(k, i, 60).unwrap();
            let lambda = i as usize + 1;
            let frac = chi.h0() - chi.h0().floor();
            assert_eq!(frac, md.t_exp(lambda));
            assert!(chi.coeffs().iter().all(|c| c >= &0.into()));
        }
    }
}

#[test]
fn st_cubed_equals_s_squared_up_to_level_thirty() {
    for k in 1..=30 {
        let md = ModularData::new(k).unwrap();
        let s: Vec<Vec<Complex64>> = md
            .s_numeric()
            .into_iter()
            .map(|row| row.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
            .collect();
        let t = md.t_numeric();
        let r = s.len();
        let mul = |a: &Vec<Vec<Complex64>>, b: &Vec<Vec<Complex64>>| -> Vec<Vec<Complex64>> {
            (0..r)
                .map(|i| (0..r).map(|j| (0..r).map(|l| a[i][l] * b[l][j]).sum()).collect())
                .collect()
        };
        let st: Vec<Vec<Complex64>> =
            (0..r).map(|i| (0..r).map(|j| s[i][j] * t[j]).collect()).collect();
        let lhs = mul(&mul(&st, &st), &st);
        let rhs = mul(&s, &s);
        for i in 0..r {
            for j in 0..r {
                assert!((lhs[i][j] - rhs[i][j]).norm() < 1e-9, "k={k} ({i},{j})");
            }
        }
    }
}

#[test]
fn sector_span_is_s_stable_up_to_rho_six() {
    for rho in 2..=6 {
        let r = conjecture_probe(rho, 40, 10).unwrap();
        assert_eq!(r.span_dimension, 3 * rho);
        assert!(r.stable && r.stability_residual < 1e-10, "rho={rho}");
    }
}
