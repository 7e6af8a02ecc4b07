//! Sectors of the superalgebra `V = L(k,0) ⊕ L(k,k)` for `k = 4ρ − 2`.
//!
//! `V` has `ρ` untwisted modules `M_i = L(k,i) ⊕ L(k,k−i)` (`i` even) and
//! `ρ + 1` σ-twisted modules: `W_i` for odd `i < k/2`, plus `W_{2ρ−1} =
//! L(k,k/2)` and its σ-composed partner. Their traces and supertraces are
//! integer combinations of the characters `χ_λ`, and the sum of their squared
//! moduli is a sesquilinear form in the `χ_λ`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modular_data::{dodd_invariant, s_commutes, t_commutes, InvariantMatrix, ModularData};
use crate::qseries::{affine_characters, qseries_eval};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SectorKind {
    /// `Tr_{M_i} q^{L(0)−c/24}`.
    UntwistedTrace,
    /// `Tr_{M_i} σ q^{L(0)−c/24}`.
    UntwistedSupertrace,
    /// `Tr_{W_i} q^{L(0)−c/24}`.
    TwistedTrace,
    /// `Tr_{σ∘W_{2ρ−1}} q^{L(0)−c/24}`.
    TwistedSigmaComposed,
}

impl SectorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SectorKind::UntwistedTrace => "untwisted-trace",
            SectorKind::UntwistedSupertrace => "untwisted-supertrace",
            SectorKind::TwistedTrace => "twisted-trace",
            SectorKind::TwistedSigmaComposed => "twisted-sigma-composed",
        }
    }
}

/// A sector's character expanded over `χ_1, …, χ_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorCharacter {
    pub kind: SectorKind,
    pub index: usize,
    /// Entry `λ − 1` is the coefficient of `χ_λ`.
    pub coeffs: Vec<i64>,
}

impl SectorCharacter {
    pub fn name(&self) -> String {
        match self.kind {
            SectorKind::UntwistedTrace => format!("Tr M_{}", self.index),
            SectorKind::UntwistedSupertrace => format!("STr M_{}", self.index),
            SectorKind::TwistedTrace => format!("Tr W_{}", self.index),
            SectorKind::TwistedSigmaComposed => format!("Tr sigma.W_{}", self.index),
        }
    }
}

impl fmt::Display for SectorCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.name())?;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            write!(f, " {sign}")?;
            if c.abs() != 1 {
                write!(f, "{}", c.abs())?;
            }
            write!(f, "chi_{}", i + 1)?;
            first = false;
        }
        Ok(())
    }
}

fn check_rho(rho: usize) -> Result<()> {
    if rho < 2 {
        Err(Error::InvalidParameter(format!("rho must be >= 2, got {rho}")))
    } else {
        Ok(())
    }
}

/// Level `k = 4ρ − 2` of the family.
pub fn level_for(rho: usize) -> u32 {
    (4 * rho - 2) as u32
}

/// The `3ρ + 1` sector characters of `L(k,0) ⊕ L(k,k)`, `k = 4ρ − 2`.
pub fn module_inventory(rho: usize) -> Result<Vec<SectorCharacter>> {
    check_rho(rho)?;
    let k = 4 * rho - 2;
    let dim = k + 1;
    let unit = |label: usize| {
        let mut v = vec![0i64; dim];
        v[label - 1] = 1;
        v
    };
    let pair = |i: usize, sign: i64| {
        let mut v = unit(i + 1);
        v[k - i] += sign;
        v
    };
    let mut sectors = Vec::with_capacity(3 * rho + 1);
    for i in (0..k / 2).step_by(2) {
        sectors.push(SectorCharacter {
            kind: SectorKind::UntwistedTrace,
            index: i,
            coeffs: pair(i, 1),
        });
    }
    for i in (0..k / 2).step_by(2) {
        // σ is +1 on L(k,i) and −1 on L(k,k−i)
        sectors.push(SectorCharacter {
            kind: SectorKind::UntwistedSupertrace,
            index: i,
            coeffs: pair(i, -1),
        });
    }
    for i in (1..k / 2).step_by(2) {
        sectors.push(SectorCharacter {
            kind: SectorKind::TwistedTrace,
            index: i,
            coeffs: pair(i, 1),
        });
    }
    sectors.push(SectorCharacter {
        kind: SectorKind::TwistedTrace,
        index: k / 2,
        coeffs: unit(k / 2 + 1),
    });
    sectors.push(SectorCharacter {
        kind: SectorKind::TwistedSigmaComposed,
        index: k / 2,
        coeffs: unit(k / 2 + 1),
    });
    Ok(sectors)
}

/// `Σ_{λμ} N_{λμ} χ_λ(τ) χ_μ(τ)*` at a fixed level.
#[derive(Clone, Debug)]
pub struct PartitionFunction {
    pub md: ModularData,
    pub matrix: InvariantMatrix,
}

impl PartitionFunction {
    pub fn new(md: ModularData, matrix: InvariantMatrix) -> Result<Self> {
        if matrix.n() != md.n() {
            return Err(Error::DimensionMismatch {
                expected: md.n(),
                actual: matrix.n(),
            });
        }
        Ok(PartitionFunction { md, matrix })
    }

    /// Numeric value at `τ` from characters truncated at `order`.
    pub fn evaluate(&self, tau: Complex64, order: usize) -> Result<Complex64> {
        let values = affine_characters(self.md.level(), order)?
            .iter()
            .map(|c| qseries_eval(c, tau, 15).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok(self
            .matrix
            .support()
            .map(|(l, u, v)| values[l - 1] * values[u - 1].conj() * v as f64)
            .sum())
    }

    pub fn t_invariant(&self) -> bool {
        t_commutes(&self.matrix, &self.md).unwrap_or(false)
    }

    pub fn s_invariant(&self) -> bool {
        s_commutes(&self.matrix, &self.md).unwrap_or(false)
    }
}

/// Expands `Σ_i (|Tr_{M_i}|² + |Tr_{M_i}σ|²) + Σ_j |Tr_{W_j}|²` over the
/// characters. Trace/supertrace pairs collapse through
/// `|a+b|² + |a−b|² = 2|a|² + 2|b|²`; the result must equal
/// `I + D_{2ρ+1}`.
pub fn assemble_super_partition(rho: usize) -> Result<PartitionFunction> {
    check_rho(rho)?;
    let md = ModularData::new(level_for(rho))?;
    let n = md.n();
    let mut matrix = InvariantMatrix::zeros(n);
    let sectors = module_inventory(rho)?;
    let support = |s: &SectorCharacter| -> Vec<(usize, i64)> {
        s.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(i, c)| (i + 1, *c))
            .collect()
    };
    for s in &sectors {
        match s.kind {
            SectorKind::UntwistedTrace => {
                for (l, _) in support(s) {
                    matrix.set(l, l, matrix.get(l, l) + 2);
                }
            }
            // absorbed by the trace of the same module
            SectorKind::UntwistedSupertrace => {}
            SectorKind::TwistedTrace | SectorKind::TwistedSigmaComposed => {
                let sup = support(s);
                for &(a, ca) in &sup {
                    for &(b, cb) in &sup {
                        matrix.set(a, b, matrix.get(a, b) + ca * cb);
                    }
                }
            }
        }
    }
    let expected = InvariantMatrix::identity(n).checked_add(&dodd_invariant(rho)?)?;
    if matrix != expected {
        return Err(Error::Internal(format!(
            "sector sum differs from I + D_(2rho+1) at rho = {rho}"
        )));
    }
    PartitionFunction::new(md, matrix)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    pub name: &'static str,
    pub t_invariant: bool,
    pub s_invariant: bool,
}

#[derive(Clone, Debug)]
pub struct Prop52Report {
    pub rho: usize,
    pub checks: Vec<InvarianceCheck>,
    pub t_invariant: bool,
    pub s_invariant: bool,
    pub pass: bool,
}

/// Exact `S`/`T` invariance of `I + D_{2ρ+1}`, of `I`, and of `D_{2ρ+1}`.
pub fn verify_prop52(rho: usize) -> Result<Prop52Report> {
    check_rho(rho)?;
    let md = ModularData::new(level_for(rho))?;
    let n = md.n();
    let dodd = dodd_invariant(rho)?;
    let candidates = [
        ("identity+dodd", InvariantMatrix::identity(n).checked_add(&dodd)?),
        ("identity", InvariantMatrix::identity(n)),
        ("dodd", dodd),
    ];
    let mut checks = Vec::with_capacity(3);
    for (name, m) in &candidates {
        checks.push(InvarianceCheck {
            name,
            t_invariant: t_commutes(m, &md)?,
            s_invariant: s_commutes(m, &md)?,
        });
    }
    let t_invariant = checks.iter().all(|c| c.t_invariant);
    let s_invariant = checks.iter().all(|c| c.s_invariant);
    Ok(Prop52Report {
        rho,
        checks,
        t_invariant,
        s_invariant,
        pass: t_invariant && s_invariant,
    })
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub rho: usize,
    /// Names of the deduplicated sectors spanning the space, in basis order.
    pub basis: Vec<String>,
    pub span_dimension: usize,
    pub tolerance: f64,
    /// `max |S·B − B·ρ(S)|` for the orthonormal sector basis `B`.
    pub stability_residual: f64,
    pub stable: bool,
    /// `ρ(S)` in the normalized sector basis.
    pub representation_matrix: Vec<Vec<Complex64>>,
    /// `max |ρ(S)·ρ(S)† − I|`.
    pub unitarity_defect: f64,
    pub t_representation_matrix: Vec<Vec<Complex64>>,
    pub t_stability_residual: f64,
    pub t_unitarity_defect: f64,
    /// `max_j |f_j(−1/τ) − Σ_i ρ(S)_{ij} f_i(τ)|` for the sector functions at
    /// `τ = 1/2 + i`.
    pub character_residual: f64,
}

type CMatrix = Vec<Vec<Complex64>>;

fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn adjoint(a: &CMatrix) -> CMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].conj()).collect())
        .collect()
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn identity(d: usize) -> CMatrix {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

/// Restricts `op` (acting on coefficient vectors) to the span of the
/// orthonormal columns of `basis`; returns `(ρ(op), stability residual)`.
fn restrict(op: &CMatrix, basis: &CMatrix) -> (CMatrix, f64) {
    let image = matmul(op, basis);
    let rep = matmul(&adjoint(basis), &image);
    let back = matmul(basis, &rep);
    (rep, max_abs_diff(&image, &back))
}

/// Numeric probe of the `S` and `T` action on the span of the sector
/// characters. `precision` sets the stability tolerance `10^{−precision}`;
/// `order` is the truncation used for the character-level cross-check.
pub fn conjecture_probe(rho: usize, order: usize, precision: u32) -> Result<ConjectureReport> {
    check_rho(rho)?;
    let md = ModularData::new(level_for(rho))?;
    let d = md.rank();
    let tolerance = 10f64.powi(-(precision as i32));

    let mut vectors: Vec<(String, Vec<i64>)> = Vec::new();
    for s in module_inventory(rho)? {
        if !vectors.iter().any(|(_, v)| *v == s.coeffs) {
            vectors.push((s.name(), s.coeffs));
        }
    }
    let dim = vectors.len();
    // columns are the normalized sector vectors
    let basis: CMatrix = (0..d)
        .map(|l| {
            vectors
                .iter()
                .map(|(_, v)| {
                    let norm = (v.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt();
                    Complex64::new(v[l] as f64 / norm, 0.0)
                })
                .collect()
        })
        .collect();

    let s: CMatrix = md
        .s_numeric()
        .into_iter()
        .map(|row| row.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
        .collect();
    let t_diag = md.t_numeric();
    let t: CMatrix = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { t_diag[i] } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect();

    let (rep_s, stability_residual) = restrict(&s, &basis);
    let (rep_t, t_stability_residual) = restrict(&t, &basis);
    let unitarity_defect = max_abs_diff(&matmul(&rep_s, &adjoint(&rep_s)), &identity(dim));
    let t_unitarity_defect = max_abs_diff(&matmul(&rep_t, &adjoint(&rep_t)), &identity(dim));

    // f_j(−1/τ) = Σ_i ρ(S)_{ij} f_i(τ) for f_j = Σ_λ B_{λj} χ_λ
    let tau = Complex64::new(0.5, 1.0);
    let chars = affine_characters(md.level(), order)?;
    let eval_at = |z: Complex64| -> Result<Vec<Complex64>> {
        let chi = chars
            .iter()
            .map(|c| qseries_eval(c, z, 15).map(|e| e.value))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..dim)
            .map(|j| (0..d).map(|l| basis[l][j] * chi[l]).sum())
            .collect())
    };
    let f_tau = eval_at(tau)?;
    let f_image = eval_at(-tau.inv())?;
    let character_residual = (0..dim)
        .map(|j| {
            let rhs: Complex64 = (0..dim).map(|i| rep_s[i][j] * f_tau[i]).sum();
            (f_image[j] - rhs).norm()
        })
        .fold(0.0, f64::max);

    Ok(ConjectureReport {
        rho,
        basis: vectors.into_iter().map(|(name, _)| name).collect(),
        span_dimension: dim,
        tolerance,
        stability_residual,
        stable: stability_residual < tolerance,
        representation_matrix: rep_s,
        unitarity_defect,
        t_representation_matrix: rep_t,
        t_stability_residual,
        t_unitarity_defect,
        character_residual,
    })
}
