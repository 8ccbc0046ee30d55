//! Quantum Fisher information for unitary phase families.
//!
//! For `ρ_φ = e^{-iφH} ρ₀ e^{iφH}` with `ρ₀ = Σ pᵢ |φᵢ⟩⟨φᵢ|`, only the support
//! of `ρ₀` matters:
//!
//! ```text
//! F = 4 [ Σᵢ pᵢ (ΔHᵢ)²  -  Σ_{i≠j} 2 pᵢ pⱼ / (pᵢ + pⱼ) |Hᵢⱼ|² ]
//! ```
//!
//! The weights do not depend on `φ`, so the classical term vanishes. It is
//! still reported (as zero) in [`QfiBreakdown`].
//!
//! [`qfi_finite_difference`] is an independent oracle: it diagonalizes
//! `ρ(φ)` numerically and sums `2|⟨k|∂ρ|l⟩|² / (p_k + p_l)` over the full
//! eigenbasis.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::tolerances::{
    DECOMPOSITION, FD_STEP_FLOOR, HERMITIAN, NORMALIZATION, QFI_NEGATIVE_CLAMP, SUPPORT_CUTOFF,
};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralComponent {
    pub weight: f64,
    pub ket: DVector<C64>,
}

/// Support of a density operator: weights in `(0, 1]`, descending, with
/// pairwise orthonormal kets.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    components: Vec<SpectralComponent>,
    dim: usize,
}

impl SpectralDecomposition {
    pub fn new(components: Vec<(f64, DVector<C64>)>) -> Result<Self> {
        let Some(dim) = components.first().map(|(_, k)| k.len()) else {
            return Err(Error::InvalidDecomposition("no components".into()));
        };
        let mut total = 0.0;
        for (w, ket) in &components {
            if ket.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: ket.len(),
                });
            }
            if !(*w > 0.0 && *w <= 1.0 + DECOMPOSITION) {
                return Err(Error::InvalidDecomposition(format!("weight {w} outside (0, 1]")));
            }
            total += w;
        }
        if total > 1.0 + DECOMPOSITION {
            return Err(Error::InvalidDecomposition(format!("weights sum to {total}")));
        }
        for (i, (_, u)) in components.iter().enumerate() {
            for (j, (_, v)) in components.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                let g = u.dotc(v);
                if (g - C64::from(target)).norm() > DECOMPOSITION {
                    return Err(Error::InvalidDecomposition(format!(
                        "<k{i}|k{j}> = {g}, expected {target}"
                    )));
                }
            }
        }
        let mut components: Vec<_> = components
            .into_iter()
            .map(|(weight, ket)| SpectralComponent { weight, ket })
            .collect();
        components.sort_by(|x, y| y.weight.total_cmp(&x.weight));
        Ok(Self { components, dim })
    }

    /// Numerically diagonalize a Hermitian density matrix and keep the
    /// eigenpairs above the support cutoff.
    pub fn from_hermitian(matrix: &DMatrix<C64>) -> Result<Self> {
        let eig = hermitian_eigen(matrix)?;
        let components = eig
            .values
            .iter()
            .zip(eig.vectors.column_iter())
            .filter(|(w, _)| **w > SUPPORT_CUTOFF)
            .map(|(w, v)| (w.min(1.0), v.into_owned()))
            .collect::<Vec<_>>();
        Self::new(components)
    }

    pub fn pure(ket: DVector<C64>) -> Result<Self> {
        Self::new(vec![(1.0, ket)])
    }

    pub fn components(&self) -> &[SpectralComponent] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> Vec<f64> {
        self.components.iter().map(|c| c.weight).collect()
    }

    /// Multiply every ket by its own unit phase.
    pub fn rephased(&self, phases: &[f64]) -> Self {
        let components = self
            .components
            .iter()
            .zip(phases.iter().chain(std::iter::repeat(&0.0)))
            .map(|(c, theta)| SpectralComponent {
                weight: c.weight,
                ket: &c.ket * C64::from_polar(1.0, *theta),
            })
            .collect();
        Self {
            components,
            dim: self.dim,
        }
    }
}

/// `(ΔHᵢ)²` per eigenstate and `|Hᵢⱼ|²` between eigenstates.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorStats {
    pub variances: Vec<f64>,
    pub transitions: DMatrix<f64>,
}

pub fn generator_stats(decomp: &SpectralDecomposition, generator: &DMatrix<C64>) -> Result<GeneratorStats> {
    check_square(generator, decomp.dim)?;
    let images: Vec<DVector<C64>> = decomp.components.iter().map(|c| generator * &c.ket).collect();
    let m = images.len();
    let mut variances = Vec::with_capacity(m);
    let mut transitions = DMatrix::zeros(m, m);
    for (i, (ci, hi)) in decomp.components.iter().zip(&images).enumerate() {
        let mean = ci.ket.dotc(hi).re;
        let second = hi.norm_squared();
        variances.push((second - mean * mean).max(0.0));
        for j in 0..m {
            if j != i {
                transitions[(i, j)] = ci.ket.dotc(&images[j]).norm_sqr();
            }
        }
    }
    Ok(GeneratorStats {
        variances,
        transitions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiBreakdown {
    /// `Σ (∂φ pᵢ)² / pᵢ`; zero for unitary families.
    pub classical: f64,
    /// `4 Σ pᵢ (ΔHᵢ)²`.
    pub mean_variance: f64,
    /// `4 Σ_{i≠j} 2 pᵢ pⱼ / (pᵢ + pⱼ) |Hᵢⱼ|²`, subtracted.
    pub transition: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiResult {
    pub value: f64,
    pub breakdown: QfiBreakdown,
}

pub fn qfi_unitary(decomp: &SpectralDecomposition, generator: &DMatrix<C64>) -> Result<QfiResult> {
    let stats = generator_stats(decomp, generator)?;
    let weights = decomp.weights();
    let mean_variance = 4.0
        * weights
            .iter()
            .zip(&stats.variances)
            .map(|(p, v)| p * v)
            .sum::<f64>();
    let mut transition = 0.0;
    for (i, pi) in weights.iter().enumerate() {
        for (j, pj) in weights.iter().enumerate() {
            if i != j {
                transition += 2.0 * pi * pj / (pi + pj) * stats.transitions[(i, j)];
            }
        }
    }
    transition *= 4.0;
    let raw = mean_variance - transition;
    let value = if (-QFI_NEGATIVE_CLAMP..0.0).contains(&raw) { 0.0 } else { raw };
    Ok(QfiResult {
        value,
        breakdown: QfiBreakdown {
            classical: 0.0,
            mean_variance,
            transition,
        },
    })
}

/// `4(⟨H²⟩ - ⟨H⟩²)` for a normalized ket.
pub fn qfi_pure(ket: &DVector<C64>, generator: &DMatrix<C64>) -> Result<f64> {
    check_square(generator, ket.len())?;
    let norm_sq = ket.norm_squared();
    if (norm_sq - 1.0).abs() > NORMALIZATION {
        return Err(Error::NotNormalized { norm_sq });
    }
    let image = generator * ket;
    let mean = ket.dotc(&image).re;
    Ok((4.0 * (image.norm_squared() - mean * mean)).max(0.0))
}

/// SLD oracle with a plain central difference.
pub fn qfi_finite_difference<F>(family: F, phi: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> DMatrix<C64>,
{
    finite_difference(&family, phi, step, false)
}

/// SLD oracle with one Richardson refinement (`h` and `h/2`).
pub fn qfi_finite_difference_richardson<F>(family: F, phi: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> DMatrix<C64>,
{
    finite_difference(&family, phi, step, true)
}

fn finite_difference(
    family: &dyn Fn(f64) -> DMatrix<C64>,
    phi: f64,
    step: f64,
    richardson: bool,
) -> Result<f64> {
    if !(step > 0.0) || 2.0 * step < FD_STEP_FLOOR * phi.abs().max(1.0) || phi + step == phi - step {
        return Err(Error::StepTooSmall { step });
    }
    let rho = family(phi);
    check_hermitian(&rho)?;
    let central = |h: f64| -> Result<(DMatrix<C64>, DMatrix<C64>, DMatrix<C64>)> {
        let plus = family(phi + h);
        let minus = family(phi - h);
        if plus.shape() != rho.shape() || minus.shape() != rho.shape() {
            return Err(Error::DimensionMismatch {
                expected: rho.nrows(),
                found: plus.nrows().max(minus.nrows()),
            });
        }
        let d = (&plus - &minus) / C64::from(2.0 * h);
        Ok((d, plus, minus))
    };

    let (d1, plus, minus) = central(step)?;
    let mut keep = nonzero_rows(&rho);
    for m in [&plus, &minus] {
        for (k, nz) in keep.iter_mut().zip(nonzero_rows(m)) {
            *k |= nz;
        }
    }
    let derivative = if richardson {
        let (d2, _, _) = central(step / 2.0)?;
        (d2 * C64::from(4.0) - d1) / C64::from(3.0)
    } else {
        d1
    };

    let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect();
    if idx.is_empty() {
        return Ok(0.0);
    }
    let sub = rho.select_rows(&idx).select_columns(&idx);
    let dsub = derivative.select_rows(&idx).select_columns(&idx);
    let eig = SymmetricEigen::new(sub);
    let in_eigenbasis = eig.eigenvectors.adjoint() * dsub * &eig.eigenvectors;

    let n = idx.len();
    let mut total = 0.0;
    for k in 0..n {
        for l in 0..n {
            let denom = eig.eigenvalues[k] + eig.eigenvalues[l];
            if denom > SUPPORT_CUTOFF {
                total += 2.0 * in_eigenbasis[(k, l)].norm_sqr() / denom;
            }
        }
    }
    Ok(total)
}

/// `1 / (ν F)`: the smallest variance an unbiased estimator can reach.
pub fn cramer_rao_bound(qfi: f64, repetitions: u64) -> Result<f64> {
    if repetitions == 0 {
        return Err(Error::NoRepetitions);
    }
    if !(qfi > 0.0) {
        return Err(Error::ZeroInformation { qfi });
    }
    Ok(1.0 / (repetitions as f64 * qfi))
}

/// Full eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

/// Dense Hermitian eigensolver. Identically zero rows/columns (outside the
/// support of a PSD matrix) are split off before diagonalizing and
/// contribute zero eigenvalues with unit-vector eigenvectors.
pub fn hermitian_eigen(matrix: &DMatrix<C64>) -> Result<HermitianEigen> {
    check_hermitian(matrix)?;
    let n = matrix.nrows();
    let keep = nonzero_rows(matrix);
    let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, k)| **k).map(|(i, _)| i).collect();

    let mut pairs: Vec<(f64, DVector<C64>)> = Vec::with_capacity(n);
    if !idx.is_empty() {
        let sub = matrix.select_rows(&idx).select_columns(&idx);
        let eig = SymmetricEigen::new(sub);
        for (value, col) in eig.eigenvalues.iter().zip(eig.eigenvectors.column_iter()) {
            let mut full = DVector::zeros(n);
            for (r, &i) in idx.iter().enumerate() {
                full[i] = col[r];
            }
            pairs.push((*value, full));
        }
    }
    for (i, k) in keep.iter().enumerate() {
        if !k {
            let mut e = DVector::zeros(n);
            e[i] = C64::from(1.0);
            pairs.push((0.0, e));
        }
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let values = pairs.iter().map(|(v, _)| *v).collect();
    let cols: Vec<DVector<C64>> = pairs.into_iter().map(|(_, v)| v).collect();
    let vectors = if cols.is_empty() {
        DMatrix::zeros(0, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    Ok(HermitianEigen { values, vectors })
}

pub(crate) fn check_hermitian(matrix: &DMatrix<C64>) -> Result<()> {
    if !matrix.is_square() {
        return Err(Error::DimensionMismatch {
            expected: matrix.nrows(),
            found: matrix.ncols(),
        });
    }
    let scale = matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut deviation: f64 = 0.0;
    let n = matrix.nrows();
    for i in 0..n {
        for j in i..n {
            deviation = deviation.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    if deviation > HERMITIAN * scale {
        return Err(Error::NonHermitianInput { deviation });
    }
    Ok(())
}

fn check_square(generator: &DMatrix<C64>, dim: usize) -> Result<()> {
    if generator.nrows() != dim || generator.ncols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if generator.nrows() != dim {
                generator.nrows()
            } else {
                generator.ncols()
            },
        });
    }
    Ok(())
}

fn nonzero_rows(m: &DMatrix<C64>) -> Vec<bool> {
    m.row_iter()
        .map(|row| row.iter().any(|z| z.re != 0.0 || z.im != 0.0))
        .collect()
}
