//! Truncated Fock-space states and operators.
//!
//! This module is the numerical oracle for the closed forms in
//! [`crate::ecs`]: it builds the lossy two-mode state explicitly, either
//! directly or by tracing environment modes out of a four-mode pure state,
//! and evaluates the QFI by dense diagonalization.
//!
//! Basis ordering: a multi-mode occupation `(n₀, n₁, …)` maps to the flat
//! index `Σ nₘ (n_max+1)^(modes-1-m)`, i.e. mode 0 is the most significant
//! digit and occupations ascend. Modes are numbered from zero, so the
//! interferometer's second arm (the phase-shifted one) is mode 1.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::qfi::{self, SpectralDecomposition};
use crate::tolerances::{ADAPTIVE_TAIL, FORCED_TRUNCATION_TAIL, HERMITIAN, MAX_DIM, MIN_N_MAX, TRUNCATION_TAIL};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockSpace {
    n_max: usize,
    modes: usize,
    /// Largest Poisson tail a coherent state may drop in this space.
    tail_tolerance: f64,
}

impl FockSpace {
    pub fn new(n_max: usize, modes: usize) -> Result<Self> {
        Self::with_cap(n_max, modes, MAX_DIM)
    }

    pub fn with_cap(n_max: usize, modes: usize, cap: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidSpace("n_max must be at least 1".into()));
        }
        if !matches!(modes, 1 | 2 | 4) {
            return Err(Error::InvalidSpace(format!("{modes} modes (expected 1, 2 or 4)")));
        }
        let dim = (n_max + 1)
            .checked_pow(modes as u32)
            .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
        if dim > cap {
            return Err(Error::DimensionCap { dim, cap });
        }
        Ok(Self {
            n_max,
            modes,
            tail_tolerance: TRUNCATION_TAIL,
        })
    }

    /// Smallest `n_max ≥ 15` whose Poisson(`alpha_sq`) tail is below 1e-12.
    pub fn adaptive(alpha_sq: f64, modes: usize) -> Result<Self> {
        Self::adaptive_with_cap(alpha_sq, modes, MAX_DIM)
    }

    pub fn adaptive_with_cap(alpha_sq: f64, modes: usize, cap: usize) -> Result<Self> {
        Self::with_cap(adaptive_n_max(alpha_sq), modes, cap)
    }

    /// A caller-pinned cutoff. Coherent states may drop up to 1e-4 of their
    /// norm before construction fails.
    pub fn forced(n_max: usize, modes: usize, cap: usize) -> Result<Self> {
        Ok(Self::with_cap(n_max, modes, cap)?.with_tail_tolerance(FORCED_TRUNCATION_TAIL))
    }

    pub fn with_tail_tolerance(mut self, tail: f64) -> Self {
        self.tail_tolerance = tail;
        self
    }

    /// Same cutoff and tolerance with a different mode count.
    pub fn with_modes(&self, modes: usize) -> Result<Self> {
        Ok(Self::with_cap(self.n_max, modes, usize::MAX)?.with_tail_tolerance(self.tail_tolerance))
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    /// Levels per mode, `n_max + 1`.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    pub fn dim(&self) -> usize {
        self.levels().pow(self.modes as u32)
    }

    pub fn index(&self, occupations: &[usize]) -> usize {
        debug_assert_eq!(occupations.len(), self.modes);
        occupations.iter().fold(0, |acc, n| acc * self.levels() + n)
    }

    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes];
        for slot in occ.iter_mut().rev() {
            *slot = index % self.levels();
            index /= self.levels();
        }
        occ
    }

    /// Occupation of `mode` at flat `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        let stride = self.levels().pow((self.modes - 1 - mode) as u32);
        (index / stride) % self.levels()
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes {
            return Err(Error::InvalidMode {
                mode,
                modes: self.modes,
            });
        }
        Ok(())
    }

    fn require_modes(&self, modes: usize) -> Result<()> {
        if self.modes != modes {
            return Err(Error::InvalidSpace(format!(
                "expected a {modes}-mode space, got {} modes",
                self.modes
            )));
        }
        Ok(())
    }
}

/// `P(N > n)` for `N ~ Poisson(mean)`, summed from the tail side.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_term = -mean;
    for k in 1..=n {
        ln_term += ln_mean - (k as f64).ln();
    }
    let mut tail = 0.0;
    let mut k = n + 1;
    loop {
        ln_term += ln_mean - (k as f64).ln();
        let term = ln_term.exp();
        tail += term;
        if (k as f64) > mean && (term < tail * 1e-17 || term < 1e-300) {
            break;
        }
        k += 1;
    }
    tail
}

/// Smallest `n ≥ 15` with Poisson tail mass below 1e-12.
pub fn adaptive_n_max(alpha_sq: f64) -> usize {
    let mut n = MIN_N_MAX;
    while poisson_tail(alpha_sq, n) >= ADAPTIVE_TAIL {
        n += 1;
    }
    n
}

/// A ket on a [`FockSpace`], with the norm lost to truncation before
/// renormalization.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub space: FockSpace,
    pub amplitudes: DVector<C64>,
    pub truncation_loss: f64,
}

impl FockVector {
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn expectation(&self, op: &DenseOperator) -> Result<C64> {
        check_same_space(&self.space, &op.space)?;
        Ok(self.amplitudes.dotc(&(&op.matrix * &self.amplitudes)))
    }

    pub fn projector(&self) -> DenseOperator {
        DenseOperator {
            space: self.space,
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
        }
    }
}

/// Dense operator on a [`FockSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub space: FockSpace,
    pub matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn new(space: FockSpace, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != space.dim() || matrix.ncols() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: matrix.nrows(),
            });
        }
        Ok(Self { space, matrix })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.matrix.nrows();
        (0..n).all(|i| (i..n).all(|j| (self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm() <= tol))
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(qfi::hermitian_eigen(&self.matrix)?.values)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.last().copied().unwrap_or(0.0))
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// `e^{-iφ n̂_mode} ρ e^{iφ n̂_mode}`.
    pub fn phase_shifted(&self, mode: usize, phi: f64) -> Result<DenseOperator> {
        self.space.check_mode(mode)?;
        let n = self.matrix.nrows();
        let phases: Vec<C64> = (0..n)
            .map(|i| C64::from_polar(1.0, -phi * self.space.occupation(i, mode) as f64))
            .collect();
        let matrix = DMatrix::from_fn(n, n, |i, j| phases[i] * self.matrix[(i, j)] * phases[j].conj());
        Ok(DenseOperator {
            space: self.space,
            matrix,
        })
    }

    pub fn to_dump(&self) -> OperatorDump {
        let n = self.matrix.nrows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = self.matrix[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        OperatorDump {
            n_max: self.space.n_max,
            modes: self.space.modes,
            dim: n,
            data,
        }
    }

    pub fn from_dump(dump: &OperatorDump) -> Result<Self> {
        let space = FockSpace::with_cap(dump.n_max, dump.modes, usize::MAX)?;
        if dump.dim != space.dim() || dump.data.len() != dump.dim * dump.dim {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: dump.dim,
            });
        }
        let matrix = DMatrix::from_row_iterator(
            dump.dim,
            dump.dim,
            dump.data.iter().map(|[re, im]| C64::new(*re, *im)),
        );
        Self::new(space, matrix)
    }
}

/// JSON dump of a dense operator: header plus row-major `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorDump {
    pub n_max: usize,
    pub modes: usize,
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

/// Renormalized coherent amplitudes `e^{-|α|²/2} αⁿ/√n!` for `n ≤ n_max`
/// and the dropped Poisson tail.
pub fn coherent_amplitudes(alpha: C64, n_max: usize, allowed_tail: f64) -> Result<(Vec<C64>, f64)> {
    let tail = poisson_tail(alpha.norm_sqr(), n_max);
    if tail > allowed_tail {
        return Err(Error::TruncationTooLossy {
            alpha_abs: alpha.norm(),
            n_max,
            tail,
            allowed: allowed_tail,
        });
    }
    let mut amps = Vec::with_capacity(n_max + 1);
    let mut c = C64::from((-alpha.norm_sqr() / 2.0).exp());
    amps.push(c);
    for n in 1..=n_max {
        c = c * alpha / (n as f64).sqrt();
        amps.push(c);
    }
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut amps {
        *z /= norm;
    }
    Ok((amps, tail))
}

/// Single-mode coherent state `|α⟩`.
pub fn coherent_ket(alpha: C64, space: &FockSpace) -> Result<FockVector> {
    space.require_modes(1)?;
    product_coherent(space, &[alpha])
}

/// Product of coherent states, one label per mode.
pub fn product_coherent(space: &FockSpace, labels: &[C64]) -> Result<FockVector> {
    if labels.len() != space.modes {
        return Err(Error::DimensionMismatch {
            expected: space.modes,
            found: labels.len(),
        });
    }
    let mut amplitudes = DVector::from_element(1, C64::from(1.0));
    let mut kept = 1.0;
    for alpha in labels {
        let (amps, tail) = coherent_amplitudes(*alpha, space.n_max, space.tail_tolerance)?;
        kept *= 1.0 - tail;
        amplitudes = amplitudes.kronecker(&DVector::from_vec(amps));
    }
    Ok(FockVector {
        space: *space,
        amplitudes,
        truncation_loss: 1.0 - kept,
    })
}

/// `N_α [|α⟩|0⟩ + |0⟩|α⟩]`, renormalized after truncation.
pub fn ecs_ket(alpha: C64, space: &FockSpace) -> Result<FockVector> {
    space.require_modes(2)?;
    let zero = C64::from(0.0);
    let left = product_coherent(space, &[alpha, zero])?;
    let right = product_coherent(space, &[zero, alpha])?;
    let n_alpha = (2.0 * (1.0 + (-alpha.norm_sqr()).exp())).sqrt().recip();
    let mut amplitudes = (left.amplitudes + right.amplitudes) * C64::from(n_alpha);
    amplitudes /= C64::from(amplitudes.norm());
    Ok(FockVector {
        space: *space,
        amplitudes,
        truncation_loss: left.truncation_loss,
    })
}

/// Beam splitter on two coherent labels:
/// `|α₁⟩|α₂⟩ → |α₁√T + α₂√R⟩|α₁√R - α₂√T⟩`. `T` is clamped to `[0, 1]`.
pub fn beam_splitter_coherent(alpha1: C64, alpha2: C64, transmission: f64) -> (C64, C64) {
    debug_assert!((0.0..=1.0).contains(&transmission));
    let t = transmission.clamp(0.0, 1.0);
    let (st, sr) = (t.sqrt(), (1.0 - t).sqrt());
    (alpha1 * st + alpha2 * sr, alpha1 * sr - alpha2 * st)
}

/// `(n̂_mode)^power`, diagonal.
pub fn number_operator(space: &FockSpace, mode: usize, power: u32) -> Result<DenseOperator> {
    space.check_mode(mode)?;
    if power == 0 {
        return Err(Error::InvalidSpace("number-operator power must be at least 1".into()));
    }
    let diag = DVector::from_iterator(
        space.dim(),
        (0..space.dim()).map(|i| C64::from((space.occupation(i, mode) as f64).powi(power as i32))),
    );
    Ok(DenseOperator {
        space: *space,
        matrix: DMatrix::from_diagonal(&diag),
    })
}

fn check_transmission(t: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidTransmission(t));
    }
    Ok(())
}

/// The lossy two-mode state assembled from its four coherent-state dyads:
/// `N_α² [|α',0⟩⟨α',0| + e^{-|β'|²}(|α',0⟩⟨0,α'| + h.c.) + |0,α'⟩⟨0,α'|]`.
pub fn build_rho12_direct(alpha: C64, transmission: f64, space: &FockSpace) -> Result<DenseOperator> {
    space.require_modes(2)?;
    check_transmission(transmission)?;
    let alpha_sq = alpha.norm_sqr();
    let alpha_prime = alpha * transmission.sqrt();
    let coherence = (-alpha_sq * (1.0 - transmission)).exp();
    let n2 = 1.0 / (2.0 * (1.0 + (-alpha_sq).exp()));
    let zero = C64::from(0.0);

    let k1 = product_coherent(space, &[alpha_prime, zero])?.amplitudes;
    let k2 = product_coherent(space, &[zero, alpha_prime])?.amplitudes;
    let cross = &k1 * k2.adjoint() * C64::from(coherence);
    let mut matrix = &k1 * k1.adjoint() + &k2 * k2.adjoint() + &cross + cross.adjoint();
    matrix *= C64::from(n2);
    let trace = matrix.trace().re;
    matrix /= C64::from(trace);
    DenseOperator::new(*space, matrix)
}

/// The same state obtained from first principles: each ECS branch is sent
/// through a beam splitter against a vacuum environment mode, giving the
/// four-mode pure state `N_α [|α',0,β',0⟩ + |0,α',0,β'⟩]`; environment
/// modes 2 and 3 are then traced out.
pub fn build_rho12_via_environment(alpha: C64, transmission: f64, space: &FockSpace) -> Result<DenseOperator> {
    space.require_modes(4)?;
    check_transmission(transmission)?;
    let zero = C64::from(0.0);
    let (signal, env) = beam_splitter_coherent(alpha, zero, transmission);

    let branch1 = product_coherent(space, &[signal, zero, env, zero])?;
    let branch2 = product_coherent(space, &[zero, signal, zero, env])?;
    let n_alpha = (2.0 * (1.0 + (-alpha.norm_sqr()).exp())).sqrt().recip();
    let mut psi = (branch1.amplitudes + branch2.amplitudes) * C64::from(n_alpha);
    psi /= C64::from(psi.norm());

    let pure = FockVector {
        space: *space,
        amplitudes: psi,
        truncation_loss: branch1.truncation_loss,
    };
    let mut reduced = trace_out_trailing(&pure, 2)?;
    let trace = reduced.trace().re;
    reduced.matrix /= C64::from(trace);
    Ok(reduced)
}

/// Reduced state of the leading `keep` modes of a pure multi-mode ket.
pub fn trace_out_trailing(ket: &FockVector, keep: usize) -> Result<DenseOperator> {
    let space = ket.space;
    if keep == 0 || keep >= space.modes {
        return Err(Error::InvalidSpace(format!(
            "cannot keep {keep} of {} modes",
            space.modes
        )));
    }
    let kept_space = space.with_modes(keep)?;
    let rows = kept_space.dim();
    let cols = space.dim() / rows;
    // Row-major reshape: row index = kept occupations, column = traced ones.
    let a = DMatrix::from_row_slice(rows, cols, ket.amplitudes.as_slice());
    DenseOperator::new(kept_space, &a * a.adjoint())
}

/// Support decomposition of the lossy ECS state with `H = n̂₁` (the second
/// arm), fed to the generic unitary QFI.
pub fn numeric_qfi_lossy(alpha: C64, transmission: f64, space: &FockSpace) -> Result<f64> {
    let rho = build_rho12_direct(alpha, transmission, space)?;
    if !rho.is_hermitian(HERMITIAN) {
        return Err(Error::Numerical("lossy state is not Hermitian".into()));
    }
    let decomp = SpectralDecomposition::from_hermitian(&rho.matrix)?;
    let h = number_operator(space, 1, 1)?;
    Ok(qfi::qfi_unitary(&decomp, &h.matrix)?.value)
}

fn check_same_space(x: &FockSpace, y: &FockSpace) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            found: y.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::from(re)
    }

    #[test]
    fn space_indexing_round_trips() {
        let s = FockSpace::new(3, 4).unwrap();
        assert_eq!(s.dim(), 256);
        for i in [0, 1, 17, 200, 255] {
            assert_eq!(s.index(&s.occupations(i)), i);
        }
        assert_eq!(s.index(&[0, 0, 0, 1]), 1);
        assert_eq!(s.index(&[1, 0, 0, 0]), 64);
        assert_eq!(s.occupation(64 + 2, 0), 1);
        assert_eq!(s.occupation(64 + 2, 3), 2);
    }

    #[test]
    fn space_validation() {
        assert!(matches!(FockSpace::new(0, 2), Err(Error::InvalidSpace(_))));
        assert!(matches!(FockSpace::new(5, 3), Err(Error::InvalidSpace(_))));
        assert!(matches!(FockSpace::with_cap(9, 4, 1000), Err(Error::DimensionCap { dim: 10000, cap: 1000 })));
        assert!(FockSpace::with_cap(9, 4, 10000).is_ok());
    }

    #[test]
    fn poisson_tail_matches_direct_sum() {
        // 1 - P(N ≤ 5) at mean 4, from the CDF
        let cdf: f64 = (0..=5)
            .map(|k| (-4.0f64).exp() * 4f64.powi(k) / (1..=k).map(f64::from).product::<f64>())
            .sum();
        assert_abs_diff_eq!(poisson_tail(4.0, 5), 1.0 - cdf, epsilon = 1e-15);
        assert_eq!(poisson_tail(0.0, 3), 0.0);
        assert!(poisson_tail(4.0, 40) < 1e-20);
    }

    #[test]
    fn adaptive_cutoff_has_floor() {
        assert_eq!(adaptive_n_max(0.25), 15);
        let n = adaptive_n_max(4.0);
        assert!(poisson_tail(4.0, n) < 1e-12);
        assert!(poisson_tail(4.0, n - 1) >= 1e-12);
    }

    #[test]
    fn vacuum_coherent_state() {
        let s = FockSpace::new(10, 1).unwrap();
        let v = coherent_ket(c(0.0), &s).unwrap();
        assert_eq!(v.amplitudes[0], c(1.0));
        assert!(v.amplitudes.iter().skip(1).all(|z| *z == c(0.0)));
        assert_eq!(v.truncation_loss, 0.0);
    }

    #[test]
    fn coherent_mean_photon_number() {
        let s = FockSpace::new(30, 1).unwrap();
        let v = coherent_ket(c(2.0), &s).unwrap();
        let n = number_operator(&s, 0, 1).unwrap();
        assert_abs_diff_eq!(v.expectation(&n).unwrap().re, 4.0, epsilon = 1e-10);
        assert!(v.truncation_loss < 1e-10);
    }

    #[test]
    fn coherent_truncation_too_lossy() {
        let s = FockSpace::new(5, 1).unwrap();
        assert!(matches!(coherent_ket(c(2.0), &s), Err(Error::TruncationTooLossy { .. })));
        assert!(matches!(
            coherent_ket(c(2.0), &FockSpace::new(5, 2).unwrap()),
            Err(Error::InvalidSpace(_))
        ));
    }

    #[test]
    fn beam_splitter_labels() {
        let a = C64::new(1.3, -0.4);
        assert_eq!(beam_splitter_coherent(a, c(0.0), 1.0), (a, c(0.0)));
        let (x, y) = beam_splitter_coherent(a, c(0.0), 0.64);
        assert!((x - a * 0.8).norm() < 1e-15);
        assert!((y - a * 0.6).norm() < 1e-15);
        let (x, y) = beam_splitter_coherent(a, a, 0.5);
        assert!((x - a * 2f64.sqrt()).norm() < 1e-15);
        assert!(y.norm() < 1e-15);
    }

    #[test]
    fn number_operator_on_fock_state() {
        let s = FockSpace::new(5, 2).unwrap();
        let idx = s.index(&[0, 3]);
        let n1 = number_operator(&s, 1, 1).unwrap();
        let n1sq = number_operator(&s, 1, 2).unwrap();
        assert_eq!(n1.matrix[(idx, idx)], c(3.0));
        assert_eq!(n1sq.matrix[(idx, idx)], c(9.0));
        assert!(matches!(number_operator(&s, 2, 1), Err(Error::InvalidMode { .. })));
        assert!(number_operator(&s, 0, 0).is_err());
    }

    #[test]
    fn ecs_vacuum_limit() {
        let s = FockSpace::new(15, 2).unwrap();
        let v = ecs_ket(c(0.0), &s).unwrap();
        assert_abs_diff_eq!(v.amplitudes[0].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.norm_sq(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn ecs_photon_moments() {
        let s = FockSpace::adaptive(4.0, 2).unwrap();
        let v = ecs_ket(c(2.0), &s).unwrap();
        assert_abs_diff_eq!(v.norm_sq(), 1.0, epsilon = 1e-10);
        let n0 = number_operator(&s, 0, 1).unwrap();
        let n1 = number_operator(&s, 1, 1).unwrap();
        let total = DenseOperator::new(s, &n0.matrix + &n1.matrix).unwrap();
        let total_sq = DenseOperator::new(s, &total.matrix * &total.matrix).unwrap();
        // n̄ = 2N²|α|² = 4/(1+e^{-4}), ⟨n²⟩ = (1+|α|²) n̄
        let n_bar = 4.0 / (1.0 + (-4.0f64).exp());
        assert_abs_diff_eq!(v.expectation(&total).unwrap().re, 3.928_055_160_151_634, epsilon = 1e-10);
        assert_abs_diff_eq!(v.expectation(&total).unwrap().re, n_bar, epsilon = 1e-10);
        assert_abs_diff_eq!(v.expectation(&total_sq).unwrap().re, 19.640_275_800_758_17, epsilon = 1e-9);
        assert_abs_diff_eq!(v.expectation(&n1).unwrap().re, n_bar / 2.0, epsilon = 1e-10);
    }

    #[test]
    fn lossless_state_is_rank_one() {
        let s = FockSpace::adaptive(4.0, 2).unwrap();
        let rho = build_rho12_direct(c(2.0), 1.0, &s).unwrap();
        let ev = rho.eigenvalues().unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-10);
        assert!(ev[1].abs() < 1e-10);
        let pure = ecs_ket(c(2.0), &s).unwrap().projector();
        assert!(rho.max_abs_diff(&pure) < 1e-10);
    }

    #[test]
    fn full_loss_collapses_to_vacuum() {
        let s = FockSpace::adaptive(4.0, 2).unwrap();
        let rho = build_rho12_direct(c(2.0), 0.0, &s).unwrap();
        assert_abs_diff_eq!(rho.matrix[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert!(numeric_qfi_lossy(c(2.0), 0.0, &s).unwrap().abs() < 1e-12);
    }

    #[test]
    fn environment_route_without_loss() {
        let s4 = FockSpace::new(15, 4).unwrap();
        let s2 = FockSpace::new(15, 2).unwrap();
        let via = build_rho12_via_environment(c(1.0), 1.0, &s4).unwrap();
        let direct = build_rho12_direct(c(1.0), 1.0, &s2).unwrap();
        let pure = ecs_ket(c(1.0), &s2).unwrap().projector();
        assert!(via.max_abs_diff(&direct) < 1e-12);
        assert!(via.max_abs_diff(&pure) < 1e-12);
    }

    #[test]
    fn transmission_is_validated() {
        let s = FockSpace::new(15, 2).unwrap();
        assert!(matches!(build_rho12_direct(c(1.0), 1.5, &s), Err(Error::InvalidTransmission(_))));
        assert!(matches!(build_rho12_direct(c(1.0), 0.5, &FockSpace::new(15, 4).unwrap()), Err(Error::InvalidSpace(_))));
    }

    #[test]
    fn phase_shift_preserves_spectrum() {
        let s = FockSpace::new(15, 2).unwrap();
        let rho = build_rho12_direct(c(1.0), 0.7, &s).unwrap();
        let shifted = rho.phase_shifted(1, 0.9).unwrap();
        let (a, b) = (rho.eigenvalues().unwrap(), shifted.eigenvalues().unwrap());
        assert_abs_diff_eq!(a[0], b[0], epsilon = 1e-13);
        assert_abs_diff_eq!(a[1], b[1], epsilon = 1e-13);
        assert!((shifted.trace() - c(1.0)).norm() < 1e-13);
    }

    #[test]
    fn dump_round_trip() {
        let s = FockSpace::new(2, 2).unwrap();
        let rho = build_rho12_direct(C64::new(0.3, 0.2), 0.6, &s.with_tail_tolerance(1.0)).unwrap();
        let json = serde_json::to_string(&rho.to_dump()).unwrap();
        let back = DenseOperator::from_dump(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back.matrix, rho.matrix);
        assert_eq!(back.space.n_max(), 2);
    }
}
