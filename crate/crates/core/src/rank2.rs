//! Closed-form spectra of rank-2 density operators.
//!
//! A general qubit density matrix
//!
//! ```text
//! ρ = | η          ξ e^{iτ} |
//!     | ξ e^{-iτ}  1 - η    |
//! ```
//!
//! has eigenvalues `λ± = (1 ± √(1 - 4 det ρ)) / 2` and eigenvectors
//! `(v₊ e^{iτ}, v₋)` and `(-v₋ e^{iτ}, v₊)`, where
//! `v±² = (√(1 - 4 det) ± ⟨σ₃⟩) / (2 √(1 - 4 det))`.
//!
//! An operator `a|Ψ₁⟩⟨Ψ₁| + b|Ψ₁⟩⟨Ψ₂| + b*|Ψ₂⟩⟨Ψ₁| + d|Ψ₂⟩⟨Ψ₂|` on two unit
//! kets with overlap `p = ⟨Ψ₁|Ψ₂⟩` is handled two ways:
//!
//! - [`orthogonalize`] + [`eig_nonorthogonal`]: Gram-Schmidt to
//!   `Φ₁ = Ψ₁`, `Φ₂ = (Ψ₂ - pΨ₁)/√(1-|p|²)`, then the qubit formulas above,
//!   then back-transformation onto `Ψ₁, Ψ₂`.
//! - [`eig_nonorthogonal_direct`]: the nonsymmetric 2×2 coefficient problem
//!   `[[a + b p*, a p + b], [b* + d p*, b* p + d]]` solved directly and
//!   normalized under the Gram matrix `[[1, p], [p*, 1]]`.
//!
//! The two routes are independent and are cross-checked in the tests.
//!
//! Every returned eigenvector has its global phase fixed so that its
//! largest-magnitude coefficient is real and positive.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::tolerances::{BASIS_COLLAPSE, DEGENERACY, PHASE_UNDEFINED, PHYSICALITY, UNIT_TRACE};
use crate::{Error, Result, C64};

/// 2×2 matrix, row-major.
pub type Matrix2 = [[C64; 2]; 2];

/// Expansion coefficients of a ket on a two-element basis.
pub type Coeffs = [C64; 2];

/// A unit-trace 2×2 density matrix in `(η, ξ, τ)` form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneralQubitDensity {
    eta: f64,
    xi: f64,
    tau: f64,
}

impl GeneralQubitDensity {
    /// Rejects `ξ < 0`, `η` outside `[0, 1]` and negative determinants beyond
    /// the clamping slack.
    pub fn new(eta: f64, xi: f64, tau: f64) -> Result<Self> {
        if !(eta.is_finite() && xi.is_finite() && tau.is_finite()) {
            return Err(Error::NotPhysical("non-finite parameter".into()));
        }
        if !(-PHYSICALITY..=1.0 + PHYSICALITY).contains(&eta) {
            return Err(Error::NotPhysical(format!("eta = {eta} outside [0, 1]")));
        }
        if xi < 0.0 {
            return Err(Error::NotPhysical(format!("xi = {xi} is negative")));
        }
        let rho = Self::unchecked(eta.clamp(0.0, 1.0), xi, tau);
        if rho.raw_det() < -PHYSICALITY {
            return Err(Error::NotPhysical(format!("det = {:e} < 0", rho.raw_det())));
        }
        Ok(rho)
    }

    fn unchecked(eta: f64, xi: f64, tau: f64) -> Self {
        Self {
            eta,
            xi,
            tau: tau.rem_euclid(TAU),
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    /// Off-diagonal phase, reduced to `[0, 2π)`.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    fn raw_det(&self) -> f64 {
        self.eta * (1.0 - self.eta) - self.xi * self.xi
    }

    /// `η(1-η) - ξ²`, with round-off negatives clamped to zero.
    pub fn det(&self) -> f64 {
        self.raw_det().max(0.0)
    }

    /// `⟨σ₃⟩ = 2η - 1`.
    pub fn sigma3(&self) -> f64 {
        2.0 * self.eta - 1.0
    }

    pub fn matrix(&self) -> Matrix2 {
        let off = C64::from_polar(self.xi, self.tau);
        [
            [C64::from(self.eta), off],
            [off.conj(), C64::from(1.0 - self.eta)],
        ]
    }
}

/// Which basis a [`SpectralPair`]'s coefficients refer to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Basis {
    /// Orthonormal basis (`Φ₁, Φ₂` or the computational basis).
    Orthonormal,
    /// The original unit kets `Ψ₁, Ψ₂` with `⟨Ψ₁|Ψ₂⟩ = overlap`.
    Nonorthogonal { overlap: C64 },
}

impl Basis {
    /// Overlap `⟨e₁|e₂⟩` of the two basis kets.
    pub fn overlap(&self) -> C64 {
        match self {
            Basis::Orthonormal => C64::from(0.0),
            Basis::Nonorthogonal { overlap } => *overlap,
        }
    }

    /// Inner product `⟨u|v⟩` of two kets given by their coefficients.
    pub fn inner(&self, u: &Coeffs, v: &Coeffs) -> C64 {
        let p = self.overlap();
        u[0].conj() * v[0] + u[1].conj() * v[1] + p * u[0].conj() * v[1] + p.conj() * u[1].conj() * v[0]
    }

    pub fn norm_sq(&self, u: &Coeffs) -> f64 {
        self.inner(u, u).re
    }

    /// `min_θ ‖u - e^{iθ} v‖` under this basis's metric.
    pub fn phase_aligned_distance(&self, u: &Coeffs, v: &Coeffs) -> f64 {
        let overlap = self.inner(v, u);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::from(1.0)
        };
        let diff = [u[0] - phase * v[0], u[1] - phase * v[1]];
        self.norm_sq(&diff).max(0.0).sqrt()
    }
}

/// Eigenvalues `λ₊ ≥ λ₋` of a rank-≤2 density operator and the matching
/// eigenvectors as coefficients on a declared basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub plus: Coeffs,
    pub minus: Coeffs,
    pub basis: Basis,
}

impl SpectralPair {
    /// Re-express the eigenvectors on an orthonormal basis. For the
    /// nonorthogonal case this is the Gram-Schmidt basis `Φ₁, Φ₂`.
    pub fn to_orthonormal(&self) -> SpectralPair {
        match self.basis {
            Basis::Orthonormal => *self,
            Basis::Nonorthogonal { overlap } => {
                let sq = one_minus_abs_sq(overlap).sqrt();
                let map = |c: &Coeffs| [c[0] + overlap * c[1], c[1] * sq];
                SpectralPair {
                    plus: map(&self.plus),
                    minus: map(&self.minus),
                    basis: Basis::Orthonormal,
                    ..*self
                }
            }
        }
    }

    /// `Σ λ |λ⟩⟨λ|` in the orthonormal basis.
    pub fn reconstruct(&self) -> Matrix2 {
        let ortho = self.to_orthonormal();
        let mut out = [[C64::from(0.0); 2]; 2];
        for (lambda, v) in [(ortho.lambda_plus, ortho.plus), (ortho.lambda_minus, ortho.minus)] {
            for i in 0..2 {
                for j in 0..2 {
                    out[i][j] += v[i] * v[j].conj() * lambda;
                }
            }
        }
        out
    }
}

/// Rank-2 operator `a|Ψ₁⟩⟨Ψ₁| + b|Ψ₁⟩⟨Ψ₂| + b*|Ψ₂⟩⟨Ψ₁| + d|Ψ₂⟩⟨Ψ₂|` on unit
/// kets with overlap `p = ⟨Ψ₁|Ψ₂⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonorthogonalRank2 {
    a: f64,
    b: C64,
    d: f64,
    p: C64,
}

impl NonorthogonalRank2 {
    pub fn new(a: f64, b: C64, d: f64, p: C64) -> Result<Self> {
        if !(a.is_finite() && d.is_finite() && b.re.is_finite() && b.im.is_finite()) {
            return Err(Error::NotPhysical("non-finite coefficient".into()));
        }
        if !(p.re.is_finite() && p.im.is_finite()) || p.norm() >= 1.0 - BASIS_COLLAPSE {
            return Err(Error::BasisCollapse { overlap: p.norm() });
        }
        if a < 0.0 || d < 0.0 {
            return Err(Error::NotPhysical(format!("diagonal weights a = {a}, d = {d} must be >= 0")));
        }
        let op = Self { a, b, d, p };
        let trace = op.trace();
        if (trace - 1.0).abs() > UNIT_TRACE {
            return Err(Error::NotUnitTrace { trace });
        }
        let det = op.raw_det();
        if det < -PHYSICALITY {
            return Err(Error::NotPhysical(format!("det = {det:e} < 0")));
        }
        Ok(op)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn overlap(&self) -> C64 {
        self.p
    }

    /// `a + b p* + b* p + d`.
    pub fn trace(&self) -> f64 {
        self.a + self.d + 2.0 * (self.b * self.p.conj()).re
    }

    fn raw_det(&self) -> f64 {
        one_minus_abs_sq(self.p) * (self.a * self.d - self.b.norm_sqr())
    }

    /// `(1 - |p|²)(a d - |b|²)`, clamped at zero.
    pub fn det(&self) -> f64 {
        self.raw_det().max(0.0)
    }
}

/// The operator recast on the Gram-Schmidt basis `Φ₁, Φ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Orthogonalized {
    pub density: GeneralQubitDensity,
    pub matrix: Matrix2,
    pub det: f64,
    pub sigma3: f64,
    /// `e^{iτ̃} = (b + d p)/|b + d p|`.
    pub phase: C64,
    /// Set when `|b + d p|` vanishes; `phase` is then 1.
    pub phase_undefined: bool,
    pub overlap: C64,
}

pub fn orthogonalize(op: &NonorthogonalRank2) -> Result<Orthogonalized> {
    let NonorthogonalRank2 { a, b, d, p } = *op;
    if p.norm() >= 1.0 - BASIS_COLLAPSE {
        return Err(Error::BasisCollapse { overlap: p.norm() });
    }
    let q = one_minus_abs_sq(p);
    let sq = q.sqrt();
    let w = b + p * d;

    let m11 = a + 2.0 * (b * p.conj()).re + d * p.norm_sqr();
    let m22 = d * q;
    let m12 = w * sq;

    let (phase, phase_undefined) = if w.norm() < PHASE_UNDEFINED {
        (C64::from(1.0), true)
    } else {
        (w / w.norm(), false)
    };
    let tau = if phase_undefined { 0.0 } else { phase.arg() };

    Ok(Orthogonalized {
        density: GeneralQubitDensity::unchecked(m11.clamp(0.0, 1.0), m12.norm(), tau),
        matrix: [[C64::from(m11), m12], [m12.conj(), C64::from(m22)]],
        det: op.det(),
        sigma3: 1.0 - 2.0 * d * q,
        phase,
        phase_undefined,
        overlap: p,
    })
}

/// Both-basis eigen-decomposition of a [`NonorthogonalRank2`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NonorthogonalEigen {
    /// Coefficients on `Φ₁, Φ₂`.
    pub orthogonal: SpectralPair,
    /// Coefficients on `Ψ₁, Ψ₂`.
    pub original: SpectralPair,
    pub phase_undefined: bool,
    /// `ṽ₊, ṽ₋` before any phase fixing.
    pub v_plus: f64,
    pub v_minus: f64,
}

pub fn eig_general_qubit(rho: &GeneralQubitDensity) -> Result<SpectralPair> {
    let phase = C64::from_polar(1.0, rho.tau);
    let sol = solve_qubit(rho.det(), rho.sigma3(), rho.xi)?;
    Ok(SpectralPair {
        lambda_plus: sol.lambda_plus,
        lambda_minus: sol.lambda_minus,
        plus: fix_phase(sol.plus_phi(phase)),
        minus: fix_phase(sol.minus_phi(phase)),
        basis: Basis::Orthonormal,
    })
}

/// Gram-Schmidt route.
pub fn eig_nonorthogonal(op: &NonorthogonalRank2) -> Result<NonorthogonalEigen> {
    let o = orthogonalize(op)?;
    let sol = solve_qubit(o.det, o.sigma3, o.density.xi)?;

    let p = op.p;
    let inv_sq = 1.0 / one_minus_abs_sq(p).sqrt();
    let (vp, vm) = (sol.v_plus, sol.v_minus);
    let plus_psi = [o.phase * vp - p * (vm * inv_sq), C64::from(vm * inv_sq)];
    let minus_psi = [-o.phase * vm - p * (vp * inv_sq), C64::from(vp * inv_sq)];

    Ok(NonorthogonalEigen {
        orthogonal: SpectralPair {
            lambda_plus: sol.lambda_plus,
            lambda_minus: sol.lambda_minus,
            plus: fix_phase(sol.plus_phi(o.phase)),
            minus: fix_phase(sol.minus_phi(o.phase)),
            basis: Basis::Orthonormal,
        },
        original: SpectralPair {
            lambda_plus: sol.lambda_plus,
            lambda_minus: sol.lambda_minus,
            plus: fix_phase(plus_psi),
            minus: fix_phase(minus_psi),
            basis: Basis::Nonorthogonal { overlap: p },
        },
        phase_undefined: o.phase_undefined,
        v_plus: vp,
        v_minus: vm,
    })
}

/// Direct route: eigenvectors of the coefficient matrix acting on
/// `(c₁, c₂)` in `c₁|Ψ₁⟩ + c₂|Ψ₂⟩`, normalized under the Gram matrix.
pub fn eig_nonorthogonal_direct(op: &NonorthogonalRank2) -> Result<SpectralPair> {
    let NonorthogonalRank2 { a, b, d, p } = *op;
    if p.norm() >= 1.0 - BASIS_COLLAPSE {
        return Err(Error::BasisCollapse { overlap: p.norm() });
    }
    let m = coefficient_matrix(op);
    let trace = (m[0][0] + m[1][1]).re;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re.max(0.0);
    let disc = trace * trace - 4.0 * det;
    if disc <= DEGENERACY {
        return Err(Error::DegenerateSpectrum { discriminant: disc });
    }
    let s = disc.sqrt();
    let lambda_plus = (trace + s) / 2.0;
    let lambda_minus = (trace - s) / 2.0;

    let basis = Basis::Nonorthogonal { overlap: p };
    let vector = |lambda: f64| -> Result<Coeffs> {
        let from_row0 = [m[0][1], lambda - m[0][0]];
        let from_row1 = [lambda - m[1][1], m[1][0]];
        let pick = if plain_norm_sq(&from_row0) >= plain_norm_sq(&from_row1) {
            from_row0
        } else {
            from_row1
        };
        let norm_sq = basis.norm_sq(&pick);
        if !(norm_sq > 0.0) {
            return Err(Error::Numerical(format!(
                "null eigenvector for lambda = {lambda} (a = {a}, b = {b}, d = {d}, p = {p})"
            )));
        }
        let scale = 1.0 / norm_sq.sqrt();
        Ok(fix_phase([pick[0] * scale, pick[1] * scale]))
    };

    Ok(SpectralPair {
        lambda_plus,
        lambda_minus,
        plus: vector(lambda_plus)?,
        minus: vector(lambda_minus)?,
        basis,
    })
}

/// `[[a + b p*, a p + b], [b* + d p*, b* p + d]]`.
pub fn coefficient_matrix(op: &NonorthogonalRank2) -> Matrix2 {
    let NonorthogonalRank2 { a, b, d, p } = *op;
    [
        [a + b * p.conj(), p * a + b],
        [b.conj() + p.conj() * d, b.conj() * p + d],
    ]
}

/// Multiply by a unit phase so the largest-magnitude entry is real positive.
/// Ties go to the first entry.
pub fn fix_phase(v: Coeffs) -> Coeffs {
    let idx = if v[1].norm() > v[0].norm() * (1.0 + 1e-12) { 1 } else { 0 };
    let r = v[idx].norm();
    if r == 0.0 {
        return v;
    }
    let rot = v[idx].conj() / r;
    [v[0] * rot, v[1] * rot]
}

struct QubitSolution {
    lambda_plus: f64,
    lambda_minus: f64,
    v_plus: f64,
    v_minus: f64,
}

impl QubitSolution {
    fn plus_phi(&self, phase: C64) -> Coeffs {
        [phase * self.v_plus, C64::from(self.v_minus)]
    }

    fn minus_phi(&self, phase: C64) -> Coeffs {
        [-phase * self.v_minus, C64::from(self.v_plus)]
    }
}

// `v₊ v₋ = ξ / s` recovers the smaller of the two without cancelling
// `s ∓ ⟨σ₃⟩`.
fn solve_qubit(det: f64, sigma3: f64, xi: f64) -> Result<QubitSolution> {
    let disc = 1.0 - 4.0 * det;
    if disc <= DEGENERACY {
        return Err(Error::DegenerateSpectrum { discriminant: disc });
    }
    let s = disc.sqrt();
    let product = xi / s;
    let (v_plus, v_minus) = if sigma3 >= 0.0 {
        let vp = ((s + sigma3) / (2.0 * s)).sqrt();
        (vp, product / vp)
    } else {
        let vm = ((s - sigma3) / (2.0 * s)).sqrt();
        (product / vm, vm)
    };
    Ok(QubitSolution {
        lambda_plus: (1.0 + s) / 2.0,
        lambda_minus: (1.0 - s) / 2.0,
        v_plus,
        v_minus,
    })
}

fn one_minus_abs_sq(p: C64) -> f64 {
    let r = p.norm();
    (1.0 - r) * (1.0 + r)
}

fn plain_norm_sq(v: &Coeffs) -> f64 {
    v[0].norm_sqr() + v[1].norm_sqr()
}
