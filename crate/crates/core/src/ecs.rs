//! Closed-form QFI of an entangled coherent state `N_α(|α,0⟩ + |0,α⟩)` whose
//! arms each lose photons through a beam splitter of transmission `T`.
//!
//! After loss the state is rank 2 on `|Ψ₁⟩ = |α',0⟩`, `|Ψ₂⟩ = |0,α'⟩` with
//! `α' = α√T`, `β' = α√R`, `a = d = N_α²`, `b = N_α² e^{-|β'|²}` and
//! `p = e^{-|α'|²}`. With `H = n̂₂` the QFI reduces to
//!
//! ```text
//! F = n̄ T [2 + (2|α|² - n̄ - n̄ (1 - e^{-2|α|²R}) / (1 - e^{-2|α|²T})) T]
//! ```
//!
//! where `n̄ = 2 N_α² |α|²`. [`qfi_analytic`] evaluates both this closed form
//! and the assembly `4λ₊ΔH₁² + 4λ₋ΔH₂² - 16λ₊λ₋|H₁₂|²` from the pieces.
//!
//! Everything depends on `|α|²` only.

use serde::Serialize;

use crate::rank2::NonorthogonalRank2;
use crate::{Error, Result, C64};

/// Input amplitude and transmission of the lossy interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcsScenario {
    alpha: C64,
    transmission: f64,
}

impl EcsScenario {
    pub fn new(alpha: C64, transmission: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmission) {
            return Err(Error::InvalidTransmission(transmission));
        }
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::Numerical(format!("non-finite alpha {alpha}")));
        }
        Ok(Self { alpha, transmission })
    }

    /// Scenario with reflection (loss) `R = 1 - T`.
    pub fn from_reflection(alpha: C64, reflection: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&reflection) {
            return Err(Error::InvalidReflection(reflection));
        }
        Self::new(alpha, 1.0 - reflection)
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn transmission(&self) -> f64 {
        self.transmission
    }

    pub fn reflection(&self) -> f64 {
        1.0 - self.transmission
    }

    /// `α' = α√T`.
    pub fn alpha_prime(&self) -> C64 {
        self.alpha * self.transmission.sqrt()
    }

    /// `β' = α√R`.
    pub fn beta_prime(&self) -> C64 {
        self.alpha * self.reflection().sqrt()
    }

    /// `N_α² = 1 / (2(1 + e^{-|α|²}))`.
    pub fn norm_sq(&self) -> f64 {
        norm_sq(self.alpha_sq())
    }

    pub fn n_alpha(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Total mean photon number `n̄ = 2 N_α² |α|²`.
    pub fn n_bar(&self) -> f64 {
        n_bar(self.alpha_sq())
    }

    /// The lossy state as a nonorthogonal rank-2 operator.
    pub fn rank2(&self) -> Result<NonorthogonalRank2> {
        let n2 = self.norm_sq();
        let b = n2 * (-self.beta_prime().norm_sqr()).exp();
        let p = (-self.alpha_prime().norm_sqr()).exp();
        NonorthogonalRank2::new(n2, C64::from(b), n2, C64::from(p))
    }
}

pub(crate) fn norm_sq(alpha_sq: f64) -> f64 {
    0.5 / (1.0 + (-alpha_sq).exp())
}

pub(crate) fn n_bar(alpha_sq: f64) -> f64 {
    alpha_sq / (1.0 + (-alpha_sq).exp())
}

/// Why a QFI was returned as zero without evaluating the formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitFlag {
    /// `α = 0`: the probe is vacuum.
    Degenerate,
    /// `T = 0`: every photon is lost.
    FullLoss,
}

/// Every intermediate of the analytic QFI.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EcsQfiBreakdown {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: f64,
    pub v_minus: f64,
    /// `(ΔH₁)²` in `|λ̃₊⟩`.
    pub var_plus: f64,
    /// `(ΔH₂)²` in `|λ̃₋⟩`.
    pub var_minus: f64,
    /// `|H₁₂|²`.
    pub transition: f64,
    /// `4λ₊var₊ + 4λ₋var₋ - 16λ₊λ₋·transition`.
    pub assembled: f64,
    /// The simplified closed form in `n̄` and `T`.
    #[serde(rename = "F")]
    pub f: f64,
    pub flag: Option<LimitFlag>,
}

/// `λ̃±` and `ṽ±` of the lossy state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenTilde {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub v_plus: f64,
    pub v_minus: f64,
}

/// `λ̃± = 1/2 ± √(2e^{-|α|²} + e^{-2|α'|²} + e^{-2|β'|²}) / (2 + 2e^{-|α|²})`.
///
/// `λ̃₋` is taken as `det / λ̃₊` and `ṽ₋` from `ṽ₊ṽ₋ = ξ/s`, which avoids the
/// cancellation near `T = 1`.
pub fn eigen_tilde(s: &EcsScenario) -> Result<EigenTilde> {
    let x = s.alpha_sq();
    if x == 0.0 {
        return Err(Error::DegenerateLimit("alpha = 0: both branches are vacuum"));
    }
    let xa = x * s.transmission;
    let xb = x * s.reflection();
    let ex = (-x).exp();
    let root = (2.0 * ex + (-2.0 * xa).exp() + (-2.0 * xb).exp()).sqrt();

    let lambda_plus = 0.5 + root / (2.0 + 2.0 * ex);
    let n2 = s.norm_sq();
    let det = n2 * n2 * (-(-2.0 * xa).exp_m1()) * (-(-2.0 * xb).exp_m1());
    let lambda_minus = det / lambda_plus;

    let sigma_term = ex + (-2.0 * xa).exp();
    let v_plus_sq = 0.5 + sigma_term / (2.0 * root);
    // ṽ₋² = 2ξ² / (s(s + σ₃)) in units where s = 2N²·root, σ₃ = 2N²·sigma_term
    let offdiag = (-xb).exp() + (-xa).exp();
    let v_minus_sq = offdiag * offdiag * (-(-2.0 * xa).exp_m1()) / (2.0 * root * (root + sigma_term));

    Ok(EigenTilde {
        lambda_plus,
        lambda_minus,
        v_plus: v_plus_sq.sqrt(),
        v_minus: v_minus_sq.sqrt(),
    })
}

/// Variance of `n̂₂` in each eigenstate and the squared transition element.
///
/// ```text
/// ΔH₁² = q₋ (|α'|⁴ + |α'|² - q₋|α'|⁴),  q₋ = ṽ₋² / (1 - p²)
/// ΔH₂² = q₊ (|α'|⁴ + |α'|² - q₊|α'|⁴),  q₊ = ṽ₊² / (1 - p²)
/// |H₁₂|² = (ṽ₊ṽ₋ |α'|² / (1 - p²))²
/// ```
///
/// At `T = 0` the state is vacuum and all three vanish.
pub fn variances_and_transition(s: &EcsScenario) -> Result<(f64, f64, f64)> {
    let e = eigen_tilde(s)?;
    let xa = s.alpha_sq() * s.transmission;
    if xa == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let one_minus_p_sq = -(-2.0 * xa).exp_m1();
    let q_minus = e.v_minus * e.v_minus / one_minus_p_sq;
    let q_plus = e.v_plus * e.v_plus / one_minus_p_sq;
    let xa2 = xa * xa;
    let var_plus = (q_minus * (xa2 + xa - q_minus * xa2)).max(0.0);
    let var_minus = (q_plus * (xa2 + xa - q_plus * xa2)).max(0.0);
    let h12 = e.v_plus * e.v_minus / one_minus_p_sq * xa;
    Ok((var_plus, var_minus, h12 * h12))
}

/// Closed form of the lossy QFI. `T = 1` uses the lossless form and `T = 0`
/// returns zero.
pub fn closed_form_qfi(alpha_sq: f64, transmission: f64) -> f64 {
    let nb = n_bar(alpha_sq);
    if alpha_sq == 0.0 || transmission == 0.0 {
        return 0.0;
    }
    if transmission == 1.0 {
        return nb * (2.0 + 2.0 * alpha_sq - nb);
    }
    let r = 1.0 - transmission;
    let ratio = (-2.0 * alpha_sq * r).exp_m1() / (-2.0 * alpha_sq * transmission).exp_m1();
    nb * transmission * (2.0 + (2.0 * alpha_sq - nb - nb * ratio) * transmission)
}

pub fn qfi_analytic(s: &EcsScenario) -> Result<EcsQfiBreakdown> {
    let x = s.alpha_sq();
    let zero = |flag| EcsQfiBreakdown {
        lambda_plus: 1.0,
        lambda_minus: 0.0,
        v_plus: 1.0,
        v_minus: 0.0,
        var_plus: 0.0,
        var_minus: 0.0,
        transition: 0.0,
        assembled: 0.0,
        f: 0.0,
        flag: Some(flag),
    };
    if x == 0.0 {
        return Ok(zero(LimitFlag::Degenerate));
    }
    if s.transmission == 0.0 {
        let e = eigen_tilde(s)?;
        return Ok(EcsQfiBreakdown {
            lambda_plus: e.lambda_plus,
            lambda_minus: e.lambda_minus,
            v_plus: e.v_plus,
            v_minus: e.v_minus,
            ..zero(LimitFlag::FullLoss)
        });
    }

    let e = eigen_tilde(s)?;
    let (var_plus, var_minus, transition) = variances_and_transition(s)?;
    let assembled = 4.0 * e.lambda_plus * var_plus + 4.0 * e.lambda_minus * var_minus
        - 16.0 * e.lambda_plus * e.lambda_minus * transition;
    let f = closed_form_qfi(x, s.transmission);
    if !(f.is_finite() && assembled.is_finite()) {
        return Err(Error::Numerical(format!(
            "non-finite QFI at |alpha|^2 = {x}, T = {}",
            s.transmission
        )));
    }
    Ok(EcsQfiBreakdown {
        lambda_plus: e.lambda_plus,
        lambda_minus: e.lambda_minus,
        v_plus: e.v_plus,
        v_minus: e.v_minus,
        var_plus,
        var_minus,
        transition,
        assembled: assembled.max(0.0),
        f,
        flag: None,
    })
}

/// Lossless QFI `n̄(2 + 2|α|² - n̄)`, which equals `2⟨n²⟩ - n̄²`.
pub fn lossless_qfi(alpha: C64) -> Result<f64> {
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return Err(Error::DegenerateLimit("alpha = 0: no photons"));
    }
    let nb = n_bar(x);
    let f = nb * (2.0 + 2.0 * x - nb);
    debug_assert!(f >= nb * nb + 2.0 * nb - 1e-12 * f);
    Ok(f)
}
