//! Precision-limit references and where the lossy QFI curve crosses them.

use rayon::prelude::*;
use serde::Serialize;

use crate::ecs::{self, EcsScenario, LimitFlag};
use crate::{Error, Result, C64};

/// QFI thresholds: shot noise `n̄`, Heisenberg `n̄²` and Hofmann `⟨n²⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionLimits {
    pub shot_noise: f64,
    pub heisenberg: f64,
    pub hofmann: f64,
}

impl PrecisionLimits {
    /// Photon-number variance `⟨n²⟩ - n̄²`.
    pub fn number_variance(&self) -> f64 {
        self.hofmann - self.heisenberg
    }
}

pub fn limits_for(alpha: C64) -> Result<PrecisionLimits> {
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return Err(Error::DegenerateLimit("alpha = 0: all limits vanish"));
    }
    Ok(limits_unchecked(x))
}

fn limits_unchecked(alpha_sq: f64) -> PrecisionLimits {
    let nb = ecs::n_bar(alpha_sq);
    PrecisionLimits {
        shot_noise: nb,
        heisenberg: nb * nb,
        hofmann: (1.0 + alpha_sq) * nb,
    }
}

/// One located crossing `F(R) = limit`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub reflection: f64,
    /// Final bisection bracket in `R`.
    pub bracket: (f64, f64),
    /// `|F(R) - limit|`.
    pub residual: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingReport {
    pub limits: PrecisionLimits,
    /// `F = hofmann` (point A). `None` when the curve never crosses.
    pub hofmann: Option<Crossing>,
    /// `F = heisenberg` (point B).
    pub heisenberg: Option<Crossing>,
    /// `F = shot_noise` (point C).
    pub shot_noise: Option<Crossing>,
}

/// Scan step used to bracket each root before bisection.
pub const SCAN_STEP: f64 = 0.01;

/// Residual, in QFI units, that bisection keeps refining towards once the
/// bracket is narrower than the requested tolerance.
pub const RESIDUAL_TARGET: f64 = 1e-9;

const MAX_BISECTIONS: usize = 200;

/// Locate `R` with `F(α, T = 1 - R) = limit` for each of the three limits.
///
/// Each root is bracketed by a scan of step 0.01 and bisected until the
/// bracket is narrower than `tolerance` and the residual is below
/// [`RESIDUAL_TARGET`] (or the bracket reaches machine resolution).
pub fn find_crossings(alpha: C64, tolerance: f64) -> Result<CrossingReport> {
    if !(tolerance > 0.0) {
        return Err(Error::Numerical(format!("tolerance {tolerance} must be positive")));
    }
    let x = alpha.norm_sqr();
    let limits = limits_unchecked(x);
    if x == 0.0 {
        return Ok(CrossingReport {
            limits,
            hofmann: None,
            heisenberg: None,
            shot_noise: None,
        });
    }
    let qfi = |r: f64| ecs::closed_form_qfi(x, 1.0 - r);
    let steps = (1.0 / SCAN_STEP).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let scan: Vec<f64> = grid.iter().map(|&r| qfi(r)).collect();

    let locate = |limit: f64| -> Option<Crossing> {
        let mut evaluations = scan.len();
        let i = (0..steps).find(|&i| scan[i] - limit > 0.0 && scan[i + 1] - limit <= 0.0)?;
        let (mut lo, mut hi) = (grid[i], grid[i + 1]);
        if scan[i + 1] == limit {
            return Some(Crossing {
                reflection: hi,
                bracket: (lo, hi),
                residual: 0.0,
                evaluations,
            });
        }
        let mut mid = 0.5 * (lo + hi);
        let mut g = qfi(mid) - limit;
        evaluations += 1;
        for _ in 0..MAX_BISECTIONS {
            if (hi - lo < tolerance && g.abs() < RESIDUAL_TARGET) || hi - lo <= 4.0 * f64::EPSILON {
                break;
            }
            if g > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            mid = 0.5 * (lo + hi);
            g = qfi(mid) - limit;
            evaluations += 1;
        }
        Some(Crossing {
            reflection: mid,
            bracket: (lo, hi),
            residual: g.abs(),
            evaluations,
        })
    };

    Ok(CrossingReport {
        limits,
        hofmann: locate(limits.hofmann),
        heisenberg: locate(limits.heisenberg),
        shot_noise: locate(limits.shot_noise),
    })
}

/// Per-row status in a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Degenerate,
    FullLoss,
    Failed(String),
}

impl RowStatus {
    pub fn label(&self) -> String {
        match self {
            RowStatus::Ok => String::new(),
            RowStatus::Degenerate => "degenerate".into(),
            RowStatus::FullLoss => "full_loss".into(),
            RowStatus::Failed(msg) => format!("error: {msg}"),
        }
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, RowStatus::Failed(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub reflection: f64,
    pub transmission: f64,
    pub qfi: f64,
    pub limits: PrecisionLimits,
    pub status: RowStatus,
}

/// QFI curve over a reflection grid, sorted by `R`. Failing points are
/// flagged rather than aborting the sweep; `F` is NaN on those rows.
pub fn sweep_qfi(alpha: C64, reflections: &[f64]) -> Vec<SweepRow> {
    let limits = limits_unchecked(alpha.norm_sqr());
    let mut grid = reflections.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.par_iter()
        .map(|&r| {
            let outcome = EcsScenario::from_reflection(alpha, r).and_then(|s| ecs::qfi_analytic(&s));
            let (qfi, status) = match outcome {
                Ok(b) => (
                    b.f,
                    match b.flag {
                        None => RowStatus::Ok,
                        Some(LimitFlag::Degenerate) => RowStatus::Degenerate,
                        Some(LimitFlag::FullLoss) => RowStatus::FullLoss,
                    },
                ),
                Err(e) => (f64::NAN, RowStatus::Failed(e.to_string())),
            };
            SweepRow {
                reflection: r,
                transmission: 1.0 - r,
                qfi,
                limits,
                status,
            }
        })
        .collect()
}
