use std::fs;

use ecs_qfi::ecs::{self, EcsScenario};
use ecs_qfi::fock::{self, FockSpace};
use ecs_qfi::limits::{self, Crossing, PrecisionLimits};
use ecs_qfi::rank2::{eig_nonorthogonal, eig_nonorthogonal_direct};
use ecs_qfi::C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{self, num, optional_residual, residual};
use crate::{grid, Failure, Format, Settings};

fn alpha(settings: &Settings) -> Result<C64, Failure> {
    let (a, phase) = (settings.alpha, settings.alpha_phase);
    if !(a.is_finite() && phase.is_finite()) {
        return Err(Failure::Config(format!("alpha = {a}, phase = {phase} must be finite")));
    }
    Ok(C64::from_polar(a, phase))
}

fn emit(settings: &Settings, text: &str) -> Result<(), Failure> {
    match &settings.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn sweep(settings: &Settings, grid_spec: &str) -> Result<(), Failure> {
    let alpha = alpha(settings)?;
    let grid = grid::parse(grid_spec).map_err(Failure::Config)?;
    let rows = limits::sweep_qfi(alpha, &grid);
    if let Some(bad) = rows.iter().find(|r| r.status.is_failure()) {
        return Err(Failure::Numeric(format!("R = {}: {}", bad.reflection, bad.status.label())));
    }
    let text = match settings.format {
        Format::Csv => output::sweep_csv(&rows),
        Format::Json => output::sweep_json([alpha.re, alpha.im], &rows),
    };
    emit(settings, &text)
}

pub struct VerifyOptions {
    pub truncation: Option<usize>,
    pub qfi_threshold: f64,
    pub max_dim: usize,
}

/// Largest admissible gap between the two rank-2 eigen-solvers.
const EIGEN_THRESHOLD: f64 = 1e-9;

#[derive(Serialize)]
struct VerifyRow {
    #[serde(rename = "R")]
    r: f64,
    #[serde(rename = "T")]
    t: f64,
    f_analytic: f64,
    f_numeric: f64,
    #[serde(serialize_with = "residual")]
    qfi_rel_error: f64,
    /// `None` when the rank-2 form is degenerate (vacuum or total loss).
    #[serde(serialize_with = "optional_residual")]
    eigen_error: Option<f64>,
}

#[derive(Serialize)]
struct Worst {
    #[serde(rename = "R")]
    r: f64,
    #[serde(serialize_with = "residual")]
    value: f64,
}

#[derive(Serialize)]
struct VerifyReport {
    alpha: [f64; 2],
    n_max: usize,
    dim: usize,
    qfi_threshold: f64,
    eigen_threshold: f64,
    rows: Vec<VerifyRow>,
    worst_qfi: Worst,
    worst_eigen: Option<Worst>,
    pass: bool,
}

fn verify_point(alpha: C64, r: f64, space: &FockSpace) -> ecs_qfi::Result<VerifyRow> {
    let s = EcsScenario::from_reflection(alpha, r)?;
    let analytic = ecs::qfi_analytic(&s)?;
    let numeric = fock::numeric_qfi_lossy(alpha, s.transmission(), space)?;
    let qfi_rel_error = if analytic.f == 0.0 {
        numeric.abs()
    } else {
        (numeric - analytic.f).abs() / analytic.f
    };
    let eigen_error = match analytic.flag {
        Some(_) => None,
        None => {
            let op = s.rank2()?;
            let gs = eig_nonorthogonal(&op)?.original;
            let direct = eig_nonorthogonal_direct(&op)?;
            Some(
                (gs.lambda_plus - direct.lambda_plus)
                    .abs()
                    .max((gs.lambda_minus - direct.lambda_minus).abs()),
            )
        }
    };
    Ok(VerifyRow {
        r,
        t: s.transmission(),
        f_analytic: analytic.f,
        f_numeric: numeric,
        qfi_rel_error,
        eigen_error,
    })
}

pub fn verify(settings: &Settings, grid_spec: &str, opts: VerifyOptions) -> Result<(), Failure> {
    let alpha = alpha(settings)?;
    let grid = grid::parse(grid_spec).map_err(Failure::Config)?;
    if !(opts.qfi_threshold > 0.0) {
        return Err(Failure::Config(format!("tolerance {} must be positive", opts.qfi_threshold)));
    }
    let space = match opts.truncation {
        Some(0) => return Err(Failure::Config("truncation must be at least 1".into())),
        Some(n) => FockSpace::forced(n, 2, opts.max_dim),
        None => FockSpace::adaptive_with_cap(alpha.norm_sqr(), 2, opts.max_dim),
    }
    .map_err(|e| Failure::Numeric(e.to_string()))?;

    let rows = grid
        .par_iter()
        .map(|&r| verify_point(alpha, r, &space).map_err(|e| Failure::Numeric(format!("R = {r}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;

    let worst_qfi = rows
        .iter()
        .map(|row| Worst { r: row.r, value: row.qfi_rel_error })
        .fold(None::<Worst>, |acc, w| match acc {
            Some(a) if a.value >= w.value => Some(a),
            _ => Some(w),
        })
        .expect("grid is non-empty");
    let worst_eigen = rows
        .iter()
        .filter_map(|row| row.eigen_error.map(|value| Worst { r: row.r, value }))
        .fold(None::<Worst>, |acc, w| match acc {
            Some(a) if a.value >= w.value => Some(a),
            _ => Some(w),
        });
    let qfi_ok = worst_qfi.value < opts.qfi_threshold;
    let eigen_ok = worst_eigen.as_ref().is_none_or(|w| w.value < EIGEN_THRESHOLD);

    let report = VerifyReport {
        alpha: [alpha.re, alpha.im],
        n_max: space.n_max(),
        dim: space.dim(),
        qfi_threshold: opts.qfi_threshold,
        eigen_threshold: EIGEN_THRESHOLD,
        rows,
        worst_qfi,
        worst_eigen,
        pass: qfi_ok && eigen_ok,
    };
    let text = match settings.format {
        Format::Json => output::pretty(&report),
        Format::Csv => verify_csv(&report.rows),
    };
    emit(settings, &text)?;

    if !qfi_ok {
        return Err(Failure::Threshold(format!(
            "QFI relative error {:e} at R = {} exceeds {:e}",
            report.worst_qfi.value, report.worst_qfi.r, opts.qfi_threshold
        )));
    }
    if let Some(w) = report.worst_eigen.as_ref().filter(|_| !eigen_ok) {
        return Err(Failure::Threshold(format!(
            "eigenvalue disagreement {:e} at R = {} exceeds {EIGEN_THRESHOLD:e}",
            w.value, w.r
        )));
    }
    eprintln!(
        "verify: {} points, max QFI relative error {:e} at R = {}",
        report.rows.len(),
        report.worst_qfi.value,
        report.worst_qfi.r
    );
    Ok(())
}

fn verify_csv(rows: &[VerifyRow]) -> String {
    let mut out = String::from("R,T,F_analytic,F_numeric,qfi_rel_error,eigen_error\n");
    for r in rows {
        let eig = r.eigen_error.map(num).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            num(r.r),
            num(r.t),
            num(r.f_analytic),
            num(r.f_numeric),
            num(r.qfi_rel_error),
            eig
        ));
    }
    out
}

#[derive(Serialize)]
struct Residuals {
    #[serde(rename = "A", serialize_with = "optional_residual")]
    a: Option<f64>,
    #[serde(rename = "B", serialize_with = "optional_residual")]
    b: Option<f64>,
    #[serde(rename = "C", serialize_with = "optional_residual")]
    c: Option<f64>,
}

#[derive(Serialize)]
struct Absent {
    #[serde(rename = "A")]
    a: bool,
    #[serde(rename = "B")]
    b: bool,
    #[serde(rename = "C")]
    c: bool,
}

#[derive(Serialize)]
struct CrossingsDoc {
    alpha: [f64; 2],
    tolerance: f64,
    limits: PrecisionLimits,
    #[serde(rename = "R_A")]
    r_a: Option<f64>,
    #[serde(rename = "R_B")]
    r_b: Option<f64>,
    #[serde(rename = "R_C")]
    r_c: Option<f64>,
    residuals: Residuals,
    absent: Absent,
}

pub fn crossings(settings: &Settings, tolerance: f64) -> Result<(), Failure> {
    let alpha = alpha(settings)?;
    if !(tolerance > 0.0) {
        return Err(Failure::Config(format!("tolerance {tolerance} must be positive")));
    }
    if settings.format == Format::Csv {
        return Err(Failure::Config("crossings only writes JSON".into()));
    }
    let report = limits::find_crossings(alpha, tolerance).map_err(|e| Failure::Numeric(e.to_string()))?;
    let root = |c: &Option<Crossing>| c.map(|c| c.reflection);
    let res = |c: &Option<Crossing>| c.map(|c| c.residual);
    let doc = CrossingsDoc {
        alpha: [alpha.re, alpha.im],
        tolerance,
        limits: report.limits,
        r_a: root(&report.hofmann),
        r_b: root(&report.heisenberg),
        r_c: root(&report.shot_noise),
        residuals: Residuals {
            a: res(&report.hofmann),
            b: res(&report.heisenberg),
            c: res(&report.shot_noise),
        },
        absent: Absent {
            a: report.hofmann.is_none(),
            b: report.heisenberg.is_none(),
            c: report.shot_noise.is_none(),
        },
    };
    emit(settings, &output::pretty(&doc))
}
