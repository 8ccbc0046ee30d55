//! Closed forms against the truncated Fock-space oracle.

use ecs_qfi::ecs::{self, EcsScenario};
use ecs_qfi::fock::{self, FockSpace};
use ecs_qfi::qfi::{self, SpectralDecomposition};
use ecs_qfi::rank2::{eig_nonorthogonal, eig_nonorthogonal_direct};
use ecs_qfi::{Error, C64};
use nalgebra::DVector;

fn alpha(x: f64) -> C64 {
    C64::from(x)
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn numeric_qfi_named_points() {
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let lossless = fock::numeric_qfi_lossy(alpha(2.0), 1.0, &space).unwrap();
    assert!(relative(lossless, 23.850_934_260_322_46) < 1e-9, "{lossless}");
    let t09 = fock::numeric_qfi_lossy(alpha(2.0), 0.9, &space).unwrap();
    assert!(relative(t09, 13.138_883_502_002_15) < 1e-6, "{t09}");
    let half = fock::numeric_qfi_lossy(alpha(2.0), 0.5, &space).unwrap();
    assert!(relative(half, 4.069_356_809_857_963) < 1e-6, "{half}");
}

#[test]
fn lossless_pure_state_qfi() {
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let ket = fock::ecs_ket(alpha(2.0), &space).unwrap();
    let h = fock::number_operator(&space, 1, 1).unwrap();
    let f = qfi::qfi_pure(&ket.amplitudes, &h.matrix).unwrap();
    assert!(relative(f, ecs::lossless_qfi(alpha(2.0)).unwrap()) < 1e-9);
    let bound = qfi::cramer_rao_bound(f, 100).unwrap();
    assert!((bound - 4.192_707_879e-4).abs() < 1e-12);
}

#[test]
fn rank2_spectrum_matches_dense_state() {
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let rho = fock::build_rho12_direct(alpha(2.0), 0.8, &space).unwrap();
    let dense = rho.eigenvalues().unwrap();
    let s = EcsScenario::new(alpha(2.0), 0.8).unwrap();
    let op = s.rank2().unwrap();
    let a = eig_nonorthogonal(&op).unwrap().orthogonal;
    let b = eig_nonorthogonal_direct(&op).unwrap();
    let e = ecs::eigen_tilde(&s).unwrap();
    for lp in [a.lambda_plus, b.lambda_plus, e.lambda_plus] {
        assert!((lp - dense[0]).abs() < 1e-10);
    }
    for lm in [a.lambda_minus, b.lambda_minus, e.lambda_minus] {
        assert!((lm - dense[1]).abs() < 1e-10);
    }
    assert!(dense[2..].iter().all(|v| v.abs() < 1e-10));
}

#[test]
fn eigenvector_variances_match_fock_expectations() {
    // Rebuild |λ̃±⟩ as Fock vectors from the Ψ-basis coefficients and
    // evaluate ⟨H²⟩ - ⟨H⟩² and |⟨λ̃₊|H|λ̃₋⟩|² by dense algebra.
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let s = EcsScenario::new(alpha(2.0), 0.8).unwrap();
    let zero = C64::from(0.0);
    let psi1 = fock::product_coherent(&space, &[s.alpha_prime(), zero]).unwrap().amplitudes;
    let psi2 = fock::product_coherent(&space, &[zero, s.alpha_prime()]).unwrap().amplitudes;
    let eig = eig_nonorthogonal(&s.rank2().unwrap()).unwrap().original;
    let to_fock = |c: [C64; 2]| -> DVector<C64> { &psi1 * c[0] + &psi2 * c[1] };
    let plus = to_fock(eig.plus);
    let minus = to_fock(eig.minus);
    assert!((plus.norm() - 1.0).abs() < 1e-10);
    assert!(plus.dotc(&minus).norm() < 1e-10);

    let h = fock::number_operator(&space, 1, 1).unwrap().matrix;
    let var = |v: &DVector<C64>| {
        let hv = &h * v;
        hv.norm_squared() - v.dotc(&hv).re.powi(2)
    };
    let (var_plus, var_minus, transition) = ecs::variances_and_transition(&s).unwrap();
    assert!((var(&plus) - var_plus).abs() < 1e-9, "{} vs {}", var(&plus), var_plus);
    assert!((var(&minus) - var_minus).abs() < 1e-9);
    assert!((plus.dotc(&(&h * &minus)).norm_sqr() - transition).abs() < 1e-9);
}

#[test]
fn lossy_state_properties_over_grid() {
    for &a in &[0.5, 1.0, 2.0] {
        let space = FockSpace::adaptive(a * a, 2).unwrap();
        for &t in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let rho = fock::build_rho12_direct(alpha(a), t, &space).unwrap();
            assert!((rho.trace().re - 1.0).abs() < 1e-10);
            assert!(rho.is_hermitian(1e-12));
            assert!(rho.min_eigenvalue().unwrap() >= -1e-10);
        }
    }
}

#[test]
fn environment_route_agrees_at_light_truncation() {
    let s4 = FockSpace::new(15, 4).unwrap();
    let s2 = FockSpace::new(15, 2).unwrap();
    let via = fock::build_rho12_via_environment(alpha(1.0), 0.5, &s4).unwrap();
    let direct = fock::build_rho12_direct(alpha(1.0), 0.5, &s2).unwrap();
    assert!(via.max_abs_diff(&direct) < 1e-10);
    assert!((via.trace().re - 1.0).abs() < 1e-12);
}

#[test]
fn environment_route_respects_dimension_cap() {
    let err = FockSpace::with_cap(40, 4, 1_000_000).unwrap_err();
    assert!(matches!(err, Error::DimensionCap { .. }));
}

#[test]
fn qfi_increases_with_transmission() {
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let mut last = -1.0;
    for i in 0..=20 {
        let t = i as f64 / 20.0;
        let f = fock::numeric_qfi_lossy(alpha(2.0), t, &space).unwrap();
        assert!(f >= last - 1e-12, "T = {t}: {f} < {last}");
        last = f;
    }
}

#[test]
fn truncation_convergence() {
    let base = FockSpace::adaptive(4.0, 2).unwrap();
    let doubled = FockSpace::new(2 * base.n_max(), 2).unwrap();
    for &t in &[0.5, 0.9, 1.0] {
        let f1 = fock::numeric_qfi_lossy(alpha(2.0), t, &base).unwrap();
        let f2 = fock::numeric_qfi_lossy(alpha(2.0), t, &doubled).unwrap();
        assert!(relative(f1, f2) < 1e-8, "T = {t}: {f1} vs {f2}");
    }
}

#[test]
fn finite_difference_on_lossy_family() {
    let space = FockSpace::adaptive(4.0, 2).unwrap();
    let rho = fock::build_rho12_direct(alpha(2.0), 0.9, &space).unwrap();
    let family = |phi: f64| rho.phase_shifted(1, phi).unwrap().matrix;
    let fd = qfi::qfi_finite_difference(family, 0.0, 1e-5).unwrap();
    let analytic = ecs::qfi_analytic(&EcsScenario::new(alpha(2.0), 0.9).unwrap()).unwrap().f;
    assert!(relative(fd, analytic) < 1e-6, "{fd} vs {analytic}");
    let rich = qfi::qfi_finite_difference_richardson(|phi| rho.phase_shifted(1, phi).unwrap().matrix, 0.4, 1e-3).unwrap();
    assert!(relative(rich, analytic) < 1e-6, "{rich} vs {analytic}");
}

#[test]
fn decomposition_of_lossy_state_has_two_components() {
    let space = FockSpace::adaptive(1.0, 2).unwrap();
    let rho = fock::build_rho12_direct(alpha(1.0), 0.6, &space).unwrap();
    let d = SpectralDecomposition::from_hermitian(&rho.matrix).unwrap();
    assert_eq!(d.components().len(), 2);
    let w = d.weights();
    assert!((w[0] + w[1] - 1.0).abs() < 1e-12);
}

#[test]
fn forced_truncation_surfaces_loss() {
    let space = FockSpace::forced(5, 2, 1_000_000).unwrap();
    assert!(matches!(
        fock::numeric_qfi_lossy(alpha(2.0), 0.9, &space),
        Err(Error::TruncationTooLossy { .. })
    ));
}

#[test]
fn number_operator_powers_for_nonlinear_generators() {
    // (n̂₁)² generator on the lossless ECS: 4 Var(n₁²) from the ket directly
    let space = FockSpace::adaptive(1.0, 2).unwrap();
    let ket = fock::ecs_ket(alpha(1.0), &space).unwrap();
    let h2 = fock::number_operator(&space, 1, 2).unwrap();
    let h4 = fock::number_operator(&space, 1, 4).unwrap();
    let mean = ket.expectation(&h2).unwrap().re;
    let second = ket.expectation(&h4).unwrap().re;
    let f = qfi::qfi_pure(&ket.amplitudes, &h2.matrix).unwrap();
    assert!((f - 4.0 * (second - mean * mean)).abs() < 1e-10);
}
