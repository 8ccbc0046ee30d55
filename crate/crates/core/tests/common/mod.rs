#![allow(dead_code)]

use ecs_qfi::rank2::{Matrix2, NonorthogonalRank2};
use ecs_qfi::C64;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

/// A Φ-basis density with a resolvable spectrum, pulled back onto a
/// nonorthogonal pair with overlap `|p| ≤ 0.9`.
#[derive(Debug, Clone, Copy)]
pub struct Rank2Case {
    pub op: NonorthogonalRank2,
    pub phi_density: Matrix2,
}

pub fn rank2_case() -> impl Strategy<Value = Rank2Case> {
    (0.0..0.9f64, 0.0..std::f64::consts::TAU, 0.0..1.0f64, 0.0..0.999f64, 0.0..std::f64::consts::TAU)
        .prop_filter_map("spectrum too degenerate", |(r, theta, eta, frac, tau)| {
            let xi = frac * (eta * (1.0 - eta)).sqrt();
            let disc = (2.0 * eta - 1.0).powi(2) + 4.0 * xi * xi;
            if disc < 1e-2 {
                return None;
            }
            let p = C64::from_polar(r, theta);
            let off = C64::from_polar(xi, tau);
            let q = 1.0 - r * r;
            let d = (1.0 - eta) / q;
            let b = off / q.sqrt() - p * d;
            let a = eta - 2.0 * (b * p.conj()).re - d * r * r;
            let op = NonorthogonalRank2::new(a, b, d, p).ok()?;
            Some(Rank2Case {
                op,
                phi_density: [[C64::from(eta), off], [off.conj(), C64::from(1.0 - eta)]],
            })
        })
}

pub fn max_diff(x: &Matrix2, y: &Matrix2) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((x[i][j] - y[i][j]).norm());
        }
    }
    worst
}

fn complex_entries(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im)), n)
}

/// Random Hermitian matrix with entries bounded by one.
pub fn hermitian(dim: usize) -> impl Strategy<Value = DMatrix<C64>> {
    complex_entries(dim * dim).prop_map(move |v| {
        let m = DMatrix::from_vec(dim, dim, v);
        (&m + m.adjoint()) * C64::from(0.5)
    })
}

/// Two orthonormal kets from Gram-Schmidt on random vectors.
pub fn orthonormal_pair(dim: usize) -> impl Strategy<Value = (DVector<C64>, DVector<C64>)> {
    (complex_entries(dim), complex_entries(dim)).prop_filter_map("dependent draw", |(u, v)| {
        let u = DVector::from_vec(u);
        let v = DVector::from_vec(v);
        let nu = u.norm();
        if nu < 1e-3 {
            return None;
        }
        let e1 = u / C64::from(nu);
        let w = &v - &e1 * e1.dotc(&v);
        let nw = w.norm();
        if nw < 1e-3 {
            return None;
        }
        Some((e1, w / C64::from(nw)))
    })
}

pub fn density(weights: &[f64], kets: &[&DVector<C64>]) -> DMatrix<C64> {
    let dim = kets[0].len();
    let mut rho = DMatrix::zeros(dim, dim);
    for (w, k) in weights.iter().zip(kets) {
        rho += *k * k.adjoint() * C64::from(*w);
    }
    rho
}

/// `ρ(φ) = e^{-iφH} ρ e^{iφH}`, with the exponential built from the
/// eigen-decomposition of `H`.
pub fn unitary_family(rho: &DMatrix<C64>, h: &DMatrix<C64>) -> impl Fn(f64) -> DMatrix<C64> {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let (vectors, values) = (eig.eigenvectors, eig.eigenvalues);
    let rho = rho.clone();
    move |phi: f64| {
        let diag = DMatrix::from_diagonal(&values.map(|e| C64::from_polar(1.0, -phi * e)));
        let u = &vectors * diag * vectors.adjoint();
        &u * &rho * u.adjoint()
    }
}
