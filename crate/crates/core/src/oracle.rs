//! Brute-force ground truth: a cyclic Jacobi eigensolver for real symmetric
//! 4×4 matrices, spectral propagation `exp(-iHt)ψ`, a fixed-step RK4
//! integrator, and a grid-plus-golden-section transfer scan.
//!
//! Nothing here knows about the Bell factorization or the Hopf coordinates,
//! so it can be used to check them. Degenerate eigenvalues need no special
//! care: the spectral propagator is independent of the basis chosen inside a
//! degenerate subspace.

#![allow(clippy::needless_range_loop)]

use crate::dynamics::StateAmplitudes;
use crate::error::{Error, Result};
use crate::matrix::Mat4;
use num_complex::Complex64;

pub const MAX_SWEEPS: usize = 50;

/// Eigenvalues in ascending order and the matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem4 {
    pub eigenvalues: [f64; 4],
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`.
    pub eigenvectors: [[f64; 4]; 4],
}

fn real_symmetric_part(h: &Mat4) -> Result<[[f64; 4]; 4]> {
    if !h.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let norm = h.frobenius_norm();
    let mut a = [[0.0; 4]; 4];
    let mut asymmetry = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            asymmetry = asymmetry
                .max(h[(i, j)].im.abs())
                .max((h[(i, j)].re - h[(j, i)].re).abs());
            a[i][j] = h[(i, j)].re;
        }
    }
    if asymmetry > 1e-12 * norm {
        return Err(Error::NotSymmetric { asymmetry });
    }
    // symmetrize so the rotations see an exactly symmetric matrix
    for i in 0..4 {
        for j in (i + 1)..4 {
            let m = 0.5 * (a[i][j] + a[j][i]);
            a[i][j] = m;
            a[j][i] = m;
        }
    }
    Ok(a)
}

fn off_diagonal_norm(a: &[[f64; 4]; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a[i][j] * a[i][j];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigendecomposition of a real symmetric 4×4 matrix.
///
/// Each eigenvector is normalized so that its largest-magnitude component
/// (first one on ties) is positive.
pub fn jacobi_eigs(h: &Mat4) -> Result<EigenSystem4> {
    let mut a = real_symmetric_part(h)?;
    let norm = h.frobenius_norm();
    let mut v = [[0.0; 4]; 4];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-14 * norm {
            converged = true;
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > 1e-14 * norm {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let mut eigenvalues = [0.0; 4];
    let mut eigenvectors = [[0.0; 4]; 4];
    for (k, &col) in order.iter().enumerate() {
        eigenvalues[k] = a[col][col];
        let mut vec = [v[0][col], v[1][col], v[2][col], v[3][col]];
        let lead = (0..4).fold(0, |best, i| if vec[i].abs() > vec[best].abs() { i } else { best });
        if vec[lead] < 0.0 {
            vec.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvectors[k] = vec;
    }
    Ok(EigenSystem4 {
        eigenvalues,
        eigenvectors,
    })
}

/// Exact propagator for a constant real symmetric Hamiltonian, built once
/// from its eigensystem and evaluated at any time.
#[derive(Debug, Clone)]
pub struct SpectralPropagator {
    eig: EigenSystem4,
}

impl SpectralPropagator {
    pub fn new(h: &Mat4) -> Result<Self> {
        Ok(SpectralPropagator { eig: jacobi_eigs(h)? })
    }

    pub fn eigensystem(&self) -> &EigenSystem4 {
        &self.eig
    }

    /// `exp(-iHt)` as a full matrix.
    pub fn unitary(&self, t: f64) -> Mat4 {
        let mut u = Mat4::zeros();
        for (lambda, vec) in self.eig.eigenvalues.iter().zip(&self.eig.eigenvectors) {
            let phase = Complex64::from_polar(1.0, -lambda * t);
            for i in 0..4 {
                for j in 0..4 {
                    u[(i, j)] += phase * (vec[i] * vec[j]);
                }
            }
        }
        u
    }

    pub fn evolve(&self, psi0: &StateAmplitudes, t: f64) -> StateAmplitudes {
        let psi = psi0.as_array();
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (lambda, vec) in self.eig.eigenvalues.iter().zip(&self.eig.eigenvectors) {
            let overlap: Complex64 = vec.iter().zip(&psi).map(|(v, a)| a * v).sum();
            let coeff = overlap * Complex64::from_polar(1.0, -lambda * t);
            for i in 0..4 {
                out[i] += coeff * vec[i];
            }
        }
        StateAmplitudes::from_array(out)
    }
}

/// `exp(-iHt) psi0` by spectral decomposition.
pub fn oracle_propagate(h: &Mat4, psi0: &StateAmplitudes, t: f64) -> Result<StateAmplitudes> {
    psi0.check_normalized()?;
    Ok(SpectralPropagator::new(h)?.evolve(psi0, t))
}

/// Which ground-truth propagator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OracleMethod {
    #[default]
    Spectral,
    /// Fixed-step classical RK4 with step chosen from the matrix norm.
    Rk4,
}

/// Integrates `dψ/dt = -iHψ` with classical fourth-order Runge-Kutta.
///
/// The step is `0.01 / ‖H‖_F`, which keeps the per-step truncation error of
/// order `(‖H‖ dt)^5 / 120 ≈ 1e-12`.
pub fn rk4_propagate(h: &Mat4, psi0: &StateAmplitudes, t: f64) -> Result<StateAmplitudes> {
    psi0.check_normalized()?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    let norm = h.frobenius_norm();
    if norm == 0.0 || t == 0.0 {
        return Ok(*psi0);
    }
    let steps = ((t.abs() * norm) / 0.01).ceil().max(1.0) as usize;
    let dt = t / steps as f64;
    let minus_i = Complex64::new(0.0, -1.0);
    let deriv = |psi: &[Complex64; 4]| -> [Complex64; 4] {
        let mut d = h.apply(psi);
        d.iter_mut().for_each(|z| *z *= minus_i);
        d
    };
    let axpy =
        |x: &[Complex64; 4], k: &[Complex64; 4], a: f64| -> [Complex64; 4] { std::array::from_fn(|i| x[i] + k[i] * a) };
    let mut psi = psi0.as_array();
    for _ in 0..steps {
        let k1 = deriv(&psi);
        let k2 = deriv(&axpy(&psi, &k1, 0.5 * dt));
        let k3 = deriv(&axpy(&psi, &k2, 0.5 * dt));
        let k4 = deriv(&axpy(&psi, &k3, dt));
        for i in 0..4 {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    Ok(StateAmplitudes::from_array(psi))
}

pub fn propagate_with(method: OracleMethod, h: &Mat4, psi0: &StateAmplitudes, t: f64) -> Result<StateAmplitudes> {
    match method {
        OracleMethod::Spectral => oracle_propagate(h, psi0, t),
        OracleMethod::Rk4 => rk4_propagate(h, psi0, t),
    }
}

fn check_level(level: usize) -> Result<usize> {
    if (1..=4).contains(&level) {
        Ok(level - 1)
    } else {
        Err(Error::InvalidArgument(format!("level must be in 1..=4, got {level}")))
    }
}

/// Scans `|<to|exp(-iHt)|from>|²` on `n` uniform intervals of `[0, t_max]`,
/// then refines the best grid point by golden-section search. Levels are
/// 1-based. Returns `(t_best, fidelity_best)`; ties go to the smaller time.
pub fn oracle_max_transfer(h: &Mat4, from: usize, to: usize, t_max: f64, n: usize) -> Result<(f64, f64)> {
    let from = check_level(from)?;
    let to = check_level(to)?;
    if n < 100 {
        return Err(Error::InvalidArgument(format!(
            "need at least 100 grid intervals, got {n}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let prop = SpectralPropagator::new(h)?;
    let psi0 = StateAmplitudes::basis(from + 1);
    let fidelity = |t: f64| prop.evolve(&psi0, t).as_array()[to].norm_sqr();

    let dt = t_max / n as f64;
    let (mut k_best, mut f_best) = (0usize, fidelity(0.0));
    for k in 1..=n {
        let f = fidelity(k as f64 * dt);
        if f > f_best {
            k_best = k;
            f_best = f;
        }
    }
    let mut t_best = k_best as f64 * dt;

    let lo = (k_best as f64 - 1.0).max(0.0) * dt;
    let hi = ((k_best + 1) as f64 * dt).min(t_max);
    let (t_ref, f_ref) = golden_section_max(&fidelity, lo, hi);
    if f_ref > f_best {
        t_best = t_ref;
        f_best = f_ref;
    }
    Ok((t_best, f_best))
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
