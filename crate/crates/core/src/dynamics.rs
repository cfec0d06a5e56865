//! Time evolution in the factored picture.
//!
//! In the Bell basis the propagator is a product of two commuting SU(2)
//! rotations. Writing the state as the 2×2 matrix
//! `A = a1 I + a2 σx + i a3 σy + a4 σz`, evolution is `A(t) = u1 A(0) u2ᵀ`
//! with `u_k = exp(-i t h_k)`. States evolve by `exp(-iHt)` (ħ = 1).

use crate::error::{Error, Result};
use crate::hamiltonian::{bell_transform, decompose, CouplingSet, Su2Generator};
use crate::hopf::{hopf_map, HopfCoordinates};
use crate::matrix::{Mat2, Mat4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Largest odd denominator tried when matching `vL/vR` to `q/p`.
pub const MAX_ODD_MULTIPLE: u64 = 99;

/// Tolerance on `|Σ|a_n|² - 1|` for inputs to the propagators.
pub const NORM_TOL: f64 = 1e-6;

/// Complex amplitudes of the four modes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateAmplitudes {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a3: Complex64,
    pub a4: Complex64,
}

impl StateAmplitudes {
    pub fn from_array(a: [Complex64; 4]) -> Self {
        StateAmplitudes {
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
        }
    }

    pub fn as_array(&self) -> [Complex64; 4] {
        [self.a1, self.a2, self.a3, self.a4]
    }

    /// The basis state `|ψ_level⟩`, 1-based.
    ///
    /// # Panics
    /// If `level` is not in `1..=4`.
    pub fn basis(level: usize) -> Self {
        assert!((1..=4).contains(&level), "level must be in 1..=4");
        let mut a = [Complex64::new(0.0, 0.0); 4];
        a[level - 1] = Complex64::new(1.0, 0.0);
        Self::from_array(a)
    }

    pub fn populations(&self) -> [f64; 4] {
        self.as_array().map(|z| z.norm_sqr())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.populations().iter().sum()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm_sqr = self.norm_sqr();
        if norm_sqr.is_finite() && (norm_sqr - 1.0).abs() <= NORM_TOL {
            Ok(())
        } else {
            Err(Error::InvalidState { norm_sqr })
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The two rotation rates `vL = |h1|`, `vR = |h2|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPair {
    pub v_l: f64,
    pub v_r: f64,
}

/// A complete 1→3 transfer: at `tau`, `vL·tau = q·π/2` and `vR·tau = p·π/2`
/// with `p`, `q` odd and coprime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferSolution {
    pub tau: f64,
    pub p: u64,
    pub q: u64,
    /// `π / tau`.
    pub omega: f64,
    pub v_l: f64,
    pub v_r: f64,
}

/// Resonantly driven two-level system with coupling `v` and detuning `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelParams {
    pub v: f64,
    pub delta: f64,
}

/// Amplitudes on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub amplitudes: Vec<StateAmplitudes>,
    /// Levels 1 and 3 are dynamically disconnected (`xi1 = xi3 = 0`).
    pub disconnected: bool,
}

/// `exp(-i t (cx σx + cz σz))`, in closed form.
pub fn su2_rotation(g: &Su2Generator, t: f64) -> Mat2 {
    let mag = g.magnitude();
    if mag == 0.0 {
        return Mat2::identity();
    }
    let (s, c) = (t * mag).sin_cos();
    let (nx, nz) = (g.cx / mag, g.cz / mag);
    let mis = Complex64::new(0.0, -s);
    Mat2([
        [Complex64::new(c, 0.0) + mis * nz, mis * nx],
        [mis * nx, Complex64::new(c, 0.0) - mis * nz],
    ])
}

/// `a1 I + a2 σx + i a3 σy + a4 σz`.
pub fn encode_amplitudes(psi: &StateAmplitudes) -> Mat2 {
    let StateAmplitudes { a1, a2, a3, a4 } = *psi;
    Mat2([[a1 + a4, a2 + a3], [a2 - a3, a1 - a4]])
}

pub fn decode_amplitudes(a: &Mat2) -> StateAmplitudes {
    let [[m00, m01], [m10, m11]] = a.0;
    StateAmplitudes {
        a1: 0.5 * (m00 + m11),
        a2: 0.5 * (m01 + m10),
        a3: 0.5 * (m01 - m10),
        a4: 0.5 * (m00 - m11),
    }
}

/// The pair `(u1, u2)` of single-qubit propagators at time `t`.
pub fn factor_rotations(c: &CouplingSet, t: f64) -> Result<(Mat2, Mat2)> {
    let (h1, h2) = decompose(c)?;
    Ok((su2_rotation(&h1, t), su2_rotation(&h2, t)))
}

/// `W (u1 ⊗ u2) W`, the full propagator assembled from the two factors.
pub fn factored_unitary(c: &CouplingSet, t: f64) -> Result<Mat4> {
    let (u1, u2) = factor_rotations(c, t)?;
    let w = bell_transform();
    Ok(w * u1.kron(&u2) * w)
}

pub fn propagate_factored(c: &CouplingSet, psi0: &StateAmplitudes, t: f64) -> Result<StateAmplitudes> {
    psi0.check_normalized()?;
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    let (u1, u2) = factor_rotations(c, t)?;
    Ok(decode_amplitudes(&(u1 * encode_amplitudes(psi0) * u2.transpose())))
}

pub fn frequencies(x: &HopfCoordinates) -> Result<FrequencyPair> {
    let slack = 1e-12 * x.xi0.abs().max(f64::MIN_POSITIVE);
    if !(x.xi0.is_finite() && x.xi2.is_finite()) || x.xi0 + slack < x.xi2.abs() {
        return Err(Error::InvalidCoordinates(format!(
            "need xi0 >= |xi2|, got xi0 = {}, xi2 = {}",
            x.xi0, x.xi2
        )));
    }
    Ok(FrequencyPair {
        v_l: (0.5 * (x.xi0 - x.xi2)).max(0.0).sqrt(),
        v_r: (0.5 * (x.xi0 + x.xi2)).max(0.0).sqrt(),
    })
}

/// True when `xi1` and `xi3` both vanish relative to `xi0`.
pub fn is_disconnected(x: &HopfCoordinates) -> bool {
    let eps = 1e-14 * x.xi0;
    x.xi1.abs() <= eps && x.xi3.abs() <= eps
}

/// Real amplitudes `(a1, a3)` starting from `|ψ1⟩`, from the Hopf coordinates.
///
/// When `xi1 = xi3 = 0` the prefactor is 0/0; then one of the two frequencies
/// vanishes, `a3 ≡ 0`, and `a1 = cos(vL t) cos(vR t)` is returned inside
/// [`Error::DisconnectedSector`].
pub fn amplitudes_closed_form(c: &CouplingSet, t: f64) -> Result<(f64, f64)> {
    let x = hopf_map(c)?;
    let f = frequencies(&x)?;
    let (sl, cl) = (f.v_l * t).sin_cos();
    let (sr, cr) = (f.v_r * t).sin_cos();
    if is_disconnected(&x) {
        return Err(Error::DisconnectedSector { a1: cl * cr });
    }
    let r = x.xi1.hypot(x.xi3);
    let a1 = cl * cr - (x.xi3 / r) * sl * sr;
    let a3 = -(x.xi1 / r) * sl * sr;
    Ok((a1, a3))
}

/// Finds the first convergent `q/p` of the continued fraction of `ratio`
/// (in `(0, 1]`) with both parts odd, `p <= max_den`, and
/// `|ratio - q/p| <= tol`. Returns `(q, p)`.
pub fn odd_ratio(ratio: f64, tol: f64, max_den: u64) -> Option<(u64, u64)> {
    if !(ratio > 0.0 && ratio <= 1.0 + tol) {
        return None;
    }
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut x = ratio;
    for _ in 0..64 {
        let a = x.floor();
        if a > max_den as f64 * 4.0 {
            break;
        }
        let a = a as u64;
        let h_next = a * h + h_prev;
        let k_next = a * k + k_prev;
        if k_next > max_den {
            break;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        if h % 2 == 1 && k % 2 == 1 && (ratio - h as f64 / k as f64).abs() <= tol {
            return Some((h, k));
        }
        let frac = x - a as f64;
        if frac <= 0.0 {
            break;
        }
        x = 1.0 / frac;
    }
    None
}

/// Minimal time of complete 1→3 transfer, if the couplings admit one.
///
/// Requires `|xi3| <= tol·xi0` and a ratio `min(vL,vR)/max(vL,vR)` within
/// `tol` of an odd/odd fraction with denominator at most 99. `p` is always
/// the multiple belonging to `vR` and `q` to `vL`.
pub fn transfer_time(c: &CouplingSet, tol: f64) -> Result<Option<TransferSolution>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let x = hopf_map(c)?;
    if x.xi0 == 0.0 {
        return Err(Error::NoDynamics);
    }
    if x.xi3.abs() > tol * x.xi0 || x.xi1.abs() <= tol * x.xi0 {
        return Ok(None);
    }
    let f = frequencies(&x)?;
    let (slow, fast) = (f.v_l.min(f.v_r), f.v_l.max(f.v_r));
    let Some((m_slow, m_fast)) = odd_ratio(slow / fast, tol, MAX_ODD_MULTIPLE) else {
        return Ok(None);
    };
    // least-squares fit of slow·τ = m_slow·π/2, fast·τ = m_fast·π/2
    let tau = FRAC_PI_2 * (m_slow as f64 * slow + m_fast as f64 * fast) / (slow * slow + fast * fast);
    let (p, q) = if f.v_l <= f.v_r {
        (m_fast, m_slow)
    } else {
        (m_slow, m_fast)
    };
    Ok(Some(TransferSolution {
        tau,
        p,
        q,
        omega: PI / tau,
        v_l: f.v_l,
        v_r: f.v_r,
    }))
}

/// Two candidate "inversion times" built from a single frequency scale.
/// Neither generally coincides with complete transfer; they are reported
/// next to [`transfer_time`] for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceTimes {
    /// `π / sqrt(2 xi0)`.
    pub pi_over_sqrt_2xi0: f64,
    /// `π / |Ω|` with the torque vector `Ω = (xi1, xi2, xi3)/sqrt(xi0)`.
    pub pi_over_torque: f64,
}

pub fn reference_times(x: &HopfCoordinates) -> ReferenceTimes {
    ReferenceTimes {
        pi_over_sqrt_2xi0: PI / (2.0 * x.xi0).sqrt(),
        pi_over_torque: PI / x.torque_norm(),
    }
}

/// Amplitudes from `|ψ1⟩` on `n_steps + 1` uniform points of `[0, t_max]`.
pub fn population_series(c: &CouplingSet, t_max: f64, n_steps: usize) -> Result<TimeSeries> {
    if n_steps < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 steps, got {n_steps}")));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    let x = hopf_map(c)?;
    let psi0 = StateAmplitudes::basis(1);
    let dt = t_max / n_steps as f64;
    let times: Vec<f64> = (0..=n_steps).map(|k| k as f64 * dt).collect();
    let amplitudes = times
        .par_iter()
        .map(|&t| propagate_factored(c, &psi0, t))
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = amplitudes.iter().position(|a| !a.norm_sqr().is_finite()) {
        return Err(Error::NumericalFailure(format!(
            "non-finite amplitudes at t = {}",
            times[k]
        )));
    }
    Ok(TimeSeries {
        times,
        amplitudes,
        disconnected: is_disconnected(&x),
    })
}

/// Ground and excited amplitudes of a two-level system started in the
/// ground state, evolving under `v σx + delta σz`.
pub fn two_level_amplitudes(p: &TwoLevelParams, t: f64) -> (Complex64, Complex64) {
    let u = su2_rotation(&Su2Generator { cx: p.v, cz: p.delta }, t);
    (u[(0, 0)], u[(1, 0)])
}

/// Generalized Rabi frequency `sqrt(v² + delta²)`.
pub fn rabi_frequency(p: &TwoLevelParams) -> f64 {
    p.v.hypot(p.delta)
}

/// Time of the first maximum of the excited population, `π / (2V)`.
pub fn two_level_inversion_time(p: &TwoLevelParams) -> f64 {
    FRAC_PI_2 / rabi_frequency(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_hamiltonian;
    use crate::oracle::{oracle_propagate, SpectralPropagator};
    use proptest::prelude::*;

    const TAU_534: f64 = 0.993_458_826_579_61;

    fn c(v12: f64, v23: f64, v34: f64, v14: f64) -> CouplingSet {
        CouplingSet::new(v12, v23, v34, v14).unwrap()
    }

    #[test]
    fn tau_constant_matches_formula() {
        assert!((TAU_534 - PI / (2.0 * 2.5f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn rotation_examples() {
        let w = 2.3;
        let u = su2_rotation(&Su2Generator { cx: 0.0, cz: w }, PI / w);
        assert!(u.max_abs_diff(&Mat2::identity().scale(Complex64::new(-1.0, 0.0))) < 1e-14);

        let u = su2_rotation(&Su2Generator { cx: 1.0, cz: 0.0 }, FRAC_PI_2);
        assert!(u.max_abs_diff(&Mat2::pauli_x().scale(Complex64::new(0.0, -1.0))) < 1e-15);

        assert_eq!(su2_rotation(&Su2Generator { cx: 0.0, cz: 0.0 }, 7.0), Mat2::identity());
    }

    #[test]
    fn encode_decode_inverse() {
        let psi = StateAmplitudes::from_array([
            Complex64::new(0.1, 0.2),
            Complex64::new(-0.3, 0.4),
            Complex64::new(0.5, -0.1),
            Complex64::new(0.0, 0.6),
        ]);
        assert!(decode_amplitudes(&encode_amplitudes(&psi)).max_abs_diff(&psi) < 1e-16);
        assert_eq!(encode_amplitudes(&StateAmplitudes::basis(1)), Mat2::identity());
    }

    #[test]
    fn factored_examples() {
        let cs = c(5.0, 3.0, 4.0, 0.0);
        let psi1 = StateAmplitudes::basis(1);
        assert_eq!(propagate_factored(&cs, &psi1, 0.0).unwrap(), psi1);

        let out = propagate_factored(&cs, &psi1, TAU_534).unwrap();
        assert!((out.a3.norm_sqr() - 1.0).abs() < 1e-12);

        let v = 0.8;
        let cs = c(v, v, v, v);
        for t in [0.3, 1.1, 2.9] {
            let out = propagate_factored(&cs, &psi1, t).unwrap();
            assert!((out.a3.re + (v * t).sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn factored_rejects_unnormalized() {
        let psi = StateAmplitudes::default();
        assert!(matches!(
            propagate_factored(&c(1.0, 1.0, 1.0, 0.0), &psi, 1.0),
            Err(Error::InvalidState { .. })
        ));
    }

    #[test]
    fn closed_form_examples() {
        let (a1, a3) = amplitudes_closed_form(&c(5.0, 3.0, 4.0, 0.0), TAU_534).unwrap();
        assert!(a1.abs() < 1e-12);
        assert!((a3 - 1.0).abs() < 1e-12);

        let (a1, a3) = amplitudes_closed_form(&c(1.2, -0.4, 3.3, 0.9), 0.0).unwrap();
        assert_eq!((a1, a3), (1.0, 0.0));

        for t in [0.0, 0.5, 3.0] {
            let (_, a3) = amplitudes_closed_form(&c(1.0, 0.0, 0.0, 1.0), t).unwrap();
            assert_eq!(a3.abs(), 0.0);
        }
    }

    #[test]
    fn closed_form_disconnected_sector() {
        // 1-2 and 3-4 coupled, nothing bridging 1 and 3
        let cs = c(1.0, 0.0, 1.0, 0.0);
        let t = 0.7;
        match amplitudes_closed_form(&cs, t) {
            Err(Error::DisconnectedSector { a1 }) => {
                let exact = propagate_factored(&cs, &StateAmplitudes::basis(1), t).unwrap();
                assert!((a1 - exact.a1.re).abs() < 1e-14);
            }
            other => panic!("expected disconnected sector, got {other:?}"),
        }
    }

    #[test]
    fn frequency_examples() {
        let f = frequencies(&HopfCoordinates::new(25.0, 15.0, 20.0, 0.0)).unwrap();
        assert!((f.v_l - 2.5f64.sqrt()).abs() < 1e-15);
        assert!((f.v_r - 22.5f64.sqrt()).abs() < 1e-15);
        assert!((f.v_l - 1.581_138_8).abs() < 1e-7);
        assert!((f.v_r - 4.743_416_5).abs() < 1e-7);

        let f = frequencies(&HopfCoordinates::new(2.0, 2.0, 0.0, 0.0)).unwrap();
        assert_eq!((f.v_l, f.v_r), (1.0, 1.0));

        let f = frequencies(&HopfCoordinates::new(169.0, 65.0, 156.0, 0.0)).unwrap();
        assert!((f.v_l - 6.5f64.sqrt()).abs() < 1e-14);
        assert!((f.v_r - 162.5f64.sqrt()).abs() < 1e-13);
        assert!((f.v_r / f.v_l - 5.0).abs() < 1e-14);

        assert!(frequencies(&HopfCoordinates::new(1.0, 0.0, 2.0, 0.0)).is_err());
    }

    #[test]
    fn odd_ratio_matching() {
        assert_eq!(odd_ratio(1.0 / 3.0, 1e-9, 99), Some((1, 3)));
        assert_eq!(odd_ratio(1.0, 1e-9, 99), Some((1, 1)));
        assert_eq!(odd_ratio(3.0 / 5.0, 1e-9, 99), Some((3, 5)));
        assert_eq!(odd_ratio(0.5, 1e-9, 99), None);
        assert_eq!(odd_ratio(2.0f64.sqrt() - 1.0, 1e-9, 99), None);
        assert_eq!(odd_ratio(1.0 / 101.0, 1e-9, 99), None);
        assert_eq!(odd_ratio(1.0 / 3.0 + 1e-7, 1e-9, 99), None);
        // slightly below 1/3, continued fraction is [0; 2, 1, huge]
        assert_eq!(odd_ratio(1.0 / 3.0 - 1e-13, 1e-9, 99), Some((1, 3)));
    }

    #[test]
    fn transfer_time_examples() {
        let s = transfer_time(&c(5.0, 3.0, 4.0, 0.0), 1e-9).unwrap().unwrap();
        assert_eq!((s.p, s.q), (3, 1));
        assert!((s.tau - TAU_534).abs() < 1e-12);
        assert!((s.omega - 10f64.sqrt()).abs() < 1e-12);

        let s = transfer_time(&c(13.0, 5.0, 12.0, 0.0), 1e-9).unwrap().unwrap();
        assert_eq!((s.p, s.q), (5, 1));
        assert!((s.tau - PI / (2.0 * 6.5f64.sqrt())).abs() < 1e-12);
        assert!((s.tau - 0.616_117_0).abs() < 1e-7);

        assert_eq!(transfer_time(&c(5.0, 3.0, 4.1, 0.0), 1e-9).unwrap(), None);
        assert_eq!(transfer_time(&c(0.0, 0.0, 0.0, 0.0), 1e-9), Err(Error::NoDynamics));
        assert!(transfer_time(&c(5.0, 3.0, 4.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn transfer_time_with_negative_xi2() {
        // v34 < 0 flips xi2, so vL > vR and the roles of p and q swap
        let cs = c(5.0, 3.0, -4.0, 0.0);
        let s = transfer_time(&cs, 1e-9).unwrap().unwrap();
        assert_eq!((s.p, s.q), (1, 3));
        assert!((s.v_l * s.tau - 3.0 * FRAC_PI_2).abs() < 1e-10);
        assert!((s.v_r * s.tau - FRAC_PI_2).abs() < 1e-10);
        let out = propagate_factored(&cs, &StateAmplitudes::basis(1), s.tau).unwrap();
        assert!(out.a3.norm_sqr() > 1.0 - 1e-12);
    }

    #[test]
    fn reference_times_fall_short_for_3_1() {
        let x = hopf_map(&c(5.0, 3.0, 4.0, 0.0)).unwrap();
        let r = reference_times(&x);
        assert!((r.pi_over_sqrt_2xi0 - PI / 50f64.sqrt()).abs() < 1e-15);
        assert!((r.pi_over_torque - PI / 5.0).abs() < 1e-15);
        let prop = SpectralPropagator::new(&build_hamiltonian(&c(5.0, 3.0, 4.0, 0.0)).unwrap()).unwrap();
        for t in [r.pi_over_sqrt_2xi0, r.pi_over_torque] {
            assert!(prop.evolve(&StateAmplitudes::basis(1), t).a3.norm_sqr() < 0.9);
        }
    }

    #[test]
    fn series_examples() {
        let cs = c(5.0, 3.0, 4.0, 0.0);
        let s = population_series(&cs, 2.0 * TAU_534, 2000).unwrap();
        assert_eq!(s.times.len(), 2001);
        assert!(!s.disconnected);
        assert_eq!(s.amplitudes[0].populations()[0], 1.0);
        assert!((s.amplitudes[1000].populations()[2] - 1.0).abs() < 1e-12);
        assert!((s.amplitudes[2000].populations()[0] - 1.0).abs() < 1e-12);

        let s = population_series(&c(0.0, 0.0, 0.0, 0.0), 1.0, 10).unwrap();
        assert!(s.disconnected);
        assert!(s.amplitudes.iter().all(|a| *a == StateAmplitudes::basis(1)));

        let v = 1.3;
        let s = population_series(&c(v, v, v, v), PI / (2.0 * v), 100).unwrap();
        assert!((s.amplitudes[100].populations()[2] - 1.0).abs() < 1e-12);

        assert!(population_series(&cs, 1.0, 1).is_err());
        assert!(population_series(&cs, 0.0, 10).is_err());
    }

    #[test]
    fn two_level_resonant_inversion() {
        let p = TwoLevelParams { v: 1.7, delta: 0.0 };
        let (ag, ae) = two_level_amplitudes(&p, FRAC_PI_2 / 1.7);
        assert!((ae.norm_sqr() - 1.0).abs() < 1e-15);
        assert!(ag.norm() < 1e-15);
        let t = 0.4;
        let (ag, ae) = two_level_amplitudes(&p, t);
        assert!((ag - Complex64::new((1.7 * t).cos(), 0.0)).norm() < 1e-15);
        assert!((ae - Complex64::new(0.0, -(1.7 * t).sin())).norm() < 1e-15);
        assert!((two_level_inversion_time(&p) - FRAC_PI_2 / 1.7).abs() < 1e-15);
    }

    #[test]
    fn two_level_detuned_peak_against_matrix_oracle() {
        // 2x2 problem embedded as levels 1,2 of a 4x4 with diagonal detuning
        let v = 1.0;
        let delta = 3f64.sqrt() * v;
        let p = TwoLevelParams { v, delta };
        let mut h = Mat4::zeros();
        h[(0, 0)] = Complex64::new(delta, 0.0);
        h[(1, 1)] = Complex64::new(-delta, 0.0);
        h[(0, 1)] = Complex64::new(v, 0.0);
        h[(1, 0)] = Complex64::new(v, 0.0);
        let mut peak = 0.0f64;
        for k in 0..=4000 {
            let t = k as f64 * 2e-3;
            let (ag, ae) = two_level_amplitudes(&p, t);
            let o = oracle_propagate(&h, &StateAmplitudes::basis(1), t).unwrap();
            assert!((o.a1 - ag).norm() < 1e-12);
            assert!((o.a2 - ae).norm() < 1e-12);
            peak = peak.max(ae.norm_sqr());
        }
        assert!((peak - 0.25).abs() < 1e-6);
        let (_, ae) = two_level_amplitudes(&p, two_level_inversion_time(&p));
        assert!((ae.norm_sqr() - 0.25).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn rotations_are_special_unitary(cx in -10.0f64..10.0, cz in -10.0f64..10.0, t in -10.0f64..10.0) {
            let u = su2_rotation(&Su2Generator { cx, cz }, t);
            prop_assert!((u * u.adjoint()).max_abs_diff(&Mat2::identity()) <= 1e-13);
            prop_assert!((u.det() - Complex64::new(1.0, 0.0)).norm() <= 1e-13);
        }

        #[test]
        fn two_level_norm(v in -5.0f64..5.0, delta in -5.0f64..5.0, t in 0.0f64..20.0) {
            let (ag, ae) = two_level_amplitudes(&TwoLevelParams { v, delta }, t);
            prop_assert!((ag.norm_sqr() + ae.norm_sqr() - 1.0).abs() <= 1e-13);
        }

        #[test]
        fn frequency_identities(v in prop::array::uniform4(-10.0f64..10.0)) {
            let x = hopf_map(&c(v[0], v[1], v[2], v[3])).unwrap();
            let f = frequencies(&x).unwrap();
            let scale = x.xi0.max(1e-300);
            prop_assert!((f.v_l * f.v_l + f.v_r * f.v_r - x.xi0).abs() <= 1e-12 * scale);
            prop_assert!((f.v_r * f.v_r - f.v_l * f.v_l - x.xi2).abs() <= 1e-12 * scale);
        }

        #[test]
        fn reality_structure(v in prop::array::uniform4(-10.0f64..10.0), t in 0.0f64..10.0) {
            let out = propagate_factored(&c(v[0], v[1], v[2], v[3]), &StateAmplitudes::basis(1), t).unwrap();
            prop_assert!(out.a1.im.abs() <= 1e-11 && out.a3.im.abs() <= 1e-11);
            prop_assert!(out.a2.re.abs() <= 1e-11 && out.a4.re.abs() <= 1e-11);
            prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
        }

        #[test]
        fn gauge_invariant_populations(v in prop::array::uniform4(-10.0f64..10.0), theta in -6.3f64..6.3) {
            let a = c(v[0], v[1], v[2], v[3]);
            let b = a.gauge_rotated(theta);
            for k in 0..100 {
                let t = k as f64 * 0.05;
                let pa = propagate_factored(&a, &StateAmplitudes::basis(1), t).unwrap();
                let pb = propagate_factored(&b, &StateAmplitudes::basis(1), t).unwrap();
                prop_assert!((pa.a1.norm() - pb.a1.norm()).abs() <= 1e-10);
                prop_assert!((pa.a3.norm() - pb.a3.norm()).abs() <= 1e-10);
            }
        }
    }
}
