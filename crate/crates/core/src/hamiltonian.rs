//! The four-mode nearest-neighbor Hamiltonian and its Bell-basis splitting
//! into two commuting single-qubit generators.

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Mat4};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// The four real nearest-neighbor couplings, in radians per unit time.
///
/// `v14 == 0` is the ladder (open chain); all four nonzero is the diamond
/// (closed loop).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingSet {
    pub v12: f64,
    pub v23: f64,
    pub v34: f64,
    pub v14: f64,
}

impl CouplingSet {
    pub fn new(v12: f64, v23: f64, v34: f64, v14: f64) -> Result<Self> {
        let c = CouplingSet { v12, v23, v34, v14 };
        c.validate()?;
        Ok(c)
    }

    pub fn ladder(v12: f64, v23: f64, v34: f64) -> Result<Self> {
        Self::new(v12, v23, v34, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.as_array().iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "couplings must be finite, got {:?}",
                self.as_array()
            )))
        }
    }

    /// `[v12, v23, v34, v14]`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.v12, self.v23, self.v34, self.v14]
    }

    pub fn is_ladder(&self) -> bool {
        self.v14 == 0.0
    }

    pub fn is_diamond(&self) -> bool {
        self.as_array().iter().all(|&v| v != 0.0)
    }

    pub fn scaled(&self, s: f64) -> Self {
        CouplingSet {
            v12: s * self.v12,
            v23: s * self.v23,
            v34: s * self.v34,
            v14: s * self.v14,
        }
    }

    /// Rotates the basis of the |2>,|4> subspace by `theta`, which multiplies
    /// both `v12 + i v14` and `v23 + i v34` by `e^{i theta}`. The 1↔3
    /// dynamics is invariant under this map.
    pub fn gauge_rotated(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        CouplingSet {
            v12: c * self.v12 - s * self.v14,
            v14: s * self.v12 + c * self.v14,
            v23: c * self.v23 - s * self.v34,
            v34: s * self.v23 + c * self.v34,
        }
    }
}

/// Coefficients of `σx` and `σz` in a traceless real single-qubit generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su2Generator {
    pub cx: f64,
    pub cz: f64,
}

impl Su2Generator {
    pub fn magnitude(&self) -> f64 {
        self.cx.hypot(self.cz)
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::from_real([[self.cz, self.cx], [self.cx, -self.cz]])
    }
}

/// Builds the real symmetric nearest-neighbor Hamiltonian with zero diagonal.
pub fn build_hamiltonian(c: &CouplingSet) -> Result<Mat4> {
    c.validate()?;
    let CouplingSet { v12, v23, v34, v14 } = *c;
    Ok(Mat4::from_real([
        [0.0, v12, 0.0, v14],
        [v12, 0.0, v23, 0.0],
        [0.0, v23, 0.0, v34],
        [v14, 0.0, v34, 0.0],
    ]))
}

/// The constant Bell-basis transform. It is real, symmetric and its own
/// inverse, so it serves as both `W` and `W†`.
pub fn bell_transform() -> Mat4 {
    let s = FRAC_1_SQRT_2;
    Mat4::from_real([[s, 0.0, 0.0, s], [0.0, s, s, 0.0], [0.0, s, -s, 0.0], [s, 0.0, 0.0, -s]])
}

/// Splits `W H W = h1 ⊗ I + I ⊗ h2`. `h1` acts on the row (left) index of
/// the 2×2 amplitude matrix, `h2` on the column (right) index.
pub fn decompose(c: &CouplingSet) -> Result<(Su2Generator, Su2Generator)> {
    c.validate()?;
    let CouplingSet { v12, v23, v34, v14 } = *c;
    let h1 = Su2Generator {
        cx: 0.5 * (v12 - v34),
        cz: 0.5 * (v23 + v14),
    };
    let h2 = Su2Generator {
        cx: 0.5 * (v12 + v34),
        cz: -0.5 * (v23 - v14),
    };
    Ok((h1, h2))
}

/// `h1 ⊗ I + I ⊗ h2` as a 4×4 matrix.
pub fn reassemble(h1: &Su2Generator, h2: &Su2Generator) -> Mat4 {
    let id = Mat2::identity();
    h1.matrix().kron(&id) + id.kron(&h2.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v12: f64, v23: f64, v34: f64, v14: f64) -> CouplingSet {
        CouplingSet::new(v12, v23, v34, v14).unwrap()
    }

    /// Determinant by cofactor expansion; test-only characteristic polynomial oracle.
    fn det_real(m: &[Vec<f64>]) -> f64 {
        let n = m.len();
        if n == 1 {
            return m[0][0];
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(k, _)| k != j)
                            .map(|(_, &x)| x)
                            .collect()
                    })
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * m[0][j] * det_real(&minor)
            })
            .sum()
    }

    fn char_poly(h: &Mat4, lambda: f64) -> f64 {
        let m: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| h[(i, j)].re - if i == j { lambda } else { 0.0 })
                    .collect()
            })
            .collect();
        det_real(&m)
    }

    #[test]
    fn ladder_5_3_4_layout() {
        let h = build_hamiltonian(&c(5.0, 3.0, 4.0, 0.0)).unwrap();
        assert_eq!(h.level(1, 2).re, 5.0);
        assert_eq!(h.level(2, 3).re, 3.0);
        assert_eq!(h.level(3, 4).re, 4.0);
        assert_eq!(h.level(1, 4).re, 0.0);
        assert_eq!(h.level(1, 3).re, 0.0);
        assert_eq!(h.level(2, 4).re, 0.0);
        for i in 1..=4 {
            assert_eq!(h.level(i, i).re, 0.0);
        }
        assert!(h.is_real());
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        assert_eq!(build_hamiltonian(&c(0.0, 0.0, 0.0, 0.0)).unwrap(), Mat4::zeros());
    }

    #[test]
    fn uniform_diamond_spectrum() {
        let h = build_hamiltonian(&c(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(h, h.transpose());
        // characteristic polynomial λ²(λ²-4)
        for (lambda, expect) in [(2.0, 0.0), (0.0, 0.0), (-2.0, 0.0), (1.0, -3.0)] {
            assert!((char_poly(&h, lambda) - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            CouplingSet::new(f64::NAN, 0.0, 0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
        let bad = CouplingSet {
            v12: 1.0,
            v23: f64::INFINITY,
            v34: 0.0,
            v14: 0.0,
        };
        assert!(build_hamiltonian(&bad).is_err());
        assert!(decompose(&bad).is_err());
    }

    #[test]
    fn bell_transform_entries_and_involution() {
        let w = bell_transform();
        let s = FRAC_1_SQRT_2;
        assert_eq!(w.level(1, 1).re, s);
        assert_eq!(w.level(1, 4).re, s);
        assert_eq!(w.level(3, 3).re, -s);
        assert_eq!(w.level(4, 4).re, -s);
        assert_eq!(w.level(1, 2).re, 0.0);
        assert_eq!(w, w.transpose());
        assert!((w * w).max_abs_diff(&Mat4::identity()) <= 1e-15);
    }

    #[test]
    fn bell_splits_ladder_5_3_4() {
        let cs = c(5.0, 3.0, 4.0, 0.0);
        let w = bell_transform();
        let hw = w * build_hamiltonian(&cs).unwrap() * w;
        let (h1, h2) = decompose(&cs).unwrap();
        assert!(hw.max_abs_diff(&reassemble(&h1, &h2)) < 1e-14);
    }

    #[test]
    fn decompose_examples() {
        let (h1, h2) = decompose(&c(5.0, 3.0, 4.0, 0.0)).unwrap();
        assert_eq!(h1, Su2Generator { cx: 0.5, cz: 1.5 });
        assert_eq!(h2, Su2Generator { cx: 4.5, cz: -1.5 });

        let v = 1.7;
        let (h1, h2) = decompose(&c(v, v, v, v)).unwrap();
        assert_eq!(h1, Su2Generator { cx: 0.0, cz: v });
        assert_eq!(h2, Su2Generator { cx: v, cz: 0.0 });

        let (h1, h2) = decompose(&c(0.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(h1.magnitude(), 0.0);
        assert_eq!(h2.magnitude(), 0.0);
    }

    #[test]
    fn gauge_rotation_by_quarter_turn() {
        let g = c(1.0, 2.0, 3.0, 4.0).gauge_rotated(std::f64::consts::FRAC_PI_2);
        let expect = [-4.0, -3.0, 2.0, 1.0];
        for (a, b) in g.as_array().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn hamiltonian_is_hermitian(v in prop::array::uniform4(-10.0f64..10.0)) {
            let h = build_hamiltonian(&c(v[0], v[1], v[2], v[3])).unwrap();
            prop_assert_eq!(h, h.adjoint());
        }

        #[test]
        fn decomposition_identity(v in prop::array::uniform4(-10.0f64..10.0)) {
            let cs = c(v[0], v[1], v[2], v[3]);
            let w = bell_transform();
            let (h1, h2) = decompose(&cs).unwrap();
            let hw = w * build_hamiltonian(&cs).unwrap() * w;
            prop_assert!(hw.max_abs_diff(&reassemble(&h1, &h2)) <= 1e-14);
        }

        #[test]
        fn spectrum_pairs_roots_of_char_poly(v in prop::array::uniform4(-5.0f64..5.0)) {
            let cs = c(v[0], v[1], v[2], v[3]);
            let h = build_hamiltonian(&cs).unwrap();
            let (h1, h2) = decompose(&cs).unwrap();
            let (m1, m2) = (h1.magnitude(), h2.magnitude());
            let scale = 1.0 + (m1 + m2).powi(4);
            for lambda in [m1 + m2, -(m1 + m2), m1 - m2, m2 - m1] {
                prop_assert!(char_poly(&h, lambda).abs() <= 1e-10 * scale);
            }
        }
    }
}
