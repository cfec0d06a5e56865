//! Small fixed-size complex matrices.
//!
//! Storage is row-major and 0-based. Level-indexed accessors (`level`) take
//! 1-based indices to match the numbering of the four modes.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

macro_rules! square_matrix {
    ($name:ident, $n:expr) => {
        #[derive(Debug, Clone, Copy, PartialEq)]
        pub struct $name(pub [[Complex64; $n]; $n]);

        impl $name {
            pub const DIM: usize = $n;

            pub fn zeros() -> Self {
                $name([[ZERO; $n]; $n])
            }

            pub fn identity() -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    m.0[i][i] = ONE;
                }
                m
            }

            pub fn from_real(rows: [[f64; $n]; $n]) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = Complex64::new(rows[i][j], 0.0);
                    }
                }
                m
            }

            pub fn transpose(&self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = self.0[j][i];
                    }
                }
                m
            }

            /// Conjugate transpose.
            pub fn adjoint(&self) -> Self {
                let mut m = Self::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = self.0[j][i].conj();
                    }
                }
                m
            }

            pub fn scale(&self, s: Complex64) -> Self {
                let mut m = *self;
                m.0.iter_mut().flatten().for_each(|z| *z *= s);
                m
            }

            /// Largest entrywise modulus of `self - other`.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                self.0
                    .iter()
                    .flatten()
                    .zip(other.0.iter().flatten())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
            }

            pub fn max_abs(&self) -> f64 {
                self.0.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
            }

            pub fn frobenius_norm(&self) -> f64 {
                self.0.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
            }

            pub fn is_real(&self) -> bool {
                self.0.iter().flatten().all(|z| z.im == 0.0)
            }

            pub fn apply(&self, v: &[Complex64; $n]) -> [Complex64; $n] {
                let mut out = [ZERO; $n];
                for i in 0..$n {
                    out[i] = (0..$n).map(|j| self.0[i][j] * v[j]).sum();
                }
                out
            }

            /// Entry at 1-based (row, column) level indices.
            pub fn level(&self, row: usize, col: usize) -> Complex64 {
                self.0[row - 1][col - 1]
            }
        }

        impl Index<(usize, usize)> for $name {
            type Output = Complex64;
            fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
                &self.0[i][j]
            }
        }

        impl IndexMut<(usize, usize)> for $name {
            fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
                &mut self.0[i][j]
            }
        }

        impl Mul for $name {
            type Output = $name;
            fn mul(self, rhs: $name) -> $name {
                let mut m = $name::zeros();
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] = (0..$n).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
                    }
                }
                m
            }
        }

        impl Add for $name {
            type Output = $name;
            fn add(self, rhs: $name) -> $name {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] += rhs.0[i][j];
                    }
                }
                m
            }
        }

        impl Sub for $name {
            type Output = $name;
            fn sub(self, rhs: $name) -> $name {
                let mut m = self;
                for i in 0..$n {
                    for j in 0..$n {
                        m.0[i][j] -= rhs.0[i][j];
                    }
                }
                m
            }
        }
    };
}

square_matrix!(Mat2, 2);
square_matrix!(Mat4, 4);

impl Mat2 {
    pub fn pauli_x() -> Self {
        Mat2::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        let i = Complex64::i();
        Mat2([[ZERO, -i], [i, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Mat2::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Kronecker product `self ⊗ rhs`; the left factor indexes the slow
    /// (outer) position of the four-dimensional index.
    pub fn kron(&self, rhs: &Mat2) -> Mat4 {
        let mut m = Mat4::zeros();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        m.0[2 * i + k][2 * j + l] = self.0[i][j] * rhs.0[k][l];
                    }
                }
            }
        }
        m
    }
}
