use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// A 2x2 complex matrix on the two-level system, rows and columns ordered
/// (excited, ground).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitOperator {
    pub m: [[C64; 2]; 2],
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl QubitOperator {
    pub const fn new(m: [[C64; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        Self {
            m: [
                [C64::new(m[0][0], 0.0), C64::new(m[0][1], 0.0)],
                [C64::new(m[1][0], 0.0), C64::new(m[1][1], 0.0)],
            ],
        }
    }

    pub const fn zeros() -> Self {
        Self {
            m: [[ZERO, ZERO], [ZERO, ZERO]],
        }
    }

    pub const fn identity() -> Self {
        Self {
            m: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub const fn sigma_y() -> Self {
        Self {
            m: [[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]],
        }
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[row][col]
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn matmul(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                *slot = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Self { m: out }
    }

    /// `self^n` by repeated multiplication.
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.matmul(self))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|z| z * factor)),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// Element-wise complex conjugate (not the adjoint).
    pub fn conj(&self) -> Self {
        Self {
            m: self.m.map(|row| row.map(|z| z.conj())),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: [
                [self.m[0][0].conj(), self.m[1][0].conj()],
                [self.m[0][1].conj(), self.m[1][1].conj()],
            ],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        d
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.is_finite())
    }

    /// Checks the density-matrix conditions: Hermitian, unit trace, and
    /// eigenvalues in `[-eq_tol, 1 + eq_tol]`.
    pub fn check_density(&self, herm_tol: f64, eq_tol: f64) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite("QubitOperator"));
        }
        let dev = self.hermitian_deviation();
        if dev > herm_tol {
            return Err(Error::NotDensity(format!(
                "max |M - M^dag| = {dev:.3e} exceeds {herm_tol:.1e}"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > eq_tol {
            return Err(Error::NotDensity(format!(
                "trace {tr} differs from 1 by more than {eq_tol:.1e}"
            )));
        }
        // With unit trace the eigenvalues are 1/2 +- sqrt(1/4 - det).
        let det = self.det().re;
        if det < -eq_tol || det > 0.25 + eq_tol {
            return Err(Error::NotDensity(format!(
                "determinant {det:.6e} places eigenvalues outside [0, 1]"
            )));
        }
        Ok(())
    }
}

impl Add for QubitOperator {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let mut m = self.m;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z += rhs.m[i][j];
            }
        }
        Self { m }
    }
}

impl Sub for QubitOperator {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + rhs.scale_re(-1.0)
    }
}

impl Mul<f64> for QubitOperator {
    type Output = Self;

    fn mul(self, rhs: f64) -> Self {
        self.scale_re(rhs)
    }
}
