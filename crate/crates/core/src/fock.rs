//! Truncated Fock-space primitives: state vectors, dense operators, coherent
//! states and displaced number states.
//!
//! The number basis is cut at `dim` levels. Coherent amplitudes are stored
//! exactly (no renormalization), so the probability mass lost to the cut is
//! observable and checked against [`Tolerances::tail_tol`].

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::tol::{default_dim, Tolerances};

/// Complex amplitudes over the number states `|0>, ..., |dim-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Array1<C64>,
}

impl FockVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidDim(0));
        }
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("FockVector"));
        }
        Ok(Self {
            amps: Array1::from(amps),
        })
    }

    pub(crate) fn from_array(amps: Array1<C64>) -> Self {
        Self { amps }
    }

    /// Number state `|n>`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDim(0));
        }
        if n >= dim {
            return Err(Error::IndexOutOfRange { index: n, dim });
        }
        let mut amps = Array1::zeros(dim);
        amps[n] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &Array1<C64> {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            amps: &self.amps * factor,
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Dense complex matrix on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldOperator {
    m: Array2<C64>,
}

impl FieldOperator {
    pub fn new(m: Array2<C64>) -> Result<Self> {
        let (rows, cols) = m.dim();
        if rows == 0 {
            return Err(Error::InvalidDim(0));
        }
        check_dims(rows, cols)?;
        if m.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("FieldOperator"));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_array(m: Array2<C64>) -> Self {
        Self { m }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: Array2::eye(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.m
    }

    pub fn into_array(self) -> Array2<C64> {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[[row, col]]
    }

    pub fn trace(&self) -> C64 {
        self.m.diag().sum()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.t().mapv(|z| z.conj()),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            m: &self.m * factor,
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            m: self.m.dot(&other.m),
        })
    }

    /// `self^n` by repeated multiplication; `n = 0` gives the identity.
    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..n {
            out.m = out.m.dot(&self.m);
        }
        out
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        check_dims(self.dim(), v.dim())?;
        Ok(FockVector::from_array(self.m.dot(&v.amps)))
    }

    /// `<v|M|v>`.
    pub fn expectation(&self, v: &FockVector) -> Result<C64> {
        let mv = self.apply(v)?;
        inner(v, &mv)
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .m
            .iter()
            .zip(other.m.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `max |M - M^dag|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.m[[i, j]] - self.m[[j, i]].conj()).norm());
            }
        }
        dev
    }

    pub fn check_hermitian(&self, herm_tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > herm_tol {
            return Err(Error::NotHermitian {
                deviation,
                tol: herm_tol,
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().all(|z| z.is_finite())
    }
}

impl Add for &FieldOperator {
    type Output = FieldOperator;

    fn add(self, rhs: &FieldOperator) -> FieldOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        FieldOperator {
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &FieldOperator {
    type Output = FieldOperator;

    fn sub(self, rhs: &FieldOperator) -> FieldOperator {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        FieldOperator {
            m: &self.m - &rhs.m,
        }
    }
}

impl Mul<f64> for &FieldOperator {
    type Output = FieldOperator;

    fn mul(self, rhs: f64) -> FieldOperator {
        self.scale_re(rhs)
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimMismatch { left, right });
    }
    Ok(())
}

/// A truncated coherent state together with the probability mass that fell
/// outside the truncation.
#[derive(Debug, Clone)]
pub struct CoherentState {
    pub state: FockVector,
    pub tail_mass: f64,
}

/// `e^{-|beta|^2/2} sum_k beta^k / sqrt(k!) |k>` for `k < dim`, without any
/// tail check.
pub fn coherent_state_truncated(beta: C64, dim: usize) -> Result<CoherentState> {
    if dim == 0 {
        return Err(Error::InvalidDim(0));
    }
    if !beta.is_finite() {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let mut amps = Array1::zeros(dim);
    let mut amp = C64::new((-0.5 * beta.norm_sqr()).exp(), 0.0);
    for (k, slot) in amps.iter_mut().enumerate() {
        if k > 0 {
            amp = amp * beta / (k as f64).sqrt();
        }
        *slot = amp;
    }
    let state = FockVector::from_array(amps);
    let tail_mass = 1.0 - state.norm_sqr();
    Ok(CoherentState { state, tail_mass })
}

/// Coherent state `|beta>` in `dim` levels; fails if more than `tail_tol` of
/// the probability lies above the cut.
pub fn coherent_state(beta: C64, dim: usize, tol: &Tolerances) -> Result<CoherentState> {
    let cs = coherent_state_truncated(beta, dim)?;
    if cs.tail_mass > tol.tail_tol {
        return Err(Error::Truncation {
            tail: cs.tail_mass,
            tol: tol.tail_tol,
            amplitude: beta.norm(),
            dim,
            suggested: default_dim(beta.norm()),
        });
    }
    Ok(cs)
}

/// `<a|b> = sum conj(a_k) b_k`.
pub fn inner(a: &FockVector, b: &FockVector) -> Result<C64> {
    check_dims(a.dim(), b.dim())?;
    Ok(a.amps
        .iter()
        .zip(b.amps.iter())
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Outer product `|u><v|`.
pub fn op_from_dyad(u: &FockVector, v: &FockVector) -> Result<FieldOperator> {
    check_dims(u.dim(), v.dim())?;
    let n = u.dim();
    let m = Array2::from_shape_fn((n, n), |(i, j)| u.amps[i] * v.amps[j].conj());
    Ok(FieldOperator { m })
}

/// Matrix elements `<m|D(alpha)|n>` for `m, n < dim`.
///
/// Every retained element is exact (it is the block of the infinite
/// displacement operator, not the exponential of a truncated generator).
/// Elements with `m >= n` are
/// `sqrt(n!/m!) alpha^(m-n) e^{-|alpha|^2/2} L_n^(m-n)(|alpha|^2)`, generated
/// along each diagonal by the three-term Laguerre recurrence in the
/// normalized variable `f_n = sqrt(n!/(n+k)!) x^(k/2) e^{-x/2} L_n^(k)(x)`,
/// which stays bounded by 1 and is forward-stable. The upper triangle follows
/// from `<m|D(alpha)|n> = (-1)^(n-m) conj(<n|D(alpha)|m>)`.
pub fn displacement_matrix(alpha: C64, dim: usize) -> Result<FieldOperator> {
    if dim == 0 {
        return Err(Error::InvalidDim(0));
    }
    if !alpha.is_finite() {
        return Err(Error::NonFinite("displacement amplitude"));
    }
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return Ok(FieldOperator::identity(dim));
    }
    let r = x.sqrt();
    let phase = alpha / r;
    let mut m = Array2::<C64>::zeros((dim, dim));

    let mut ln_fact = 0.0; // ln k!
    let mut phase_k = C64::new(1.0, 0.0);
    for k in 0..dim {
        if k > 0 {
            ln_fact += (k as f64).ln();
            phase_k *= phase;
        }
        let kf = k as f64;
        let mut f = (-0.5 * x + kf * r.ln() - 0.5 * ln_fact).exp();
        let mut f_prev = 0.0;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for n in 0..dim - k {
            let elem = phase_k * f;
            m[[n + k, n]] = elem;
            if k > 0 {
                m[[n, n + k]] = elem.conj() * sign;
            }
            let nf = n as f64;
            let next = ((2.0 * nf + kf + 1.0 - x) * f - (nf * (nf + kf)).sqrt() * f_prev)
                / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
            f_prev = f;
            f = next;
        }
    }
    Ok(FieldOperator { m })
}

/// Displaced number state `|alpha, n> = D(alpha)|n>`; fails when more than
/// `tail_tol` of its norm lies above the cut.
pub fn displaced_number_state(
    alpha: C64,
    n: usize,
    dim: usize,
    tol: &Tolerances,
) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidDim(0));
    }
    if n >= dim {
        return Err(Error::IndexOutOfRange { index: n, dim });
    }
    let d = displacement_matrix(alpha, dim)?;
    let v = FockVector::from_array(d.m.column(n).to_owned());
    let deficit = 1.0 - v.norm_sqr();
    if deficit > tol.tail_tol {
        return Err(Error::Truncation {
            tail: deficit,
            tol: tol.tail_tol,
            amplitude: alpha.norm(),
            dim,
            suggested: default_dim(alpha.norm() + (n as f64).sqrt()),
        });
    }
    Ok(v)
}
