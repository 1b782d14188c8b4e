//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
//! matrix functions built on it.
//!
//! This is the independent reference used to check the closed-form entropy
//! operators; it deliberately shares no code with them.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FieldOperator;
use crate::qubit::QubitOperator;
use crate::tol::{Tolerances, KERNEL_CUTOFF};

const MAX_SWEEPS: usize = 100;
/// Sweeps stop once the off-diagonal Frobenius norm falls below this
/// fraction of the matrix norm.
const OFF_DIAG_REL: f64 = 1e-15;

/// Dense conversion for the operator types the oracle accepts.
pub trait DenseOperator: Sized {
    fn to_dense(&self) -> Array2<C64>;
    fn from_dense(a: Array2<C64>) -> Self;
}

impl DenseOperator for FieldOperator {
    fn to_dense(&self) -> Array2<C64> {
        self.as_array().clone()
    }

    fn from_dense(a: Array2<C64>) -> Self {
        FieldOperator::from_array(a)
    }
}

impl DenseOperator for QubitOperator {
    fn to_dense(&self) -> Array2<C64> {
        Array2::from_shape_fn((2, 2), |(i, j)| self.m[i][j])
    }

    fn from_dense(a: Array2<C64>) -> Self {
        QubitOperator::new([[a[[0, 0]], a[[0, 1]]], [a[[1, 0]], a[[1, 1]]]])
    }
}

/// Eigenvalues in ascending order with the matching orthonormal
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Array2<C64>,
}

impl Spectrum {
    /// `sum_i f(lambda_i) v_i v_i^dag`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Array2<C64> {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = Array2::<C64>::zeros((n, n));
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = v[[i, k]] * w;
                for j in 0..n {
                    out[[i, j]] += vi * v[[j, k]].conj();
                }
            }
        }
        out
    }

    /// `V diag(lambda) V^dag`.
    pub fn reconstruct(&self) -> Array2<C64> {
        self.map(|x| x)
    }
}

fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn off_diagonal(a: &Array2<C64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[[i, j]].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a dense Hermitian matrix.
pub fn eig_hermitian_dense(m: &Array2<C64>, herm_tol: f64) -> Result<Spectrum> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::InvalidArgument(format!(
            "eigendecomposition needs a nonempty square matrix, got {:?}",
            m.dim()
        )));
    }
    if m.iter().any(|z| !z.is_finite()) {
        return Err(Error::NonFinite("eigensolver input"));
    }
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in i..n {
            deviation = deviation.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    if deviation > herm_tol {
        return Err(Error::NotHermitian {
            deviation,
            tol: herm_tol,
        });
    }

    // work on the exactly Hermitian part
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (m[[i, j]] + m[[j, i]].conj()));
    let mut v = Array2::<C64>::eye(n);
    let scale = frobenius(&a);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= OFF_DIAG_REL * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal(&a) > OFF_DIAG_REL * scale {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[[i, i]].re.total_cmp(&a[[j, j]].re));
    let eigenvalues = order.iter().map(|&i| a[[i, i]].re).collect();
    let eigenvectors = Array2::from_shape_fn((n, n), |(i, k)| v[[i, order[k]]]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`: `a <- J^dag a J`, `v <- v J`.
///
/// `J = diag(1, e^{-i phi}) R(theta)` in the `(p, q)` plane, where the phase
/// makes the pivot real and `R` is the usual real symmetric rotation.
fn rotate(a: &mut Array2<C64>, v: &mut Array2<C64>, p: usize, q: usize) {
    let apq = a[[p, q]];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[[p, p]].re;
    let aqq = a[[q, q]].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau.abs() > 1e150 {
        0.5 / tau
    } else {
        let sign = if tau >= 0.0 { 1.0 } else { -1.0 };
        sign / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = a.nrows();
    for k in 0..n {
        let x = a[[k, p]];
        let y = a[[k, q]];
        a[[k, p]] = x * j_pp + y * j_qp;
        a[[k, q]] = x * j_pq + y * j_qq;
    }
    for k in 0..n {
        let x = a[[p, k]];
        let y = a[[q, k]];
        a[[p, k]] = j_pp.conj() * x + j_qp.conj() * y;
        a[[q, k]] = j_pq.conj() * x + j_qq.conj() * y;
    }
    a[[p, q]] = C64::new(0.0, 0.0);
    a[[q, p]] = C64::new(0.0, 0.0);
    a[[p, p]] = C64::new(a[[p, p]].re, 0.0);
    a[[q, q]] = C64::new(a[[q, q]].re, 0.0);

    for k in 0..n {
        let x = v[[k, p]];
        let y = v[[k, q]];
        v[[k, p]] = x * j_pp + y * j_qp;
        v[[k, q]] = x * j_pq + y * j_qq;
    }
}

pub fn eig_hermitian<M: DenseOperator>(m: &M, herm_tol: f64) -> Result<Spectrum> {
    eig_hermitian_dense(&m.to_dense(), herm_tol)
}

/// What [`matrix_neg_log`] does with eigenvalues at or below
/// [`KERNEL_CUTOFF`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPolicy {
    /// Map kernel directions to zero.
    Zero,
    /// Fail if any kernel direction exists.
    Reject,
}

/// `-ln M = -sum ln(lambda_i) v_i v_i^dag` over eigenvalues above the
/// kernel cutoff.
pub fn matrix_neg_log<M: DenseOperator>(
    m: &M,
    policy: KernelPolicy,
    tol: &Tolerances,
) -> Result<M> {
    let spec = eig_hermitian(m, tol.herm_tol)?;
    if let Some(&lowest) = spec.eigenvalues.first() {
        if lowest < -tol.eq_tol {
            return Err(Error::NegativeEigenvalue(lowest));
        }
    }
    let kernel = spec
        .eigenvalues
        .iter()
        .filter(|&&x| x <= KERNEL_CUTOFF)
        .count();
    if kernel > 0 && policy == KernelPolicy::Reject {
        return Err(Error::Kernel(kernel));
    }
    Ok(M::from_dense(spec.map(|x| {
        if x > KERNEL_CUTOFF {
            -x.ln()
        } else {
            0.0
        }
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> Array2<C64> {
        let g = Array2::from_shape_fn((n, n), |_| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        Array2::from_shape_fn((n, n), |(i, j)| 0.5 * (g[[i, j]] + g[[j, i]].conj()))
    }

    fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let mut m = Array2::<C64>::zeros((3, 3));
        m[[0, 0]] = C64::new(3.0, 0.0);
        m[[1, 1]] = C64::new(1.0, 0.0);
        m[[2, 2]] = C64::new(2.0, 0.0);
        let spec = eig_hermitian_dense(&m, 1e-10).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 5, 20] {
            let a = random_hermitian(n, &mut rng);
            let spec = eig_hermitian_dense(&a, 1e-10).unwrap();
            assert!(max_diff(&spec.reconstruct(), &a) < 1e-9);
            let v = &spec.eigenvectors;
            let gram = v.t().mapv(|z| z.conj()).dot(v);
            assert!(max_diff(&gram, &Array2::eye(n)) < 1e-9);
            // A v = lambda v
            let av = a.dot(v);
            for (k, &lambda) in spec.eigenvalues.iter().enumerate() {
                for i in 0..n {
                    assert!((av[[i, k]] - v[[i, k]] * lambda).norm() < 1e-9 * frobenius(&a));
                }
            }
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn shift_moves_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_hermitian(12, &mut rng);
        let shift = 0.73;
        let b = &a + &(Array2::<C64>::eye(12) * C64::new(shift, 0.0));
        let ea = eig_hermitian_dense(&a, 1e-10).unwrap().eigenvalues;
        let eb = eig_hermitian_dense(&b, 1e-10).unwrap().eigenvalues;
        for (x, y) in ea.iter().zip(&eb) {
            assert!((x + shift - y).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = Array2::<C64>::zeros((2, 2));
        m[[0, 1]] = C64::new(1.0, 0.0);
        assert!(matches!(
            eig_hermitian_dense(&m, 1e-10),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn neg_log_of_half_identity() {
        let half = QubitOperator::identity() * 0.5;
        let s = matrix_neg_log(&half, KernelPolicy::Reject, &Tolerances::default()).unwrap();
        assert!(s.max_abs_diff(&(QubitOperator::identity() * 2f64.ln())) < 1e-15);
    }

    #[test]
    fn neg_log_kernel_policies() {
        let tol = Tolerances::default();
        let proj = QubitOperator::from_real([[1.0, 0.0], [0.0, 0.0]]);
        assert!(matches!(
            matrix_neg_log(&proj, KernelPolicy::Reject, &tol),
            Err(Error::Kernel(1))
        ));
        let s = matrix_neg_log(&proj, KernelPolicy::Zero, &tol).unwrap();
        assert!(s.max_abs_diff(&QubitOperator::zeros()) < 1e-15);

        let indefinite = QubitOperator::from_real([[1.1, 0.0], [0.0, -0.1]]);
        assert!(matches!(
            matrix_neg_log(&indefinite, KernelPolicy::Zero, &tol),
            Err(Error::NegativeEigenvalue(_))
        ));
    }
}
