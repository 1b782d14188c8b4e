//! Closed-form 2x2 algebra for the atomic reduced state.
//!
//! Writing `rho_A = 1/2 + R` with `R^2 = eps^2`, every power collapses onto
//! `rho_A` and the identity:
//!
//! ```text
//! rho_A^n = G(n) rho_A - det G(n-1) 1,   G(n) = (lp^n - lm^n) / (2 eps)
//! ```
//!
//! with `lp, lm = 1/2 +- eps` and `det = lp lm = 1/4 - eps^2`. The entropy
//! operator `-ln rho_A` is then the linear function `F1 rho_A + F2 1`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qubit::QubitOperator;
use crate::tol::Tolerances;

/// Below this `2 eps`, `G(n)` is summed as a finite geometric series instead
/// of the difference quotient.
const G_DIRECT_MIN: f64 = 0.1;

/// Spectral summary of a qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpectralData {
    /// Population difference `rho_11 - rho_22`.
    pub delta: f64,
    /// Half the eigenvalue gap, `sqrt(delta^2/4 + |rho_12|^2)`, in `[0, 1/2]`.
    pub eps: f64,
    /// Determinant `1/4 - eps^2`.
    pub det: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl AtomSpectralData {
    /// Spectral data for a given `eps` (zero population difference).
    pub fn from_eps(eps: f64) -> Self {
        let lambda_plus = 0.5 + eps;
        let lambda_minus = 0.5 - eps;
        Self {
            delta: 0.0,
            eps,
            det: lambda_plus * lambda_minus,
            lambda_plus,
            lambda_minus,
        }
    }

    /// `1/2 - eps`, the distance from a pure state.
    pub fn purity_gap(&self) -> f64 {
        self.lambda_minus
    }
}

/// Which analytic form the entropy coefficients were taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Regular,
    /// `eps` below the cutoff: series limit around the maximally mixed state.
    NearMaximal,
    /// `1/2 - eps` below the cutoff: the state is numerically pure and the
    /// entropy operator does not exist.
    NearPure,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Regular => "regular",
            Regime::NearMaximal => "near_maximal",
            Regime::NearPure => "near_pure",
        }
    }

    pub fn has_operator(&self) -> bool {
        !matches!(self, Regime::NearPure)
    }
}

/// `F1` and `F2` in `S_A = F1 rho_A + F2 1`. Both are zero in the
/// near-pure regime, where callers must branch on `regime`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyCoefficients {
    pub f1: f64,
    pub f2: f64,
    pub regime: Regime,
}

/// A scalar result tagged with the regime it was computed in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeValue {
    pub value: f64,
    pub regime: Regime,
}

pub fn spectral_data(rho_a: &QubitOperator, tol: &Tolerances) -> Result<AtomSpectralData> {
    rho_a.check_density(tol.herm_tol, tol.eq_tol)?;
    let delta = (rho_a.get(0, 0) - rho_a.get(1, 1)).re;
    let off = rho_a.get(0, 1).norm();
    let mut eps = (0.25 * delta * delta + off * off).sqrt();
    if eps > 0.5 {
        if eps > 0.5 + tol.eq_tol {
            return Err(Error::NotDensity(format!("eps = {eps} exceeds 1/2")));
        }
        eps = 0.5;
    }
    let lambda_plus = 0.5 + eps;
    let lambda_minus = 0.5 - eps;
    Ok(AtomSpectralData {
        delta,
        eps,
        det: lambda_plus * lambda_minus,
        lambda_plus,
        lambda_minus,
    })
}

/// `G(n) = (lp^n - lm^n) / (2 eps)`, with the limit `n / 2^(n-1)` at
/// `eps = 0`.
pub fn g_coeff(sd: &AtomSpectralData, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let (lp, lm) = (sd.lambda_plus, sd.lambda_minus);
    if 2.0 * sd.eps >= G_DIRECT_MIN {
        return (lp.powi(n as i32) - lm.powi(n as i32)) / (2.0 * sd.eps);
    }
    // (lp^n - lm^n) / (lp - lm) = sum_k lp^k lm^(n-1-k)
    (0..n)
        .map(|k| lp.powi(k as i32) * lm.powi((n - 1 - k) as i32))
        .sum()
}

/// `rho_A^n = G(n) rho_A - det G(n-1) 1` for `n >= 1`.
pub fn atom_power(rho_a: &QubitOperator, n: u32, tol: &Tolerances) -> Result<QubitOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    let sd = spectral_data(rho_a, tol)?;
    let g = g_coeff(&sd, n);
    let g_prev = g_coeff(&sd, n - 1);
    Ok(rho_a.scale_re(g) - QubitOperator::identity().scale_re(sd.det * g_prev))
}

pub fn entropy_coeffs(sd: &AtomSpectralData, tol: &Tolerances) -> EntropyCoefficients {
    let eps = sd.eps;
    if sd.purity_gap() < tol.pure_cutoff {
        return EntropyCoefficients {
            f1: 0.0,
            f2: 0.0,
            regime: Regime::NearPure,
        };
    }
    let (f1, regime) = if eps < tol.pure_cutoff {
        // ln((1-x)/(1+x)) / x = -2 (1 + x^2/3 + x^4/5 + ...), x = 2 eps
        let x2 = 4.0 * eps * eps;
        (-2.0 * (1.0 + x2 / 3.0 + x2 * x2 / 5.0), Regime::NearMaximal)
    } else {
        let x = 2.0 * eps;
        (((-x).ln_1p() - x.ln_1p()) / x, Regime::Regular)
    };
    let f2 = -0.5 * (sd.det.ln() + f1);
    EntropyCoefficients { f1, f2, regime }
}

/// `S_A = F1 rho_A + F2 1`.
pub fn atom_entropy_operator(rho_a: &QubitOperator, tol: &Tolerances) -> Result<QubitOperator> {
    let sd = spectral_data(rho_a, tol)?;
    let k = entropy_coeffs(&sd, tol);
    if !k.regime.has_operator() {
        return Err(Error::NearPure {
            gap: sd.purity_gap(),
        });
    }
    Ok(rho_a.scale_re(k.f1) + QubitOperator::identity().scale_re(k.f2))
}

/// `<S_A> = F2 + F1 (1 - 2 det)`; zero for a numerically pure state.
pub fn mean_atom_entropy(rho_a: &QubitOperator, tol: &Tolerances) -> Result<RegimeValue> {
    let sd = spectral_data(rho_a, tol)?;
    let k = entropy_coeffs(&sd, tol);
    let value = match k.regime {
        Regime::NearPure => 0.0,
        _ => k.f2 + k.f1 * (1.0 - 2.0 * sd.det),
    };
    Ok(RegimeValue {
        value,
        regime: k.regime,
    })
}

/// `ln((1 - 2 eps)/(1 + 2 eps)) det^(1/2)`, the signed logarithmic form of
/// the entropy fluctuation. It is never positive; see
/// [`atom_entropy_fluctuation`] for the standard deviation itself.
pub fn signed_fluctuation_form(sd: &AtomSpectralData) -> f64 {
    let x = 2.0 * sd.eps;
    ((-x).ln_1p() - x.ln_1p()) * sd.det.sqrt()
}

/// Standard deviation of `S_A` in the state `rho_A`:
/// `|ln((1 - 2 eps)/(1 + 2 eps))| det^(1/2)`. Zero for a pure state.
pub fn atom_entropy_fluctuation(rho_a: &QubitOperator, tol: &Tolerances) -> Result<RegimeValue> {
    let sd = spectral_data(rho_a, tol)?;
    let regime = entropy_coeffs(&sd, tol).regime;
    let value = match regime {
        Regime::NearPure => 0.0,
        _ => signed_fluctuation_form(&sd).abs(),
    };
    Ok(RegimeValue { value, regime })
}

/// Spin-flipped state `sigma_y rho^* sigma_y`.
pub fn spin_flip(rho_a: &QubitOperator) -> QubitOperator {
    let sy = QubitOperator::sigma_y();
    sy.matmul(&rho_a.conj()).matmul(&sy)
}

/// Purity operator `1 - rho_A`.
pub fn purity_operator(rho_a: &QubitOperator) -> QubitOperator {
    QubitOperator::identity() - *rho_a
}

/// `rho_A^-1`, computed as `(1 - rho_A)/det` and cross-checked against the
/// spin-flip form `sigma_y rho_A^* sigma_y / det`.
pub fn atom_inverse(rho_a: &QubitOperator, tol: &Tolerances) -> Result<QubitOperator> {
    let sd = spectral_data(rho_a, tol)?;
    if sd.det <= tol.eq_tol {
        return Err(Error::NearPure {
            gap: sd.purity_gap(),
        });
    }
    let inv = 1.0 / sd.det;
    let from_purity = purity_operator(rho_a).scale_re(inv);
    let from_flip = spin_flip(rho_a).scale_re(inv);
    let diff = from_purity.max_abs_diff(&from_flip);
    if diff > tol.eq_tol * inv.max(1.0) {
        return Err(Error::NotDensity(format!(
            "purity and spin-flip inverses differ by {diff:.3e}"
        )));
    }
    Ok(from_purity)
}

/// Builds a qubit density matrix with eigenvalues `1/2 +- eps` along the
/// Bloch direction `(theta, phi)`.
pub fn qubit_state(eps: f64, theta: f64, phi: f64) -> QubitOperator {
    let r = 2.0 * eps;
    let (x, y, z) = (
        r * theta.sin() * phi.cos(),
        r * theta.sin() * phi.sin(),
        r * theta.cos(),
    );
    QubitOperator::new([
        [C64::new(0.5 * (1.0 + z), 0.0), C64::new(0.5 * x, -0.5 * y)],
        [C64::new(0.5 * x, 0.5 * y), C64::new(0.5 * (1.0 - z), 0.0)],
    ])
}
