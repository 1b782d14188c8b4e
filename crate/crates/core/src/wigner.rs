//! Wigner function of the field entropy operator.
//!
//! Two routes: the parity series over displaced number states
//!
//! ```text
//! W(alpha) = sum_n (-1)^n <alpha, n| S_B |alpha, n>
//! ```
//!
//! evaluated on any Hermitian field operator, and the closed form valid for
//! real `beta`. Both omit the customary `2/pi` unless
//! [`Convention::Standard`] is selected.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{analytic_coeffs, field_entropy_from_polynomial};
use crate::fock::{displacement_matrix, FieldOperator};
use crate::model::{build_joint, ModelParams};
use crate::tol::{default_dim, Tolerances};

/// Largest imaginary part tolerated in a series value before it is dropped.
pub const IMAG_TOL: f64 = 1e-10;

/// A phase-space point `alpha = alpha_x + i alpha_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePoint {
    pub alpha_x: f64,
    pub alpha_y: f64,
}

impl PhasePoint {
    pub fn new(alpha_x: f64, alpha_y: f64) -> Self {
        Self { alpha_x, alpha_y }
    }

    pub fn alpha(&self) -> C64 {
        C64::new(self.alpha_x, self.alpha_y)
    }
}

/// Normalization of the Wigner function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Bare parity sum, no prefactor.
    Parity,
    /// Parity sum times `2/pi`.
    Standard,
}

impl Convention {
    pub fn factor(&self) -> f64 {
        match self {
            Convention::Parity => 1.0,
            Convention::Standard => 2.0 / PI,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Convention::Parity => "parity",
            Convention::Standard => "standard",
        }
    }
}

/// Which route(s) a grid evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Series,
    Closed,
    Both,
}

impl Source {
    pub fn series(&self) -> bool {
        matches!(self, Source::Series | Source::Both)
    }

    pub fn closed(&self) -> bool {
        matches!(self, Source::Closed | Source::Both)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Source::Series => "series",
            Source::Closed => "closed",
            Source::Both => "both",
        }
    }
}

/// Truncation large enough for states of amplitude `|beta|` displaced by up
/// to `max_alpha`.
pub fn wigner_dim(beta: C64, max_alpha: f64) -> usize {
    default_dim(beta.norm() + max_alpha.abs())
}

/// Parity-series Wigner value of a Hermitian field operator (parity
/// convention).
///
/// Uses every column of the truncated displacement matrix. The retained
/// components of each `D(alpha)|n>` are exact, so the terms are accurate as
/// long as `op` lives well inside the truncation; the last term must fall
/// below `series_tol`.
pub fn wigner_series(op: &FieldOperator, a: PhasePoint, tol: &Tolerances) -> Result<f64> {
    op.check_hermitian(tol.herm_tol)?;
    let dim = op.dim();
    let d = displacement_matrix(a.alpha(), dim)?;
    let d = d.as_array();
    let od = op.as_array().dot(d);

    let mut total = C64::new(0.0, 0.0);
    let mut last = C64::new(0.0, 0.0);
    for n in 0..dim {
        let term: C64 = d
            .column(n)
            .iter()
            .zip(od.column(n).iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
        last = term;
        if n % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    if last.norm() > tol.series_tol {
        return Err(Error::SeriesTail {
            term: last.norm(),
            tol: tol.series_tol,
        });
    }
    if total.im.abs() > IMAG_TOL {
        return Err(Error::ImaginaryResidue(total.im));
    }
    Ok(total.re)
}

/// Closed-form Wigner function of the field entropy operator for real
/// `beta` (parity convention):
///
/// ```text
/// W = E [(F1 + F2/(2 det)) cosh(4 beta a_y sin chit)
///        - (F2/(2 det)) cos(2 beta [beta sin 2chit - 2 a_x sin chit])]
/// E = exp(-2 beta^2 - 2 |alpha|^2 + 4 beta a_x cos chit)
/// ```
pub fn wigner_closed_form(a: PhasePoint, p: &ModelParams) -> Result<f64> {
    if p.beta.im != 0.0 {
        return Err(Error::ComplexBeta(p.beta.im));
    }
    let (sd, k) = analytic_coeffs(p);
    if !k.regime.has_operator() {
        return Err(Error::NearPure {
            gap: sd.purity_gap(),
        });
    }
    let beta = p.beta.re;
    let chit = p.chit();
    let (ax, ay) = (a.alpha_x, a.alpha_y);
    let envelope =
        (-2.0 * beta * beta - 2.0 * (ax * ax + ay * ay) + 4.0 * beta * ax * chit.cos()).exp();
    let half = k.f2 / (2.0 * sd.det);
    let diag = (k.f1 + half) * (4.0 * beta * ay * chit.sin()).cosh();
    let cross = half * (2.0 * beta * (beta * (2.0 * chit).sin() - 2.0 * ax * chit.sin())).cos();
    Ok(envelope * (diag - cross))
}

/// Wigner values on a rectangular grid, indexed `[ix, iy]`.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub series: Option<Array2<f64>>,
    pub closed: Option<Array2<f64>>,
    /// `max |series - closed|` when both routes ran.
    pub max_abs_diff: Option<f64>,
    pub params: ModelParams,
    pub convention: Convention,
    pub source: Source,
}

impl WignerGrid {
    /// The primary surface: the series values if computed, else the closed
    /// form.
    pub fn values(&self) -> &Array2<f64> {
        self.series
            .as_ref()
            .or(self.closed.as_ref())
            .expect("a grid always holds at least one route")
    }
}

/// Evaluates the Wigner function of `S_B` on `xs x ys`. Points are evaluated
/// in parallel; output order is fixed.
pub fn wigner_grid(
    p: &ModelParams,
    xs: &[f64],
    ys: &[f64],
    source: Source,
    convention: Convention,
) -> Result<WignerGrid> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidArgument(
            "Wigner grid must be nonempty".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("grid coordinates"));
    }
    p.validate()?;
    if source.closed() && p.beta.im != 0.0 {
        return Err(Error::ComplexBeta(p.beta.im));
    }
    let shape = (xs.len(), ys.len());
    let points: Vec<PhasePoint> = xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| PhasePoint::new(x, y)))
        .collect();
    let factor = convention.factor();

    let series = if source.series() {
        let s_b = field_entropy_from_polynomial(&build_joint(p)?, &p.tol)?;
        let vals = points
            .par_iter()
            .map(|&a| wigner_series(&s_b, a, &p.tol).map(|w| w * factor))
            .collect::<Result<Vec<f64>>>()?;
        Some(Array2::from_shape_vec(shape, vals).expect("shape matches point count"))
    } else {
        None
    };
    let closed = if source.closed() {
        let vals = points
            .iter()
            .map(|&a| wigner_closed_form(a, p).map(|w| w * factor))
            .collect::<Result<Vec<f64>>>()?;
        Some(Array2::from_shape_vec(shape, vals).expect("shape matches point count"))
    } else {
        None
    };
    let max_abs_diff = match (&series, &closed) {
        (Some(s), Some(c)) => Some(
            s.iter()
                .zip(c.iter())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        ),
        _ => None,
    };
    Ok(WignerGrid {
        xs: xs.to_vec(),
        ys: ys.to_vec(),
        series,
        closed,
        max_abs_diff,
        params: *p,
        convention,
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_state, op_from_dyad, FockVector};
    use crate::model::reduce_field;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn vacuum_parity_at_origin() {
        let e0 = FockVector::basis(0, 6).unwrap();
        let proj = op_from_dyad(&e0, &e0).unwrap();
        let w = wigner_series(&proj, PhasePoint::new(0.0, 0.0), &Tolerances::default()).unwrap();
        assert!((w - 1.0).abs() < 1e-15);
    }

    #[test]
    fn displaced_vacuum_parity() {
        let beta = C64::new(0.8, -0.6);
        let tol = Tolerances::default();
        let dim = wigner_dim(beta, beta.norm());
        let b = coherent_state(beta, dim, &tol).unwrap().state;
        let proj = op_from_dyad(&b, &b).unwrap();
        let w = wigner_series(&proj, PhasePoint::new(beta.re, beta.im), &tol).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        // away from the center: exp(-2 |alpha - beta|^2)
        let a = PhasePoint::new(0.1, 0.5);
        let w = wigner_series(&proj, a, &tol).unwrap();
        assert!((w - (-2.0 * (a.alpha() - beta).norm_sqr()).exp()).abs() < 1e-12);
    }

    #[test]
    fn unconverged_series_is_reported() {
        let tol = Tolerances::default();
        let b = coherent_state(C64::new(1.0, 0.0), 29, &tol).unwrap().state;
        let proj = op_from_dyad(&b, &b).unwrap();
        // far displacement: the parity sum has not decayed at the cut
        let err = wigner_series(&proj, PhasePoint::new(6.0, 0.0), &tol).unwrap_err();
        assert!(matches!(err, Error::SeriesTail { .. }));
    }

    #[test]
    fn closed_form_matches_series_at_a_point() {
        let p = ModelParams::from_chit(C64::new(1.0, 0.0), FRAC_PI_2).unwrap();
        let a = PhasePoint::new(0.3, 0.4);
        let p = p.with_dim(wigner_dim(p.beta, 0.5)).unwrap();
        let s_b = field_entropy_from_polynomial(&build_joint(&p).unwrap(), &p.tol).unwrap();
        let series = wigner_series(&s_b, a, &p.tol).unwrap();
        let closed = wigner_closed_form(a, &p).unwrap();
        assert!((series - closed).abs() < 1e-8);
    }

    #[test]
    fn closed_form_at_origin() {
        // sin(2 chit) = 0 at chit = pi/2, so both cosines are 1 and W = e^{-2} F1
        let p = ModelParams::from_chit(C64::new(1.0, 0.0), FRAC_PI_2).unwrap();
        let (_, k) = analytic_coeffs(&p);
        let w = wigner_closed_form(PhasePoint::new(0.0, 0.0), &p).unwrap();
        assert!((w - (-2.0f64).exp() * k.f1).abs() < 1e-14);
    }

    #[test]
    fn closed_form_rejects_complex_beta() {
        let p = ModelParams::from_chit(C64::new(1.0, 0.2), 0.4).unwrap();
        assert!(matches!(
            wigner_closed_form(PhasePoint::new(0.0, 0.0), &p),
            Err(Error::ComplexBeta(_))
        ));
        assert!(wigner_grid(&p, &[0.0], &[0.0], Source::Both, Convention::Parity).is_err());
        assert!(wigner_grid(&p, &[0.0], &[0.0], Source::Series, Convention::Parity).is_ok());
    }

    #[test]
    fn single_point_grid() {
        let p = ModelParams::from_chit(C64::new(1.0, 0.0), 0.9).unwrap();
        let g = wigner_grid(&p, &[0.0], &[0.0], Source::Both, Convention::Parity).unwrap();
        let s_b = field_entropy_from_polynomial(&build_joint(&p).unwrap(), &p.tol).unwrap();
        let origin = PhasePoint::new(0.0, 0.0);
        assert_eq!(
            g.series.as_ref().unwrap()[[0, 0]],
            wigner_series(&s_b, origin, &p.tol).unwrap()
        );
        assert_eq!(
            g.closed.as_ref().unwrap()[[0, 0]],
            wigner_closed_form(origin, &p).unwrap()
        );
        assert!(g.max_abs_diff.unwrap() < 1e-8);

        let std = wigner_grid(&p, &[0.0], &[0.0], Source::Closed, Convention::Standard).unwrap();
        assert!((std.values()[[0, 0]] - g.closed.unwrap()[[0, 0]] * 2.0 / PI).abs() < 1e-15);
        assert!(std.series.is_none() && std.max_abs_diff.is_none());
    }

    #[test]
    fn rho_b_parity_fixture() {
        // at t = 0 the field is |beta><beta|; its parity sum at alpha = beta is 1
        let p = ModelParams::from_chit(C64::new(1.2, 0.0), 0.0).unwrap();
        let p = p.with_dim(wigner_dim(p.beta, 1.2)).unwrap();
        let rho_b = reduce_field(&build_joint(&p).unwrap());
        let w = wigner_series(&rho_b, PhasePoint::new(1.2, 0.0), &p.tol).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_grid_rejected() {
        let p = ModelParams::from_chit(C64::new(1.0, 0.0), 0.9).unwrap();
        assert!(wigner_grid(&p, &[], &[0.0], Source::Closed, Convention::Parity).is_err());
    }
}
