//! The field entropy operator.
//!
//! `S_B` is the polynomial `(F1 + F2/det) rho_B - (F2/det) rho_B^2`, the
//! image of `S_A = F1 rho_A + F2 1` under `Tr_A{rho (.) rho_A^-1}`. It equals
//! `-ln rho_B` on the two-dimensional support of `rho_B` and vanishes on its
//! kernel (where `-ln rho_B` does not exist).
//!
//! Each public constructor reaches `S_B` by a different algebraic route so
//! the routes can be checked against one another.

use num_complex::Complex64 as C64;

use crate::atom::{
    atom_entropy_operator, atom_inverse, entropy_coeffs, purity_operator, spectral_data, spin_flip,
    AtomSpectralData, EntropyCoefficients,
};
use crate::error::{Error, Result};
use crate::fock::{coherent_state, op_from_dyad, FieldOperator};
use crate::model::{
    field_power, reduce_atom, reduce_field, weighted_atom_trace, JointState, ModelParams,
};
use crate::tol::Tolerances;

/// Inner products of the two field branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSet {
    pub cc: f64,
    pub ss: f64,
    /// `<c|s>`
    pub cs: C64,
    /// `<s|c>`
    pub sc: C64,
}

/// Closed-form branch overlaps: `<c|c> = <s|s> = 1/2` and
/// `<c|s> = exp(-|beta|^2 (1 - e^{2 i chi t})) / 2`.
pub fn analytic_overlaps(p: &ModelParams) -> OverlapSet {
    let phase = C64::from_polar(1.0, 2.0 * p.chit());
    let cs = (-(1.0 - phase) * p.beta.norm_sqr()).exp() * 0.5;
    OverlapSet {
        cc: 0.5,
        ss: 0.5,
        cs,
        sc: cs.conj(),
    }
}

/// Entropy coefficients of the model point, from the analytic overlaps.
pub fn analytic_coeffs(p: &ModelParams) -> (AtomSpectralData, EntropyCoefficients) {
    let sd = AtomSpectralData::from_eps(analytic_overlaps(p).cs.norm().min(0.5));
    (sd, entropy_coeffs(&sd, &p.tol))
}

fn coefficients(
    j: &JointState,
    tol: &Tolerances,
) -> Result<(AtomSpectralData, EntropyCoefficients)> {
    let sd = spectral_data(&reduce_atom(j), tol)?;
    let k = entropy_coeffs(&sd, tol);
    if !k.regime.has_operator() {
        return Err(Error::NearPure {
            gap: sd.purity_gap(),
        });
    }
    Ok((sd, k))
}

/// `S_B = (F1 + F2/det) rho_B - (F2/det) rho_B^2`.
pub fn field_entropy_from_polynomial(j: &JointState, tol: &Tolerances) -> Result<FieldOperator> {
    let (sd, k) = coefficients(j, tol)?;
    let rho_b = reduce_field(j);
    let rho_b2 = field_power(j, 2)?;
    let w = k.f2 / sd.det;
    Ok(&(&rho_b * (k.f1 + w)) - &(&rho_b2 * w))
}

/// `S_B = Tr_A{rho S_A rho_A^-1}`.
pub fn field_entropy_from_trace(j: &JointState, tol: &Tolerances) -> Result<FieldOperator> {
    let rho_a = reduce_atom(j);
    coefficients(j, tol)?;
    let s_a = atom_entropy_operator(&rho_a, tol)?;
    let inv = atom_inverse(&rho_a, tol)?;
    Ok(weighted_atom_trace(j, &s_a.matmul(&inv)))
}

/// `S_B = Tr_A{rho (F1 + (F2/det)(1 - rho_A))}`, with the inverse written
/// through the purity operator.
pub fn field_entropy_from_expansion(j: &JointState, tol: &Tolerances) -> Result<FieldOperator> {
    let (sd, k) = coefficients(j, tol)?;
    let rho_a = reduce_atom(j);
    let q = crate::qubit::QubitOperator::identity().scale_re(k.f1)
        + purity_operator(&rho_a).scale_re(k.f2 / sd.det);
    Ok(weighted_atom_trace(j, &q))
}

/// `S_B = (1/det) Tr_A{rho S_A rho~_A}` with the spin-flipped state
/// `rho~_A = sigma_y rho_A^* sigma_y`.
pub fn field_entropy_from_concurrence(j: &JointState, tol: &Tolerances) -> Result<FieldOperator> {
    let (sd, _) = coefficients(j, tol)?;
    let rho_a = reduce_atom(j);
    let s_a = atom_entropy_operator(&rho_a, tol)?;
    let q = s_a.matmul(&spin_flip(&rho_a)).scale_re(1.0 / sd.det);
    Ok(weighted_atom_trace(j, &q))
}

/// `S_B` assembled from the branch dyads and the analytic overlaps:
///
/// ```text
/// S_B = (F1 + F2/(2 det)) (|c><c| + |s><s|)
///       - (F2/det) (<s|c> |s><c| + <c|s> |c><s|)
/// ```
pub fn field_entropy_from_dyads(p: &ModelParams) -> Result<FieldOperator> {
    p.validate()?;
    let (sd, k) = analytic_coeffs(p);
    if !k.regime.has_operator() {
        return Err(Error::NearPure {
            gap: sd.purity_gap(),
        });
    }
    let ov = analytic_overlaps(p);
    let norm = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let chit = p.chit();
    let c = coherent_state(p.beta * C64::from_polar(1.0, -chit), p.dim, &p.tol)?
        .state
        .scale(norm);
    let s = coherent_state(p.beta * C64::from_polar(1.0, chit), p.dim, &p.tol)?
        .state
        .scale(norm);

    let diag = &op_from_dyad(&c, &c)? + &op_from_dyad(&s, &s)?;
    let cross = &op_from_dyad(&s, &c)?.scale(ov.sc) + &op_from_dyad(&c, &s)?.scale(ov.cs);
    Ok(&(&diag * (k.f1 + k.f2 / (2.0 * sd.det))) - &(&cross * (k.f2 / sd.det)))
}

/// `Tr(rho_B S_B)`, the field entropy.
pub fn mean_field_entropy(j: &JointState, s_b: &FieldOperator) -> Result<f64> {
    Ok(reduce_field(j).matmul(s_b)?.trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::mean_atom_entropy;
    use crate::fock::inner;
    use crate::model::build_joint;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn params(beta: f64, chit: f64) -> ModelParams {
        ModelParams::from_chit(C64::new(beta, 0.0), chit).unwrap()
    }

    #[test]
    fn overlap_special_points() {
        let ov = analytic_overlaps(&params(1.4, 0.0));
        assert_eq!(ov.cs, C64::new(0.5, 0.0));
        let ov = analytic_overlaps(&params(1.4, PI));
        assert!((ov.cs - 0.5).norm() < 1e-15);
        let ov = analytic_overlaps(&params(1.0, FRAC_PI_2));
        assert!((ov.cs - (-2.0f64).exp() / 2.0).norm() < 1e-15);
        assert!((ov.cs.re - 0.0676676).abs() < 1e-7);
        assert_eq!(ov.sc, ov.cs.conj());
    }

    #[test]
    fn overlaps_match_inner_products() {
        for (beta, chit) in [(1.0, FRAC_PI_2), (0.5, 0.3), (2.0, 1.9), (1.3, 2.7)] {
            let p = params(beta, chit);
            let j = build_joint(&p).unwrap();
            let ov = analytic_overlaps(&p);
            assert!((inner(j.c(), j.s()).unwrap() - ov.cs).norm() < 1e-10);
            assert!((inner(j.c(), j.c()).unwrap().re - ov.cc).abs() < 1e-10);
        }
    }

    #[test]
    fn routes_agree_at_quarter_period() {
        let p = params(1.0, FRAC_PI_2);
        let j = build_joint(&p).unwrap();
        let tol = p.tol;
        let poly = field_entropy_from_polynomial(&j, &tol).unwrap();
        for other in [
            field_entropy_from_trace(&j, &tol).unwrap(),
            field_entropy_from_expansion(&j, &tol).unwrap(),
            field_entropy_from_concurrence(&j, &tol).unwrap(),
            field_entropy_from_dyads(&p).unwrap(),
        ] {
            assert!(poly.max_abs_diff(&other).unwrap() < 1e-9);
        }
        assert!(field_entropy_from_dyads(&p).unwrap().hermitian_deviation() < 1e-12);
    }

    #[test]
    fn field_entropy_equals_atomic_entropy() {
        let p = params(1.0, FRAC_PI_2);
        let j = build_joint(&p).unwrap();
        let s_b = field_entropy_from_polynomial(&j, &p.tol).unwrap();
        let sb_mean = mean_field_entropy(&j, &s_b).unwrap();
        let sa_mean = mean_atom_entropy(&reduce_atom(&j), &p.tol).unwrap().value;
        assert!((sb_mean - sa_mean).abs() < 1e-9);
    }

    #[test]
    fn maximally_mixed_polynomial() {
        // orthogonal branches give rho_A = 1/2 and S_B = 2 ln2 rho_B
        let c = crate::fock::FockVector::basis(0, 4)
            .unwrap()
            .scale(C64::new(0.5f64.sqrt(), 0.0));
        let s = crate::fock::FockVector::basis(2, 4)
            .unwrap()
            .scale(C64::new(0.5f64.sqrt(), 0.0));
        let j = JointState::from_branches(c, s, 1e-12).unwrap();
        let tol = Tolerances::default();
        let s_b = field_entropy_from_polynomial(&j, &tol).unwrap();
        let expected = &reduce_field(&j) * (2.0 * 2f64.ln());
        assert!(s_b.max_abs_diff(&expected).unwrap() < 1e-14);
        assert!((mean_field_entropy(&j, &s_b).unwrap() - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn pure_point_is_guarded() {
        let p = params(1.0, 0.0);
        let j = build_joint(&p).unwrap();
        assert!(matches!(
            field_entropy_from_polynomial(&j, &p.tol),
            Err(Error::NearPure { .. })
        ));
        assert!(matches!(
            field_entropy_from_dyads(&p),
            Err(Error::NearPure { .. })
        ));
    }
}
