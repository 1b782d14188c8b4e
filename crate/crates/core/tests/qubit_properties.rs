//! Closed-form qubit algebra against dense multiplication and the Jacobi
//! matrix logarithm.

use entropy_op::atom::{
    atom_entropy_fluctuation, atom_entropy_operator, atom_inverse, atom_power, mean_atom_entropy,
    qubit_state, spectral_data, spin_flip,
};
use entropy_op::spectral::{eig_hermitian, matrix_neg_log, KernelPolicy};
use entropy_op::{QubitOperator, Tolerances};
use proptest::prelude::*;

fn density() -> impl Strategy<Value = QubitOperator> {
    (0.0f64..0.5, 0.0f64..std::f64::consts::PI, -3.2f64..3.2)
        .prop_map(|(eps, theta, phi)| qubit_state(eps, theta, phi))
}

fn regular_density() -> impl Strategy<Value = QubitOperator> {
    (0.01f64..0.49, 0.0f64..std::f64::consts::PI, -3.2f64..3.2)
        .prop_map(|(eps, theta, phi)| qubit_state(eps, theta, phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn powers_match_repeated_multiplication(rho in density()) {
        let tol = Tolerances::default();
        for n in 1..=8u32 {
            let closed = atom_power(&rho, n, &tol).unwrap();
            prop_assert!(closed.max_abs_diff(&rho.pow(n)) <= 1e-10);
        }
    }

    #[test]
    fn characteristic_equation(rho in density()) {
        let sd = spectral_data(&rho, &Tolerances::default()).unwrap();
        let rhs = rho - QubitOperator::identity() * sd.det;
        prop_assert!(rho.matmul(&rho).max_abs_diff(&rhs) < 1e-12);
        prop_assert!((sd.det - sd.lambda_plus * sd.lambda_minus).abs() < 1e-14);
        prop_assert!(sd.eps >= 0.0 && sd.eps <= 0.5);
    }

    #[test]
    fn entropy_operator_is_neg_log(rho in regular_density()) {
        let tol = Tolerances::default();
        let s = atom_entropy_operator(&rho, &tol).unwrap();
        let oracle = matrix_neg_log(&rho, KernelPolicy::Reject, &tol).unwrap();
        prop_assert!(s.max_abs_diff(&oracle) < 1e-10);
    }

    #[test]
    fn inverse_routes(rho in regular_density()) {
        let tol = Tolerances::default();
        let inv = atom_inverse(&rho, &tol).unwrap();
        prop_assert!(rho.matmul(&inv).max_abs_diff(&QubitOperator::identity()) < 1e-10);
        let sd = spectral_data(&rho, &tol).unwrap();
        prop_assert!(spin_flip(&rho).scale_re(1.0 / sd.det).max_abs_diff(&inv) < 1e-10);
    }
}

/// `eps` sampled at 50 points across [0.01, 0.49].
fn eps_grid() -> impl Iterator<Item = f64> {
    (0..50).map(|i| 0.01 + 0.48 * i as f64 / 49.0)
}

#[test]
fn spectral_and_entropy_grid() {
    let tol = Tolerances::default();
    for (i, eps) in eps_grid().enumerate() {
        let rho = qubit_state(eps, 0.3 + 0.05 * i as f64, -1.0 + 0.1 * i as f64);
        let (lp, lm) = (0.5 + eps, 0.5 - eps);

        let s = atom_entropy_operator(&rho, &tol).unwrap();
        let ev = eig_hermitian(&s, tol.herm_tol).unwrap().eigenvalues;
        assert!((ev[0] + lp.ln()).abs() < 1e-10);
        assert!((ev[1] + lm.ln()).abs() < 1e-10);

        let vn = -lp * lp.ln() - lm * lm.ln();
        let mean = mean_atom_entropy(&rho, &tol).unwrap().value;
        assert!((mean - vn).abs() < 1e-10, "eps {eps}");

        // moment oracle with the reference logarithm
        let s_ref = matrix_neg_log(&rho, KernelPolicy::Reject, &tol).unwrap();
        let m1 = rho.matmul(&s_ref).trace().re;
        let m2 = rho.matmul(&s_ref).matmul(&s_ref).trace().re;
        let sd = (m2 - m1 * m1).max(0.0).sqrt();
        let fl = atom_entropy_fluctuation(&rho, &tol).unwrap().value;
        assert!((fl - sd).abs() < 1e-10, "eps {eps}: {fl} vs {sd}");
    }
}
