use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as the kernel of a PSD operator.
pub const KERNEL_CUTOFF: f64 = 1e-10;

/// Numerical tolerances shared by every stage of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Largest coherent-state probability mass allowed outside the truncation.
    pub tail_tol: f64,
    /// Largest `max |M - M^dag|` accepted for Hermitian-tagged operators.
    pub herm_tol: f64,
    /// Tolerance for identity checks (trace, purity, PSD).
    pub eq_tol: f64,
    /// Distance from `eps = 1/2` (and from `eps = 0`) below which the
    /// entropy coefficients switch to their limiting forms.
    pub pure_cutoff: f64,
    /// Largest magnitude allowed for the last retained Wigner-series term.
    pub series_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tail_tol: 1e-12,
            herm_tol: 1e-10,
            eq_tol: 1e-9,
            pure_cutoff: 1e-8,
            series_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("tail_tol", self.tail_tol),
            ("herm_tol", self.herm_tol),
            ("eq_tol", self.eq_tol),
            ("pure_cutoff", self.pure_cutoff),
            ("series_tol", self.series_tol),
        ] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(())
    }

    pub fn with_tail_tol(mut self, tail_tol: f64) -> Self {
        self.tail_tol = tail_tol;
        self
    }
}

/// Default truncation for coherent amplitudes up to `max_amplitude`:
/// `ceil(b^2 + 8b + 20)`. The Poisson tail past mean + 8 sqrt(mean) is far
/// below 1e-12.
pub fn default_dim(max_amplitude: f64) -> usize {
    let b = max_amplitude.abs();
    (b * b + 8.0 * b + 20.0).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerances::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range() {
        let tol = Tolerances::default().with_tail_tol(0.0);
        assert!(matches!(
            tol.validate(),
            Err(Error::InvalidTolerance {
                name: "tail_tol",
                ..
            })
        ));
        let tol = Tolerances {
            eq_tol: 1.5,
            ..Default::default()
        };
        assert!(tol.validate().is_err());
        let tol = Tolerances {
            herm_tol: f64::NAN,
            ..Default::default()
        };
        assert!(tol.validate().is_err());
    }

    #[test]
    fn dim_rule() {
        assert_eq!(default_dim(0.0), 20);
        assert_eq!(default_dim(1.0), 29);
        assert_eq!(default_dim(2.0), 40);
        assert_eq!(default_dim(-2.0), 40);
    }
}
