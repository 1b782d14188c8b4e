//! The qubit-field state produced by the dispersive interaction.
//!
//! The atom starts in `(|e> + |g>)/sqrt(2)` and the field in `|beta>`. After
//! a time `t` the joint state is `|e>|c> + |g>|s>` with
//! `|c> = |beta e^{-i chi t}>/sqrt(2)` and `|s> = |beta e^{i chi t}>/sqrt(2)`,
//! stored as the 2x2 block matrix of dyads `|c><c|, |c><s|, |s><c|, |s><s|`.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{coherent_state, inner, op_from_dyad, FieldOperator, FockVector};
use crate::qubit::QubitOperator;
use crate::tol::{default_dim, Tolerances};

/// Parameters of one evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Initial coherent amplitude of the field.
    pub beta: C64,
    /// Dispersive interaction constant (rad/s).
    pub chi: f64,
    /// Interaction time (s).
    pub t: f64,
    /// Number of retained Fock levels.
    pub dim: usize,
    pub tol: Tolerances,
}

impl ModelParams {
    pub fn new(beta: C64, chi: f64, t: f64, dim: usize, tol: Tolerances) -> Result<Self> {
        let p = Self {
            beta,
            chi,
            t,
            dim,
            tol,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters in terms of the dimensionless phase `chi t` (with `chi = 1`)
    /// and the default truncation for `beta`.
    pub fn from_chit(beta: C64, chit: f64) -> Result<Self> {
        Self::new(
            beta,
            1.0,
            chit,
            default_dim(beta.norm()),
            Tolerances::default(),
        )
    }

    pub fn with_dim(mut self, dim: usize) -> Result<Self> {
        self.dim = dim;
        self.validate()?;
        Ok(self)
    }

    /// The dimensionless interaction phase `chi t`; the state depends on
    /// nothing else.
    pub fn chit(&self) -> f64 {
        self.chi * self.t
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDim(0));
        }
        self.tol.validate()?;
        if !self.beta.is_finite() || !self.chi.is_finite() || !self.t.is_finite() {
            return Err(Error::NonFinite("model parameters"));
        }
        // Rotation leaves |beta| and hence the tail mass unchanged.
        coherent_state(self.beta, self.dim, &self.tol)?;
        Ok(())
    }
}

/// Joint qubit-field density matrix as a 2x2 array of field blocks.
#[derive(Debug, Clone)]
pub struct JointState {
    blocks: [[FieldOperator; 2]; 2],
    c: FockVector,
    s: FockVector,
}

impl JointState {
    /// Builds `|e>|c> + |g>|s>` from arbitrary (unnormalized) branch vectors.
    /// Requires `<c|c> + <s|s> = 1` within `eq_tol`.
    pub fn from_branches(c: FockVector, s: FockVector, eq_tol: f64) -> Result<Self> {
        let total = c.norm_sqr() + s.norm_sqr();
        if (total - 1.0).abs() > eq_tol {
            return Err(Error::NotDensity(format!(
                "branch norms sum to {total}, not 1"
            )));
        }
        let blocks = [
            [op_from_dyad(&c, &c)?, op_from_dyad(&c, &s)?],
            [op_from_dyad(&s, &c)?, op_from_dyad(&s, &s)?],
        ];
        Ok(Self { blocks, c, s })
    }

    pub fn c(&self) -> &FockVector {
        &self.c
    }

    pub fn s(&self) -> &FockVector {
        &self.s
    }

    pub fn block(&self, row: usize, col: usize) -> &FieldOperator {
        &self.blocks[row][col]
    }

    pub fn field_dim(&self) -> usize {
        self.c.dim()
    }

    /// The full `2N x 2N` matrix, atom index major.
    pub fn assemble(&self) -> Array2<C64> {
        let n = self.field_dim();
        let mut out = Array2::zeros((2 * n, 2 * n));
        for a in 0..2 {
            for b in 0..2 {
                out.slice_mut(ndarray::s![a * n..(a + 1) * n, b * n..(b + 1) * n])
                    .assign(self.blocks[a][b].as_array());
            }
        }
        out
    }

    /// `Tr(rho)` summed over the diagonal blocks.
    pub fn trace(&self) -> C64 {
        self.blocks[0][0].trace() + self.blocks[1][1].trace()
    }

    /// `Tr(rho^2)`, from the blocks.
    pub fn purity(&self) -> f64 {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                let x = self.blocks[a][b].as_array();
                let y = self.blocks[b][a].as_array();
                acc += x.iter().zip(y.t().iter()).map(|(p, q)| p * q).sum::<C64>();
            }
        }
        acc.re
    }
}

/// Joint state after the dispersive interaction.
pub fn build_joint(p: &ModelParams) -> Result<JointState> {
    p.validate()?;
    let chit = p.chit();
    let amp_c = p.beta * C64::from_polar(1.0, -chit);
    let amp_s = p.beta * C64::from_polar(1.0, chit);
    let norm = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let c = coherent_state(amp_c, p.dim, &p.tol)?.state.scale(norm);
    let s = coherent_state(amp_s, p.dim, &p.tol)?.state.scale(norm);
    JointState::from_branches(c, s, p.tol.eq_tol)
}

/// Atomic reduced state `[[<c|c>, <s|c>], [<c|s>, <s|s>]]`.
pub fn reduce_atom(j: &JointState) -> QubitOperator {
    let cc = inner(&j.c, &j.c).expect("branches share a dimension");
    let ss = inner(&j.s, &j.s).expect("branches share a dimension");
    let cs = inner(&j.c, &j.s).expect("branches share a dimension");
    QubitOperator::new([[cc, cs.conj()], [cs, ss]])
}

/// Field reduced state `|c><c| + |s><s|`.
pub fn reduce_field(j: &JointState) -> FieldOperator {
    &j.blocks[0][0] + &j.blocks[1][1]
}

/// `rho_B^n` by dense multiplication.
pub fn field_power(j: &JointState, n: u32) -> Result<FieldOperator> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    Ok(reduce_field(j).pow(n))
}

/// `Tr_A{rho (q (x) 1)} = sum_{a,a'} q[a'][a] rho[a][a']`.
///
/// With `q = rho_A^n` this is `rho_B^{n+1}` for any pure joint state.
pub fn weighted_atom_trace(j: &JointState, q: &QubitOperator) -> FieldOperator {
    let mut out = FieldOperator::zeros(j.field_dim());
    for a in 0..2 {
        for b in 0..2 {
            out = &out + &j.blocks[a][b].scale(q.m[b][a]);
        }
    }
    out
}

/// `Tr_B{rho (1 (x) f)}`, entry `[a][a'] = Tr(rho[a][a'] f)`.
///
/// With `f = rho_B^n` this is `rho_A^{n+1}`.
pub fn weighted_field_trace(j: &JointState, f: &FieldOperator) -> Result<QubitOperator> {
    if f.dim() != j.field_dim() {
        return Err(Error::DimMismatch {
            left: j.field_dim(),
            right: f.dim(),
        });
    }
    let mut out = QubitOperator::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let x = j.blocks[a][b].as_array();
            out.m[a][b] = x
                .iter()
                .zip(f.as_array().t().iter())
                .map(|(p, q)| p * q)
                .sum();
        }
    }
    Ok(out)
}
