use std::io::Write;

use entropy_op::atom::{
    atom_entropy_fluctuation, atom_entropy_operator, atom_inverse, atom_power, mean_atom_entropy,
    signed_fluctuation_form, spectral_data, spin_flip, Regime,
};
use entropy_op::field::{
    analytic_overlaps, field_entropy_from_concurrence, field_entropy_from_dyads,
    field_entropy_from_expansion, field_entropy_from_polynomial, field_entropy_from_trace,
    mean_field_entropy,
};
use entropy_op::fock::{inner, op_from_dyad, FieldOperator};
use entropy_op::model::{
    build_joint, field_power, reduce_atom, reduce_field, weighted_atom_trace, weighted_field_trace,
    ModelParams,
};
use entropy_op::spectral::{eig_hermitian, eig_hermitian_dense, matrix_neg_log, KernelPolicy};
use entropy_op::wigner::{wigner_closed_form, wigner_grid, wigner_series, PhasePoint, WignerGrid};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::config::{Format, RunConfig, TimePoint, VERIFY_POINTS};
use crate::output::{fmt17, opt_num, to_json, Num, Table};
use crate::{CliError, Result};

fn params_at(cfg: &RunConfig, tp: &TimePoint) -> Result<ModelParams> {
    Ok(ModelParams::new(cfg.beta, tp.chi, tp.t, cfg.dim, cfg.tol)?)
}

/// One row of the entropy time series.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub t: f64,
    pub chit: f64,
    pub eps: f64,
    pub det: f64,
    pub entropy_atom: f64,
    pub fluctuation_atom: f64,
    pub entropy_field: f64,
    pub abs_diff: f64,
    pub regime: Regime,
}

pub fn entropy_scan(cfg: &RunConfig) -> Result<Vec<ScanRow>> {
    cfg.times
        .iter()
        .map(|tp| {
            let p = params_at(cfg, tp)?;
            let j = build_joint(&p)?;
            let rho_a = reduce_atom(&j);
            let sd = spectral_data(&rho_a, &p.tol)?;
            let mean = mean_atom_entropy(&rho_a, &p.tol)?;
            let fluct = atom_entropy_fluctuation(&rho_a, &p.tol)?;
            let entropy_field = if mean.regime.has_operator() {
                let s_b = field_entropy_from_polynomial(&j, &p.tol)?;
                mean_field_entropy(&j, &s_b)?
            } else {
                0.0
            };
            Ok(ScanRow {
                t: tp.t,
                chit: tp.chit(),
                eps: sd.eps,
                det: sd.det,
                entropy_atom: mean.value,
                fluctuation_atom: fluct.value,
                entropy_field,
                abs_diff: (mean.value - entropy_field).abs(),
                regime: mean.regime,
            })
        })
        .collect()
}

#[derive(Serialize)]
struct ScanRowJson {
    t: Num,
    chit: Num,
    eps: Num,
    det: Num,
    entropy_atom: Num,
    fluctuation_atom: Num,
    entropy_field: Num,
    abs_diff: Num,
    regime: &'static str,
}

#[derive(Serialize)]
struct ScanJson {
    command: &'static str,
    beta_re: Num,
    beta_im: Num,
    dim: usize,
    rows: Vec<ScanRowJson>,
}

pub fn render_scan(cfg: &RunConfig, rows: &[ScanRow]) -> String {
    match cfg.format {
        Format::Csv => {
            let mut table = Table::new(&[
                "t",
                "chit",
                "eps",
                "det",
                "entropy_atom",
                "fluctuation_atom",
                "entropy_field",
                "abs_diff",
                "regime",
            ]);
            for r in rows {
                table.push(vec![
                    fmt17(r.t),
                    fmt17(r.chit),
                    fmt17(r.eps),
                    fmt17(r.det),
                    fmt17(r.entropy_atom),
                    fmt17(r.fluctuation_atom),
                    fmt17(r.entropy_field),
                    fmt17(r.abs_diff),
                    r.regime.as_str().to_string(),
                ]);
            }
            table.render()
        }
        Format::Json => to_json(&ScanJson {
            command: "entropy-scan",
            beta_re: Num(cfg.beta.re),
            beta_im: Num(cfg.beta.im),
            dim: cfg.dim,
            rows: rows
                .iter()
                .map(|r| ScanRowJson {
                    t: Num(r.t),
                    chit: Num(r.chit),
                    eps: Num(r.eps),
                    det: Num(r.det),
                    entropy_atom: Num(r.entropy_atom),
                    fluctuation_atom: Num(r.fluctuation_atom),
                    entropy_field: Num(r.entropy_field),
                    abs_diff: Num(r.abs_diff),
                    regime: r.regime.as_str(),
                })
                .collect(),
        }),
    }
}

pub fn wigner(cfg: &RunConfig) -> Result<WignerGrid> {
    let p = params_at(cfg, &cfg.times[0])?;
    Ok(wigner_grid(
        &p,
        &cfg.grid_x.values(),
        &cfg.grid_y.values(),
        cfg.source,
        cfg.convention,
    )?)
}

#[derive(Serialize)]
struct WignerPointJson {
    alpha_x: Num,
    alpha_y: Num,
    w_series: Option<Num>,
    w_closed: Option<Num>,
    abs_diff: Option<Num>,
}

#[derive(Serialize)]
struct WignerJson {
    command: &'static str,
    beta_re: Num,
    beta_im: Num,
    chit: Num,
    dim: usize,
    source: &'static str,
    convention: &'static str,
    max_abs_diff: Option<Num>,
    points: Vec<WignerPointJson>,
}

struct WignerCell {
    x: f64,
    y: f64,
    series: Option<f64>,
    closed: Option<f64>,
}

impl WignerCell {
    fn diff(&self) -> Option<f64> {
        Some((self.series? - self.closed?).abs())
    }
}

fn wigner_cells(grid: &WignerGrid) -> Vec<WignerCell> {
    let mut cells = Vec::with_capacity(grid.xs.len() * grid.ys.len());
    for (ix, &x) in grid.xs.iter().enumerate() {
        for (iy, &y) in grid.ys.iter().enumerate() {
            cells.push(WignerCell {
                x,
                y,
                series: grid.series.as_ref().map(|v| v[[ix, iy]]),
                closed: grid.closed.as_ref().map(|v| v[[ix, iy]]),
            });
        }
    }
    cells
}

pub fn render_wigner(cfg: &RunConfig, grid: &WignerGrid) -> String {
    let cells = wigner_cells(grid);
    let cell = |v: Option<f64>| v.map(fmt17).unwrap_or_default();
    match cfg.format {
        Format::Csv => {
            let mut table = Table::new(&["alpha_x", "alpha_y", "w_series", "w_closed", "abs_diff"]);
            for c in &cells {
                table.push(vec![
                    fmt17(c.x),
                    fmt17(c.y),
                    cell(c.series),
                    cell(c.closed),
                    cell(c.diff()),
                ]);
            }
            table.render()
        }
        Format::Json => to_json(&WignerJson {
            command: "wigner",
            beta_re: Num(cfg.beta.re),
            beta_im: Num(cfg.beta.im),
            chit: Num(grid.params.chit()),
            dim: grid.params.dim,
            source: grid.source.as_str(),
            convention: grid.convention.as_str(),
            max_abs_diff: opt_num(grid.max_abs_diff),
            points: cells
                .iter()
                .map(|c| WignerPointJson {
                    alpha_x: Num(c.x),
                    alpha_y: Num(c.y),
                    w_series: opt_num(c.series),
                    w_closed: opt_num(c.closed),
                    abs_diff: opt_num(c.diff()),
                })
                .collect(),
        }),
    }
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub chit: f64,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub note: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }
}

struct Checks<'a> {
    chit: f64,
    out: &'a mut Vec<Check>,
}

impl Checks<'_> {
    fn add(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) {
        self.note(name, residual, tolerance, "");
    }

    fn note(&mut self, name: impl Into<String>, residual: f64, tolerance: f64, note: &str) {
        self.out.push(Check {
            chit: self.chit,
            name: name.into(),
            residual,
            tolerance,
            note: note.to_string(),
        });
    }
}

/// Projector onto span{c, s}.
fn branch_projector(
    c: &entropy_op::FockVector,
    s: &entropy_op::FockVector,
) -> Result<FieldOperator> {
    let nc = c.norm_sqr().sqrt();
    let e1 = c.scale(C64::new(1.0 / nc, 0.0));
    let k = inner(&e1, s)?;
    let resid: Vec<C64> = s
        .amps()
        .iter()
        .zip(e1.amps().iter())
        .map(|(x, y)| x - k * y)
        .collect();
    let mut p = op_from_dyad(&e1, &e1)?;
    let r = entropy_op::FockVector::new(resid)?;
    let nr = r.norm_sqr().sqrt();
    if nr > 1e-12 {
        let e2 = r.scale(C64::new(1.0 / nr, 0.0));
        p = &p + &op_from_dyad(&e2, &e2)?;
    }
    Ok(p)
}

fn verify_point(cfg: &RunConfig, tp: &TimePoint, out: &mut Vec<Check>) -> Result<()> {
    let p = params_at(cfg, tp)?;
    let tol = p.tol;
    let mut ck = Checks {
        chit: tp.chit(),
        out,
    };
    let j = build_joint(&p)?;
    let rho_a = reduce_atom(&j);
    let rho_b = reduce_field(&j);

    ck.add("joint_trace", (j.trace() - 1.0).norm(), tol.eq_tol);
    ck.add("joint_purity", (j.purity() - 1.0).abs(), 1e-10);
    let ev = eig_hermitian_dense(&j.assemble(), tol.herm_tol)?.eigenvalues;
    ck.add("joint_psd", (-ev[0]).max(0.0), tol.eq_tol);

    let ov = analytic_overlaps(&p);
    ck.add(
        "overlap_numeric_vs_analytic",
        (inner(j.c(), j.s())? - ov.cs).norm(),
        1e-10,
    );

    for n in 1..=6u32 {
        let rb = field_power(&j, n + 1)?;
        let ra = rho_a.pow(n + 1);
        ck.add(
            format!("trace_identity_n{n}"),
            (rb.trace() - ra.trace()).norm(),
            1e-9,
        );
        ck.add(
            format!("field_power_relation_n{n}"),
            rb.max_abs_diff(&weighted_atom_trace(&j, &rho_a.pow(n)))?,
            1e-9,
        );
        ck.add(
            format!("atom_power_relation_n{n}"),
            ra.max_abs_diff(&weighted_field_trace(&j, &rho_b.pow(n))?),
            1e-9,
        );
    }
    for n in 1..=8u32 {
        ck.add(
            format!("cayley_hamilton_n{n}"),
            atom_power(&rho_a, n, &tol)?.max_abs_diff(&rho_a.pow(n)),
            1e-10,
        );
    }

    let sd = spectral_data(&rho_a, &tol)?;
    let spec_b = eig_hermitian(&rho_b, tol.herm_tol)?.eigenvalues;
    let nb = spec_b.len();
    let mut schmidt = (spec_b[nb - 1] - sd.lambda_plus).abs();
    if nb > 1 {
        schmidt = schmidt.max((spec_b[nb - 2] - sd.lambda_minus).abs());
        schmidt = spec_b[..nb - 2].iter().fold(schmidt, |m, x| m.max(x.abs()));
    }
    ck.add("field_spectrum_schmidt", schmidt, 1e-9);

    let mean = mean_atom_entropy(&rho_a, &tol)?;
    if mean.regime == Regime::NearPure {
        ck.note(
            "entropy_zero_at_pure_point",
            mean.value.abs(),
            1e-9,
            "near-pure: entropy operators not formed",
        );
        let guarded = matches!(
            field_entropy_from_polynomial(&j, &tol),
            Err(entropy_op::Error::NearPure { .. })
        ) && atom_entropy_operator(&rho_a, &tol).is_err();
        ck.note(
            "near_pure_guard",
            if guarded { 0.0 } else { 1.0 },
            0.0,
            "entropy operator construction refused",
        );
        return Ok(());
    }

    let s_a = atom_entropy_operator(&rho_a, &tol)?;
    let s_ref = matrix_neg_log(&rho_a, KernelPolicy::Reject, &tol)?;
    ck.add(
        "atom_entropy_operator_vs_neg_log",
        s_a.max_abs_diff(&s_ref),
        1e-10,
    );

    let vn = -sd.lambda_plus * sd.lambda_plus.ln() - sd.lambda_minus * sd.lambda_minus.ln();
    ck.add(
        "mean_entropy_vs_eigen_entropy",
        (mean.value - vn).abs(),
        1e-10,
    );

    let m1 = rho_a.matmul(&s_ref).trace().re;
    let m2 = rho_a.matmul(&s_ref).matmul(&s_ref).trace().re;
    let moment = (m2 - m1 * m1).max(0.0).sqrt();
    let fluct = atom_entropy_fluctuation(&rho_a, &tol)?.value;
    let signed = signed_fluctuation_form(&sd);
    ck.note(
        "fluctuation_vs_moment",
        (fluct - moment).abs(),
        1e-10,
        &format!(
            "signed log form ln((1-2eps)/(1+2eps)) det^(1/2) = {}; reported value is its absolute value",
            fmt17(signed)
        ),
    );

    let inv = atom_inverse(&rho_a, &tol)?;
    ck.add(
        "inverse_spin_flip_vs_purity",
        spin_flip(&rho_a).scale_re(1.0 / sd.det).max_abs_diff(&inv) * sd.det,
        1e-12,
    );

    let poly = field_entropy_from_polynomial(&j, &tol)?;
    let routes = [
        (
            "field_entropy_trace_vs_polynomial",
            field_entropy_from_trace(&j, &tol)?,
        ),
        (
            "field_entropy_expansion_vs_polynomial",
            field_entropy_from_expansion(&j, &tol)?,
        ),
        (
            "field_entropy_concurrence_vs_polynomial",
            field_entropy_from_concurrence(&j, &tol)?,
        ),
        (
            "field_entropy_dyads_vs_polynomial",
            field_entropy_from_dyads(&p)?,
        ),
    ];
    for (name, op) in &routes {
        ck.add(*name, poly.max_abs_diff(op)?, 1e-9);
    }
    let sb_mean = mean_field_entropy(&j, &poly)?;
    ck.add(
        "entropy_equality_atom_field",
        (sb_mean - mean.value).abs(),
        1e-9,
    );
    ck.add("field_entropy_vs_von_neumann", (sb_mean - vn).abs(), 1e-9);

    let proj = branch_projector(j.c(), j.s())?;
    let off = &FieldOperator::identity(proj.dim()) - &proj;
    ck.add("field_entropy_support", poly.matmul(&off)?.max_abs(), 1e-8);
    let log_b = matrix_neg_log(&rho_b, KernelPolicy::Zero, &tol)?;
    ck.add(
        "field_entropy_vs_neg_log_on_support",
        poly.max_abs_diff(&log_b)?,
        1e-9,
    );

    if p.beta.im == 0.0 {
        let mut worst = 0.0f64;
        for &(x, y) in &VERIFY_POINTS {
            let a = PhasePoint::new(x, y);
            let w_s = wigner_series(&poly, a, &tol)?;
            let w_c = wigner_closed_form(a, &p)?;
            worst = worst.max((w_s - w_c).abs());
        }
        ck.add("wigner_series_vs_closed", worst, 1e-8);
    }
    Ok(())
}

pub fn verify(cfg: &RunConfig) -> Result<Report> {
    let mut checks = Vec::new();
    for tp in &cfg.times {
        verify_point(cfg, tp, &mut checks)?;
    }
    Ok(Report { checks })
}

#[derive(Serialize)]
struct CheckJson<'a> {
    chit: Num,
    name: &'a str,
    residual: Num,
    tolerance: Num,
    status: &'static str,
    #[serde(skip_serializing_if = "str::is_empty")]
    note: &'a str,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    command: &'static str,
    beta_re: Num,
    beta_im: Num,
    dim: usize,
    passed: bool,
    failures: usize,
    checks: Vec<CheckJson<'a>>,
}

fn status(c: &Check) -> &'static str {
    if c.passed() {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn render_report(cfg: &RunConfig, report: &Report) -> String {
    match cfg.format {
        Format::Csv => {
            let mut table =
                Table::new(&["chit", "name", "residual", "tolerance", "status", "note"]);
            for c in &report.checks {
                table.push(vec![
                    fmt17(c.chit),
                    c.name.clone(),
                    fmt17(c.residual),
                    fmt17(c.tolerance),
                    status(c).to_string(),
                    c.note.replace(',', ";"),
                ]);
            }
            table.render()
        }
        Format::Json => to_json(&ReportJson {
            command: "verify",
            beta_re: Num(cfg.beta.re),
            beta_im: Num(cfg.beta.im),
            dim: cfg.dim,
            passed: report.failures() == 0,
            failures: report.failures(),
            checks: report
                .checks
                .iter()
                .map(|c| CheckJson {
                    chit: Num(c.chit),
                    name: &c.name,
                    residual: Num(c.residual),
                    tolerance: Num(c.tolerance),
                    status: status(c),
                    note: &c.note,
                })
                .collect(),
        }),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the configured subcommand and writes its output.
pub fn run(cfg: &RunConfig) -> Result<()> {
    use crate::config::Mode;
    match cfg.mode {
        Mode::EntropyScan => emit(cfg, &render_scan(cfg, &entropy_scan(cfg)?)),
        Mode::Wigner => {
            let grid = wigner(cfg)?;
            emit(cfg, &render_wigner(cfg, &grid))?;
            if let (Some(d), Format::Csv) = (grid.max_abs_diff, cfg.format) {
                eprintln!("max_abs_diff(series, closed) = {}", fmt17(d));
            }
            Ok(())
        }
        Mode::Verify => {
            let report = verify(cfg)?;
            emit(cfg, &render_report(cfg, &report))?;
            match report.failures() {
                0 => Ok(()),
                failed => Err(CliError::ResidualFailure {
                    failed,
                    total: report.checks.len(),
                }),
            }
        }
    }
}
