use std::fs::File;
use std::io::BufWriter;

use serde_json::{json, Map, Value};

use lsc_core::eigensolve::{eigs, eigs_auto};
use lsc_core::hermite::{default_radius, gram_entry, gram_norm2, quasimode_apply};
use lsc_core::lattice::{assemble_hkappa, assemble_hn, assemble_laplacian};
use lsc_core::potentials::{validate_assumptions, Verdict};
use lsc_core::semiclassics::{
    converge_study, default_half_width, harmonic_kappa_study, ims_general_experiment,
    interval_lowerbound_experiment, regime_sweep, ritz_upper_bounds, sigma_enumerate, MAX_DOUBLINGS,
};
use lsc_core::{LatticeBox, Potential, ScalingParams, SymmetricLatticeOperator};

use crate::config::RunConfig;
use crate::error::{CliError, EXIT_ASSERTION, EXIT_VALIDATION};
use crate::output::{format_float, CsvTable};

pub struct Outcome {
    pub experiment: &'static str,
    pub table: CsvTable,
    pub pass: bool,
    /// Exit code when `pass` is false.
    pub failure_code: i32,
    pub constants: Map<String, Value>,
    pub report: Vec<String>,
}

impl Outcome {
    fn new(experiment: &'static str, table: CsvTable) -> Self {
        Self {
            experiment,
            table,
            pass: true,
            failure_code: EXIT_ASSERTION,
            constants: Map::new(),
            report: Vec::new(),
        }
    }

    fn constant(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.constants.insert(key.into(), value.into());
    }
}

pub fn build_potential(cfg: &RunConfig) -> Result<Potential, CliError> {
    let p = match cfg.potential.as_str() {
        "harmonic" => {
            let omega = if cfg.omega.len() == 1 && cfg.dim > 1 {
                vec![cfg.omega[0]; cfg.dim]
            } else {
                cfg.omega.clone()
            };
            Potential::harmonic(&omega)?
        }
        "double-well" => Potential::double_well(),
        "separable-double-well" => Potential::separable_double_well(cfg.dim)?,
        "quartic" => Potential::quartic(),
        other => {
            return Err(CliError::Config(format!(
                "unknown potential '{other}' (harmonic, double-well, separable-double-well, quartic)"
            )))
        }
    };
    Ok(p)
}

fn scan_radius(cfg: &RunConfig, potential: &Potential) -> f64 {
    let reach = potential
        .wells()
        .iter()
        .map(|w| w.location().iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    cfg.scan_radius.max(reach + 1.5)
}

fn require_valid(cfg: &RunConfig, potential: &Potential) -> Result<(), CliError> {
    let report = validate_assumptions(potential, scan_radius(cfg, potential), cfg.grid_step)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation(format!(
            "potential '{}' violates the standing assumptions (run `validate` for details)",
            potential.name()
        )))
    }
}

fn dump(cfg: &RunConfig, op: &SymmetricLatticeOperator) -> Result<(), CliError> {
    if let Some(path) = &cfg.dump_matrix {
        op.write_triplets(BufWriter::new(File::create(path)?))?;
    }
    Ok(())
}

type Builder = Box<dyn Fn(i64) -> lsc_core::Result<SymmetricLatticeOperator>>;

/// Operator builder, dimension and auto-sizing start for `spectrum`.
fn spectrum_operator(cfg: &RunConfig, k: usize) -> Result<(Builder, usize, i64), CliError> {
    Ok(match cfg.potential.as_str() {
        "free" => {
            let d = cfg.dim;
            (Box::new(move |m| Ok(assemble_laplacian(&LatticeBox::symmetric(d, m)?))), d, 1)
        }
        "hkappa" => {
            let kappa = cfg.kappa();
            let start = default_radius(k - 1, kappa);
            (Box::new(move |m| assemble_hkappa(kappa, &LatticeBox::symmetric(1, m)?)), 1, start)
        }
        _ => {
            let potential = build_potential(cfg)?;
            let params = ScalingParams::new(cfg.mesh(), cfg.gamma(), cfg.omega[0])?;
            let d = potential.dim();
            let start = default_half_width(&potential, cfg.mesh(), cfg.gamma(), k - 1)?;
            let build: Builder = Box::new(move |m| assemble_hn(&potential, &params, &LatticeBox::symmetric(d, m)?));
            (build, d, start)
        }
    })
}

pub fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let k = cfg.count.unwrap_or(cfg.n_max + 1);
    if k == 0 {
        return Err(CliError::Config("count must be at least 1".into()));
    }
    let (build, dim, start) = spectrum_operator(cfg, k)?;
    let (result, op) = match cfg.half_width {
        Some(m) => {
            let op = build(m)?;
            (eigs(&op, k, dim == 1)?, op)
        }
        None if dim == 1 => {
            let r = eigs_auto(&build, start, k, true, MAX_DOUBLINGS)?;
            let op = build(r.box_upper[0])?;
            (r, op)
        }
        None => {
            return Err(CliError::Config(
                "boxes in more than one dimension need an explicit --half-width".into(),
            ))
        }
    };
    dump(cfg, &op)?;
    let mut table = CsvTable::new(&["n", "E_n"]);
    for (n, e) in result.eigenvalues.iter().enumerate() {
        table.push(vec![n.into(), (*e).into()]);
    }
    let mut out = Outcome::new("spectrum", table);
    out.constant("half_width", result.box_upper[0]);
    out.constant("points", op.size());
    out.constant("max_cluster_size", result.max_cluster_size());
    if let Some(res) = &result.residuals {
        let worst = res.iter().copied().fold(0.0, f64::max);
        out.constant("max_residual", worst);
    }
    if let Some(change) = result.truncation_change {
        out.constant("truncation_change", change);
    }
    out.report.push(format!(
        "{} eigenvalues on {} points (half-width {})",
        result.len(),
        op.size(),
        result.box_upper[0]
    ));
    Ok(out)
}

pub fn sigma(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let potential = build_potential(cfg)?;
    let count = cfg.count.unwrap_or(10);
    let seq = sigma_enumerate(&potential, count)?;
    let mut table = CsvTable::new(&["n", "e_n"]);
    let mut out_report = Vec::new();
    for (n, e) in seq.entries.iter().enumerate() {
        table.push(vec![n.into(), e.value.into()]);
        out_report.push(format!(
            "e_{n} = {} (well {}, index {:?})",
            format_float(e.value),
            e.well,
            e.multi_index
        ));
    }
    let mut out = Outcome::new("sigma", table);
    out.constant("count", count);
    out.constant("wells", potential.wells().len());
    out.report = out_report;
    Ok(out)
}

pub fn converge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let potential = build_potential(cfg)?;
    require_valid(cfg, &potential)?;
    let t = converge_study(&potential, cfg.gamma(), &cfg.meshes, cfg.n_max)?;
    let mut table = CsvTable::new(&["gamma", "N", "n", "E_n", "lambda_N", "ratio", "target", "abs_err"]);
    for r in &t.rows {
        table.push(vec![
            r.gamma.into(),
            r.inverse_mesh.into(),
            r.n.into(),
            r.energy.into(),
            r.lambda.into(),
            r.ratio.into(),
            r.target.into(),
            r.abs_err.into(),
        ]);
    }
    let mut out = Outcome::new("converge", table);
    let last = t.inverse_meshes.len() - 1;
    for n in 0..=t.n_max {
        let r = t.row(last, n);
        out.constant(format!("final_abs_err_{n}"), r.abs_err);
        if let Some(p) = t.orders[n].last() {
            out.constant(format!("order_{n}"), *p);
        }
        let ok = t.errors_decreasing[n] && r.abs_err <= cfg.tolerances.ratio;
        out.pass &= ok;
        out.report.push(format!(
            "n = {n}: E_n/lambda_N = {} -> e_n = {}, errors decreasing: {}",
            format_float(r.ratio),
            format_float(r.target),
            t.errors_decreasing[n]
        ));
    }
    Ok(out)
}

pub fn kappa(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = harmonic_kappa_study(cfg.omega[0], &cfg.kappas, cfg.n_max)?;
    let mut table = CsvTable::new(&["kappa", "n", "E_n", "ratio", "target", "abs_err"]);
    for r in &s.rows {
        table.push(vec![
            r.kappa.into(),
            r.n.into(),
            r.energy.into(),
            r.ratio.into(),
            r.target.into(),
            r.abs_err.into(),
        ]);
    }
    let mut out = Outcome::new("kappa", table);
    let last = s.kappas.len() - 1;
    for n in 0..=s.n_max {
        out.constant(format!("final_deviation_{n}"), s.row(last, n).abs_err);
        if let Some(p) = s.orders[n].last() {
            out.constant(format!("order_{n}"), *p);
        }
        out.pass &= s.deviations_decreasing[n];
    }
    let bounded = s.rows.iter().all(|r| r.energy <= r.ritz_bound);
    out.pass &= bounded;
    out.report.push(format!(
        "deviations decreasing per level: {:?}; Ritz bounds respected: {bounded}",
        s.deviations_decreasing
    ));
    Ok(out)
}

pub fn regimes(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let s = regime_sweep(cfg.omega[0], &cfg.gammas, &cfg.meshes, cfg.n_max)?;
    let mut table = CsvTable::new(&[
        "gamma",
        "n",
        "slope_fit",
        "slope_pred",
        "limit_const_fit",
        "limit_const_pred",
    ]);
    for r in &s.rows {
        table.push(vec![
            r.gamma.into(),
            r.n.into(),
            r.slope_fit.into(),
            r.slope_pred.into(),
            r.limit_const_fit.into(),
            r.limit_const_pred.into(),
        ]);
    }
    let mut out = Outcome::new("regimes", table);
    for (gi, &gamma) in s.gammas.iter().enumerate() {
        // below γ = -1 the ground level has a vanishing constant
        let level = if gamma < -1.0 && s.n_max >= 1 { 1 } else { 0 };
        let row = s.row(gi, level);
        let slope_ok = (row.slope_fit - row.slope_pred).abs() <= cfg.tolerances.slope;
        out.constant(format!("slope_fit[{gamma}]"), row.slope_fit);
        out.pass &= slope_ok;
        if let Some(dev) = s.identity_deviation[gi] {
            out.constant(format!("identity_deviation[{gamma}]"), dev);
            out.pass &= dev <= cfg.tolerances.identity;
            for n in 0..=s.n_max {
                let scaled: Vec<String> = s.samples_for(gamma, n).map(|p| format_float(p.scaled)).collect();
                out.report.push(format!("gamma = {gamma}, n = {n}: E_n/N^2 = {}", scaled.join(", ")));
            }
            out.report.push(format!("max relative deviation from E_n(H_1): {dev:e}"));
        }
        out.report.push(format!(
            "gamma = {gamma}: slope {} vs predicted {} (level {level})",
            format_float(row.slope_fit),
            format_float(row.slope_pred)
        ));
    }
    Ok(out)
}

pub fn quasimode(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut table = CsvTable::new(&[
        "kappa",
        "n",
        "residual_sup",
        "residual_over_kappa4",
        "gram_rel_err",
        "ritz_bound",
        "ritz_ratio",
    ]);
    let mut out_pass = true;
    let mut worst_residual = 0.0f64;
    for &kappa in &cfg.kappas {
        let b = LatticeBox::symmetric(1, default_radius(cfg.n_max, kappa))?;
        let op = assemble_hkappa(kappa, &b)?;
        let ritz = ritz_upper_bounds(&op, kappa, cfg.n_max)?;
        let k2 = kappa * kappa;
        for n in 0..=cfg.n_max {
            let (_, residual) = quasimode_apply(n, kappa, &b)?;
            let sup = residual.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            let gram = (gram_entry(n, n, kappa, &b)? / gram_norm2(n, kappa) - 1.0).abs();
            let target = (2 * n + 1) as f64;
            out_pass &= ritz[n] <= k2 * target * (1.0 + cfg.tolerances.ritz * kappa);
            worst_residual = worst_residual.max(sup / k2.powi(2));
            table.push(vec![
                kappa.into(),
                n.into(),
                sup.into(),
                (sup / k2.powi(2)).into(),
                gram.into(),
                ritz[n].into(),
                (ritz[n] / k2).into(),
            ]);
        }
    }
    let mut out = Outcome::new("quasimode", table);
    out.pass = out_pass;
    out.constant("max_residual_over_kappa4", worst_residual);
    out.report.push(format!(
        "Ritz bounds within kappa^2(2n+1)(1 + {} kappa): {out_pass}",
        cfg.tolerances.ritz
    ));
    Ok(out)
}

pub fn intervals(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let kappa = cfg.kappa();
    let mut table = CsvTable::new(&[
        "n",
        "index",
        "lo",
        "hi",
        "beta",
        "modified",
        "ground_energy",
        "ratio",
        "min_slack",
        "min_relative_slack",
        "holds",
    ]);
    let mut out_report = Vec::new();
    let mut pass = true;
    let mut constants = Map::new();
    for n in 1..=cfg.n_max.max(1) {
        let r = interval_lowerbound_experiment(n, kappa, cfg.delta_spike, cfg.epsilon)?;
        for iv in &r.intervals {
            table.push(vec![
                n.into(),
                iv.index.into(),
                iv.lo.into(),
                iv.hi.into(),
                iv.beta.into(),
                iv.modified.into(),
                iv.ground_energy.into(),
                iv.ratio.into(),
                iv.certificate.min_slack.into(),
                iv.certificate.min_relative_slack.into(),
                iv.certificate.holds.into(),
            ]);
        }
        pass &= r.certificates_hold && r.ratio_bound_holds;
        constants.insert(format!("min_ratio_{n}"), json!(r.min_ratio));
        out_report.push(format!(
            "n = {n}: min E_0,j/kappa^2 = {} vs (1 - eps)(2n+1) = {}; certificates hold: {}; excluded {:?}",
            format_float(r.min_ratio),
            format_float((1.0 - r.epsilon) * r.target),
            r.certificates_hold,
            r.excluded
        ));
    }
    let mut out = Outcome::new("intervals", table);
    out.pass = pass;
    out.constants = constants;
    out.report = out_report;
    Ok(out)
}

pub fn ims(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let potential = build_potential(cfg)?;
    require_valid(cfg, &potential)?;
    let mut table = CsvTable::new(&[
        "N",
        "index",
        "inner_radius",
        "identity_residual",
        "commutator_norm",
        "commutator_bound",
        "potential_error_norm",
        "potential_error_constant",
    ]);
    let mut pass = true;
    let mut worst_constant = 0.0f64;
    let mut worst_residual = 0.0f64;
    for &n in &cfg.meshes {
        let params = ScalingParams::new(n, cfg.gamma(), cfg.omega[0])?;
        let r = ims_general_experiment(&potential, &params, cfg.delta_cut)?;
        pass &= r.identity_residual <= cfg.tolerances.ims;
        worst_residual = worst_residual.max(r.identity_residual);
        for w in &r.wells {
            pass &= w.within_bound;
            worst_constant = worst_constant.max(w.potential_error_constant);
            table.push(vec![
                n.into(),
                w.index.into(),
                r.inner_radius.into(),
                r.identity_residual.into(),
                w.commutator_norm.into(),
                w.commutator_bound.into(),
                w.potential_error_norm.into(),
                w.potential_error_constant.into(),
            ]);
        }
    }
    let mut out = Outcome::new("ims", table);
    out.pass = pass;
    out.constant("max_identity_residual", worst_residual);
    out.constant("max_potential_error_constant", worst_constant);
    Ok(out)
}

fn verdict_cells(name: &str, v: &Verdict) -> Vec<crate::output::Cell> {
    let (verdict, detail) = match v {
        Verdict::Pass => ("pass", String::new()),
        Verdict::Fail(d) => ("fail", d.replace(',', ";")),
        Verdict::Assumed => ("assumed", String::new()),
    };
    vec![name.into(), verdict.into(), detail.as_str().into()]
}

pub fn validate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let potential = build_potential(cfg)?;
    let report = validate_assumptions(&potential, scan_radius(cfg, &potential), cfg.grid_step)?;
    let mut table = CsvTable::new(&["check", "verdict", "detail"]);
    table.push(verdict_cells("smoothness", &report.smoothness));
    table.push(verdict_cells("nonnegative", &report.nonnegative));
    table.push(verdict_cells("wells", &report.wells));
    table.push(verdict_cells("positive_at_infinity", &report.positive_at_infinity));
    let mut out = Outcome::new("validate", table);
    out.pass = report.passed();
    out.failure_code = EXIT_VALIDATION;
    out.constant("min_value", report.min_value);
    out.constant("well_count", report.well_count);
    out.constant("grid_points", report.grid_points);
    out.report.extend(report.warnings.iter().cloned());
    Ok(out)
}
