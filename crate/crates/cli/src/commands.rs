//! The `solve`, sweep, `layer`, `shoot` and `classify` commands.

use crate::args::{ClassifyArgs, LayerArgs, ShootArgs, SolveArgs, SweepBetaArgs, SweepSigmaArgs};
use crate::error::CliError;
use crate::output::{Output, Profile, ResultRecord, Table};
use crate::problem::Problem;
use crate::row;
use crate::runs::{sweep, sweep_error, Solved, Status};
use nlse_core::asym_box::solve_layer_ode;
use nlse_core::asym_harmonic::{
    attractive_limit_solve, attractive_scale, rescale_to_physical, SigmaLimit,
};
use nlse_core::regimes::{
    classify_existence, estimate_best_constant, BestConstant, Clause, Verdict,
};
use nlse_core::{Grid, Params, WaveFunction};
use rayon::prelude::*;
use std::collections::BTreeMap;

pub struct Ctx {
    pub out: Output,
    pub spec: BTreeMap<String, String>,
    pub command: String,
}

impl Ctx {
    pub fn record(&self) -> ResultRecord {
        ResultRecord::new(&self.command, &self.spec)
    }
}

pub fn profile_of(phi: &WaveFunction) -> Profile {
    let g = phi.grid();
    let pts: Vec<[f64; 2]> = (0..g.len()).map(|i| g.point(i)).collect();
    Profile {
        x: pts.iter().map(|p| p[0]).collect(),
        y: (g.dim() == 2).then(|| pts.iter().map(|p| p[1]).collect()),
        phi: phi.values().to_vec(),
    }
}

pub fn profile_table(phi: &WaveFunction) -> Table {
    let g = phi.grid();
    let mut t = if g.dim() == 1 { Table::new(&["x", "phi"]) } else { Table::new(&["x", "y", "phi"]) };
    for (i, &v) in phi.values().iter().enumerate() {
        let p = g.point(i);
        t.push(if g.dim() == 1 { row![p[0], v] } else { row![p[0], p[1], v] });
    }
    t
}

fn solve_attractive(a: &SolveArgs, problem: &Problem) -> Result<(Solved, f64), CliError> {
    let d = a.problem.dim as usize;
    let eps = attractive_scale(d, a.sigma, a.beta)?;
    let half = a.problem.half_width.unwrap_or(32.0);
    let n = a.problem.n.unwrap_or(if d == 1 { 2047 } else { 129 });
    let grid = Grid::centered(d, half, n)?;
    let params = Params::new(a.beta, a.sigma)?;
    let outcome = attractive_limit_solve(a.sigma, a.beta, &grid, &problem.potential, &problem.cfg);
    Ok((Solved::from_outcome(params, outcome), eps))
}

pub fn solve(ctx: &Ctx, a: &SolveArgs) -> Result<(), CliError> {
    let params = Params::new(a.beta, a.sigma)?;
    let problem = a.problem.build(&params)?;
    let (solved, eps) = if a.attractive_limit {
        let (s, eps) = solve_attractive(a, &problem)?;
        (s, Some(eps))
    } else {
        (crate::runs::solve_one(&problem, params, &problem.cfg), None)
    };
    let Some(r) = &solved.result else {
        return Err(sweep_error(std::slice::from_ref(&solved)).expect("failed solve"));
    };
    let mut rec = ResultRecord::from_result(&ctx.command, &ctx.spec, r);
    let mut summary_cols = vec!["energy", "mu", "residual", "iterations", "status", "peak"];
    let mut summary = vec![
        r.energy.into(),
        r.mu.into(),
        r.residual.into(),
        r.iterations.into(),
        solved.status.as_str().into(),
        r.phi.max_abs().into(),
    ];
    rec.scalar("peak", r.phi.max_abs());
    rec.label("status", solved.status.as_str());
    let phi = match eps {
        Some(eps) => {
            // energies of the rescaled problem scale by eps^-2
            let s = 1.0 / (eps * eps);
            rec.scalar("eps", eps);
            rec.scalar("energy_rescaled", r.energy);
            rec.scalar("mu_rescaled", r.mu);
            rec.energy = Some(r.energy * s);
            rec.mu = Some(r.mu * s);
            summary[0] = (r.energy * s).into();
            summary[1] = (r.mu * s).into();
            summary_cols.push("eps");
            summary.push(eps.into());
            rescale_to_physical(&r.phi, eps)?
        }
        None => {
            for (name, v) in problem.estimate_names().into_iter().zip(problem.estimates(&params)) {
                rec.scalar(name, v);
                summary_cols.push(name);
                summary.push(v.into());
            }
            r.phi.clone()
        }
    };
    if a.profile {
        rec.profile = Some(profile_of(&phi));
    }
    let mut t = Table::new(&summary_cols);
    t.push(summary);
    ctx.out.table("solve", &t)?;
    ctx.out.table("solve_profile", &profile_table(&phi))?;
    ctx.out.note(&format!(
        "E = {:.12}, mu = {:.12}, residual = {:.3e}, iterations = {}",
        rec.energy.unwrap_or(f64::NAN),
        rec.mu.unwrap_or(f64::NAN),
        r.residual,
        r.iterations
    ));
    ctx.out.records("solve", &[rec])?;
    match solved.status {
        Status::Ok => Ok(()),
        _ => Err(sweep_error(std::slice::from_ref(&solved)).expect("unconverged solve")),
    }
}

/// Writes a sweep table and records, then reports the first failed row.
fn write_sweep(ctx: &Ctx, name: &str, problem: &Problem, rows: &[Solved]) -> Result<(), CliError> {
    let mut cols = vec!["beta", "sigma", "energy", "mu", "residual", "iterations", "status", "peak"];
    let names = problem.estimate_names();
    cols.extend(names.iter());
    let mut t = Table::new(&cols);
    let mut recs = Vec::with_capacity(rows.len());
    for s in rows {
        let est = problem.estimates(&s.params);
        let mut r = row![
            s.params.beta,
            s.params.sigma,
            s.energy(),
            s.mu(),
            s.value(|r| r.residual),
            s.result.as_ref().map_or(0, |r| r.iterations),
            s.status.as_str(),
            s.peak()
        ];
        r.extend(est.iter().map(|&v| v.into()));
        t.push(r);
        let mut rec = match &s.result {
            Some(res) => ResultRecord::from_result(&ctx.command, &ctx.spec, res),
            None => ctx.record(),
        };
        rec.scalar("beta", s.params.beta);
        rec.scalar("sigma", s.params.sigma);
        rec.scalar("peak", s.peak());
        rec.label("status", s.status.as_str());
        for (n, v) in names.iter().zip(&est) {
            rec.scalar(n, *v);
        }
        recs.push(rec);
        if let Some(m) = &s.message {
            ctx.out.note(&format!("beta = {}, sigma = {}: {m}", s.params.beta, s.params.sigma));
        }
    }
    ctx.out.table(name, &t)?;
    ctx.out.records(name, &recs)?;
    match sweep_error(rows) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn strongest(params: &[Params]) -> Params {
    params
        .iter()
        .cloned()
        .max_by(|a, b| a.beta.total_cmp(&b.beta))
        .expect("nonempty parameter list")
}

pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![10f64.powf(lo)];
    }
    (0..count)
        .map(|i| 10f64.powf(lo + (hi - lo) * i as f64 / (count - 1) as f64))
        .collect()
}

pub fn sweep_beta(ctx: &Ctx, a: &SweepBetaArgs) -> Result<(), CliError> {
    let betas = match (&a.betas, &a.beta_log) {
        (Some(b), _) => b.clone(),
        (None, Some(l)) => {
            if l.len() != 3 || l[2] < 1.0 || l[2].fract() != 0.0 {
                return Err(CliError::Usage("--beta-log takes lo,hi,count".into()));
            }
            logspace(l[0], l[1], l[2] as usize)
        }
        (None, None) => return Err(CliError::Usage("give --betas or --beta-log".into())),
    };
    if betas.is_empty() {
        return Err(CliError::Usage("empty beta list".into()));
    }
    let params = betas
        .iter()
        .map(|&b| Params::new(b, a.sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let problem = a.problem.build(&strongest(&params))?;
    let rows = sweep(&problem, &params, a.independent);
    write_sweep(ctx, "sweep_beta", &problem, &rows)
}

pub fn sweep_sigma(ctx: &Ctx, a: &SweepSigmaArgs) -> Result<(), CliError> {
    if a.sigmas.is_empty() {
        return Err(CliError::Usage("empty sigma list".into()));
    }
    let params = a
        .sigmas
        .iter()
        .map(|&s| Params::new(a.beta, s))
        .collect::<Result<Vec<_>, _>>()?;
    // the smallest positive sigma has the widest Thomas-Fermi support
    let widest = params
        .iter()
        .filter(|p| p.sigma > 0.0)
        .cloned()
        .min_by(|x, y| x.sigma.total_cmp(&y.sigma))
        .unwrap_or(params[0]);
    let problem = a.problem.build(&widest)?;
    let rows = sweep(&problem, &params, a.independent);
    write_sweep(ctx, "sweep_sigma", &problem, &rows)
}

pub fn layer(ctx: &Ctx, a: &LayerArgs) -> Result<(), CliError> {
    let prof = solve_layer_ode(a.sigma, a.xcut)?;
    let mut t = Table::new(&["x", "phi", "dphi"]);
    for (x, p, d) in prof.samples() {
        t.push(row![x, p, d]);
    }
    let mut rec = ctx.record();
    rec.scalar("sigma", a.sigma);
    rec.scalar("slope0", prof.slope0);
    rec.scalar("tail_start", prof.tail_start());
    rec.scalar("samples", prof.len() as f64);
    ctx.out.table("layer", &t)?;
    ctx.out.records("layer", &[rec])?;
    ctx.out.note(&format!("phi'(0) = {:.15}, {} samples", prof.slope0, prof.len()));
    Ok(())
}

pub fn shoot(ctx: &Ctx, a: &ShootArgs) -> Result<(), CliError> {
    if !(a.step.is_finite() && a.step > 0.0) {
        return Err(CliError::Usage("--step must be positive".into()));
    }
    let limits = a
        .gamma
        .par_iter()
        .map(|&g| SigmaLimit::new(g))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let (t, profiles, recs) = shoot_tables(ctx, &a.gamma, &limits, a.step);
    ctx.out.table("shoot", &t)?;
    ctx.out.table("shoot_profiles", &profiles)?;
    ctx.out.records("shoot", &recs)?;
    Ok(())
}

/// Summary `(gamma, case, x_gamma, mu, residual, slope)` and sampled profiles on `[0, x_gamma + 6/sqrt(gamma)]`.
pub fn shoot_tables(
    ctx: &Ctx,
    gammas: &[f64],
    limits: &[SigmaLimit],
    step: f64,
) -> (Table, Table, Vec<ResultRecord>) {
    let mut t = Table::new(&["gamma", "case", "x_gamma", "mu", "normalization_residual", "slope_at_boundary"]);
    let mut profiles = Table::new(&["gamma", "x", "phi"]);
    let mut recs = Vec::new();
    for (&g, lim) in gammas.iter().zip(limits) {
        let mut rec = ctx.record();
        rec.scalar("gamma", g);
        let x_gamma = match lim {
            SigmaLimit::Gaussian { .. } => {
                rec.label("case", "linear");
                t.push(row![g, "linear", 0.0, 0.5 * g, 0.0, 0.0]);
                rec.mu = Some(0.5 * g);
                0.0
            }
            SigmaLimit::FlatTop(s) => {
                rec.label("case", "flat_top");
                let res = s.normalization_residual();
                t.push(row![g, "flat_top", s.x_gamma, s.mu, res, s.slope_at_boundary()]);
                rec.mu = Some(s.mu);
                rec.residual = Some(res.abs());
                rec.scalar("x_gamma", s.x_gamma);
                rec.scalar("slope_at_boundary", s.slope_at_boundary());
                s.x_gamma
            }
        };
        let end = x_gamma + 6.0 / g.sqrt();
        let count = (end / step).ceil() as usize;
        for i in 0..=count {
            let x = (i as f64 * step).min(end);
            profiles.push(row![g, x, lim.eval(x)]);
        }
        recs.push(rec);
    }
    (t, profiles, recs)
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::Exists => "exists",
        Verdict::ExistsUnique => "exists_unique",
        Verdict::NotExists => "not_exists",
        Verdict::ConditionalOnBestConstant { .. } => "conditional_on_best_constant",
    }
}

fn clause_name(c: Clause) -> &'static str {
    match c {
        Clause::Subcritical => "subcritical",
        Clause::CriticalAboveThreshold => "critical_above_threshold",
        Clause::SupercriticalRepulsive => "supercritical_repulsive",
        Clause::CriticalBelowThreshold => "critical_below_threshold",
        Clause::SupercriticalAttractive => "supercritical_attractive",
        Clause::CriticalUndetermined => "critical_undetermined",
    }
}

pub fn classify(ctx: &Ctx, a: &ClassifyArgs) -> Result<(), CliError> {
    let cb = match (a.cb, a.estimate_cb) {
        (Some(v), _) => {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage("--cb must be positive".into()));
            }
            Some(BestConstant {
                d: a.dim,
                sigma: a.sigma,
                value: v,
                method: "given".into(),
            })
        }
        (None, true) => Some(estimate_best_constant(a.dim, a.sigma)?),
        (None, false) => None,
    };
    let v = classify_existence(a.dim, a.sigma, a.beta, cb.as_ref())?;
    let factor = -(a.sigma + 1.0) / 2.0;
    let threshold = cb.as_ref().map_or(f64::NAN, |c| factor * c.value);
    let mut t = Table::new(&["dim", "sigma", "beta", "verdict", "clause", "cb", "threshold"]);
    t.push(row![
        a.dim,
        a.sigma,
        a.beta,
        verdict_name(&v.verdict),
        clause_name(v.clause),
        cb.as_ref().map_or(f64::NAN, |c| c.value),
        threshold
    ]);
    let mut rec = ctx.record();
    rec.scalar("cb", cb.as_ref().map_or(f64::NAN, |c| c.value));
    rec.scalar("threshold", threshold);
    if let Verdict::ConditionalOnBestConstant { threshold_factor } = v.verdict {
        rec.scalar("threshold_factor", threshold_factor);
    }
    rec.label("verdict", verdict_name(&v.verdict));
    rec.label("clause", clause_name(v.clause));
    ctx.out.table("classify", &t)?;
    ctx.out.records("classify", &[rec])?;
    ctx.out.note(&format!("{} ({})", verdict_name(&v.verdict), clause_name(v.clause)));
    Ok(())
}
