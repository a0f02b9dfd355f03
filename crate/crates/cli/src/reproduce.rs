//! Data tables behind each figure.

use crate::args::{Figure, ReproduceArgs};
use crate::commands::{logspace, shoot_tables, Ctx};
use crate::error::CliError;
use crate::output::Table;
use crate::problem::Problem;
use crate::row;
use crate::runs::{sweep, sweep_error, Solved};
use nlse_core::asym_box::{box_sigma_limit, layer_sigma_limit, solve_layer_ode};
use nlse_core::asym_harmonic::SigmaLimit;
use nlse_core::gflow::default_half_width;
use nlse_core::regimes::{classify_bifurcation, BifurcationClass, PLATEAU_DELTA};
use nlse_core::{FlowConfig, Grid, Params, PotentialSpec, WaveFunction};
use rayon::prelude::*;
use std::f64::consts::PI;

const N_1D: usize = 1023;
const SIGMA_LADDER: [f64; 7] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
const SIGMA_2D: [f64; 3] = [0.0, 4.0, 16.0];

/// Tables of one figure plus every solve it ran.
#[derive(Default)]
struct FigureData {
    tables: Vec<(String, Table)>,
    solves: Vec<Solved>,
}

impl FigureData {
    fn table(&mut self, name: &str, t: Table) {
        self.tables.push((name.to_string(), t));
    }

    fn absorb(&mut self, other: FigureData) {
        self.tables.extend(other.tables);
        self.solves.extend(other.solves);
    }
}

fn problem(grid: Grid, potential: PotentialSpec, lengths: Option<Vec<f64>>) -> Problem {
    Problem {
        grid,
        potential,
        cfg: FlowConfig::default(),
        lengths,
    }
}

fn harmonic_1d(gamma: f64, strongest: &Params) -> Result<Problem, CliError> {
    let half = default_half_width(1, gamma, strongest);
    Ok(problem(
        Grid::centered(1, half, N_1D)?,
        PotentialSpec::harmonic(gamma),
        None,
    ))
}

fn box_1d(l: f64, n: usize) -> Result<Problem, CliError> {
    Ok(problem(Grid::boxed(&[l], n)?, PotentialSpec::Box, Some(vec![l])))
}

fn params(beta: f64, sigmas: &[f64]) -> Result<Vec<Params>, CliError> {
    Ok(sigmas
        .iter()
        .map(|&s| Params::new(beta, s))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Measure of `{|phi| > 1 - delta}`, as used by the bifurcation classifier.
fn plateau_width(phi: &WaveFunction) -> f64 {
    let cell = phi.grid().cell_volume();
    phi.values().iter().filter(|v| v.abs() > 1.0 - PLATEAU_DELTA).count() as f64 * cell
}

fn class_name(c: BifurcationClass) -> &'static str {
    match c {
        BifurcationClass::LinearLimit => "linear_limit",
        BifurcationClass::FlatTop => "flat_top",
        BifurcationClass::Unresolved => "unresolved",
    }
}

/// Classification of a sigma scan; failed rows leave it unresolved.
fn classify_rows(rows: &[Solved], cell: f64) -> BifurcationClass {
    if rows.iter().any(|s| s.result.is_none()) {
        return BifurcationClass::Unresolved;
    }
    let peaks: Vec<f64> = rows.iter().map(Solved::peak).collect();
    let widths: Vec<f64> = rows
        .iter()
        .map(|s| plateau_width(&s.result.as_ref().unwrap().phi))
        .collect();
    classify_bifurcation(&peaks, &widths, cell)
}

/// Appends `(key, sigma, x, phi)` rows for each 1D solve.
fn push_profiles(t: &mut Table, key: f64, rows: &[Solved]) {
    for s in rows {
        if let Some(r) = &s.result {
            let g = r.phi.grid();
            for (i, &v) in r.phi.values().iter().enumerate() {
                t.push(row![key, s.params.sigma, g.point(i)[0], v]);
            }
        }
    }
}

fn fig1() -> Result<FigureData, CliError> {
    let (gamma, sigma) = (3.0, 2.0);
    let betas = logspace(-2.0, 3.0, 25);
    let ps = betas
        .iter()
        .map(|&b| Params::new(b, sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let pb = harmonic_1d(gamma, &Params::new(1e3, sigma)?)?;
    let rows = sweep(&pb, &ps, false);
    let mut t = Table::new(&[
        "beta", "E_solver", "E_weak", "E_TF", "mu_solver", "mu_weak", "mu_TF", "status",
    ]);
    for s in &rows {
        let e = pb.estimates(&s.params);
        t.push(row![s.params.beta, s.energy(), e[0], e[2], s.mu(), e[1], e[3], s.status.as_str()]);
    }
    let mut f = FigureData::default();
    f.table("fig1", t);
    f.solves = rows;
    Ok(f)
}

fn fig2() -> Result<FigureData, CliError> {
    let beta = 1.0;
    let panels = [3.0, 6.0]
        .par_iter()
        .map(|&gamma| -> Result<(f64, Problem, Vec<Solved>, SigmaLimit), CliError> {
            let pb = harmonic_1d(gamma, &Params::new(beta, 1.0)?)?;
            let rows = sweep(&pb, &params(beta, &SIGMA_LADDER)?, false);
            Ok((gamma, pb, rows, SigmaLimit::new(gamma)?))
        })
        .collect::<Vec<_>>();
    let mut profiles = Table::new(&["gamma", "sigma", "x", "phi"]);
    let mut limits = Table::new(&["gamma", "x", "phi_limit"]);
    let mut summary = Table::new(&[
        "gamma", "sigma", "energy", "mu", "peak", "plateau_width", "status",
    ]);
    let mut class = Table::new(&[
        "gamma", "class_sigma32", "class_sigma64", "peak_sigma32", "peak_sigma64", "limit_peak", "x_gamma",
    ]);
    let mut f = FigureData::default();
    for panel in panels {
        let (gamma, pb, rows, lim) = panel?;
        push_profiles(&mut profiles, gamma, &rows);
        for x in pb.grid.axis(0).coords() {
            limits.push(row![gamma, x, lim.eval(x)]);
        }
        for s in &rows {
            let w = s.result.as_ref().map_or(f64::NAN, |r| plateau_width(&r.phi));
            summary.push(row![gamma, s.params.sigma, s.energy(), s.mu(), s.peak(), w, s.status.as_str()]);
        }
        // classified with sigma up to 32 and up to 64
        let cell = pb.grid.cell_volume();
        let c32 = classify_rows(&rows[..6], cell);
        let c64 = classify_rows(&rows, cell);
        let x_gamma = match &lim {
            SigmaLimit::FlatTop(sol) => sol.x_gamma,
            SigmaLimit::Gaussian { .. } => f64::NAN,
        };
        class.push(row![
            gamma,
            class_name(c32),
            class_name(c64),
            rows[5].peak(),
            rows[6].peak(),
            lim.peak(),
            x_gamma
        ]);
        f.solves.extend(rows);
    }
    f.table("fig2_profiles", profiles);
    f.table("fig2_limits", limits);
    f.table("fig2_summary", summary);
    f.table("fig2_classification", class);
    Ok(f)
}

fn fig3(ctx: &Ctx) -> Result<FigureData, CliError> {
    let gammas = [3.5, 4.0, 5.0, 6.0, 8.0, 12.0];
    let limits = gammas
        .par_iter()
        .map(|&g| SigmaLimit::new(g))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let (points, profiles, _) = shoot_tables(ctx, &gammas, &limits, 0.005);
    let mut f = FigureData::default();
    f.table("fig3_points", points);
    f.table("fig3_profiles", profiles);
    Ok(f)
}

fn fig4() -> Result<FigureData, CliError> {
    let (gamma, beta) = (3.0, 1.0);
    let sigmas = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let pb = harmonic_1d(gamma, &Params::new(beta, 0.5)?)?;
    let rows = sweep(&pb, &params(beta, &sigmas)?, false);
    let peak_limit = (gamma / PI).powf(0.25);
    let mut t = Table::new(&[
        "sigma", "E_solver", "mu_solver", "peak", "E_limit", "peak_limit", "status",
    ]);
    for s in &rows {
        t.push(row![s.params.sigma, s.energy(), s.mu(), s.peak(), 0.5 * gamma, peak_limit, s.status.as_str()]);
    }
    let mut profiles = Table::new(&["gamma", "sigma", "x", "phi"]);
    push_profiles(&mut profiles, gamma, &rows);
    let mut f = FigureData::default();
    f.table("fig4", t);
    f.table("fig4_profiles", profiles);
    f.solves = rows;
    Ok(f)
}

/// 2D panels: sigma continuation per potential, centre-line slices and full grid dumps.
fn panels_2d(
    fig: &str,
    key: &str,
    cases: Vec<(String, Problem)>,
    beta: f64,
) -> Result<FigureData, CliError> {
    let ps = params(beta, &SIGMA_2D)?;
    let runs: Vec<(String, Problem, Vec<Solved>)> = cases
        .into_par_iter()
        .map(|(name, pb)| {
            let rows = sweep(&pb, &ps, false);
            (name, pb, rows)
        })
        .collect();
    let mut summary = Table::new(&[key, "sigma", "energy", "mu", "peak", "status"]);
    let mut slices = Table::new(&[key, "sigma", "x", "phi"]);
    let mut f = FigureData::default();
    for (name, pb, rows) in runs {
        let n = pb.grid.axis(1).n();
        let iy = n / 2;
        for s in &rows {
            summary.push(row![name.as_str(), s.params.sigma, s.energy(), s.mu(), s.peak(), s.status.as_str()]);
            let Some(r) = &s.result else { continue };
            let g = r.phi.grid();
            let mut dump = Table::new(&["x", "y", "value"]);
            for (i, &v) in r.phi.values().iter().enumerate() {
                let [x, y] = g.point(i);
                dump.push(row![x, y, v]);
                if g.unflatten(i)[1] == iy {
                    slices.push(row![name.as_str(), s.params.sigma, x, v]);
                }
            }
            f.table(&format!("{fig}_grid_{name}_sigma{}", s.params.sigma), dump);
        }
        f.solves.extend(rows);
    }
    f.tables.insert(0, (format!("{fig}_slices"), slices));
    f.tables.insert(0, (format!("{fig}_summary"), summary));
    Ok(f)
}

fn fig5(n: usize) -> Result<FigureData, CliError> {
    let centered = |gamma: f64| Grid::centered(2, 6.0 / f64::sqrt(gamma), n);
    let cases = vec![
        ("harmonic3".to_string(), problem(centered(3.0)?, PotentialSpec::harmonic(3.0), None)),
        ("harmonic6".to_string(), problem(centered(6.0)?, PotentialSpec::harmonic(6.0), None)),
        ("lattice".to_string(), problem(centered(6.0)?, PotentialSpec::lattice(6.0, 100.0, 4.0), None)),
    ];
    panels_2d("fig5", "potential", cases, 5.0)
}

fn fig8(n: usize) -> Result<FigureData, CliError> {
    let cases = [1.0, 1.5, 2.2]
        .iter()
        .map(|&l| -> Result<(String, Problem), CliError> {
            let pb = problem(Grid::boxed(&[l, l], n)?, PotentialSpec::Box, Some(vec![l, l]));
            Ok((format!("L{l}"), pb))
        })
        .collect::<Result<Vec<_>, _>>()?;
    panels_2d("fig8", "box", cases, 5.0)
}

fn fig6() -> Result<FigureData, CliError> {
    let (l, sigma) = (1.0, 2.0);
    let betas = logspace(-3.0, 4.0, 29);
    let ps = betas
        .iter()
        .map(|&b| Params::new(b, sigma))
        .collect::<Result<Vec<_>, _>>()?;
    let pb = box_1d(l, 2047)?;
    let rows = sweep(&pb, &ps, false);
    let mut t = Table::new(&[
        "beta", "E_solver", "E_weak", "E_TF", "E_MA", "relerr_weak", "relerr_TF", "relerr_MA", "status",
    ]);
    for s in &rows {
        let e = pb.estimates(&s.params);
        let (ew, et, em) = (e[0], e[2], e[4]);
        let es = s.energy();
        let rel = |v: f64| (v - es).abs() / es;
        t.push(row![s.params.beta, es, ew, et, em, rel(ew), rel(et), rel(em), s.status.as_str()]);
    }
    let mut f = FigureData::default();
    f.table("fig6", t);
    f.solves = rows;
    Ok(f)
}

fn box_sigma_panels(fig: &str, lengths: &[f64], beta: f64) -> Result<FigureData, CliError> {
    let runs = lengths
        .par_iter()
        .map(|&l| -> Result<(f64, Problem, Vec<Solved>), CliError> {
            let pb = box_1d(l, N_1D)?;
            let rows = sweep(&pb, &params(beta, &SIGMA_LADDER)?, false);
            Ok((l, pb, rows))
        })
        .collect::<Vec<_>>();
    let mut profiles = Table::new(&["L", "sigma", "x", "phi"]);
    let mut limits = Table::new(&["L", "x", "phi_limit"]);
    let mut summary = Table::new(&[
        "L", "sigma", "energy", "mu", "peak", "plateau_width", "status", "E_limit", "mu_limit",
    ]);
    let mut class = Table::new(&["L", "classification", "limit_case"]);
    let mut f = FigureData::default();
    for run in runs {
        let (l, pb, rows) = run?;
        let lim = box_sigma_limit(l, beta)?;
        push_profiles(&mut profiles, l, &rows);
        for x in pb.grid.axis(0).coords() {
            limits.push(row![l, x, lim.eval(x)]);
        }
        let (el, ml) = (lim.energy.unwrap_or(f64::INFINITY), lim.mu.unwrap_or(f64::INFINITY));
        for s in &rows {
            let w = s.result.as_ref().map_or(f64::NAN, |r| plateau_width(&r.phi));
            summary.push(row![l, s.params.sigma, s.energy(), s.mu(), s.peak(), w, s.status.as_str(), el, ml]);
        }
        let case = format!("{:?}", lim.case).to_lowercase();
        class.push(row![l, class_name(classify_rows(&rows, pb.grid.cell_volume())), case]);
        f.solves.extend(rows);
    }
    f.table(&format!("{fig}_profiles"), profiles);
    f.table(&format!("{fig}_limits"), limits);
    f.table(&format!("{fig}_summary"), summary);
    f.table(&format!("{fig}_classification"), class);
    Ok(f)
}

fn fig7() -> Result<FigureData, CliError> {
    box_sigma_panels("fig7", &[0.9, 1.5, 2.0], 1.0)
}

fn fig8_1d() -> Result<FigureData, CliError> {
    let lengths = [1.0, 1.5, 2.2];
    let beta = 5.0;
    let runs = lengths
        .par_iter()
        .map(|&l| -> Result<(f64, Vec<Solved>), CliError> {
            let pb = box_1d(l, N_1D)?;
            Ok((l, sweep(&pb, &params(beta, &SIGMA_2D)?, false)))
        })
        .collect::<Vec<_>>();
    let mut profiles = Table::new(&["L", "sigma", "x", "phi"]);
    let mut f = FigureData::default();
    for run in runs {
        let (l, rows) = run?;
        push_profiles(&mut profiles, l, &rows);
        f.solves.extend(rows);
    }
    f.table("fig8_1d_profiles", profiles);
    f.absorb(box_sigma_panels("fig8_1d_scan", &lengths, beta)?);
    Ok(f)
}

fn fig9() -> Result<FigureData, CliError> {
    let (l, beta) = (1.2, 1.0);
    let sigmas: Vec<f64> = (1..=64).map(f64::from).collect();
    let pb = box_1d(l, N_1D)?;
    let rows = sweep(&pb, &params(beta, &sigmas)?, false);
    let lim = box_sigma_limit(l, beta)?;
    let (el, ml) = (lim.energy.unwrap_or(f64::NAN), lim.mu.unwrap_or(f64::NAN));
    let mut t = Table::new(&["sigma", "E_solver", "mu_solver", "E_limit", "mu_limit", "status"]);
    for s in &rows {
        t.push(row![s.params.sigma, s.energy(), s.mu(), el, ml, s.status.as_str()]);
    }
    let mut f = FigureData::default();
    f.table("fig9", t);
    f.solves = rows;
    Ok(f)
}

fn fig_a() -> Result<FigureData, CliError> {
    let sigmas = [1.0, 3.0, 10.0];
    let x_end = 5.0;
    let layers = sigmas
        .par_iter()
        .map(|&s| solve_layer_ode(s, x_end))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(&["x", "phi_1", "phi_3", "phi_10", "phi_inf"]);
    let step = 0.01;
    let count = (x_end / step).round() as usize;
    for i in 0..=count {
        let x = i as f64 * step;
        t.push(row![x, layers[0].eval(x), layers[1].eval(x), layers[2].eval(x), layer_sigma_limit(x)]);
    }
    let mut slopes = Table::new(&["sigma", "slope0"]);
    for (s, p) in sigmas.iter().zip(&layers) {
        slopes.push(row![*s, p.slope0]);
    }
    slopes.push(row![f64::INFINITY, 2f64.sqrt()]);
    let mut f = FigureData::default();
    f.table("figA", t);
    f.table("figA_slopes", slopes);
    Ok(f)
}

pub fn reproduce(ctx: &Ctx, a: &ReproduceArgs) -> Result<(), CliError> {
    let n2d = a.n2d as usize;
    let data = match a.figure {
        Figure::Fig1 => fig1(),
        Figure::Fig2 => fig2(),
        Figure::Fig3 => fig3(ctx),
        Figure::Fig4 => fig4(),
        Figure::Fig5 => fig5(n2d),
        Figure::Fig6 => fig6(),
        Figure::Fig7 => fig7(),
        Figure::Fig8 => fig8(n2d),
        Figure::Fig8OneD => fig8_1d(),
        Figure::Fig9 => fig9(),
        Figure::FigA => fig_a(),
    }?;
    for (name, t) in &data.tables {
        ctx.out.table(name, t)?;
    }
    for s in &data.solves {
        if let Some(m) = &s.message {
            ctx.out.note(&format!("beta = {}, sigma = {}: {m}", s.params.beta, s.params.sigma));
        }
    }
    match sweep_error(&data.solves) {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
