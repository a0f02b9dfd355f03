//! Single solves and sweeps with failures kept in-row.

use crate::error::CliError;
use nlse_core::{solve_ground_state, Error, FlowConfig, GroundStateResult, Params};
use rayon::prelude::*;

use crate::problem::Problem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotConverged,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::NotConverged => "not_converged",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Solved {
    pub params: Params,
    /// Last iterate, also for non-converged solves.
    pub result: Option<GroundStateResult>,
    pub status: Status,
    pub message: Option<String>,
    usage: bool,
}

impl Solved {
    pub fn from_outcome(params: Params, outcome: Result<GroundStateResult, Error>) -> Self {
        match outcome {
            Ok(r) => Self {
                params,
                status: if r.converged { Status::Ok } else { Status::NotConverged },
                result: Some(r),
                message: None,
                usage: false,
            },
            Err(Error::NotConverged { result, .. }) => {
                let message = Some(format!("not converged after {} iterations", result.iterations));
                Self {
                    params,
                    result: Some(*result),
                    status: Status::NotConverged,
                    message,
                    usage: false,
                }
            }
            Err(e) => Self {
                params,
                result: None,
                status: Status::Failed,
                usage: CliError::is_usage(&e),
                message: Some(e.to_string()),
            },
        }
    }

    pub fn value<F: Fn(&GroundStateResult) -> f64>(&self, f: F) -> f64 {
        self.result.as_ref().map_or(f64::NAN, f)
    }

    pub fn energy(&self) -> f64 {
        self.value(|r| r.energy)
    }

    pub fn mu(&self) -> f64 {
        self.value(|r| r.mu)
    }

    pub fn peak(&self) -> f64 {
        self.value(|r| r.phi.max_abs())
    }
}

pub fn solve_one(problem: &Problem, params: Params, cfg: &FlowConfig) -> Solved {
    Solved::from_outcome(
        params,
        solve_ground_state(&problem.grid, &problem.potential, &params, cfg),
    )
}

/// Continuation warm-starts each item from the last successful one;
/// `independent` runs cold starts on the worker pool. Rows keep input order.
pub fn sweep(problem: &Problem, params: &[Params], independent: bool) -> Vec<Solved> {
    if independent {
        return params
            .par_iter()
            .map(|p| solve_one(problem, *p, &problem.cfg))
            .collect();
    }
    let mut cfg = problem.cfg.clone();
    let mut out = Vec::with_capacity(params.len());
    for p in params {
        let s = solve_one(problem, *p, &cfg);
        if let Some(r) = &s.result {
            if s.status == Status::Ok {
                cfg.warm_start = Some(r.phi.clone());
            }
        }
        out.push(s);
    }
    out
}

/// Error for the first failed row, preferring usage errors.
pub fn sweep_error(rows: &[Solved]) -> Option<CliError> {
    let failed: Vec<&Solved> = rows.iter().filter(|r| r.status != Status::Ok).collect();
    if let Some(u) = failed.iter().find(|r| r.usage) {
        return Some(CliError::Usage(u.message.clone().unwrap_or_default()));
    }
    let first = failed.first()?;
    Some(CliError::Numerical(format!(
        "{} of {} solves failed; first at beta = {}, sigma = {}: {}",
        failed.len(),
        rows.len(),
        first.params.beta,
        first.params.sigma,
        first.message.clone().unwrap_or_default()
    )))
}
