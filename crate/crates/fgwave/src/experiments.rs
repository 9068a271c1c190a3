//! Convergence studies and energy-evolution logging: reference-solution
//! generation, error rows with observed halving rates, and per-damping
//! energy ledgers.

use crate::error::{Error, Result};
use crate::model::{Example, Problem};
use crate::sav::{run, EnergyRecord, SavState};
use crate::spectral::{inner_l2, linf_norm, restrict_to_grid, seminorm, Grid};

/// One row of a convergence table: the varied parameter, every error norm,
/// and the observed rate against the previous row (empty on the first row or
/// when either error in the pair is zero).
#[derive(Debug, Clone, Copy)]
pub struct ErrorRow {
    /// tau in a temporal study, N in a spatial study.
    pub param: f64,
    pub e_u_inf: f64,
    pub e_v_inf: f64,
    pub e_r_abs: f64,
    pub e_u_seminorm: f64,
    pub e_u_l2: f64,
    pub e_v_l2: f64,
    pub rate_u_inf: Option<f64>,
    pub rate_v_inf: Option<f64>,
    pub rate_r: Option<f64>,
    pub rate_u_seminorm: Option<f64>,
    pub rate_u_l2: Option<f64>,
    pub rate_v_l2: Option<f64>,
}

/// Parameters shared by the convergence studies. The embedded problem fixes
/// the PDE coefficients and, for temporal studies, the grid.
#[derive(Debug, Clone)]
pub struct StudyConfig {
    pub problem: Problem,
    pub example: Example,
    /// Reference grid size for spatial studies.
    pub n_ref: usize,
    /// Reference step count: the reference solution uses tau = T / k_ref.
    pub k_ref: usize,
    pub tau_list: Vec<f64>,
    pub n_list: Vec<usize>,
}

impl StudyConfig {
    pub fn reference_tau(&self) -> f64 {
        self.problem.t_final / self.k_ref as f64
    }
}

/// Observed convergence rate log2(e_coarse / e_fine) for a halving pair.
pub fn observed_rate(e_coarse: f64, e_fine: f64) -> Result<f64> {
    for e in [e_coarse, e_fine] {
        if !e.is_finite() || e <= 0.0 {
            return Err(Error::NonpositiveErrorValue { value: e });
        }
    }
    Ok((e_coarse / e_fine).log2())
}

/// Error norms between a solution and a reference at the same physical time.
/// When the reference lives on a finer grid it is restricted to the solution
/// grid by spectral truncation before differencing; all norms are then taken
/// on the solution grid.
pub fn compute_errors(
    sol: &SavState,
    reference: &SavState,
    p: &Problem,
    param: f64,
) -> Result<ErrorRow> {
    let t_scale = reference.time.abs().max(1.0);
    if (sol.time - reference.time).abs() > 1e-9 * t_scale {
        return Err(Error::TimeMismatch {
            t_sol: sol.time,
            t_ref: reference.time,
        });
    }
    let ref_u = restrict_to_grid(&reference.u, sol.u.grid())?;
    let ref_v = restrict_to_grid(&reference.v, sol.v.grid())?;
    let du = &sol.u - &ref_u;
    let dv = &sol.v - &ref_v;
    let l2 = |f: &crate::spectral::Field| inner_l2(f, f).map(f64::sqrt);
    Ok(ErrorRow {
        param,
        e_u_inf: linf_norm(&du),
        e_v_inf: linf_norm(&dv),
        e_r_abs: (sol.r - reference.r).abs(),
        e_u_seminorm: seminorm(&du, 0.5 * p.alpha),
        e_u_l2: l2(&du)?,
        e_v_l2: l2(&dv)?,
        rate_u_inf: None,
        rate_v_inf: None,
        rate_r: None,
        rate_u_seminorm: None,
        rate_u_l2: None,
        rate_v_l2: None,
    })
}

fn pair_rate(prev: f64, curr: f64) -> Option<f64> {
    if prev > 0.0 && curr > 0.0 {
        Some(observed_rate(prev, curr).expect("both positive"))
    } else {
        None
    }
}

fn fill_rates(rows: &mut [ErrorRow]) {
    for i in 1..rows.len() {
        let prev = rows[i - 1];
        let row = &mut rows[i];
        row.rate_u_inf = pair_rate(prev.e_u_inf, row.e_u_inf);
        row.rate_v_inf = pair_rate(prev.e_v_inf, row.e_v_inf);
        row.rate_r = pair_rate(prev.e_r_abs, row.e_r_abs);
        row.rate_u_seminorm = pair_rate(prev.e_u_seminorm, row.e_u_seminorm);
        row.rate_u_l2 = pair_rate(prev.e_u_l2, row.e_u_l2);
        row.rate_v_l2 = pair_rate(prev.e_v_l2, row.e_v_l2);
    }
}

/// Temporal refinement study on a fixed grid: one reference run at
/// tau = T / k_ref, then one run per entry of `tau_list`, all compared at
/// t = T.
pub fn temporal_study(cfg: &StudyConfig) -> Result<Vec<ErrorRow>> {
    let tau_ref = cfg.reference_tau();
    if cfg.tau_list.is_empty() {
        return Err(Error::InvalidParameter("tau_list must not be empty".into()));
    }
    for &tau in &cfg.tau_list {
        if tau_ref > tau * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!(
                "reference step {tau_ref} must not exceed any tested step (got {tau})"
            )));
        }
    }
    let reference = run(&cfg.problem, cfg.example, tau_ref)?.final_state;
    let mut rows = Vec::with_capacity(cfg.tau_list.len());
    for &tau in &cfg.tau_list {
        let sol = run(&cfg.problem, cfg.example, tau)?.final_state;
        rows.push(compute_errors(&sol, &reference, &cfg.problem, tau)?);
    }
    fill_rates(&mut rows);
    Ok(rows)
}

fn problem_on_grid(base: &Problem, nx: usize) -> Result<Problem> {
    let bounds = base.grid.bounds();
    Problem::new(
        base.alpha,
        base.kappa,
        base.gamma1,
        base.gamma2,
        base.potential,
        base.c0,
        Grid::new(nx, bounds)?,
        base.t_final,
    )
}

/// Spatial refinement study at a fixed small step tau = T / k_ref: one
/// reference run on the `n_ref` grid, then one run per entry of `n_list`,
/// the reference restricted to each coarse grid by spectral truncation.
pub fn spatial_study(cfg: &StudyConfig) -> Result<Vec<ErrorRow>> {
    if cfg.n_list.is_empty() {
        return Err(Error::InvalidParameter("n_list must not be empty".into()));
    }
    for &n in &cfg.n_list {
        if n > cfg.n_ref {
            return Err(Error::InvalidParameter(format!(
                "reference grid {} must be at least as fine as every tested grid (got {n})",
                cfg.n_ref
            )));
        }
    }
    let tau = cfg.reference_tau();
    let ref_problem = problem_on_grid(&cfg.problem, cfg.n_ref)?;
    let reference = run(&ref_problem, cfg.example, tau)?.final_state;
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let coarse = problem_on_grid(&cfg.problem, n)?;
        let sol = run(&coarse, cfg.example, tau)?.final_state;
        rows.push(compute_errors(&sol, &reference, &coarse, n as f64)?);
    }
    fill_rates(&mut rows);
    Ok(rows)
}

/// One damping setting of an energy study.
#[derive(Debug)]
pub struct EnergyStudyEntry {
    pub gamma1: f64,
    pub gamma2: f64,
    pub ledger: Vec<EnergyRecord>,
}

/// Runs the problem once per damping pair and collects the energy ledgers.
/// Whenever either damping coefficient is positive the ledger must be
/// monotone; a rise beyond 1e-12 of the initial energy is an error.
pub fn energy_study(
    p: &Problem,
    which: Example,
    tau: f64,
    gammas: &[(f64, f64)],
) -> Result<Vec<EnergyStudyEntry>> {
    let mut entries = Vec::with_capacity(gammas.len());
    for &(gamma1, gamma2) in gammas {
        let damped = Problem::new(
            p.alpha,
            p.kappa,
            gamma1,
            gamma2,
            p.potential,
            p.c0,
            p.grid.clone(),
            p.t_final,
        )?;
        let ledger = run(&damped, which, tau)?.ledger;
        if gamma1 > 0.0 || gamma2 > 0.0 {
            let slack = 1e-12 * ledger[0].h;
            for pair in ledger.windows(2) {
                if pair[1].h > pair[0].h + slack {
                    return Err(Error::DissipationViolation { step: pair[1].n });
                }
            }
        }
        entries.push(EnergyStudyEntry {
            gamma1,
            gamma2,
            ledger,
        });
    }
    Ok(entries)
}
