//! JSON run configuration: a flat document with a default for everything
//! except the benchmark example and the mode, validated into a ready-to-run
//! description. Unknown keys are hard errors.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{Example, Potential, Problem};
use crate::sav::steps_for;
use crate::spectral::Grid;

/// What the process should do; normally chosen by the CLI subcommand, but a
/// config file may carry it too (the subcommand wins).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Run,
    ConvergeTime,
    ConvergeSpace,
    Energy,
}

/// Raw config document; every field optional so defaults can fill in.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub kappa: Option<f64>,
    pub gamma1: Option<f64>,
    pub gamma2: Option<f64>,
    pub potential: Option<Potential>,
    pub c0: Option<f64>,
    pub example: Option<Example>,
    pub nx: Option<usize>,
    pub tau: Option<f64>,
    pub steps: Option<usize>,
    #[serde(rename = "T")]
    pub t_final: Option<f64>,
    pub xmin: Option<f64>,
    pub xmax: Option<f64>,
    pub ymin: Option<f64>,
    pub ymax: Option<f64>,
    pub mode: Option<Mode>,
    pub tau_list: Option<Vec<f64>>,
    pub n_list: Option<Vec<usize>>,
    pub gamma_list: Option<Vec<(f64, f64)>>,
    pub outdir: Option<PathBuf>,
    pub n_ref: Option<usize>,
    pub k_ref: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Fully resolved and validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: Problem,
    pub example: Example,
    pub mode: Mode,
    pub tau: f64,
    pub outdir: PathBuf,
    pub tau_list: Vec<f64>,
    pub n_list: Vec<usize>,
    pub gamma_list: Vec<(f64, f64)>,
    pub n_ref: usize,
    pub k_ref: usize,
}

impl RunConfig {
    /// Whether the domain was overridden away from the benchmark default.
    pub fn custom_domain(&self) -> bool {
        self.problem.grid.bounds() != self.example.default_bounds()
    }
}

/// Applies defaults and validation. `mode_override` and `outdir_override`
/// come from the command line and win over the file.
pub fn resolve(
    file: &ConfigFile,
    mode_override: Option<Mode>,
    outdir_override: Option<PathBuf>,
) -> Result<RunConfig> {
    let example = file
        .example
        .ok_or_else(|| Error::InvalidParameter("example must be given (no default)".into()))?;
    let mode = mode_override.or(file.mode).ok_or_else(|| {
        Error::InvalidParameter("mode must be given by subcommand or config (no default)".into())
    })?;

    let (dx0, dx1, dy0, dy1) = example.default_bounds();
    let bounds = (
        file.xmin.unwrap_or(dx0),
        file.xmax.unwrap_or(dx1),
        file.ymin.unwrap_or(dy0),
        file.ymax.unwrap_or(dy1),
    );
    let nx = file.nx.unwrap_or(64);
    let grid = Grid::new(nx, bounds)?;

    let potential = file
        .potential
        .unwrap_or_else(|| example.default_potential());
    let c0 = file.c0.unwrap_or_else(|| potential.default_c0(grid.area()));
    let t_final = file.t_final.unwrap_or(1.0);

    let problem = Problem::new(
        file.alpha.unwrap_or(1.2),
        file.kappa.unwrap_or(1.0),
        file.gamma1.unwrap_or(0.0),
        file.gamma2.unwrap_or(0.0),
        potential,
        c0,
        grid,
        t_final,
    )?;

    let tau = match (file.tau, file.steps) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameter(
                "give exactly one of tau and steps, not both".into(),
            ));
        }
        (Some(tau), None) => {
            steps_for(t_final, tau)?;
            tau
        }
        (None, steps) => {
            let steps = steps.unwrap_or(100);
            if steps == 0 {
                return Err(Error::InvalidParameter("steps must be positive".into()));
            }
            t_final / steps as f64
        }
    };

    Ok(RunConfig {
        problem,
        example,
        mode,
        tau,
        outdir: outdir_override
            .or_else(|| file.outdir.clone())
            .unwrap_or_else(|| PathBuf::from(".")),
        tau_list: file
            .tau_list
            .clone()
            .unwrap_or_else(|| vec![0.1, 0.05, 0.025]),
        n_list: file.n_list.clone().unwrap_or_else(|| vec![4, 8, 16, 32]),
        gamma_list: file
            .gamma_list
            .clone()
            .unwrap_or_else(|| vec![(0.0, 0.0), (0.0, 0.5), (0.5, 0.0), (0.5, 0.5)]),
        n_ref: file.n_ref.unwrap_or(64),
        k_ref: file.k_ref.unwrap_or(1000),
    })
}
