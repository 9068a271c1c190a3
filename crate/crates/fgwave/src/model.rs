//! Problem definition: PDE coefficients, the two built-in potentials, the
//! shifted nonlinear energy E(u), the SAV force direction b, and the two
//! benchmark initial states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{Field, Grid};

/// Nonlinear potential F with its derivative F'.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    /// F(u) = 1 - cos(u), nonnegative everywhere.
    SineGordon,
    /// F(u) = u^2 (u^2/4 - 1/2), bounded below by -1/4.
    DoubleWell,
}

impl Potential {
    pub fn f(self, u: f64) -> f64 {
        match self {
            Potential::SineGordon => 1.0 - u.cos(),
            Potential::DoubleWell => u * u * (0.25 * u * u - 0.5),
        }
    }

    pub fn f_prime(self, u: f64) -> f64 {
        match self {
            Potential::SineGordon => u.sin(),
            Potential::DoubleWell => u * u * u - u,
        }
    }

    /// Default energy shift keeping E(u) positive: any positive value works
    /// for sine-Gordon (F >= 0); the double well needs at least |domain|/4.
    pub fn default_c0(self, domain_area: f64) -> f64 {
        match self {
            Potential::SineGordon => 1.0,
            Potential::DoubleWell => 1.0 + 0.25 * domain_area,
        }
    }
}

/// Built-in benchmark setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Example {
    /// Smooth product of first-mode trigonometric waves on (-16,16)^2.
    Example1,
    /// Radially symmetric arctan hump on (-10,10)^2.
    Example2,
}

impl Example {
    pub fn default_bounds(self) -> (f64, f64, f64, f64) {
        match self {
            Example::Example1 => (-16.0, 16.0, -16.0, 16.0),
            Example::Example2 => (-10.0, 10.0, -10.0, 10.0),
        }
    }

    pub fn default_potential(self) -> Potential {
        match self {
            Example::Example1 => Potential::SineGordon,
            Example::Example2 => Potential::DoubleWell,
        }
    }

    /// Initial displacement profile; the initial velocity is zero for both.
    pub fn displacement(self, x: f64, y: f64) -> f64 {
        match self {
            Example::Example1 => {
                (std::f64::consts::PI * x / 16.0).sin() * (std::f64::consts::PI * y / 16.0).cos()
            }
            Example::Example2 => 0.5 * (-(x * x + y * y).sqrt()).exp().atan(),
        }
    }
}

/// Full problem statement for one simulation.
#[derive(Debug, Clone)]
pub struct Problem {
    pub alpha: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub potential: Potential,
    pub c0: f64,
    pub grid: Grid,
    pub t_final: f64,
}

impl Problem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        kappa: f64,
        gamma1: f64,
        gamma2: f64,
        potential: Potential,
        c0: f64,
        grid: Grid,
        t_final: f64,
    ) -> Result<Problem> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (1,2] (got {alpha})"
            )));
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kappa must be positive (got {kappa})"
            )));
        }
        for (name, g) in [("gamma1", gamma1), ("gamma2", gamma2)] {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be nonnegative (got {g})"
                )));
            }
        }
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c0 must be positive (got {c0})"
            )));
        }
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "T must be positive (got {t_final})"
            )));
        }
        Ok(Problem {
            alpha,
            kappa,
            gamma1,
            gamma2,
            potential,
            c0,
            grid,
            t_final,
        })
    }
}

/// Shifted nonlinear energy E(u) = integral of F(u) + c0 by grid quadrature.
pub fn energy_e(u: &Field, p: &Problem) -> Result<f64> {
    if !u.grid().same_as(&p.grid) {
        return Err(Error::GridMismatch(
            "energy of a field on a foreign grid".to_string(),
        ));
    }
    let sum = u.values().mapv(|v| p.potential.f(v)).sum();
    let energy = p.grid.hx() * p.grid.hy() * sum + p.c0;
    if energy <= 0.0 {
        return Err(Error::NonpositiveEnergy { energy, step: None });
    }
    Ok(energy)
}

/// SAV force direction b = F'(u_tilde) / sqrt(E(u_tilde)).
pub fn b_field(u_tilde: &Field, p: &Problem) -> Result<Field> {
    let energy = energy_e(u_tilde, p)?;
    Ok(b_field_with_energy(u_tilde, energy, p))
}

/// Same as [`b_field`] with the energy already in hand.
pub(crate) fn b_field_with_energy(u_tilde: &Field, energy: f64, p: &Problem) -> Field {
    let scale = 1.0 / energy.sqrt();
    u_tilde.map(|v| p.potential.f_prime(v) * scale)
}

/// Benchmark initial data: sampled displacement, zero velocity, and
/// R0 = sqrt(E(u0)).
pub fn initial_state(which: Example, p: &Problem) -> Result<(Field, Field, f64)> {
    let u0 = Field::from_fn(&p.grid, |x, y| which.displacement(x, y));
    let v0 = Field::zeros(&p.grid);
    let r0 = energy_e(&u0, p)?.sqrt();
    Ok((u0, v0, r0))
}
