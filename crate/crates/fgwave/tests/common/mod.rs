//! Independent dense reference path used to cross-check the FFT +
//! Sherman-Morrison solver: explicit collocation matrices, a monolithic
//! linear solve of the coupled step equations, and deterministic smooth
//! random fields. The dense route never calls the library's spectral code.

#![allow(dead_code)]

use std::f64::consts::PI;

use fgwave::model::{Potential, Problem};
use fgwave::sav::{extrapolate, predictor_first_step, sav_step, SavState};
use fgwave::spectral::{Field, Grid};
use ndarray::Array2;

/// Signed wavenumber index for FFT ordering: 0..n/2-1 then -n/2..-1.
fn signed(s: usize, n: usize) -> f64 {
    if s < n / 2 {
        s as f64
    } else {
        s as f64 - n as f64
    }
}

/// Dense real matrix of the fractional Laplacian on an n x n periodic grid,
/// entry ((i,j),(c,d)) = (1/n^2) sum_{s,l} sigma_{s,l}
/// cos(kx_s (x_i - x_c) + ky_l (y_j - y_d)); the entries depend only on the
/// periodic displacement, computed once per offset.
pub fn dense_frac_laplacian(n: usize, bounds: (f64, f64, f64, f64), beta: f64) -> Vec<f64> {
    let (xmin, xmax, ymin, ymax) = bounds;
    let lx = xmax - xmin;
    let ly = ymax - ymin;
    let hx = lx / n as f64;
    let hy = ly / n as f64;
    let mut kernel = vec![0.0; n * n];
    for di in 0..n {
        for dj in 0..n {
            let mut acc = 0.0;
            for s in 0..n {
                let kx = 2.0 * PI * signed(s, n) / lx;
                for l in 0..n {
                    let ky = 2.0 * PI * signed(l, n) / ly;
                    let k_sq = kx * kx + ky * ky;
                    let sigma = if beta == 1.0 { k_sq } else { k_sq.powf(beta) };
                    acc += sigma * (kx * di as f64 * hx + ky * dj as f64 * hy).cos();
                }
            }
            kernel[di * n + dj] = acc / (n * n) as f64;
        }
    }
    let m = n * n;
    let mut mat = vec![0.0; m * m];
    for i in 0..n {
        for j in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let di = (i + n - c) % n;
                    let dj = (j + n - d) % n;
                    mat[(i * n + j) * m + (c * n + d)] = kernel[di * n + dj];
                }
            }
        }
    }
    mat
}

/// Gaussian elimination with partial pivoting; `a` is row-major dim x dim.
pub fn solve_dense(a: &mut [f64], rhs: &mut [f64]) -> Vec<f64> {
    let dim = rhs.len();
    assert_eq!(a.len(), dim * dim);
    for col in 0..dim {
        let pivot_row = (col..dim)
            .max_by(|&r1, &r2| a[r1 * dim + col].abs().total_cmp(&a[r2 * dim + col].abs()))
            .unwrap();
        assert!(
            a[pivot_row * dim + col].abs() > 0.0,
            "singular dense system"
        );
        if pivot_row != col {
            for k in 0..dim {
                a.swap(col * dim + k, pivot_row * dim + k);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = a[col * dim + col];
        for row in col + 1..dim {
            let factor = a[row * dim + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for k in col..dim {
                a[row * dim + k] -= factor * a[col * dim + k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = vec![0.0; dim];
    for row in (0..dim).rev() {
        let mut acc = rhs[row];
        for k in row + 1..dim {
            acc -= a[row * dim + k] * x[k];
        }
        x[row] = acc / a[row * dim + row];
    }
    x
}

#[derive(Clone)]
pub struct DenseState {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub r: f64,
}

/// The scheme rebuilt on dense matrices, solving the coupled step equations
/// for [u; v; R] in one monolithic system instead of eliminating.
pub struct DenseScheme {
    pub n: usize,
    pub hx: f64,
    pub hy: f64,
    pub kappa: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub tau: f64,
    pub c0: f64,
    pub f: fn(f64) -> f64,
    pub f_prime: fn(f64) -> f64,
    /// kappa-free fractional Laplacian matrix at order alpha/2.
    pub l_frac: Vec<f64>,
}

impl DenseScheme {
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        self.hx * self.hy * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
    }

    pub fn energy(&self, u: &[f64]) -> f64 {
        self.hx * self.hy * u.iter().map(|&x| (self.f)(x)).sum::<f64>() + self.c0
    }

    pub fn b_of(&self, u_tilde: &[f64]) -> Vec<f64> {
        let root = self.energy(u_tilde).sqrt();
        u_tilde.iter().map(|&x| (self.f_prime)(x) / root).collect()
    }

    fn apply_l(&self, u: &[f64]) -> Vec<f64> {
        let m = self.n * self.n;
        self.l_frac
            .chunks_exact(m)
            .map(|row| row.iter().zip(u).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Assembles and solves the coupled system for one step:
    ///   u' - (tau/2) v'                                      = u + (tau/2) v
    ///   (kappa/2) L u' + [(1/tau) + gamma2/2] v'
    ///        + (gamma1/2) L v' + (b/2) R'                    = (1/tau) v - (kappa/2) L u
    ///                                                          - (gamma1/2) L v
    ///                                                          - (gamma2/2) v - (b/2) R
    ///   -(h^2/2) b . u' + R'                                 = R - (h^2/2) b . u
    pub fn step(&self, state: &DenseState, u_tilde: &[f64]) -> DenseState {
        let m = self.n * self.n;
        let dim = 2 * m + 1;
        let b = self.b_of(u_tilde);
        let lu = self.apply_l(&state.u);
        let lv = self.apply_l(&state.v);
        let mut a = vec![0.0; dim * dim];
        let mut rhs = vec![0.0; dim];

        for i in 0..m {
            a[i * dim + i] = 1.0;
            a[i * dim + (m + i)] = -0.5 * self.tau;
            rhs[i] = state.u[i] + 0.5 * self.tau * state.v[i];
        }
        for i in 0..m {
            let row = (m + i) * dim;
            for j in 0..m {
                let l_ij = self.l_frac[i * m + j];
                a[row + j] = 0.5 * self.kappa * l_ij;
                a[row + (m + j)] = 0.5 * self.gamma1 * l_ij;
            }
            a[row + (m + i)] += 1.0 / self.tau + 0.5 * self.gamma2;
            a[row + 2 * m] = 0.5 * b[i];
            rhs[m + i] = state.v[i] / self.tau
                - 0.5 * self.kappa * lu[i]
                - 0.5 * self.gamma1 * lv[i]
                - 0.5 * self.gamma2 * state.v[i]
                - 0.5 * b[i] * state.r;
        }
        let row = 2 * m * dim;
        let weight = 0.5 * self.hx * self.hy;
        for j in 0..m {
            a[row + j] = -weight * b[j];
        }
        a[row + 2 * m] = 1.0;
        rhs[2 * m] = state.r - weight * self.inner_free(&b, &state.u);

        let x = solve_dense(&mut a, &mut rhs);
        DenseState {
            u: x[..m].to_vec(),
            v: x[m..2 * m].to_vec(),
            r: x[2 * m],
        }
    }

    fn inner_free(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    /// Monolithic solve of the half-step predictor system for [w; v~; R~]:
    ///   w - (tau/2) v~                                    = u0
    ///   kappa L w + [(2/tau) + gamma2] v~ + gamma1 L v~
    ///        + b0 R~                                      = (2/tau) v0
    ///   -(h^2/2) b0 . w + R~                              = R0 - (h^2/2) b0 . u0
    pub fn predictor(&self, state: &DenseState) -> DenseState {
        let m = self.n * self.n;
        let dim = 2 * m + 1;
        let b0 = self.b_of(&state.u);
        let r0 = self.energy(&state.u).sqrt();
        let mut a = vec![0.0; dim * dim];
        let mut rhs = vec![0.0; dim];

        for i in 0..m {
            a[i * dim + i] = 1.0;
            a[i * dim + (m + i)] = -0.5 * self.tau;
            rhs[i] = state.u[i];
        }
        for i in 0..m {
            let row = (m + i) * dim;
            for j in 0..m {
                let l_ij = self.l_frac[i * m + j];
                a[row + j] = self.kappa * l_ij;
                a[row + (m + j)] = self.gamma1 * l_ij;
            }
            a[row + (m + i)] += 2.0 / self.tau + self.gamma2;
            a[row + 2 * m] = b0[i];
            rhs[m + i] = 2.0 * state.v[i] / self.tau;
        }
        let row = 2 * m * dim;
        let weight = 0.5 * self.hx * self.hy;
        for j in 0..m {
            a[row + j] = -weight * b0[j];
        }
        a[row + 2 * m] = 1.0;
        rhs[2 * m] = r0 - weight * self.inner_free(&b0, &state.u);

        let x = solve_dense(&mut a, &mut rhs);
        DenseState {
            u: x[..m].to_vec(),
            v: x[m..2 * m].to_vec(),
            r: x[2 * m],
        }
    }

    /// Two-level extrapolant of the dense trajectory.
    pub fn extrapolate(u_n: &[f64], u_prev: &[f64]) -> Vec<f64> {
        u_n.iter()
            .zip(u_prev)
            .map(|(a, b)| 1.5 * a - 0.5 * b)
            .collect()
    }
}

pub fn sine_gordon_f(u: f64) -> f64 {
    1.0 - u.cos()
}

pub fn sine_gordon_f_prime(u: f64) -> f64 {
    u.sin()
}

/// Deterministic linear congruential generator (Knuth multiplier).
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_unit(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }
}

pub fn to_field(grid: &Grid, values: &[f64]) -> Field {
    let n = grid.nx();
    let arr = Array2::from_shape_fn((n, n), |(i, j)| values[i * n + j]);
    Field::from_values(grid, arr).unwrap()
}

pub fn max_abs_diff(field: &Field, dense: &[f64]) -> f64 {
    let n = field.grid().nx();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((field.values()[[i, j]] - dense[i * n + j]).abs());
        }
    }
    worst
}

pub fn apply_dense(matrix: &[f64], values: &[f64]) -> Vec<f64> {
    let m = values.len();
    (0..m)
        .map(|i| {
            matrix[i * m..(i + 1) * m]
                .iter()
                .zip(values)
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

pub fn dense_scheme_for(p: &Problem, tau: f64) -> DenseScheme {
    assert_eq!(
        p.potential,
        Potential::SineGordon,
        "dense route encodes the sine potential"
    );
    let n = p.grid.nx();
    DenseScheme {
        n,
        hx: p.grid.hx(),
        hy: p.grid.hy(),
        kappa: p.kappa,
        gamma1: p.gamma1,
        gamma2: p.gamma2,
        tau,
        c0: p.c0,
        f: sine_gordon_f,
        f_prime: sine_gordon_f_prime,
        l_frac: dense_frac_laplacian(n, p.grid.bounds(), 0.5 * p.alpha),
    }
}

/// Drives the fast path and the dense monolithic path side by side from the
/// same random smooth data and requires componentwise agreement to `tol` for
/// the predictor and for every one of `steps` steps.
pub fn assert_paths_agree(gamma1: f64, gamma2: f64, alpha: f64, seed: u64, steps: usize, tol: f64) {
    let n = 8;
    let bounds = (-16.0, 16.0, -16.0, 16.0);
    let grid = Grid::new(n, bounds).unwrap();
    let p = Problem::new(
        alpha,
        1.0,
        gamma1,
        gamma2,
        Potential::SineGordon,
        1.0,
        grid.clone(),
        1.0,
    )
    .unwrap();
    let tau = 0.05;

    let u_vals = smooth_random_field(n, bounds, seed, 0.8);
    let v_vals = smooth_random_field(n, bounds, seed + 1, 0.4);

    let mut state =
        SavState::initial(to_field(&grid, &u_vals), to_field(&grid, &v_vals), &p).unwrap();
    let scheme = dense_scheme_for(&p, tau);
    let mut dense = DenseState {
        u: u_vals,
        v: v_vals,
        r: state.r,
    };

    let predicted = predictor_first_step(&state, tau, &p).unwrap();
    let dense_pred = scheme.predictor(&dense);
    assert!(
        max_abs_diff(&predicted.u_half, &dense_pred.u) <= tol,
        "predictor u: {}",
        max_abs_diff(&predicted.u_half, &dense_pred.u)
    );
    assert!(
        max_abs_diff(&predicted.v_half, &dense_pred.v) <= tol,
        "predictor v: {}",
        max_abs_diff(&predicted.v_half, &dense_pred.v)
    );
    assert!(
        (predicted.r_half - dense_pred.r).abs() <= tol,
        "predictor r: {}",
        (predicted.r_half - dense_pred.r).abs()
    );

    let mut u_tilde = predicted.u_half;
    let mut dense_tilde = dense_pred.u;
    for step in 0..steps {
        let next = sav_step(&state, &u_tilde, tau, &p).unwrap();
        let dense_next = scheme.step(&dense, &dense_tilde);
        assert!(
            max_abs_diff(&next.u, &dense_next.u) <= tol,
            "u diverged at step {step}: {}",
            max_abs_diff(&next.u, &dense_next.u)
        );
        assert!(
            max_abs_diff(&next.v, &dense_next.v) <= tol,
            "v diverged at step {step}: {}",
            max_abs_diff(&next.v, &dense_next.v)
        );
        assert!(
            (next.r - dense_next.r).abs() <= tol,
            "r diverged at step {step}: {}",
            (next.r - dense_next.r).abs()
        );
        u_tilde = extrapolate(&next.u, &state.u);
        dense_tilde = DenseScheme::extrapolate(&dense_next.u, &dense.u);
        state = next;
        dense = dense_next;
    }
}

/// Smooth random periodic field from a handful of low Fourier modes with
/// LCG-drawn amplitudes and phases; values returned row-major (x outer).
pub fn smooth_random_field(
    n: usize,
    bounds: (f64, f64, f64, f64),
    seed: u64,
    amplitude: f64,
) -> Vec<f64> {
    let (xmin, xmax, ymin, ymax) = bounds;
    let lx = xmax - xmin;
    let ly = ymax - ymin;
    let hx = lx / n as f64;
    let hy = ly / n as f64;
    let mut rng = Lcg(seed);
    let mut modes = Vec::new();
    for s in -2i32..=2 {
        for l in -2i32..=2 {
            let coeff = amplitude * rng.next_unit() / (1.0 + (s * s + l * l) as f64);
            let phase = PI * rng.next_unit();
            modes.push((s as f64, l as f64, coeff, phase));
        }
    }
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        let x = xmin + i as f64 * hx;
        for j in 0..n {
            let y = ymin + j as f64 * hy;
            values[i * n + j] = modes
                .iter()
                .map(|&(s, l, c, p)| {
                    c * (2.0 * PI * s * (x - xmin) / lx + 2.0 * PI * l * (y - ymin) / ly + p).cos()
                })
                .sum();
        }
    }
    values
}
