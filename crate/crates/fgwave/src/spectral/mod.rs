//! Periodic Fourier-spectral toolbox: grids, transforms, the fractional
//! Laplacian symbol, Parseval-consistent inner products and seminorms, and
//! the diagonal step operator A with its inverse.
//!
//! Transforms normalize so that a constant field c has zero-mode coefficient
//! c; all integrals and norms are physical (they carry the domain measure).

mod grid;
mod transform;

pub(crate) use grid::{mode_index, signed_mode};
pub use grid::{Field, Grid, Spectrum};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::Problem;
use transform::dft2;

/// Fourier coefficients of `f`, normalized so the zero mode is the mean.
pub fn forward(f: &Field) -> Spectrum {
    let n = f.grid().nx();
    let complex = f.values().mapv(|v| Complex64::new(v, 0.0));
    let coeffs = dft2(complex, true) / (n * n) as f64;
    Spectrum::new(f.grid().clone(), coeffs)
}

/// Field with the given coefficients, discarding the roundoff-level imaginary
/// residue (the spectra built here always represent real fields).
pub fn inverse(s: &Spectrum) -> Field {
    let values = inverse_complex(s).mapv(|c| c.re);
    Field::from_values(s.grid(), values).expect("inverse transform shape")
}

/// Raw complex inverse transform, exposed so tests can measure the imaginary
/// residue that `inverse` discards.
pub fn inverse_complex(s: &Spectrum) -> Array2<Complex64> {
    dft2(s.coeffs().clone(), false)
}

/// Spectral multiplier of `(-Laplacian)^beta` at squared wavenumber `k_sq`.
/// beta = 0 is the identity (the zero mode keeps multiplier 1); any beta > 0
/// annihilates the zero mode. beta = 1 reproduces `k_sq` bitwise.
pub fn frac_symbol(k_sq: f64, beta: f64) -> f64 {
    if beta == 1.0 {
        k_sq
    } else {
        k_sq.powf(beta)
    }
}

/// Multiplies the spectrum of `f` by `sym(|k|^2)` mode-wise.
pub fn apply_symbol(f: &Field, sym: impl Fn(f64) -> f64) -> Field {
    inverse(&forward(f).apply_symbol(sym))
}

/// Fractional Laplacian `(-Laplacian)^beta` of `f`.
///
/// Panics on negative `beta`.
pub fn frac_laplacian(f: &Field, beta: f64) -> Field {
    assert!(
        beta >= 0.0,
        "fractional exponent must be nonnegative (got {beta})"
    );
    apply_symbol(f, |k_sq| frac_symbol(k_sq, beta))
}

/// Physical L2 inner product by uniform-grid quadrature, `hx*hy*sum(f*g)`.
pub fn inner_l2(f: &Field, g: &Field) -> Result<f64> {
    if !f.grid().same_as(g.grid()) {
        return Err(Error::GridMismatch(format!(
            "inner product of fields on {} and {} point grids",
            f.grid().nx(),
            g.grid().nx()
        )));
    }
    let sum = (f.values() * g.values()).sum();
    Ok(f.grid().hx() * f.grid().hy() * sum)
}

/// Physical L2 norm of `f`.
pub fn l2_norm(f: &Field) -> f64 {
    let sum = f.values().mapv(|v| v * v).sum();
    (f.grid().hx() * f.grid().hy() * sum).sqrt()
}

/// Fourier-weighted seminorm `sqrt(|domain| * sum |u_hat|^2 (kx^2+ky^2)^r)`.
/// With the `|domain|` factor, r = 0 reproduces the physical L2 norm.
///
/// Panics on negative `r`.
pub fn seminorm(f: &Field, r: f64) -> f64 {
    assert!(r >= 0.0, "seminorm order must be nonnegative (got {r})");
    let spec = forward(f);
    let grid = f.grid();
    let mut sum = 0.0;
    for ((i, j), c) in spec.coeffs().indexed_iter() {
        sum += c.norm_sqr() * frac_symbol(grid.k_sq(i, j), r);
    }
    (grid.area() * sum).sqrt()
}

/// Maximum absolute nodal value.
pub fn linf_norm(f: &Field) -> f64 {
    f.values().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Mode-wise symbol of the step operator
/// `A = (2 + tau*gamma2) I + (tau^2*kappa/2 + tau*gamma1) (-Laplacian)^{alpha/2}`.
/// Every value is at least 2, so the inverse multipliers never exceed 1/2.
pub fn a_symbol(k_sq: f64, tau: f64, p: &Problem) -> f64 {
    (2.0 + tau * p.gamma2)
        + (0.5 * tau * tau * p.kappa + tau * p.gamma1) * frac_symbol(k_sq, 0.5 * p.alpha)
}

/// Applies the step operator A.
pub fn apply_a(f: &Field, tau: f64, p: &Problem) -> Field {
    apply_symbol(f, |k_sq| a_symbol(k_sq, tau, p))
}

/// Applies A^{-1} by mode-wise division.
pub fn apply_a_inverse(f: &Field, tau: f64, p: &Problem) -> Field {
    apply_symbol(f, |k_sq| 1.0 / a_symbol(k_sq, tau, p))
}

/// Projects a field onto a coarser grid over the same rectangle by dropping
/// every Fourier mode the coarse grid cannot represent.
pub fn restrict_to_grid(f: &Field, coarse: &Grid) -> Result<Field> {
    let fine = f.grid();
    if coarse.bounds() != fine.bounds() {
        return Err(Error::GridMismatch(
            "restriction requires identical domain rectangles".to_string(),
        ));
    }
    if coarse.nx() > fine.nx() {
        return Err(Error::GridMismatch(format!(
            "restriction target ({} points) is finer than the source ({})",
            coarse.nx(),
            fine.nx()
        )));
    }
    if coarse.nx() == fine.nx() {
        return Ok(f.clone());
    }
    let spec = forward(f);
    let m = coarse.nx();
    let n = fine.nx();
    let coeffs = Array2::from_shape_fn((m, m), |(i, j)| {
        let s = signed_mode(i, m);
        let l = signed_mode(j, m);
        spec.coeffs()[[mode_index(s, n), mode_index(l, n)]]
    });
    Ok(inverse(&Spectrum::new(coarse.clone(), coeffs)))
}
