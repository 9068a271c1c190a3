use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform periodic grid on a rectangle, square in resolution (nx points per
/// axis). Wavenumbers are angular, `2*pi*s / L` per axis, stored in standard
/// FFT ordering with signed integer indices `s in {-nx/2, ..., nx/2 - 1}`.
#[derive(Debug)]
struct GridData {
    nx: usize,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    hx: f64,
    hy: f64,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Grid {
    data: Arc<GridData>,
}

/// Signed FFT mode index for position `i` on an `n`-point axis.
pub(crate) fn signed_mode(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Physical index of signed mode `s` on an `n`-point axis.
pub(crate) fn mode_index(s: i64, n: usize) -> usize {
    if s >= 0 {
        s as usize
    } else {
        (s + n as i64) as usize
    }
}

impl Grid {
    /// Builds a grid with `nx` points per axis on the rectangle
    /// `(xmin, xmax) x (ymin, ymax)`.
    pub fn new(nx: usize, bounds: (f64, f64, f64, f64)) -> Result<Grid> {
        let (xmin, xmax, ymin, ymax) = bounds;
        if nx < 2 || !nx.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "nx must be even and at least 2 (got {nx})"
            )));
        }
        let finite = [xmin, xmax, ymin, ymax].iter().all(|b| b.is_finite());
        if !finite || xmax <= xmin || ymax <= ymin {
            return Err(Error::InvalidParameter(format!(
                "domain bounds must be finite with xmax > xmin and ymax > ymin \
                 (got ({xmin}, {xmax}) x ({ymin}, {ymax}))"
            )));
        }
        let lx = xmax - xmin;
        let ly = ymax - ymin;
        let two_pi = 2.0 * std::f64::consts::PI;
        let wavenumbers = |l: f64| -> Vec<f64> {
            (0..nx)
                .map(|i| two_pi * signed_mode(i, nx) as f64 / l)
                .collect()
        };
        Ok(Grid {
            data: Arc::new(GridData {
                nx,
                xmin,
                xmax,
                ymin,
                ymax,
                hx: lx / nx as f64,
                hy: ly / nx as f64,
                kx: wavenumbers(lx),
                ky: wavenumbers(ly),
            }),
        })
    }

    pub fn nx(&self) -> usize {
        self.data.nx
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        let d = &self.data;
        (d.xmin, d.xmax, d.ymin, d.ymax)
    }

    pub fn hx(&self) -> f64 {
        self.data.hx
    }

    pub fn hy(&self) -> f64 {
        self.data.hy
    }

    /// Area of the periodic rectangle.
    pub fn area(&self) -> f64 {
        (self.data.xmax - self.data.xmin) * (self.data.ymax - self.data.ymin)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.data.xmin + i as f64 * self.data.hx
    }

    pub fn y(&self, j: usize) -> f64 {
        self.data.ymin + j as f64 * self.data.hy
    }

    pub fn kx(&self) -> &[f64] {
        &self.data.kx
    }

    pub fn ky(&self) -> &[f64] {
        &self.data.ky
    }

    /// Squared wavenumber magnitude of mode `(i, j)`.
    pub fn k_sq(&self, i: usize, j: usize) -> f64 {
        let kx = self.data.kx[i];
        let ky = self.data.ky[j];
        kx * kx + ky * ky
    }

    /// True when both grids discretize the same rectangle at the same
    /// resolution.
    pub fn same_as(&self, other: &Grid) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
            || (self.nx() == other.nx() && self.bounds() == other.bounds())
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

/// Real-valued grid function with its grid.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Grid,
    values: Array2<f64>,
}

impl Field {
    pub fn zeros(grid: &Grid) -> Field {
        Field::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Field {
        let n = grid.nx();
        Field {
            grid: grid.clone(),
            values: Array2::from_elem((n, n), c),
        }
    }

    /// Samples `f(x, y)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Field {
        let n = grid.nx();
        let values = Array2::from_shape_fn((n, n), |(i, j)| f(grid.x(i), grid.y(j)));
        Field {
            grid: grid.clone(),
            values,
        }
    }

    pub fn from_values(grid: &Grid, values: Array2<f64>) -> Result<Field> {
        let n = grid.nx();
        if values.dim() != (n, n) {
            return Err(Error::GridMismatch(format!(
                "values of shape {:?} on a {n} x {n} grid",
                values.dim()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "field values must all be finite".to_string(),
            ));
        }
        Ok(Field {
            grid: grid.clone(),
            values,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    /// Applies `f` pointwise.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: self.values.mapv(&f),
        }
    }
}

fn assert_same_grid(a: &Field, b: &Field) {
    assert!(
        a.grid.same_as(&b.grid),
        "field arithmetic across different grids ({} vs {} points)",
        a.grid.nx(),
        b.grid.nx()
    );
}

impl std::ops::Add<&Field> for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        assert_same_grid(self, rhs);
        Field {
            grid: self.grid.clone(),
            values: &self.values + &rhs.values,
        }
    }
}

impl std::ops::Add<&Field> for Field {
    type Output = Field;
    fn add(mut self, rhs: &Field) -> Field {
        assert_same_grid(&self, rhs);
        self.values += &rhs.values;
        self
    }
}

impl std::ops::Sub<&Field> for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        assert_same_grid(self, rhs);
        Field {
            grid: self.grid.clone(),
            values: &self.values - &rhs.values,
        }
    }
}

impl std::ops::Sub<&Field> for Field {
    type Output = Field;
    fn sub(mut self, rhs: &Field) -> Field {
        assert_same_grid(&self, rhs);
        self.values -= &rhs.values;
        self
    }
}

impl std::ops::Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, c: f64) -> Field {
        Field {
            grid: self.grid.clone(),
            values: &self.values * c,
        }
    }
}

impl std::ops::Mul<f64> for Field {
    type Output = Field;
    fn mul(mut self, c: f64) -> Field {
        self.values *= c;
        self
    }
}

/// Fourier coefficients of a field, FFT-ordered, normalized so the zero mode
/// equals the mean of the field.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl Spectrum {
    pub(crate) fn new(grid: Grid, coeffs: Array2<Complex64>) -> Spectrum {
        debug_assert_eq!(coeffs.dim(), (grid.nx(), grid.nx()));
        Spectrum { grid, coeffs }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    /// Coefficient of the mode with signed indices `(s, l)`.
    pub fn mode(&self, s: i64, l: i64) -> Complex64 {
        let n = self.grid.nx();
        self.coeffs[[mode_index(s, n), mode_index(l, n)]]
    }

    /// Multiplies each coefficient by `sym(|k|^2)`.
    pub fn apply_symbol(&self, sym: impl Fn(f64) -> f64) -> Spectrum {
        let n = self.grid.nx();
        let coeffs = Array2::from_shape_fn((n, n), |(i, j)| {
            self.coeffs[[i, j]] * sym(self.grid.k_sq(i, j))
        });
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }

    /// Largest deviation from conjugate symmetry, `max |c(-s,-l) - conj(c(s,l))|`.
    /// Zero (to roundoff) exactly when the spectrum represents a real field.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let n = self.grid.nx();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s = signed_mode(i, n);
                let l = signed_mode(j, n);
                // -(-n/2) = n/2 maps back to the same index, forcing the
                // Nyquist entries of a real field to be real.
                let im = mode_index(-s, n);
                let jm = mode_index(-l, n);
                let diff = self.coeffs[[im, jm]] - self.coeffs[[i, j]].conj();
                worst = worst.max(diff.norm());
            }
        }
        worst
    }
}
