use std::sync::{Mutex, OnceLock};

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut planner = planner().lock().expect("fft planner lock");
    if forward {
        planner.plan_fft_forward(n)
    } else {
        planner.plan_fft_inverse(n)
    }
}

fn transform_rows(a: &mut Array2<Complex64>, plan: &dyn Fft<f64>) {
    for mut row in a.outer_iter_mut() {
        plan.process(row.as_slice_mut().expect("contiguous row"));
    }
}

/// Unnormalized 2D DFT over both axes. `forward` uses the `e^{-ikx}` kernel,
/// the inverse uses `e^{+ikx}`; neither divides by the grid size.
pub(crate) fn dft2(values: Array2<Complex64>, forward: bool) -> Array2<Complex64> {
    let n = values.nrows();
    debug_assert_eq!(values.ncols(), n);
    let plan = plan(n, forward);
    let mut a = values;
    transform_rows(&mut a, plan.as_ref());
    // The transpose of a C-order array is F-order contiguous and to_owned
    // would keep it that way, so force row-contiguous storage explicitly.
    let mut b = a.t().as_standard_layout().into_owned();
    transform_rows(&mut b, plan.as_ref());
    b.t().as_standard_layout().into_owned()
}
