//! CSV emission. Every float is written with 17 significant digits so the
//! files round-trip to the exact doubles; files are written to a temporary
//! sibling and renamed into place.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::experiments::ErrorRow;
use crate::sav::EnergyRecord;

/// Round-trip-exact float formatting.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_rate(rate: Option<f64>) -> String {
    rate.map(fmt_f64).unwrap_or_default()
}

/// Writes `contents` to `path` atomically (temp file + rename).
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let file_name = path.file_name().and_then(|n| n.to_str()).ok_or_else(|| {
        crate::error::Error::InvalidParameter(format!(
            "output path {} has no file name",
            path.display()
        ))
    })?;
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// `energy.csv`: one row per recorded step; `H_drop` is the backward
/// difference H^{n-1} - H^n, zero on the first row.
pub fn write_energy_csv(path: &Path, ledger: &[EnergyRecord]) -> Result<()> {
    let mut out = String::from("step,time,H,kinetic,fractional,sav,dissipation_rhs,H_drop\n");
    for (i, rec) in ledger.iter().enumerate() {
        let drop = if i == 0 { 0.0 } else { ledger[i - 1].h - rec.h };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            rec.n,
            fmt_f64(rec.t),
            fmt_f64(rec.h),
            fmt_f64(rec.kinetic),
            fmt_f64(rec.fractional),
            fmt_f64(rec.sav),
            fmt_f64(rec.dissipation_rhs),
            fmt_f64(drop)
        )
        .expect("write to string");
    }
    write_atomic(path, &out)
}

/// `errors_time.csv`: L-infinity errors of u and v plus |e_r|, with rate
/// columns left empty where undefined.
pub fn write_time_csv(path: &Path, rows: &[ErrorRow]) -> Result<()> {
    let mut out = String::from("tau,e_u_inf,rate_u,e_v_inf,rate_v,e_r,rate_r\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(row.param),
            fmt_f64(row.e_u_inf),
            fmt_rate(row.rate_u_inf),
            fmt_f64(row.e_v_inf),
            fmt_rate(row.rate_v_inf),
            fmt_f64(row.e_r_abs),
            fmt_rate(row.rate_r)
        )
        .expect("write to string");
    }
    write_atomic(path, &out)
}

/// `errors_space.csv`: the fractional seminorm of e_u plus the L2 errors of
/// u and v against the truncated reference.
pub fn write_space_csv(path: &Path, rows: &[ErrorRow]) -> Result<()> {
    let mut out = String::from("N,e_u_seminorm,rate_semi,e_u_l2,rate_u,e_v_l2,rate_v\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.param.round() as i64,
            fmt_f64(row.e_u_seminorm),
            fmt_rate(row.rate_u_seminorm),
            fmt_f64(row.e_u_l2),
            fmt_rate(row.rate_u_l2),
            fmt_f64(row.e_v_l2),
            fmt_rate(row.rate_v_l2)
        )
        .expect("write to string");
    }
    write_atomic(path, &out)
}

/// File name for one damping setting of an energy study.
pub fn energy_study_path(outdir: &Path, gamma1: f64, gamma2: f64) -> PathBuf {
    outdir.join(format!("energy_{gamma1}_{gamma2}.csv"))
}
