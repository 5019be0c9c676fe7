//! CSV writers and readers. Floats are written with 17 significant digits so
//! that every file reads back bit-for-bit.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::diagnostics::CheckReport;
use crate::error::{Error, Result};
use crate::model::Profile;
use crate::semiwave::SemiWaveSolution;
use crate::solver::{SimState, Trajectory};

pub const SERIES_HEADER: [&str; 9] = [
    "t", "h", "g", "u_max", "v_max", "u_at_0", "v_at_0", "h_speed_est", "g_speed_est",
];
pub const SNAPSHOT_HEADER: [&str; 3] = ["x", "u", "v"];
pub const PROFILE_HEADER: [&str; 2] = ["y", "q"];
pub const REPORT_HEADER: [&str; 5] = ["clause", "target", "measured", "margin", "pass"];

/// Round-trip formatting: 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Writes a header and rows of already formatted fields.
pub fn write_table<S: AsRef<str>>(path: &Path, header: &[&str], rows: &[Vec<S>]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|s| s.as_ref()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_numeric(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|&x| fmt_f64(x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Header plus string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Every cell parsed as `f64`.
    pub fn numeric(&self) -> Result<Vec<Vec<f64>>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                r.iter()
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| Error::Parse {
                            line: i + 2,
                            msg: format!("not a number: `{s}`"),
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

pub fn read_table(path: &Path) -> Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(str::to_string).collect();
    let rows = r
        .records()
        .map(|rec| rec.map(|rec| rec.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()?;
    Ok(Table { header, rows })
}

fn read_expecting(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let t = read_table(path)?;
    if t.header != header {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{}: expected header {}, got {}", path.display(), header.join(","), t.header.join(",")),
        });
    }
    t.numeric()
}

/// One row per recorded sample. A single-species trajectory writes zeros in
/// the predator columns.
pub fn write_series_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let pick = |s: &[f64], i: usize| s.get(i).copied().unwrap_or(0.0);
    write_numeric(
        path,
        &SERIES_HEADER,
        (0..traj.times.len()).map(|i| {
            vec![
                traj.times[i],
                traj.h_series[i],
                pick(&traj.g_series, i),
                traj.umax_series[i],
                pick(&traj.vmax_series, i),
                traj.u0_series[i],
                pick(&traj.v0_series, i),
                traj.h_speed_series[i],
                pick(&traj.g_speed_series, i),
            ]
        }),
    )
}

pub fn read_series_csv(path: &Path) -> Result<Vec<[f64; 9]>> {
    read_expecting(path, &SERIES_HEADER)?
        .into_iter()
        .map(|r| r.try_into().map_err(|_| Error::Parse { line: 0, msg: "ragged row".into() }))
        .collect()
}

/// Prey grid with the predator interpolated onto it.
pub fn write_snapshot_csv(path: &Path, s: &SimState) -> Result<()> {
    write_numeric(path, &SNAPSHOT_HEADER, s.prey_x().into_iter().zip(&s.u).map(|(x, &u)| vec![x, u, s.v_at(x)]))
}

pub fn read_snapshot_csv(path: &Path) -> Result<Vec<[f64; 3]>> {
    Ok(read_expecting(path, &SNAPSHOT_HEADER)?
        .into_iter()
        .map(|r| [r[0], r[1], r[2]])
        .collect())
}

/// Writes the semi-wave profile `(y, q)`.
pub fn write_profile_csv(path: &Path, sol: &SemiWaveSolution) -> Result<()> {
    write_numeric(path, &PROFILE_HEADER, sol.y.iter().zip(&sol.q).map(|(&y, &q)| vec![y, q]))
}

/// Reads an initial profile from a two-column file: uniform positions from 0
/// to the front, then values. The header text is not checked.
pub fn read_profile_csv(path: &Path) -> Result<Profile> {
    let t = read_table(path)?;
    let rows = t.numeric()?;
    if rows.iter().any(|r| r.len() != 2) {
        return Err(Error::Parse { line: 0, msg: format!("{}: expected two columns", path.display()) });
    }
    let n = rows.len();
    if n < 3 {
        return Err(Error::InvalidInitialData(format!("{}: too few rows", path.display())));
    }
    let radius = rows[n - 1][0];
    for (i, r) in rows.iter().enumerate() {
        let x = radius * i as f64 / (n - 1) as f64;
        if (r[0] - x).abs() > 1e-9 * radius.max(1.0) {
            return Err(Error::InvalidInitialData(format!(
                "{}: positions must be uniform from 0 (row {} has x = {})",
                path.display(),
                i + 2,
                r[0]
            )));
        }
    }
    Profile::from_samples(radius, rows.into_iter().map(|r| r[1]).collect())
}

pub fn write_initial_profile_csv(path: &Path, p: &Profile) -> Result<()> {
    let n = p.values().len();
    let dx = p.spacing();
    write_numeric(
        path,
        &["x", "value"],
        p.values().iter().enumerate().map(|(i, &v)| {
            let x = if i == n - 1 { p.radius() } else { i as f64 * dx };
            vec![x, v]
        }),
    )
}

pub fn write_report_csv(path: &Path, report: &CheckReport) -> Result<()> {
    let rows: Vec<Vec<String>> = report
        .clauses
        .iter()
        .map(|c| {
            vec![
                c.clause.clone(),
                fmt_f64(c.target),
                fmt_f64(c.measured),
                fmt_f64(c.margin),
                c.pass_label().to_string(),
            ]
        })
        .collect();
    write_table(path, &REPORT_HEADER, &rows)
}

/// Aligned `key = value` text.
pub fn key_value_text(entries: &[(&str, String)]) -> String {
    let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in entries {
        out.push_str(&format!("{k:<width$} = {v}\n"));
    }
    out
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    File::create(path)?.write_all(text.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn profile_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("u0.csv");
        let p = Profile::cosine(2.5, 0.7, 33).unwrap();
        write_initial_profile_csv(&path, &p).unwrap();
        assert_eq!(read_profile_csv(&path).unwrap(), p);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_text(&path, "a,b,c\n1,2,3\n").unwrap();
        assert!(matches!(read_snapshot_csv(&path), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn floats_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }
}
