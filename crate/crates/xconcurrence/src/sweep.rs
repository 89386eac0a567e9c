//! Grid sweeps over damping probability and system size, with optional
//! cross-verification and deterministic CSV output.
//!
//! [`decay_curves`] evaluates the signed decay law `Q_N(P)` of the standard
//! GHZ state on a probability grid for several qubit counts at once; with
//! verification enabled it also evolves the explicit X-matrix through the
//! channel machinery at every grid point (for sizes small enough to store)
//! and refuses to return silently mismatching data. [`critical_table`]
//! tabulates sudden-death probabilities over a range of sizes and initial
//! coherences.
//!
//! The CSV writers format every float as `{:.16e}` (17 significant digits,
//! lossless for f64) with LF line endings, so reruns are bit-identical.

use std::io::Write;

use crate::channels::{damp, DampingSpec};
use crate::ghz::{critical_p_tan, ghz_xmatrix, q_value};
use crate::{Error, Result};

/// Largest size simulated for verification; beyond this only the closed
/// form is evaluated.
pub const MAX_SIM_QUBITS: u32 = 12;

const VERIFY_TOL: f64 = 1e-9;

/// `n` evenly spaced points from `lo` to `hi` inclusive, endpoints exact.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if !lo.is_finite() || !hi.is_finite() || lo >= hi {
        return Err(Error::Domain(format!(
            "linspace needs finite lo < hi, got {lo}..{hi}"
        )));
    }
    if n < 2 {
        return Err(Error::Domain(format!(
            "linspace needs at least 2 points, got {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    grid[0] = lo;
    grid[n - 1] = hi;
    Ok(grid)
}

/// Decay-law values on a probability grid, one row per qubit count.
///
/// `q[i][j]` is the signed `Q_{n_list[i]}(grid[j])`; `sim` holds simulated
/// concurrences (clamped at zero by construction) for the rows that were
/// verified against the channel machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayCurves {
    pub n_list: Vec<u32>,
    pub alpha: f64,
    pub grid: Vec<f64>,
    pub q: Vec<Vec<f64>>,
    pub sim: Vec<(u32, Vec<f64>)>,
}

/// Sudden-death probabilities over `n_lo..=n_hi` (rows) for each initial
/// coherence in `tan_list` (columns).
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTable {
    pub n_values: Vec<u32>,
    pub tan_list: Vec<f64>,
    pub pc: Vec<Vec<f64>>,
    pub finite: Vec<Vec<bool>>,
}

/// Map `f` over the grid, splitting it into contiguous chunks across
/// `threads` scoped workers. The output is identical to the serial result;
/// only wall time changes.
fn par_map_grid<F>(grid: &[f64], threads: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if threads <= 1 || grid.len() <= 1 {
        return grid.iter().map(|&p| f(p)).collect();
    }
    let chunk = grid.len().div_ceil(threads);
    let f = &f;
    let chunk_results: Vec<Result<Vec<f64>>> = std::thread::scope(|s| {
        let handles: Vec<_> = grid
            .chunks(chunk)
            .map(|slice| s.spawn(move || slice.iter().map(|&p| f(p)).collect()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut out = Vec::with_capacity(grid.len());
    for r in chunk_results {
        out.extend(r?);
    }
    Ok(out)
}

/// Evaluate `Q_N(P)` for every `N` in `n_list` on `grid`.
///
/// With `verify` set, rows with `N <=` [`MAX_SIM_QUBITS`] are additionally
/// simulated by damping the explicit GHZ X-matrix at every grid point; a
/// gap beyond `1e-9` between `max(0, Q)` and the simulated concurrence is
/// an [`Error::VerificationMismatch`]. `threads <= 1` runs serially.
pub fn decay_curves(
    n_list: &[u32],
    alpha: f64,
    grid: &[f64],
    verify: bool,
    threads: usize,
) -> Result<DecayCurves> {
    if n_list.is_empty() {
        return Err(Error::Domain("decay_curves needs at least one size".into()));
    }
    if grid.is_empty() {
        return Err(Error::Domain("decay_curves needs a nonempty grid".into()));
    }
    for &p in grid {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::Range {
                name: "grid probability",
                value: p,
                lo: 0.0,
                hi: 1.0,
            });
        }
    }
    let mut q = Vec::with_capacity(n_list.len());
    let mut sim = Vec::new();
    for &n in n_list {
        let row = par_map_grid(grid, threads, |p| q_value(n, alpha, p))?;
        if verify && n <= MAX_SIM_QUBITS {
            let x = ghz_xmatrix(n, 0, alpha)?;
            let x = &x;
            let sim_row = par_map_grid(grid, threads, move |p| {
                Ok(damp(x, &DampingSpec::uniform(n, p)?)?.gm_concurrence().value)
            })?;
            for ((&p, &qv), &cv) in grid.iter().zip(&row).zip(&sim_row) {
                if (qv.max(0.0) - cv).abs() > VERIFY_TOL {
                    return Err(Error::VerificationMismatch(format!(
                        "N = {n}, P = {p}: closed form gives {}, simulation gives {cv}",
                        qv.max(0.0)
                    )));
                }
            }
            sim.push((n, sim_row));
        }
        q.push(row);
    }
    Ok(DecayCurves {
        n_list: n_list.to_vec(),
        alpha,
        grid: grid.to_vec(),
        q,
        sim,
    })
}

/// Tabulate the sudden-death probability for `N` in `n_lo..=n_hi` and each
/// initial coherence in `tan_list`.
pub fn critical_table(n_lo: u32, n_hi: u32, tan_list: &[f64]) -> Result<CriticalTable> {
    if n_lo < 2 || n_hi < n_lo {
        return Err(Error::Domain(format!(
            "critical_table needs 2 <= n_lo <= n_hi, got {n_lo}..={n_hi}"
        )));
    }
    if tan_list.is_empty() {
        return Err(Error::Domain(
            "critical_table needs at least one tangent value".into(),
        ));
    }
    let n_values: Vec<u32> = (n_lo..=n_hi).collect();
    let mut pc = Vec::with_capacity(n_values.len());
    let mut finite = Vec::with_capacity(n_values.len());
    for &n in &n_values {
        let mut pc_row = Vec::with_capacity(tan_list.len());
        let mut fin_row = Vec::with_capacity(tan_list.len());
        for &t in tan_list {
            let c = critical_p_tan(n, t)?;
            pc_row.push(c.value);
            fin_row.push(c.finite_lifetime);
        }
        pc.push(pc_row);
        finite.push(fin_row);
    }
    Ok(CriticalTable {
        n_values,
        tan_list: tan_list.to_vec(),
        pc,
        finite,
    })
}

/// CSV for [`DecayCurves`]: header `P,Q_N{n},...` with a `Csim_N{n}` column
/// after each verified row's analytic column.
pub fn write_decay_csv<W: Write>(curves: &DecayCurves, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Domain(format!("CSV write failed: {e}"));
    let mut header = String::from("P");
    for &n in &curves.n_list {
        header.push_str(&format!(",Q_N{n}"));
        if curves.sim.iter().any(|&(m, _)| m == n) {
            header.push_str(&format!(",Csim_N{n}"));
        }
    }
    header.push('\n');
    w.write_all(header.as_bytes()).map_err(io)?;
    for (j, &p) in curves.grid.iter().enumerate() {
        let mut line = format!("{p:.16e}");
        for (i, &n) in curves.n_list.iter().enumerate() {
            line.push_str(&format!(",{:.16e}", curves.q[i][j]));
            if let Some((_, sim_row)) = curves.sim.iter().find(|&&(m, _)| m == n) {
                line.push_str(&format!(",{:.16e}", sim_row[j]));
            }
        }
        line.push('\n');
        w.write_all(line.as_bytes()).map_err(io)?;
    }
    Ok(())
}

/// CSV for [`CriticalTable`]: header `N,Pc_tan{t},finite_tan{t},...`; the
/// finite-lifetime flag is written as 1 or 0.
pub fn write_critical_csv<W: Write>(table: &CriticalTable, mut w: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Domain(format!("CSV write failed: {e}"));
    let mut header = String::from("N");
    for &t in &table.tan_list {
        header.push_str(&format!(",Pc_tan{t},finite_tan{t}"));
    }
    header.push('\n');
    w.write_all(header.as_bytes()).map_err(io)?;
    for (i, &n) in table.n_values.iter().enumerate() {
        let mut line = format!("{n}");
        for j in 0..table.tan_list.len() {
            line.push_str(&format!(
                ",{:.16e},{}",
                table.pc[i][j],
                u8::from(table.finite[i][j])
            ));
        }
        line.push('\n');
        w.write_all(line.as_bytes()).map_err(io)?;
    }
    Ok(())
}

pub fn decay_csv_string(curves: &DecayCurves) -> String {
    let mut buf = Vec::new();
    write_decay_csv(curves, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn critical_csv_string(table: &CriticalTable) -> String {
    let mut buf = Vec::new();
    write_critical_csv(table, &mut buf).expect("in-memory write");
    String::from_utf8(buf).expect("CSV is UTF-8")
}
