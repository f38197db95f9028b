//! CSV and Markdown emitters for convergence and timing tables.

use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::{ConvergenceRow, TimingRow};
use crate::error::Result;

fn write_rows<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let rows = r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

/// Columns: `mesh_exp,h,tau,l2_error,rate,iterations,wall_seconds,method,gamma,scheme`.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    write_rows(rows, out)
}

pub fn read_convergence_csv<R: Read>(input: R) -> Result<Vec<ConvergenceRow>> {
    read_rows(input)
}

/// Columns: `mesh_exp,n_time,m_space,method,gamma,wall_seconds,iterations`;
/// skipped runs have empty timing fields.
pub fn write_timing_csv<W: Write>(rows: &[TimingRow], out: W) -> Result<()> {
    write_rows(rows, out)
}

pub fn read_timing_csv<R: Read>(input: R) -> Result<Vec<TimingRow>> {
    read_rows(input)
}

pub fn convergence_markdown(rows: &[ConvergenceRow]) -> String {
    let mut s = String::new();
    s.push_str("| scheme | gamma | method | mesh | L2 error | rate | iterations | seconds |\n");
    s.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in rows {
        let rate = r.rate.map_or("-".to_string(), |x| format!("{x:.4}"));
        let _ = writeln!(
            s,
            "| {} | {} | {} | 1/2^{} | {:.4e} | {} | {} | {:.3} |",
            r.scheme, r.gamma, r.method, r.mesh_exp, r.l2_error, rate, r.iterations, r.wall_seconds
        );
    }
    s
}

pub fn timing_markdown(rows: &[TimingRow]) -> String {
    let mut s = String::new();
    s.push_str("| gamma | method | mesh | N | M | seconds | iterations |\n");
    s.push_str("|---|---|---|---|---|---|---|\n");
    for r in rows {
        let (secs, iters) = match (r.wall_seconds, r.iterations) {
            (Some(t), Some(i)) => (format!("{t:.4}"), i.to_string()),
            _ => ("skipped".to_string(), "-".to_string()),
        };
        let _ = writeln!(
            s,
            "| {} | {} | 1/2^{} | {} | {} | {} | {} |",
            r.gamma, r.method, r.mesh_exp, r.n_time, r.m_space, secs, iters
        );
    }
    s
}
