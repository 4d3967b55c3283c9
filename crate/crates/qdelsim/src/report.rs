//! Report writers. Every writer is deterministic: the same run config and
//! seed produce byte-identical output. Wall-clock times never appear in
//! reports.

use std::io::{self, Write};

use serde::Serialize;

use crate::pipeline::{TrialReport, VerifySummary};
use crate::rate::{to_decimal, RateRow};

/// Significant digits used for decimal rate columns; exact
/// numerator/denominator columns accompany them.
pub const RATE_SIG_DIGITS: usize = 12;

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a VerifySummary,
}

/// Writes a verification run as NDJSON: one line per trial, then a final
/// summary line.
pub fn write_verify_report(
    w: &mut (impl Write + ?Sized),
    reports: &[TrialReport],
    summary: &VerifySummary,
) -> io::Result<()> {
    for report in reports {
        serde_json::to_writer(&mut *w, report)?;
        writeln!(w)?;
    }
    serde_json::to_writer(&mut *w, &SummaryLine { summary })?;
    writeln!(w)
}

/// Writes the rate-convergence table as CSV. Rates appear both as
/// 12-significant-digit decimals and as exact numerator/denominator
/// pairs; infeasible parameter rows are kept but marked in the status
/// column.
pub fn write_rates_csv(w: &mut (impl Write + ?Sized), rows: &[RateRow]) -> io::Result<()> {
    writeln!(
        w,
        "E,N,K_C,K_D,rate,lower,upper,rate_num,rate_den,lower_num,lower_den,upper_num,upper_den,status"
    )?;
    for row in rows {
        let status = if row.feasible { "ok" } else { "infeasible" };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.e,
            row.n,
            row.k_c,
            row.k_d,
            to_decimal(&row.rate, RATE_SIG_DIGITS),
            to_decimal(&row.lower, RATE_SIG_DIGITS),
            to_decimal(&row.upper, RATE_SIG_DIGITS),
            row.rate.numer(),
            row.rate.denom(),
            row.lower.numer(),
            row.lower.denom(),
            row.upper.numer(),
            row.upper.denom(),
            status
        )?;
    }
    Ok(())
}

/// Writes a single-trial simulation as pretty JSON.
pub fn write_simulate_report(w: &mut (impl Write + ?Sized), report: &TrialReport) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, report)?;
    writeln!(w)
}
