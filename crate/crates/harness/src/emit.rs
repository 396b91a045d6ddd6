//! CSV and JSON emission with 17-significant-digit floats, enough to
//! round-trip every `f64` exactly.

use std::io::Write;
use std::path::Path;

use crate::config::{OutputFormat, OutputSpec};
use crate::error::{HarnessError, Result};
use crate::sweep::{TimeTrace, TraceRow};

/// Fixed CSV schema for traces; `exp_Sz` is left blank when not applicable.
pub const TRACE_CSV_HEADER: &str = "t,lhs,rhs_comm,rhs_cs,slack,delta_A,delta_dAdt,exp_Sz";

/// Render with 17 significant digits (1 leading + 16 fractional), which
/// uniquely determines the underlying bits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trace_to_csv(trace: &TimeTrace) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for row in &trace.rows {
        let exp_sz = row.exp_sz.map(format_float).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_float(row.t),
            format_float(row.lhs),
            format_float(row.rhs_comm),
            format_float(row.rhs_cs),
            format_float(row.slack),
            format_float(row.delta_a),
            format_float(row.delta_dadt),
            exp_sz,
        ));
    }
    out
}

/// Parse a trace produced by [`trace_to_csv`]. The `degenerate` flag is
/// derived from the parsed `lhs`, matching how reports set it.
pub fn parse_trace_csv(text: &str) -> Result<TimeTrace> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| HarnessError::Config("empty trace: missing header".into()))?;
    if header != TRACE_CSV_HEADER {
        return Err(HarnessError::Config(format!("unexpected trace header: {header}")));
    }
    let mut rows = Vec::new();
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(HarnessError::Config(format!(
                "trace line {}: expected 8 fields, got {}",
                lineno + 2,
                fields.len()
            )));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| HarnessError::Config(format!("trace line {}: {e}", lineno + 2)))
        };
        let lhs = num(fields[1])?;
        rows.push(TraceRow {
            t: num(fields[0])?,
            lhs,
            rhs_comm: num(fields[2])?,
            rhs_cs: num(fields[3])?,
            slack: num(fields[4])?,
            delta_a: num(fields[5])?,
            delta_dadt: num(fields[6])?,
            exp_sz: if fields[7].is_empty() { None } else { Some(num(fields[7])?) },
            degenerate: lhs < qflux_core::bounds::DEGENERATE_LHS_TOL,
        });
    }
    Ok(TimeTrace { rows })
}

pub fn to_pretty_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map_err(|e| HarnessError::Config(format!("serialization failed: {e}")))
}

/// Write `payload` to the configured path, or stdout when no path is given.
pub fn write_payload(output: &OutputSpec, payload: &str) -> Result<()> {
    match &output.path {
        Some(path) => write_file(path, payload),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
            if !payload.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn write_file(path: &Path, payload: &str) -> Result<()> {
    std::fs::write(path, payload)?;
    Ok(())
}

/// Render a trace in the requested format.
pub fn render_trace(trace: &TimeTrace, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(trace_to_csv(trace)),
        OutputFormat::Json => to_pretty_json(trace),
    }
}
