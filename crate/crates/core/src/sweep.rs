//! Backhaul sweeps, CSV output and gnuplot script generation.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::{BoundEvaluator, BoundReport, OptimizerOptions};
use crate::error::{Error, Result};
use crate::model::ChannelConfig;

pub const CSV_HEADER: &str =
    "C,simple_cutset,cutset_102,theorem1,bound_101_a,bound_101_b,argmax_rho_102,argmax_rho_101_a,argmax_rho_101_b";

/// Slack for the per-row ordering check. The ordering holds by construction,
/// so anything beyond rounding is an optimizer bug.
pub const ORDERING_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tie {
    /// `C1 = C2 = C`.
    C1EqualsC2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub base: ChannelConfig,
    pub c_min: f64,
    pub c_max: f64,
    pub step: f64,
    pub tie: Tie,
}

impl SweepSpec {
    pub fn new(base: ChannelConfig, c_min: f64, c_max: f64, step: f64) -> Result<Self> {
        base.validate()?;
        if !(c_min.is_finite() && c_max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidSweep("bounds and step must be finite".into()));
        }
        if c_min < 0.0 {
            return Err(Error::InvalidSweep(format!("c_min = {c_min} must be non-negative")));
        }
        if c_min > c_max {
            return Err(Error::InvalidSweep(format!("c_min = {c_min} exceeds c_max = {c_max}")));
        }
        if step <= 0.0 {
            return Err(Error::InvalidSweep(format!("step = {step} must be positive")));
        }
        Ok(SweepSpec {
            base,
            c_min,
            c_max,
            step,
            tie: Tie::C1EqualsC2,
        })
    }

    /// `c_min, c_min + step, …` up to `c_max` (with a little slack for
    /// accumulated rounding in the step count).
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.c_max - self.c_min) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.c_min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub c: f64,
    pub simple_cutset: f64,
    pub cutset_102: f64,
    pub bound_101_a: f64,
    pub bound_101_b: f64,
    pub theorem1: f64,
    pub argmax_rho_102: f64,
    pub argmax_rho_101_a: f64,
    pub argmax_rho_101_b: f64,
}

impl SweepRow {
    pub fn from_report(c: f64, r: &BoundReport) -> Self {
        SweepRow {
            c,
            simple_cutset: r.simple_cutset,
            cutset_102: r.cutset_102,
            bound_101_a: r.bound_101_a,
            bound_101_b: r.bound_101_b,
            theorem1: r.theorem1,
            argmax_rho_102: r.argmax_rho_102.value(),
            argmax_rho_101_a: r.argmax_rho_101_a.value(),
            argmax_rho_101_b: r.argmax_rho_101_b.value(),
        }
    }

    pub fn check_ordering(&self) -> Result<()> {
        if self.theorem1 > self.cutset_102 + ORDERING_SLACK {
            return Err(Error::InvariantViolation {
                c: self.c,
                detail: format!("theorem1 {} > cutset_102 {}", self.theorem1, self.cutset_102),
            });
        }
        if self.cutset_102 > self.simple_cutset + ORDERING_SLACK {
            return Err(Error::InvariantViolation {
                c: self.c,
                detail: format!("cutset_102 {} > simple_cutset {}", self.cutset_102, self.simple_cutset),
            });
        }
        Ok(())
    }

    /// One CSV line (no terminator) in [`CSV_HEADER`] column order.
    pub fn csv_line(&self) -> String {
        // +0.0 turns -0.0 into 0.0 so ties print identically
        [
            self.c,
            self.simple_cutset,
            self.cutset_102,
            self.theorem1,
            self.bound_101_a,
            self.bound_101_b,
            self.argmax_rho_102,
            self.argmax_rho_101_a,
            self.argmax_rho_101_b,
        ]
        .iter()
        .map(|v| format!("{:.6}", v + 0.0))
        .map(|s| if s == "-0.000000" { "0.000000".to_string() } else { s })
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Evaluates every sweep point; rows come back in ascending `C` whatever the
/// evaluation order.
pub fn run_sweep(spec: &SweepSpec, opts: &OptimizerOptions) -> Result<Vec<SweepRow>> {
    let evaluator = BoundEvaluator::new(&spec.base, opts)?;
    evaluator.prefill();
    let rows = spec
        .points()
        .par_iter()
        .map(|&c| {
            let report = evaluator.report(c, c)?;
            Ok(SweepRow::from_report(c, &report))
        })
        .collect::<Result<Vec<_>>>()?;
    for row in &rows {
        row.check_ordering()?;
    }
    Ok(rows)
}

/// Writes header and rows with LF line endings, re-checking the ordering of
/// every row first.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut out: W) -> Result<()> {
    for row in rows {
        row.check_ordering()?;
    }
    let mut text = String::with_capacity(64 * (rows.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for row in rows {
        text.push_str(&row.csv_line());
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// Human-readable report for a single configuration.
pub fn format_report(cfg: &ChannelConfig, r: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "channel: a = {}, b = {}, P1 = {}, P2 = {}, C1 = {}, C2 = {}",
        cfg.a, cfg.b, cfg.p1, cfg.p2, cfg.c1, cfg.c2
    );
    let _ = writeln!(s, "simple_cutset  {:>10.6} bits", r.simple_cutset);
    let _ = writeln!(
        s,
        "cutset_102     {:>10.6} bits  (rho = {:.6})",
        r.cutset_102,
        r.argmax_rho_102.value() + 0.0
    );
    let _ = writeln!(
        s,
        "bound_101_a    {:>10.6} bits  (rho = {:.6})",
        r.bound_101_a,
        r.argmax_rho_101_a.value() + 0.0
    );
    let _ = writeln!(
        s,
        "bound_101_b    {:>10.6} bits  (rho = {:.6})",
        r.bound_101_b,
        r.argmax_rho_101_b.value() + 0.0
    );
    let _ = writeln!(s, "theorem1       {:>10.6} bits", r.theorem1);
    s
}

/// Reads a sweep CSV, checks it against [`CSV_HEADER`], and writes a gnuplot
/// script drawing the two-cut, four-cut and strengthened bounds against `C`.
/// Returns the script text.
pub fn emit_plot_script(csv_path: &Path, out_path: &Path) -> Result<String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(csv_path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", csv_path.display())))?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let expected: Vec<&str> = CSV_HEADER.split(',').collect();
    if header != expected {
        let missing: Vec<&str> = expected
            .iter()
            .copied()
            .filter(|col| !header.iter().any(|h| h == col))
            .collect();
        return Err(Error::Schema(if missing.is_empty() {
            format!("columns out of order in {}", csv_path.display())
        } else {
            format!("{} lacks columns {}", csv_path.display(), missing.join(", "))
        }));
    }
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record?;
        for field in record.iter() {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Schema(format!("non-numeric field `{field}` in data row {}", rows + 1)))?;
        }
        rows += 1;
    }

    let column = |name: &str| expected.iter().position(|c| *c == name).unwrap() + 1;
    let data = csv_path.display().to_string().replace('\'', "''");
    let image = out_path.with_extension("png").display().to_string().replace('\'', "''");

    let mut s = String::new();
    let _ = writeln!(s, "# gnuplot script generated by diamond-bounds");
    let _ = writeln!(s, "set terminal pngcairo size 900,600");
    let _ = writeln!(s, "set output '{image}'");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set xlabel 'C (bits per channel use)'");
    let _ = writeln!(s, "set ylabel 'sum rate (bits per channel use)'");
    let _ = writeln!(s, "set key bottom right");
    let _ = writeln!(s, "set grid");
    if rows == 0 {
        let _ = writeln!(s, "# no data rows in '{data}'; nothing to plot");
    } else {
        let _ = writeln!(
            s,
            "plot '{data}' skip 1 using {c}:{simple} with lines lw 2 title 'two-cut bound', \\",
            c = column("C"),
            simple = column("simple_cutset"),
        );
        let _ = writeln!(
            s,
            "     '' skip 1 using {c}:{four} with linespoints pt 6 title 'four-cut bound', \\",
            c = column("C"),
            four = column("cutset_102"),
        );
        let _ = writeln!(
            s,
            "     '' skip 1 using {c}:{strong} with linespoints pt 12 title 'strengthened bound'",
            c = column("C"),
            strong = column("theorem1"),
        );
    }
    std::fs::write(out_path, &s).map_err(|e| Error::Io(format!("cannot write {}: {e}", out_path.display())))?;
    Ok(s)
}
