//! CSV and plot-script emission. Floats carry 12 significant digits, lines
//! end in LF.

use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

pub fn float(x: f64) -> String {
    format!("{x:.11e}")
}

/// Writes a header and rows of preformatted fields.
pub fn write_csv<W: Write>(out: W, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let fail = |e: csv::Error| CliError::Io {
        path: "csv output".into(),
        source: std::io::Error::other(e.to_string()),
    };
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    w.flush().map_err(|e| CliError::io("csv output", e))
}

/// Writes CSV to `path`, or to `stdout` when no path is given.
pub fn emit_csv<W: Write>(
    path: Option<&Path>,
    stdout: &mut W,
    header: &[&str],
    rows: &[Vec<String>],
) -> CliResult<()> {
    match path {
        Some(p) => {
            let f = std::fs::File::create(p).map_err(|e| CliError::io(p.display().to_string(), e))?;
            write_csv(std::io::BufWriter::new(f), header, rows)
        }
        None => write_csv(stdout, header, rows),
    }
}

/// A matplotlib script that plots column `y` of `csv` against column `x`.
pub fn plot_script(csv: &Path, x: &str, y: &str, title: &str, log_log: bool) -> String {
    let csv = csv.display().to_string().replace('\\', "\\\\").replace('"', "\\\"");
    let scale = if log_log {
        "ax.set_xscale(\"log\")\nax.set_yscale(\"log\")\n"
    } else {
        ""
    };
    format!(
        r#"# Generated by bangbang. Run with: python3 <this file>
import csv

import matplotlib.pyplot as plt

with open("{csv}", newline="") as f:
    rows = list(csv.DictReader(f))

xs = [float(r["{x}"]) for r in rows]
ys = [float(r["{y}"]) for r in rows]

fig, ax = plt.subplots()
ax.plot(xs, ys, marker=".")
ax.set_xlabel("{x}")
ax.set_ylabel("{y}")
ax.set_title("{title}")
{scale}fig.tight_layout()
plt.show()
"#
    )
}

pub fn write_plot(path: &Path, script: &str) -> CliResult<()> {
    std::fs::write(path, script).map_err(|e| CliError::io(path.display().to_string(), e))
}
