//! Tabular results, CSV emission and gnuplot script generation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::Scenario;
use crate::error::{CliError, CliResult};

/// Result table: leading axis columns followed by metric columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub axis_columns: usize,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(axes: Vec<String>, metrics: &[&str]) -> Self {
        let axis_columns = axes.len();
        let mut header = axes;
        header.extend(metrics.iter().map(|s| s.to_string()));
        Table {
            header,
            axis_columns,
            rows: Vec::new(),
        }
    }

    pub fn metrics(&self) -> &[String] {
        &self.header[self.axis_columns..]
    }

    /// Keep the axis columns and the listed metrics, in the listed order.
    pub fn select(&mut self, outputs: &[String]) -> CliResult<()> {
        if outputs.is_empty() {
            return Ok(());
        }
        let mut keep: Vec<usize> = (0..self.axis_columns).collect();
        for name in outputs {
            let idx = self.header[self.axis_columns..]
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| {
                    CliError::Config(format!(
                        "unknown output '{name}' (available: {})",
                        self.metrics().join(", ")
                    ))
                })?;
            keep.push(idx + self.axis_columns);
        }
        self.header = keep.iter().map(|&i| self.header[i].clone()).collect();
        for row in &mut self.rows {
            *row = keep.iter().map(|&i| row[i]).collect();
        }
        Ok(())
    }

    /// CSV with a header row, 17 significant digits per value and LF line
    /// endings.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_value(*x)))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Write the CSV to `path`, creating missing parent directories.
    pub fn write_to_path(&self, path: &Path) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
        }
        let file = fs::File::create(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv(std::io::BufWriter::new(file))
            .map_err(|source| CliError::Csv {
                path: path.to_path_buf(),
                source,
            })
    }
}

pub fn format_value(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

/// Metric columns a plot script for `scenario` relies on.
pub fn expected_metrics(scenario: Scenario) -> &'static [&'static str] {
    match scenario {
        Scenario::Spectrum => &["nu1", "nu2", "nu3", "nu4"],
        Scenario::Gibbs => &["z11", "z22", "z33", "z44"],
        Scenario::Dephasing | Scenario::ThermalSweep => &["concurrence", "discord", "coherence"],
        Scenario::Charge => &["ergotropy", "power_instant", "capacity_basis", "capacity_unitary", "coherence"],
        Scenario::Grid2d => &["capacity", "coherence_max", "ergotropy_max", "power_max"],
    }
}

fn read_header(csv_path: &Path) -> CliResult<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(csv_path)
        .map_err(|source| CliError::Csv {
            path: csv_path.to_path_buf(),
            source,
        })?;
    let header = reader.headers().map_err(|source| CliError::Csv {
        path: csv_path.to_path_buf(),
        source,
    })?;
    Ok(header.iter().map(str::to_string).collect())
}

fn gp_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', "''"))
}

/// Write a gnuplot script next to `csv_path` (same stem, `.gp`) that plots
/// its columns: line plots for 1-D scenarios, one heatmap per metric for
/// `grid2d`. Only the header is read; no data is embedded.
pub fn emit_plot_script(csv_path: &Path, scenario: Scenario) -> CliResult<PathBuf> {
    let found = read_header(csv_path)?;
    let expected = expected_metrics(scenario);
    let missing: Vec<&str> = expected
        .iter()
        .copied()
        .filter(|m| !found.iter().any(|h| h == m))
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Config(format!(
            "{}: missing columns [{}]; expected [{}], found [{}]",
            csv_path.display(),
            missing.join(", "),
            expected.join(", "),
            found.join(", ")
        )));
    }
    let metric_cols: Vec<&String> = found
        .iter()
        .filter(|h| expected.contains(&h.as_str()) || h.as_str() == "discord")
        .collect();
    let axes: Vec<&String> = found.iter().filter(|h| !metric_cols.contains(h)).collect();

    let stem = csv_path.with_extension("");
    let stem = stem.to_string_lossy();
    let data = gp_quote(&csv_path.to_string_lossy());
    let mut s = format!(
        "# gnuplot script for the '{scenario}' table {data}\n\
         set datafile separator ','\n\
         set datafile columnheaders\n\
         set terminal pngcairo size 900,600\n"
    );

    if scenario == Scenario::Grid2d {
        if axes.len() < 2 {
            return Err(CliError::Config(format!(
                "{}: grid2d tables need two axis columns, found [{}]",
                csv_path.display(),
                found.join(", ")
            )));
        }
        let (x, y) = (axes[0], axes[1]);
        s += &format!("set xlabel {}\nset ylabel {}\nset view map\n", gp_quote(x), gp_quote(y));
        for m in &metric_cols {
            s += &format!(
                "set output {}\nset title {}\nplot {data} using (column({})):(column({})):(column({})) with image notitle\n",
                gp_quote(&format!("{stem}_{m}.png")),
                gp_quote(m),
                gp_quote(x),
                gp_quote(y),
                gp_quote(m)
            );
        }
    } else {
        let (x, legend) = match axes.len() {
            0 => (None, None),
            1 => (Some(axes[0]), None),
            _ => (Some(axes[axes.len() - 1]), Some(axes[axes.len() - 2])),
        };
        let xexpr = match x {
            Some(x) => format!("(column({}))", gp_quote(x)),
            None => "0".into(),
        };
        s += &format!(
            "set output {}\nset multiplot layout {},1\n",
            gp_quote(&format!("{stem}.png")),
            metric_cols.len()
        );
        if let Some(x) = x {
            s += &format!("set xlabel {}\n", gp_quote(x));
        }
        for m in &metric_cols {
            s += &format!("set ylabel {}\n", gp_quote(m));
            match legend {
                Some(l) => {
                    s += &format!(
                        "plot {data} using {xexpr}:(column({})):(column({})) with points pt 7 ps 0.3 lc palette title {}\n",
                        gp_quote(m),
                        gp_quote(l),
                        gp_quote(l)
                    )
                }
                None => s += &format!("plot {data} using {xexpr}:(column({})) with lines notitle\n", gp_quote(m)),
            }
        }
        s += "unset multiplot\n";
    }

    let script = csv_path.with_extension("gp");
    fs::write(&script, s).map_err(|source| CliError::Io {
        path: script.clone(),
        source,
    })?;
    Ok(script)
}
