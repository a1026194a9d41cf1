//! Sweep orchestration and output emission.
//!
//! [`run`] evaluates the configured metric over the SNR grid with whichever
//! routes the config requests, then writes two files next to each other: a
//! CSV of the sweep and a plain matplotlib script that renders it. The CSV
//! starts with a `# key = value` provenance block carrying the full resolved
//! configuration and every derived quantity, so the experiment can be
//! reproduced from the output file alone. Writes are atomic (temp file in
//! the target directory, then rename), and a rerun of the same configuration
//! and seed produces byte-identical output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{ExperimentConfig, Method, MetricKind};
use crate::error::{Result, RfsoError};
use crate::mcsim::{run_point, McEstimate};

/// One evaluated grid point; absent entries were not requested.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub snr_db: f64,
    pub analytic: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<McEstimate>,
}

/// What [`run`] produced and where it landed.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub csv_path: PathBuf,
    pub plot_path: PathBuf,
    pub rows: Vec<SweepRow>,
}

/// Evaluates the experiment and writes the CSV and plot script.
pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    config.validate()?;
    let metric = config.mc_metric()?;
    let want_analytic = config.methods().contains(&Method::Analytic);
    let want_asymptotic = config.methods().contains(&Method::Asymptotic);
    let plan = if config.methods().contains(&Method::Mc) {
        Some(config.mc_plan()?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(config.snr_grid_db().len());
    for &snr_db in config.snr_grid_db() {
        let snr = 10f64.powf(snr_db / 10.0);
        let model = config.link_model(snr)?;
        rows.push(SweepRow {
            snr_db,
            analytic: match want_analytic {
                true => Some(metric.analytic(&model)?),
                false => None,
            },
            asymptotic: match want_asymptotic {
                true => Some(metric.asymptotic(&model)?),
                false => None,
            },
            mc: match &plan {
                Some(plan) => Some(run_point(&model, plan)?),
                None => None,
            },
        });
    }

    let csv_path = config.output().to_path_buf();
    write_atomic(&csv_path, &render_csv(config, &rows)?)?;
    let plot_path = csv_path.with_extension("py");
    write_atomic(&plot_path, &render_plot_script(config, &csv_path)?)?;
    Ok(RunOutput {
        csv_path,
        plot_path,
        rows,
    })
}

/// Nine significant digits, exponent notation, for every numeric cell.
fn sig9(value: f64) -> String {
    format!("{value:.8e}")
}

fn render_csv(config: &ExperimentConfig, rows: &[SweepRow]) -> Result<String> {
    let mut out = String::new();
    for (key, value) in config.provenance()? {
        let _ = writeln!(out, "# {key} = {value}");
    }
    out.push_str("snr_db,analytic,asymptotic,mc_value,mc_ci99\n");
    for row in rows {
        let cell = |v: Option<f64>| v.map(sig9).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            sig9(row.snr_db),
            cell(row.analytic),
            cell(row.asymptotic),
            cell(row.mc.as_ref().map(|m| m.value)),
            cell(row.mc.as_ref().map(|m| m.ci99_halfwidth)),
        );
    }
    Ok(out)
}

fn render_plot_script(config: &ExperimentConfig, csv_path: &Path) -> Result<String> {
    let csv_name = csv_path
        .file_name()
        .ok_or_else(|| RfsoError::Io(format!("output path {} has no file name", csv_path.display())))?
        .to_string_lossy()
        .into_owned();
    let metric = config.metric();
    let (ylabel, yscale) = match metric {
        MetricKind::Outage => ("outage probability", "log"),
        MetricKind::Bep => ("average bit error probability", "log"),
        MetricKind::Capacity => ("ergodic capacity (bits/s/Hz)", "linear"),
    };
    let ceiling = match metric {
        MetricKind::Capacity => {
            let hpa = config.impairment()?;
            hpa.ibo()
                .is_finite()
                .then(|| hpa.capacity_ceiling_bits())
        }
        _ => None,
    };

    let mut script = String::new();
    script.push_str("#!/usr/bin/env python3\n");
    let _ = writeln!(script, "# Renders {csv_name}; regenerate both by rerunning the sweep.");
    script.push_str(concat!(
        "import csv\n",
        "import pathlib\n\n",
        "import matplotlib.pyplot as plt\n\n",
    ));
    let _ = writeln!(script, "path = pathlib.Path(__file__).with_name({csv_name:?})");
    script.push_str(concat!(
        "with path.open(newline=\"\") as handle:\n",
        "    rows = [r for r in csv.DictReader(\n",
        "        line for line in handle if not line.startswith(\"#\"))]\n\n",
        "def column(name):\n",
        "    pairs = [(float(r[\"snr_db\"]), float(r[name])) for r in rows if r[name]]\n",
        "    return [p[0] for p in pairs], [p[1] for p in pairs]\n\n",
        "fig, ax = plt.subplots(figsize=(6.0, 4.2))\n",
        "for name, style in ((\"analytic\", \"-o\"), (\"asymptotic\", \"--\"), (\"mc_value\", \"s\")):\n",
        "    x, y = column(name)\n",
        "    if x:\n",
        "        if name == \"mc_value\":\n",
        "            ax.plot(x, y, style, mfc=\"none\", linestyle=\"none\", label=\"monte carlo\")\n",
        "        else:\n",
        "            ax.plot(x, y, style, label=name)\n",
    ));
    if let Some(value) = ceiling {
        let _ = writeln!(
            script,
            "ax.axhline({}, color=\"gray\", linewidth=0.8, label=\"capacity ceiling\")",
            sig9(value)
        );
    }
    let _ = writeln!(script, "ax.set_yscale({yscale:?})");
    let _ = writeln!(script, "ax.set_ylabel({ylabel:?})");
    script.push_str(concat!(
        "ax.set_xlabel(\"average SNR (dB)\")\n",
        "ax.grid(True, which=\"both\", alpha=0.3)\n",
        "ax.legend()\n",
        "fig.tight_layout()\n",
        "plt.savefig(path.with_suffix(\".png\"), dpi=160)\n",
    ));
    Ok(script)
}

/// Writes through a temporary sibling and renames into place.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| RfsoError::Io(format!("output path {} has no file name", path.display())))?;
    let mut temp_name = file_name.to_owned();
    temp_name.push(".tmp");
    let temp = path.with_file_name(temp_name);
    fs::write(&temp, contents).map_err(|e| RfsoError::Io(format!("{}: {e}", temp.display())))?;
    fs::rename(&temp, path).map_err(|e| RfsoError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
