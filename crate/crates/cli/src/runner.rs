//! Execution of one experiment config: run the analysis, emit artifacts.

use std::path::Path;

use anyhow::{anyhow, Context, Result};

use hilbert_dyn::conjecture::{conjecture_report, ConjectureReport};
use hilbert_dyn::dynamics::iterate;
use hilbert_dyn::geometry::{ConvexBody, Point};
use hilbert_dyn::maps::SemicontractionSpec;

use crate::config::ExperimentConfig;
use crate::emit;

/// Everything `run` derives from a parsed config before touching the
/// filesystem. Construction failures here are config errors (exit 1).
pub struct PreparedRun {
    pub config: ExperimentConfig,
    pub body: ConvexBody,
    pub map: SemicontractionSpec,
    pub start: Point,
}

pub fn prepare(config: ExperimentConfig) -> Result<PreparedRun> {
    let body = config.body.build()?;
    let map = config.map.build(&body, config.seed)?;
    let start = config.start_point()?;
    if start.dim() != body.dim() {
        anyhow::bail!(
            "start point dimension {} does not match body dimension {}",
            start.dim(),
            body.dim()
        );
    }
    Ok(PreparedRun { config, body, map, start })
}

/// Runs the analysis and writes `orbit.csv`, `report.json`, and (planar
/// bodies, when requested) `orbit.svg` into `out_dir`. Failures here are
/// runtime errors (exit 2).
pub fn execute(run: &PreparedRun, out_dir: &Path) -> Result<ConjectureReport> {
    let rc = run.config.report_config();
    let report = conjecture_report(&run.map, &run.body, &run.start, &rc)
        .map_err(|e| anyhow!("analysis failed: {e}"))?;
    // the report iterates internally; rebuild the identical orbit for export
    let orbit = iterate(&run.map, &run.start, &run.body, rc.max_iter, rc.conv)
        .map_err(|e| anyhow!("orbit export failed: {e}"))?;

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    if run.config.emit.csv {
        std::fs::write(out_dir.join("orbit.csv"), emit::orbit_csv(&orbit, run.body.dim()))
            .context("writing orbit.csv")?;
    }
    if run.config.emit.json {
        let value = emit::report_json(&report, &run.config, &run.config.run_name());
        std::fs::write(out_dir.join("report.json"), value.render())
            .context("writing report.json")?;
    }
    if run.config.emit.svg && run.body.dim() == 2 {
        let svg = emit::orbit_svg(&run.body, &orbit, &report)?;
        std::fs::write(out_dir.join("orbit.svg"), svg).context("writing orbit.svg")?;
    }
    Ok(report)
}
