use std::path::Path;

use anyhow::{anyhow, Result};
use dockeval::chemio::write_sdf;
use dockeval::crossdock::write_report;
use dockeval::curate::{
    build_cross_dock_set, build_self_dock_set, load_manifest, CurateConfig, CurateError, DirectorySource,
};
use dockeval::metrics::{generate_report, read_records_csv, ReportConfig};
use serde::Serialize;

use super::{csv_string, read_text, write_file, write_sidecar};
use crate::args::{CurateArgs, PipelineArg, ReportArgs};
use crate::{usage, Ctx};

fn load_curate_config(path: &Path) -> Result<CurateConfig> {
    let text = read_text(path)?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let cfg: CurateConfig = if json {
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    cfg.filters.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn curate_error(e: CurateError) -> anyhow::Error {
    match e {
        CurateError::Io(_) => anyhow!(e),
        other => usage(other.to_string()),
    }
}

#[derive(Serialize)]
struct SelectedRow<'a> {
    entry_id: String,
    pdb_id: &'a str,
    ccd_id: &'a str,
}

#[derive(Serialize)]
struct PairRow<'a> {
    protein_pdb_id: &'a str,
    ligand_entry_id: &'a str,
    reference_pdb_id: &'a str,
    ligand_file: String,
}

pub fn curate(a: CurateArgs, ctx: Ctx) -> Result<usize> {
    let manifest = load_manifest(&a.manifest).map_err(curate_error)?;
    let cfg = match &a.filters {
        Some(p) => load_curate_config(p)?,
        None => CurateConfig::default(),
    };
    match a.pipeline {
        PipelineArg::SelfDock => {
            let set = build_self_dock_set(&manifest, &cfg).map_err(curate_error)?;
            write_file(&a.out_dir.join("trace.csv"), &set.trace.to_csv())?;
            let rows: Vec<SelectedRow> = set
                .entries
                .iter()
                .map(|e| SelectedRow {
                    entry_id: e.id(),
                    pdb_id: &e.pdb_id,
                    ccd_id: &e.ccd_id,
                })
                .collect();
            let selected = a.out_dir.join("selected.csv");
            write_file(&selected, &csv_string(&rows, &["entry_id", "pdb_id", "ccd_id"])?)?;
            write_file(
                &a.out_dir.join("clusters.json"),
                &(serde_json::to_string_pretty(&set.clusters)? + "\n"),
            )?;
            write_sidecar(&selected, "curate", manifest.len(), 0, ctx.jobs)?;
            log::info!(
                "event=curated pipeline=self-dock manifest={} selected={} clusters={}",
                manifest.len(),
                set.entries.len(),
                set.clusters.len()
            );
            Ok(0)
        }
        PipelineArg::CrossDock => {
            let root = a
                .structures
                .as_deref()
                .ok_or_else(|| usage("--pipeline cross-dock needs --structures <directory>"))?;
            let source = DirectorySource::new(root, &manifest);
            let set = build_cross_dock_set(&manifest, &source, &cfg, ctx.exec).map_err(curate_error)?;
            write_file(&a.out_dir.join("trace.csv"), &set.trace.to_csv())?;
            write_file(&a.out_dir.join("crossdock_report.csv"), &write_report(&set.report))?;
            let failures = set.report.iter().filter(|r| r.decision == "error").count();
            for r in set.report.iter().filter(|r| r.decision == "error") {
                log::warn!("event=entry_failed entry_id={} error={:?}", r.candidate_id, r.reason);
            }
            let mut rows = Vec::new();
            for t in &set.targets {
                for p in &t.pairs {
                    let file = format!("ligands/{}__{}.sdf", p.protein_pdb_id, p.ligand_entry_id);
                    write_file(&a.out_dir.join(&file), &write_sdf(&p.ligand)?)?;
                    rows.push(PairRow {
                        protein_pdb_id: &p.protein_pdb_id,
                        ligand_entry_id: &p.ligand_entry_id,
                        reference_pdb_id: &t.reference_pdb_id,
                        ligand_file: file,
                    });
                }
            }
            let pairs = a.out_dir.join("cross_pairs.csv");
            write_file(
                &pairs,
                &csv_string(&rows, &["protein_pdb_id", "ligand_entry_id", "reference_pdb_id", "ligand_file"])?,
            )?;
            write_sidecar(&pairs, "curate", manifest.len(), failures, ctx.jobs)?;
            log::info!(
                "event=curated pipeline=cross-dock manifest={} targets={} pairs={}",
                manifest.len(),
                set.targets.len(),
                rows.len()
            );
            Ok(failures)
        }
    }
}

pub fn report(a: ReportArgs, _ctx: Ctx) -> Result<usize> {
    if !(a.success_threshold > 0.0) {
        return Err(usage("--success-threshold must be positive"));
    }
    if !(0.0..=1.0).contains(&a.similarity_threshold) {
        return Err(usage("--similarity-threshold must lie in [0, 1]"));
    }
    let mut records = Vec::new();
    let mut skipped = 0;
    for p in &a.records {
        let (mut r, s) = read_records_csv(&read_text(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))?;
        if s > 0 {
            log::warn!("event=skipped_error_rows file={:?} rows={s}", p.display().to_string());
        }
        skipped += s;
        records.append(&mut r);
    }
    let cfg = ReportConfig {
        stratify: a.stratify.then_some(a.similarity_threshold),
        success_threshold: a.success_threshold,
    };
    let art = generate_report(&records, &cfg).map_err(|e| usage(e.to_string()))?;
    write_file(&a.out_dir.join("report.json"), &art.json)?;
    write_file(&a.out_dir.join("records.csv"), &art.records_csv)?;
    write_file(&a.out_dir.join("summary.csv"), &art.summary_csv)?;
    log::info!(
        "event=report records={} methods={} skipped_error_rows={skipped}",
        art.report.record_count,
        art.report.methods.len()
    );
    Ok(0)
}
