use std::path::Path;

use anyhow::{anyhow, Result};
use dockeval::chemio::{read_pdb_file, read_sdf_file, write_pdb, write_sdf, ProteinStructure, SmallMolecule};
use dockeval::crossdock::{
    align_to_reference, candidate_filter, ligand_displacement, transfer_ligand, write_report, CrossDockReportRow,
    CrossDockThresholds,
};
use dockeval::geom::RadiusTable;
use dockeval::par::{self, Execution};
use dockeval::pocketsim::{build_corpus, extract_pocket, load_corpus_index, max_similarity_vs_corpus};
use dockeval::relax::{relax_complex, RelaxConfig};
use serde::Serialize;

use super::{check_dir, csv_string, emit, radii, relax_config, write_file};
use crate::args::{CrossdockArgs, PocketSimArgs, RelaxArgs};
use crate::layout::{self, LIGAND_PRED, LIGAND_REF};
use crate::{usage, Ctx};

fn relax_one(
    protein: &ProteinStructure,
    ligand: &SmallMolecule,
    cfg: &RelaxConfig,
    radii: &RadiusTable,
    out: &Path,
) -> Result<bool> {
    let outcome = relax_complex(protein, ligand, cfg, radii)?;
    write_file(&out.join("protein_relaxed.pdb"), &write_pdb(&outcome.protein))?;
    write_file(&out.join("ligand_relaxed.sdf"), &write_sdf(&outcome.ligand)?)?;
    write_file(
        &out.join("relax_stats.json"),
        &(serde_json::to_string_pretty(&outcome.stats)? + "\n"),
    )?;
    let s = &outcome.stats;
    log::info!(
        "event=relaxed clashes_before={} clashes_after={} iterations={} converged={} max_gradient={:.4}",
        s.clash_count_before,
        s.clash_count_after,
        s.iterations,
        s.converged,
        s.final_max_gradient
    );
    Ok(s.converged)
}

#[derive(Serialize)]
struct RelaxRow {
    entry_id: String,
    converged: Option<bool>,
    error: String,
}

pub fn relax(a: RelaxArgs, ctx: Ctx) -> Result<usize> {
    let cfg = relax_config(&a.relax_flags)?;
    let radii = radii(a.radii.as_deref())?;
    let Some(dir) = &a.dir else {
        let protein = read_pdb_file(a.protein.as_deref().expect("clap")).map_err(|e| anyhow!("{e}"))?;
        let ligand = read_sdf_file(a.ligand.as_deref().expect("clap")).map_err(|e| anyhow!("{e}"))?;
        relax_one(&protein, &ligand, &cfg, &radii, &a.out_dir)?;
        return Ok(0);
    };
    check_dir(dir)?;
    let entries = layout::entries(dir)?;
    let rows = par::map(ctx.exec, &entries, |e| {
        let r = (|| {
            let protein = layout::protein(dir, e)?;
            let ligand = layout::ligand(dir, e, LIGAND_PRED)?;
            relax_one(&protein, &ligand, &cfg, &radii, &a.out_dir.join(e))
        })();
        match r {
            Ok(c) => RelaxRow {
                entry_id: e.clone(),
                converged: Some(c),
                error: String::new(),
            },
            Err(err) => {
                log::warn!("event=entry_failed entry_id={e} error={:?}", format!("{err:#}"));
                RelaxRow {
                    entry_id: e.clone(),
                    converged: None,
                    error: format!("{err:#}"),
                }
            }
        }
    });
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    write_file(
        &a.out_dir.join("relax_summary.csv"),
        &csv_string(&rows, &["entry_id", "converged", "error"])?,
    )?;
    Ok(failures)
}

pub fn crossdock(a: CrossdockArgs, ctx: Ctx) -> Result<usize> {
    check_dir(&a.dir)?;
    let t = CrossDockThresholds {
        max_ca_rmsd: a.max_ca_rmsd,
        max_ligand_displacement: a.max_ligand_displacement,
    };
    let entries = layout::entries(&a.dir)?;
    if !entries.contains(&a.reference) {
        return Err(usage(format!("reference entry {} not found in {}", a.reference, a.dir.display())));
    }
    let ref_protein = layout::protein(&a.dir, &a.reference)?;
    let ref_ligand = layout::ligand(&a.dir, &a.reference, LIGAND_REF)?;
    let candidates: Vec<&String> = entries.iter().filter(|e| **e != a.reference).collect();
    let rows = par::map(ctx.exec, &candidates, |e| -> (CrossDockReportRow, bool) {
        let r = (|| -> Result<CrossDockReportRow> {
            let protein = layout::protein(&a.dir, e)?;
            let ligand = layout::ligand(&a.dir, e, LIGAND_REF)?;
            let aligned = match align_to_reference(&protein, &ref_protein) {
                Ok(x) => x,
                Err(err) => return Ok(CrossDockReportRow::from_error(e, &err)),
            };
            let moved = transfer_ligand(&ligand, &aligned);
            let disp = ligand_displacement(&moved, &ref_ligand);
            let d = candidate_filter(&aligned, disp, &t);
            if d.is_accept() {
                write_file(&a.out_dir.join(format!("{e}_ligand.sdf")), &write_sdf(&moved)?)?;
            }
            Ok(CrossDockReportRow::from_decision(e, aligned.ca_rmsd, disp, d))
        })();
        match r {
            Ok(row) => {
                let failed = row.decision == "error";
                (row, failed)
            }
            Err(err) => {
                let row = CrossDockReportRow {
                    candidate_id: e.to_string(),
                    ca_rmsd: None,
                    displacement: None,
                    decision: "error".into(),
                    reason: format!("{err:#}"),
                };
                (row, true)
            }
        }
    });
    let failures = rows.iter().filter(|r| r.1).count();
    for (r, failed) in &rows {
        if *failed {
            log::warn!("event=entry_failed entry_id={} error={:?}", r.candidate_id, r.reason);
        }
    }
    let report: Vec<CrossDockReportRow> = rows.into_iter().map(|r| r.0).collect();
    write_file(&a.out_dir.join("crossdock_report.csv"), &write_report(&report))?;
    Ok(failures)
}

#[derive(Serialize)]
struct SimilarityRow {
    entry_id: String,
    max_similarity: Option<f64>,
    best_match: String,
    stratum: String,
    error: String,
}

pub fn pocket_sim(a: PocketSimArgs, ctx: Ctx) -> Result<usize> {
    check_dir(&a.dir)?;
    let index = load_corpus_index(&a.corpus).map_err(|e| usage(e.to_string()))?;
    let (corpus, failed) = build_corpus(&index, a.cutoff, a.released_before.as_deref(), ctx.exec);
    for (id, err) in &failed {
        log::warn!("event=corpus_entry_failed entry_id={id} error={err:?}");
    }
    if corpus.is_empty() {
        return Err(anyhow!("no usable corpus pockets in {}", a.corpus.display()));
    }
    let entries = layout::entries(&a.dir)?;
    let rows = par::map(ctx.exec, &entries, |e| {
        let r = (|| -> Result<_> {
            let protein = layout::protein(&a.dir, e)?;
            let ligand = layout::ligand(&a.dir, e, LIGAND_REF)?;
            let pocket = extract_pocket(&protein, &ligand, a.cutoff, e)?;
            Ok(max_similarity_vs_corpus(&pocket, &corpus, Execution::Sequential)?)
        })();
        match r {
            Ok(m) => SimilarityRow {
                entry_id: e.clone(),
                max_similarity: Some(m.score),
                best_match: m.best_id,
                stratum: if m.score >= a.threshold { "similar" } else { "dissimilar" }.into(),
                error: String::new(),
            },
            Err(err) => {
                log::warn!("event=entry_failed entry_id={e} error={:?}", format!("{err:#}"));
                SimilarityRow {
                    entry_id: e.clone(),
                    max_similarity: None,
                    best_match: String::new(),
                    stratum: String::new(),
                    error: format!("{err:#}"),
                }
            }
        }
    });
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    emit(
        a.out.as_deref(),
        &csv_string(&rows, &["entry_id", "max_similarity", "best_match", "stratum", "error"])?,
    )?;
    Ok(failures)
}
