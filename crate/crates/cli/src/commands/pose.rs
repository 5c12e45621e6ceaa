use std::collections::HashMap;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use dockeval::chemio::{read_pdb_file, read_sdf_file, SmallMolecule};
use dockeval::ligrmsd::{naive_rmsd, symmetry_rmsd};
use dockeval::metrics::{success_rate_at, target_level_success_at, Criterion, EvaluationRecord};
use dockeval::par::{self, Execution};
use dockeval::pocketsim::{build_corpus, extract_pocket, load_corpus_index, max_similarity_vs_corpus, Pocket};
use dockeval::relax::relax_complex;
use dockeval::validity::{validate as run_checks, ValidityOptions};
use serde::{Deserialize, Serialize};

use super::{check_dir, csv_string, emit, read_text, relax_config, validity_options, write_file, write_sidecar};
use crate::args::{CriterionArg, EvaluateArgs, RmsdArgs, ValidateArgs};
use crate::layout::{self, LIGAND_PRED, LIGAND_REF};
use crate::{usage, Ctx};

fn load_sdf(p: &Path) -> Result<SmallMolecule> {
    read_sdf_file(p).map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize)]
struct ValidateRow {
    entry_id: String,
    pb_valid: Option<bool>,
    failed_checks: String,
    error: String,
}

pub fn validate(a: ValidateArgs, ctx: Ctx) -> Result<usize> {
    let mut opts = validity_options(&a.validity)?;
    let Some(dir) = &a.dir else {
        opts.exec = ctx.exec;
        let pred = load_sdf(a.pred.as_deref().expect("clap enforces --pred"))?;
        let reference = a.reference.as_deref().map(load_sdf).transpose()?;
        let protein = match &a.protein {
            Some(p) => Some(read_pdb_file(p).map_err(|e| anyhow!("{e}"))?),
            None => None,
        };
        let report = run_checks(&pred, reference.as_ref(), protein.as_ref(), &opts);
        log::info!("event=validated pb_valid={} failed={:?}", report.pb_valid, report.failed().join(";"));
        emit(a.out.as_deref(), &(report.to_json() + "\n"))?;
        return Ok(0);
    };
    check_dir(dir)?;
    let out = a
        .out
        .as_deref()
        .ok_or_else(|| usage("batch validation needs --out <directory>"))?;
    // entries run in parallel; each one's checks run sequentially
    opts.exec = Execution::Sequential;
    let entries = layout::entries(dir)?;
    let rows = par::map(ctx.exec, &entries, |e| -> ValidateRow {
        let result = (|| -> Result<(bool, String)> {
            let protein = layout::protein(dir, e)?;
            let reference = layout::ligand(dir, e, LIGAND_REF)?;
            let pred = layout::ligand(dir, e, LIGAND_PRED)?;
            let report = run_checks(&pred, Some(&reference), Some(&protein), &opts);
            write_file(&out.join(format!("{e}.json")), &(report.to_json() + "\n"))?;
            Ok((report.pb_valid, report.failed().join(";")))
        })();
        match result {
            Ok((v, failed)) => ValidateRow {
                entry_id: e.clone(),
                pb_valid: Some(v),
                failed_checks: failed,
                error: String::new(),
            },
            Err(err) => {
                log::warn!("event=entry_failed entry_id={e} error={:?}", format!("{err:#}"));
                ValidateRow {
                    entry_id: e.clone(),
                    pb_valid: None,
                    failed_checks: String::new(),
                    error: format!("{err:#}"),
                }
            }
        }
    });
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    let summary = csv_string(&rows, &["entry_id", "pb_valid", "failed_checks", "error"])?;
    write_file(&out.join("summary.csv"), &summary)?;
    emit(None, &summary)?;
    Ok(failures)
}

#[derive(Serialize)]
struct RmsdRow {
    entry_id: String,
    rmsd: Option<f64>,
    error: String,
}

fn pose_rmsd(pred: &SmallMolecule, reference: &SmallMolecule, naive: bool) -> Result<f64> {
    if naive {
        Ok(naive_rmsd(pred, reference)?)
    } else {
        Ok(symmetry_rmsd(pred, reference)?.rmsd)
    }
}

pub fn rmsd(a: RmsdArgs, ctx: Ctx) -> Result<usize> {
    let Some(dir) = &a.dir else {
        let pred = load_sdf(a.pred.as_deref().expect("clap enforces --pred"))?;
        let reference = load_sdf(a.reference.as_deref().expect("clap enforces --ref"))?;
        let text = if a.naive {
            serde_json::json!({ "mode": "naive", "rmsd": naive_rmsd(&pred, &reference)? })
        } else {
            let r = symmetry_rmsd(&pred, &reference)?;
            serde_json::json!({
                "mode": "symmetry",
                "rmsd": r.rmsd,
                "isomorphism_count": r.isomorphism_count,
                "atom_pairs": r.atom_pairs(),
            })
        };
        emit(a.out.as_deref(), &(serde_json::to_string_pretty(&text)? + "\n"))?;
        return Ok(0);
    };
    check_dir(dir)?;
    let entries = layout::entries(dir)?;
    let rows = par::map(ctx.exec, &entries, |e| {
        let r = (|| {
            let pred = layout::ligand(dir, e, LIGAND_PRED)?;
            let reference = layout::ligand(dir, e, LIGAND_REF)?;
            pose_rmsd(&pred, &reference, a.naive)
        })();
        match r {
            Ok(v) => RmsdRow {
                entry_id: e.clone(),
                rmsd: Some(v),
                error: String::new(),
            },
            Err(err) => {
                log::warn!("event=entry_failed entry_id={e} error={:?}", format!("{err:#}"));
                RmsdRow {
                    entry_id: e.clone(),
                    rmsd: None,
                    error: format!("{err:#}"),
                }
            }
        }
    });
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    emit(a.out.as_deref(), &csv_string(&rows, &["entry_id", "rmsd", "error"])?)?;
    Ok(failures)
}

/// A record CSV row with an extra `error` column for failed entries.
#[derive(Serialize)]
struct EvalRow {
    entry_id: String,
    target_id: String,
    method: String,
    rmsd: Option<f64>,
    pb_valid: Option<bool>,
    pocket_similarity: Option<f64>,
    relaxed: bool,
    run_id: Option<String>,
    error: String,
}

#[derive(Deserialize)]
struct TargetRow {
    entry_id: String,
    target_id: String,
}

fn load_targets(path: &Path) -> Result<HashMap<String, String>> {
    let text = read_text(path)?;
    let mut out = HashMap::new();
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize::<TargetRow>() {
        let row = row.map_err(|e| usage(format!("{}: {e}", path.display())))?;
        out.insert(row.entry_id, row.target_id);
    }
    Ok(out)
}

struct Scored {
    rmsd: f64,
    pb_valid: bool,
    similarity: Option<f64>,
}

fn score_entry(
    dir: &Path,
    entry: &str,
    a: &EvaluateArgs,
    opts: &ValidityOptions,
    relax_cfg: &dockeval::relax::RelaxConfig,
    corpus: Option<&[Pocket]>,
) -> Result<Scored> {
    let mut protein = layout::protein(dir, entry)?;
    let reference = layout::ligand(dir, entry, LIGAND_REF)?;
    let mut pred = layout::ligand(dir, entry, LIGAND_PRED)?;
    if a.relax {
        let outcome = relax_complex(&protein, &pred, relax_cfg, &opts.inter.radii).context("relaxation")?;
        log::debug!(
            "event=relaxed entry_id={entry} iterations={} converged={}",
            outcome.stats.iterations,
            outcome.stats.converged
        );
        protein = outcome.protein;
        pred = outcome.ligand;
    }
    let rmsd = symmetry_rmsd(&pred, &reference)?.rmsd;
    let report = run_checks(&pred, Some(&reference), Some(&protein), opts);
    let similarity = match corpus {
        None => None,
        Some(c) => {
            let pocket = extract_pocket(&protein, &reference, a.pocket_cutoff, entry)?;
            Some(max_similarity_vs_corpus(&pocket, c, Execution::Sequential)?.score)
        }
    };
    Ok(Scored {
        rmsd,
        pb_valid: report.pb_valid,
        similarity,
    })
}

pub fn evaluate(a: EvaluateArgs, ctx: Ctx) -> Result<usize> {
    check_dir(&a.dir)?;
    if !(a.success_threshold > 0.0) {
        return Err(usage("--success-threshold must be positive"));
    }
    let mut opts = validity_options(&a.validity)?;
    opts.exec = Execution::Sequential;
    let relax_cfg = relax_config(&a.relax_flags)?;
    let targets = match &a.targets {
        Some(p) => load_targets(p)?,
        None => HashMap::new(),
    };
    let corpus = match &a.corpus {
        None => None,
        Some(p) => {
            let index = load_corpus_index(p).map_err(|e| anyhow!("{e}"))?;
            let (pockets, failed) = build_corpus(&index, a.pocket_cutoff, a.released_before.as_deref(), ctx.exec);
            for (id, err) in &failed {
                log::warn!("event=corpus_entry_failed entry_id={id} error={err:?}");
            }
            log::info!("event=corpus_loaded pockets={} failed={}", pockets.len(), failed.len());
            Some(pockets)
        }
    };

    let entries = layout::entries(&a.dir)?;
    let rows = par::map(ctx.exec, &entries, |e| {
        let target_id = targets.get(e).cloned().unwrap_or_else(|| e.clone());
        let mut row = EvalRow {
            entry_id: e.clone(),
            target_id,
            method: a.method.clone(),
            rmsd: None,
            pb_valid: None,
            pocket_similarity: None,
            relaxed: a.relax,
            run_id: a.run_id.clone(),
            error: String::new(),
        };
        match score_entry(&a.dir, e, &a, &opts, &relax_cfg, corpus.as_deref()) {
            Ok(s) => {
                log::info!("event=evaluated entry_id={e} rmsd={:.4} pb_valid={}", s.rmsd, s.pb_valid);
                row.rmsd = Some(s.rmsd);
                row.pb_valid = Some(s.pb_valid);
                row.pocket_similarity = s.similarity;
            }
            Err(err) => {
                log::warn!("event=entry_failed entry_id={e} error={:?}", format!("{err:#}"));
                row.error = format!("{err:#}");
            }
        }
        row
    });
    let failures = rows.iter().filter(|r| !r.error.is_empty()).count();
    let csv = csv_string(
        &rows,
        &["entry_id", "target_id", "method", "rmsd", "pb_valid", "pocket_similarity", "relaxed", "run_id", "error"],
    )?;
    emit(a.out.as_deref(), &csv)?;
    if let Some(out) = &a.out {
        write_sidecar(out, "evaluate", rows.len(), failures, ctx.jobs)?;
    }

    let records: Vec<EvaluationRecord> = rows
        .iter()
        .filter(|r| r.error.is_empty())
        .map(|r| EvaluationRecord {
            entry_id: r.entry_id.clone(),
            target_id: r.target_id.clone(),
            method: r.method.clone(),
            rmsd: r.rmsd.expect("scored"),
            pb_valid: r.pb_valid.expect("scored"),
            pocket_similarity: r.pocket_similarity,
            relaxed: r.relaxed,
            run_id: r.run_id.clone(),
        })
        .collect();
    let criterion = match a.criterion {
        CriterionArg::RmsdOnly => Criterion::RmsdOnly,
        CriterionArg::RmsdAndValid => Criterion::RmsdAndValid,
    };
    if !records.is_empty() {
        let rate = success_rate_at(&records, criterion, a.success_threshold)?;
        let target = target_level_success_at(&records, criterion, a.success_threshold)?;
        let line = format!(
            "criterion={} success_rate={rate:.2}% target_level_success_rate={target:.2}% scored={} failed={failures}\n",
            criterion.as_str(),
            records.len()
        );
        // with the CSV on stdout the summary goes to the log instead
        if a.out.is_some() {
            emit(None, &line)?;
        } else {
            log::info!("{}", line.trim_end());
        }
    }
    Ok(failures)
}
