mod common;

use common::*;
use dockeval::chemio::{write_pdb, write_sdf};
use dockeval::fixtures::{distorted_copy, helix_protein, self_dock_manifest};
use dockeval::geom::{RigidTransform, Vec3};

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn validate_clean_pose() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let e = dir.path().join("a");
    let o = run(&[
        "validate",
        "--pred",
        p(&e.join("ligand_pred.sdf")),
        "--ref",
        p(&e.join("ligand_ref.sdf")),
        "--protein",
        p(&e.join("protein.pdb")),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&stdout(&o))["pb_valid"], true);
}

#[test]
fn validate_batch_flags_the_clash() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let out = dir.path().join("out");
    let o = run(&["validate", "--dir", p(dir.path()), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "entry_id,pb_valid,failed_checks,error");
    assert!(lines[1].starts_with("a,true,"));
    assert!(lines[2].starts_with("b,true,"));
    assert!(lines[3].starts_with("c,false,"));
    assert!(lines[3].contains("minimum_distance_to_protein"));
    assert!(out.join("c.json").exists());
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let o = run(&["validate", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["evaluate", "--dir", "/definitely/not/here"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_success_rates() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let out = dir.path().join("records.csv");
    let o = run(&[
        "evaluate",
        "--dir",
        p(dir.path()),
        "--out",
        p(&out),
        "--criterion",
        "rmsd_and_valid",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("success_rate=33.33%"), "{}", stdout(&o));
    let o = run(&["evaluate", "--dir", p(dir.path()), "--out", p(&out)]);
    assert!(stdout(&o).contains("criterion=rmsd_only success_rate=66.67%"));

    let csv = std::fs::read_to_string(&out).unwrap();
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "entry_id,target_id,method,rmsd,pb_valid,pocket_similarity,relaxed,run_id,error"
    );
    assert_eq!(csv.lines().count(), 4);
    let meta = json(&std::fs::read_to_string(dir.path().join("records.csv.meta.json")).unwrap());
    assert_eq!(meta["entries"], 3);
    assert_eq!(meta["failures"], 0);
}

#[test]
fn config_values_yield_to_flags() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let out = dir.path().join("records.csv");
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "[evaluate]\ncriterion = \"rmsd_and_valid\"\nmethod = \"m1\"\n").unwrap();
    let base = ["evaluate", "--dir", p(dir.path()), "--out", p(&out), "--config", p(&cfg)];

    let o = run(&base);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("success_rate=33.33%"));
    assert!(std::fs::read_to_string(&out).unwrap().contains(",m1,"));

    let mut args = base.to_vec();
    args.extend(["--criterion", "rmsd_only"]);
    let o = run(&args);
    assert!(stdout(&o).contains("success_rate=66.67%"));

    let json_cfg = dir.path().join("run.json");
    std::fs::write(&json_cfg, r#"{"success_threshold": 0.4}"#).unwrap();
    let o = run(&["evaluate", "--dir", p(dir.path()), "--out", p(&out), "--config", p(&json_cfg)]);
    assert!(stdout(&o).contains("success_rate=0.00%"), "{}", stdout(&o));

    std::fs::write(&cfg, "not_a_flag = 3\n").unwrap();
    assert_eq!(run(&base).status.code(), Some(2));
}

#[test]
fn failed_entry_is_reported_and_sets_exit_status() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    std::fs::remove_file(dir.path().join("b/ligand_pred.sdf")).unwrap();
    let out = dir.path().join("records.csv");
    let o = run(&["evaluate", "--dir", p(dir.path()), "--out", p(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("event=entry_failed entry_id=b"));
    let csv = std::fs::read_to_string(&out).unwrap();
    let b = csv.lines().find(|l| l.starts_with("b,")).unwrap();
    assert!(b.contains("ligand_pred.sdf"));
    assert!(stdout(&o).contains("scored=2 failed=1"));
}

#[test]
fn rmsd_single_and_batch() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let e = dir.path().join("b");
    let o = run(&["rmsd", "--pred", p(&e.join("ligand_pred.sdf")), "--ref", p(&e.join("ligand_ref.sdf"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&stdout(&o));
    assert!((v["rmsd"].as_f64().unwrap() - 3.0).abs() < 1e-3);
    assert_eq!(v["mode"], "symmetry");

    let o = run(&["rmsd", "--dir", p(dir.path()), "--jobs", "1"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "entry_id,rmsd,error");
    assert_eq!(rows.len(), 4);
}

#[test]
fn sequential_and_parallel_agree() {
    let dir = tempdir();
    five_entry_benchmark(dir.path());
    let a = run(&["evaluate", "--dir", p(dir.path()), "--jobs", "1"]);
    let b = run(&["evaluate", "--dir", p(dir.path()), "--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn report_from_evaluate_output() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let rec = dir.path().join("records.csv");
    run(&["evaluate", "--dir", p(dir.path()), "--out", p(&rec), "--method", "dock"]);
    let out = dir.path().join("report");
    let o = run(&["report", "--records", p(&rec), "--out-dir", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = json(&std::fs::read_to_string(out.join("report.json")).unwrap());
    assert_eq!(r["record_count"], 3);
    assert_eq!(r["methods"][0]["method"], "dock");
    assert!(out.join("summary.csv").exists());

    // stratifying needs pocket similarity on every record
    let o = run(&["report", "--records", p(&rec), "--out-dir", p(&out), "--stratify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn relax_single_complex() {
    let dir = tempdir();
    three_entry_benchmark(dir.path());
    let e = dir.path().join("c");
    let out = dir.path().join("relaxed");
    let o = run(&[
        "relax",
        "--protein",
        p(&e.join("protein.pdb")),
        "--ligand",
        p(&e.join("ligand_pred.sdf")),
        "--out-dir",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stats = json(&std::fs::read_to_string(out.join("relax_stats.json")).unwrap());
    assert_eq!(stats["converged"], true);
    let o = run(&[
        "validate",
        "--pred",
        p(&out.join("ligand_relaxed.sdf")),
        "--protein",
        p(&out.join("protein_relaxed.pdb")),
    ]);
    let report = json(&stdout(&o));
    let min_dist = report["intermolecular"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "minimum_distance_to_protein")
        .unwrap()
        .clone();
    assert_eq!(min_dist["status"], "pass");

    let o = run(&["relax", "--protein", "x.pdb", "--ligand", "y.sdf", "--out-dir", p(&out), "--k-bond", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn crossdock_directory() {
    let dir = tempdir();
    let root = dir.path().join("bench");
    let p0 = helix_protein(SEQ);
    let lig = free_ligand(&p0);
    let t = RigidTransform::from_axis_angle(Vec3::new(1.0, 2.0, 0.5), 0.7).compose(&RigidTransform::from_translation(
        Vec3::new(4.0, -3.0, 10.0),
    ));
    let moved = p0.map_positions(|q| t.apply(q));
    let moved_lig = lig.map_positions(|q| t.apply(q));
    write_entry(&root, "ref", &p0, &lig, &lig);
    write_entry(&root, "good", &moved, &moved_lig, &moved_lig);
    write_entry(&root, "bad", &distorted_copy(&p0, 2.5), &lig, &lig);
    let out = dir.path().join("xd");
    let o = run(&["crossdock", "--dir", p(&root), "--reference", "ref", "--out-dir", p(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = std::fs::read_to_string(out.join("crossdock_report.csv")).unwrap();
    let rows: Vec<&str> = report.lines().collect();
    let bad: Vec<&str> = rows[1].split(',').collect();
    assert_eq!(bad[0], "bad");
    // coordinates go through 3-decimal PDB columns
    assert!((bad[1].parse::<f64>().unwrap() - 2.5).abs() < 1e-3, "{report}");
    assert_eq!(&bad[3..], ["reject", "alignment"]);
    assert!(rows[2].starts_with("good,") && rows[2].ends_with("accept,"), "{report}");
    assert!(out.join("good_ligand.sdf").exists());
    assert!(!out.join("bad_ligand.sdf").exists());

    let o = run(&["crossdock", "--dir", p(&root), "--reference", "nope", "--out-dir", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curate_self_dock_manifest() {
    let dir = tempdir();
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, serde_json::to_string(&self_dock_manifest()).unwrap()).unwrap();
    let out = dir.path().join("curated");
    let o = run(&[
        "curate",
        "--manifest",
        p(&manifest),
        "--pipeline",
        "self-dock",
        "--out-dir",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let selected = std::fs::read_to_string(out.join("selected.csv")).unwrap();
    assert_eq!(
        selected,
        "entry_id,pdb_id,ccd_id\n1aaa_AAA,1aaa,AAA\n1bbb_BBB,1bbb,BBB\n1ccc_CCC,1ccc,CCC\n"
    );
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.starts_with("step,survivors,unique_pdb_ids,unique_ccd_ids\n"));
    assert!(trace.contains("\nheavy_atoms,6,"), "{trace}");
    assert!(trace.contains("\ncluster_representatives,3,"));

    let filters = dir.path().join("filters.toml");
    std::fs::write(&filters, "[filters]\nmin_heavy_atoms = 2\n").unwrap();
    let o = run(&[
        "curate",
        "--manifest",
        p(&manifest),
        "--pipeline",
        "self-dock",
        "--filters",
        p(&filters),
        "--out-dir",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    assert!(trace.contains("\nheavy_atoms,7,"), "{trace}");

    std::fs::write(&filters, "[filters]\nmin_heavy_atom = 2\n").unwrap();
    let o = run(&[
        "curate",
        "--manifest",
        p(&manifest),
        "--pipeline",
        "self-dock",
        "--filters",
        p(&filters),
        "--out-dir",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curate_cross_dock_from_structures() {
    let (entries, source) = dockeval::fixtures::cross_dock_fixture();
    let dir = tempdir();
    let root = dir.path().join("structures");
    for (pdb, prot) in &source.proteins {
        std::fs::create_dir_all(root.join(pdb)).unwrap();
        std::fs::write(root.join(pdb).join("protein.pdb"), write_pdb(prot)).unwrap();
    }
    for e in &entries {
        let lig = &source.ligands[&e.id()];
        std::fs::write(
            root.join(&e.pdb_id).join(format!("{}_ligand.sdf", e.ccd_id)),
            write_sdf(lig).unwrap(),
        )
        .unwrap();
    }
    let manifest = dir.path().join("manifest.json");
    std::fs::write(&manifest, serde_json::to_string(&entries).unwrap()).unwrap();
    let out = dir.path().join("curated");
    let o = run(&[
        "curate",
        "--manifest",
        p(&manifest),
        "--pipeline",
        "cross-dock",
        "--structures",
        p(&root),
        "--out-dir",
        p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let pairs = std::fs::read_to_string(out.join("cross_pairs.csv")).unwrap();
    assert_eq!(
        pairs,
        "protein_pdb_id,ligand_entry_id,reference_pdb_id,ligand_file\n\
         2ref,2cnd_LGA,2ref,ligands/2ref__2cnd_LGA.sdf\n\
         2cnd,2ref_LRF,2ref,ligands/2cnd__2ref_LRF.sdf\n"
    );
    assert!(out.join("ligands/2cnd__2ref_LRF.sdf").exists());

    let o = run(&["curate", "--manifest", p(&manifest), "--pipeline", "cross-dock", "--out-dir", p(&out)]);
    assert_eq!(o.status.code(), Some(2));
}
