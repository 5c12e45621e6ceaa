use dockeval::curate::{build_cross_dock_set, build_self_dock_set, CurateConfig, ManifestEntry};
use dockeval::fixtures::{clean_entry, cross_dock_fixture, self_dock_manifest, CROSS_DOCK_SEQUENCE};
use dockeval::geom::Vec3;
use dockeval::par::Execution;

fn ids(v: &[ManifestEntry]) -> Vec<String> {
    v.iter().map(ManifestEntry::id).collect()
}

#[test]
fn self_dock_walkthrough() {
    let set = build_self_dock_set(&self_dock_manifest(), &CurateConfig::default()).unwrap();
    let t = &set.trace;
    assert_eq!(t.step("molecular_weight").unwrap().rejected_ids, ["1fff_FFF"]);
    assert_eq!(t.step("heavy_atoms").unwrap().rejected_ids, ["1ggg_GGG"]);
    assert_eq!(t.step("elements").unwrap().rejected_ids, ["1hhh_HHH"]);
    let tail: Vec<usize> = t.survivor_counts().into_iter().rev().take(3).collect();
    assert_eq!(tail, [3, 4, 5]);
    assert_eq!(t.step("unique_pairs").unwrap().rejected_ids, ["1aaa_DDD"]);
    assert_eq!(ids(&set.entries), ["1aaa_AAA", "1bbb_BBB", "1ccc_CCC"]);
}

#[test]
fn self_dock_is_independent_of_manifest_order() {
    let mut m = self_dock_manifest();
    let a = build_self_dock_set(&m, &CurateConfig::default()).unwrap();
    m.reverse();
    let b = build_self_dock_set(&m, &CurateConfig::default()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn shared_pdb_matches_once() {
    let m: Vec<_> = ["AAA", "BBB", "CCC"]
        .iter()
        .map(|c| clean_entry("1abc", c, "MKTAYIAKQR"))
        .collect();
    let set = build_self_dock_set(&m, &CurateConfig::default()).unwrap();
    assert_eq!(set.trace.step("unique_pairs").unwrap().survivors, 1);
}

#[test]
fn cross_dock_walkthrough() {
    let (entries, src) = cross_dock_fixture();
    for exec in [Execution::Sequential, Execution::Parallel] {
        let set = build_cross_dock_set(&entries, &src, &CurateConfig::default(), exec).unwrap();
        let bad = set.report.iter().find(|r| r.candidate_id == "2bad").unwrap();
        assert_eq!(bad.reason, "alignment");
        assert!((bad.ca_rmsd.unwrap() - 2.5).abs() < 1e-6);
        let shifted = set.report.iter().find(|r| r.candidate_id == "2cnd_LGB").unwrap();
        assert_eq!(shifted.reason, "ligand-shift");
        assert!((shifted.displacement.unwrap() - 4.5).abs() < 1e-6);

        assert_eq!(set.targets.len(), 1);
        let t = &set.targets[0];
        assert_eq!(t.reference_pdb_id, "2ref");
        assert_eq!(t.structures, ["2ref", "2cnd"]);
        assert_eq!(t.ligands, ["2cnd_LGA", "2ref_LRF"]);
        let pairs: Vec<(&str, &str)> = t
            .pairs
            .iter()
            .map(|p| (p.protein_pdb_id.as_str(), p.ligand_entry_id.as_str()))
            .collect();
        assert_eq!(pairs, [("2ref", "2cnd_LGA"), ("2cnd", "2ref_LRF")]);
        let counts = set.trace.survivor_counts();
        assert_eq!(&counts[counts.len() - 2..], [4, 2]);
    }
}

#[test]
fn cross_pair_lands_in_target_frame() {
    let (entries, src) = cross_dock_fixture();
    let set = build_cross_dock_set(&entries, &src, &CurateConfig::default(), Execution::Sequential).unwrap();
    let t = &set.targets[0];
    // 2cnd_LGA is the reference ligand shifted 0.5 Å along x in the reference frame
    let lga = &t.pairs.iter().find(|p| p.ligand_entry_id == "2cnd_LGA").unwrap().ligand;
    let lrf = &src.ligands["2ref_LRF"];
    let d = lga.heavy_centroid() - lrf.heavy_centroid();
    assert!((d - Vec3::new(0.5, 0.0, 0.0)).norm() < 1e-9);
    // reference ligand carried into 2cnd equals 2cnd's motion applied to it
    let into_cnd = &t.pairs.iter().find(|p| p.protein_pdb_id == "2cnd").unwrap().ligand;
    let native_good = &src.ligands["2cnd_LGA"];
    let gap = (into_cnd.heavy_centroid() - native_good.heavy_centroid()).norm();
    assert!((gap - 0.5).abs() < 1e-9);
}

#[test]
fn identical_pair_and_singleton() {
    let (_, mut src) = cross_dock_fixture();
    let p = src.proteins["2ref"].clone();
    src.proteins.insert("3one".into(), p.clone());
    src.proteins.insert("3two".into(), p);
    let l = src.ligands["2ref_LRF"].clone();
    src.ligands.insert("3one_XA".into(), l.clone());
    src.ligands.insert("3two_XB".into(), l.clone());
    src.ligands.insert("3sol_XC".into(), l);
    let entries = vec![
        clean_entry("3one", "XA", CROSS_DOCK_SEQUENCE),
        clean_entry("3two", "XB", CROSS_DOCK_SEQUENCE),
        clean_entry("3sol", "XC", "GSHMSLFDKLKHLVSEEVRLPKQGYAQWGG"),
    ];
    let set = build_cross_dock_set(&entries, &src, &CurateConfig::default(), Execution::Sequential).unwrap();
    assert_eq!(set.targets.len(), 1);
    assert_eq!(set.targets[0].pairs.len(), 2);
    assert_eq!(set.trace.step("sequence_clusters").unwrap().rejected_ids, ["3sol_XC"]);
}
