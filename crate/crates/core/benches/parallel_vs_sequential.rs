use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dockeval::chemio::{Element, SmallMolecule};
use dockeval::fixtures::{helix_protein, phenol};
use dockeval::geom::{centroid, RadiusTable, Vec3};
use dockeval::par::Execution;
use dockeval::pocketsim::{extract_pocket, max_similarity_vs_corpus, Pocket};
use dockeval::validity::inter::{volume_overlap_fraction, OVERLAP_SCALE};
use dockeval::validity::{validate, ValidityOptions};

const SEQ: &str = "MKTAYIAKQRQISFVKSHFSRQLEERLGLIEVQAPILSRVGDGTQDNLSGAEKAVQVKVKALPDAQFEVVHSLAKWKRQTLGQHDFSAGEGLYTHMKALRPDEDRLSPLHSVYVDQWDWERVMGDGERQFSTLKSTVEAIWAGIKATEAAVSEEFGLAPFLPDQIHFVHSQELLSRYPDLDAKGRERAIAKDLGAVFLVGIGGKLSDGHRHDVRAPDYDDWAAIGNQGF";

fn exec_modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn ligand_in_protein() -> (Vec<(Element, Vec3)>, Vec<(Element, Vec3)>, SmallMolecule) {
    let p = helix_protein(&SEQ[..120]);
    let ca: Vec<Vec3> = p.residues().filter_map(|r| r.ca()).map(|a| a.position).collect();
    let lig = phenol(centroid(&ca) + Vec3::new(3.0, 0.0, 0.0));
    let prot: Vec<_> = p.polymer_heavy_atoms().iter().map(|a| (a.element, a.position)).collect();
    let l: Vec<_> = lig.atoms().iter().map(|a| (a.element, a.position)).collect();
    (l, prot, lig)
}

fn overlap(c: &mut Criterion) {
    let (lig, prot, _) = ligand_in_protein();
    let radii = RadiusTable::default();
    let mut g = c.benchmark_group("volume_overlap");
    for (name, exec) in exec_modes() {
        for spacing in [0.25, 0.1] {
            g.bench_with_input(BenchmarkId::new(name, spacing), &spacing, |b, &s| {
                b.iter(|| volume_overlap_fraction(black_box(&lig), &prot, &radii, OVERLAP_SCALE, s, exec))
            });
        }
    }
    g.finish();
}

fn corpus_similarity(c: &mut Criterion) {
    let corpus: Vec<Pocket> = (0..64)
        .map(|k| {
            let start = (k * 3) % (SEQ.len() - 40);
            let p = helix_protein(&SEQ[start..start + 40]);
            let ca: Vec<Vec3> = p.residues().filter_map(|r| r.ca()).map(|a| a.position).collect();
            extract_pocket(&p, &phenol(centroid(&ca)), 10.0, &format!("c{k}")).expect("pocket")
        })
        .collect();
    let p = helix_protein(&SEQ[10..50]);
    let ca: Vec<Vec3> = p.residues().filter_map(|r| r.ca()).map(|a| a.position).collect();
    let query = extract_pocket(&p, &phenol(centroid(&ca)), 10.0, "query").expect("pocket");
    let mut g = c.benchmark_group("corpus_similarity");
    for (name, exec) in exec_modes() {
        g.bench_function(name, |b| b.iter(|| max_similarity_vs_corpus(black_box(&query), &corpus, exec)));
    }
    g.finish();
}

fn batch_validity(c: &mut Criterion) {
    let (_, _, lig) = ligand_in_protein();
    let p = helix_protein(&SEQ[..120]);
    let poses: Vec<SmallMolecule> = (0..32)
        .map(|k| lig.map_positions(|q| q + Vec3::new(0.1 * k as f64, 0.0, 0.0)))
        .collect();
    let opts = ValidityOptions { exec: Execution::Sequential, ..Default::default() };
    let mut g = c.benchmark_group("batch_validity");
    g.sample_size(20);
    for (name, exec) in exec_modes() {
        g.bench_function(name, |b| {
            b.iter(|| dockeval::par::map(exec, &poses, |m| validate(m, Some(&lig), Some(&p), &opts).pb_valid))
        });
    }
    g.finish();
}

criterion_group!(benches, overlap, corpus_similarity, batch_validity);
criterion_main!(benches);
