#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dockeval::chemio::{write_pdb, write_sdf, ProteinStructure, SmallMolecule};
use dockeval::fixtures::{clash_complex, helix_protein, phenol};
use dockeval::geom::Vec3;

pub const SEQ: &str = "MKTAYIAKQRQISFVKSHFSRQ";

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dockeval"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dockeval")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn write_entry(root: &Path, id: &str, p: &ProteinStructure, reference: &SmallMolecule, pred: &SmallMolecule) {
    let d = root.join(id);
    std::fs::create_dir_all(&d).unwrap();
    std::fs::write(d.join("protein.pdb"), write_pdb(p)).unwrap();
    std::fs::write(d.join("ligand_ref.sdf"), write_sdf(reference).unwrap()).unwrap();
    std::fs::write(d.join("ligand_pred.sdf"), write_sdf(pred).unwrap()).unwrap();
}

fn shifted(m: &SmallMolecule, d: Vec3) -> SmallMolecule {
    m.map_positions(|q| q + d)
}

/// Phenol parked well clear of the helix.
pub fn free_ligand(p: &ProteinStructure) -> SmallMolecule {
    let max_x = p.polymer_atoms().map(|a| a.position.x).fold(f64::MIN, f64::max);
    phenol(Vec3::new(max_x + 8.0, 0.0, 0.0))
}

/// `{root}/{a,b,c}`: a is close and valid (RMSD 0.5), b is far and valid
/// (RMSD 3.0), c is close but clashes with the protein.
pub fn three_entry_benchmark(root: &Path) {
    let p = helix_protein(SEQ);
    let lig = free_ligand(&p);
    write_entry(root, "a", &p, &lig, &shifted(&lig, Vec3::new(0.0, 0.5, 0.0)));
    write_entry(root, "b", &p, &lig, &shifted(&lig, Vec3::new(0.0, 3.0, 0.0)));
    let (pc, clash, _) = clash_complex(SEQ, 10, 1.0);
    write_entry(root, "c", &pc, &shifted(&clash, Vec3::new(0.0, 0.0, 0.5)), &clash);
}

/// Five entries with assorted shifts, two of them clashing.
pub fn five_entry_benchmark(root: &Path) {
    let p = helix_protein(SEQ);
    let lig = free_ligand(&p);
    for (id, dy) in [("e1", 0.3), ("e2", 1.7), ("e3", 2.6)] {
        write_entry(root, id, &p, &lig, &shifted(&lig, Vec3::new(0.0, dy, 0.0)));
    }
    for (id, residue) in [("e4", 6), ("e5", 14)] {
        let (pc, clash, _) = clash_complex(SEQ, residue, 0.8);
        write_entry(root, id, &pc, &shifted(&clash, Vec3::new(0.4, 0.0, 0.0)), &clash);
    }
}

pub fn tempdir() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub fn join(root: &Path, name: &str) -> PathBuf {
    root.join(name)
}
