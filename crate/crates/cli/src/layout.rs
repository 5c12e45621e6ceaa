//! Benchmark directory layout: one subdirectory per entry holding
//! `protein.pdb`, `ligand_ref.sdf`, `ligand_pred.sdf` and optionally
//! `ligand_start.sdf`.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use dockeval::chemio::{read_pdb_file, read_sdf_file, ProteinStructure, SmallMolecule};

pub const PROTEIN: &str = "protein.pdb";
pub const LIGAND_REF: &str = "ligand_ref.sdf";
pub const LIGAND_PRED: &str = "ligand_pred.sdf";

/// Entry ids (subdirectory names), sorted.
pub fn entries(root: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for item in std::fs::read_dir(root).with_context(|| format!("reading {}", root.display()))? {
        let item = item?;
        if item.file_type()?.is_dir() {
            out.push(item.file_name().to_string_lossy().into_owned());
        }
    }
    out.sort();
    Ok(out)
}

pub fn path(root: &Path, entry: &str, file: &str) -> PathBuf {
    root.join(entry).join(file)
}

pub fn protein(root: &Path, entry: &str) -> Result<ProteinStructure> {
    let p = path(root, entry, PROTEIN);
    read_pdb_file(&p).map_err(|e| anyhow::anyhow!("{e}")).with_context(|| format!("loading {}", p.display()))
}

pub fn ligand(root: &Path, entry: &str, file: &str) -> Result<SmallMolecule> {
    let p = path(root, entry, file);
    read_sdf_file(&p).map_err(|e| anyhow::anyhow!("{e}")).with_context(|| format!("loading {}", p.display()))
}
