//! Chemistry file formats: SDF V2000 ligands and fixed-column PDB proteins.

pub mod element;
pub mod molecule;
pub mod pdb;
pub mod protein;
pub mod sdf;

use std::path::Path;

pub use element::Element;
pub use molecule::{Atom, Bond, BondOrder, MoleculeError, SmallMolecule};
pub use pdb::{parse_pdb, write_pdb};
pub use protein::{Chain, HeteroClass, HeteroGroup, ProteinStructure, Residue};
pub use sdf::{parse_sdf, parse_sdf_single, write_sdf};

#[derive(Debug, thiserror::Error)]
pub enum ChemIoError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input is not valid UTF-8 (first bad byte at offset {0})")]
    Encoding(usize),
    #[error("input holds no records")]
    Empty,
    #[error("record starting at line {line}: {source}")]
    Molecule {
        line: usize,
        #[source]
        source: MoleculeError,
    },
    #[error("{atoms} atoms exceed the V2000 limit of 999")]
    Capacity { atoms: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Byte columns `[start, end)` of a fixed-width line, clamped to the line
/// length. `None` only if the cut falls inside a multi-byte character.
pub(crate) fn col(line: &str, start: usize, end: usize) -> Option<&str> {
    let len = line.len();
    let (s, e) = (start.min(len), end.min(len));
    line.get(s..e)
}

fn read(path: &Path) -> Result<Vec<u8>, ChemIoError> {
    std::fs::read(path).map_err(|source| ChemIoError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_sdf_file(path: impl AsRef<Path>) -> Result<SmallMolecule, ChemIoError> {
    parse_sdf_single(&read(path.as_ref())?)
}

pub fn read_pdb_file(path: impl AsRef<Path>) -> Result<ProteinStructure, ChemIoError> {
    parse_pdb(&read(path.as_ref())?)
}
