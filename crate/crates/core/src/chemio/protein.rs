use serde::{Deserialize, Serialize};

use super::element::Element;
use super::molecule::{Atom, SmallMolecule};
use crate::geom::Vec3;

/// Backbone atom names held by positional restraints during relaxation.
pub const BACKBONE_ATOM_NAMES: [&str; 4] = ["CA", "C", "N", "O"];

const WATER_NAMES: [&str; 4] = ["HOH", "WAT", "DOD", "H2O"];

/// Residue names always treated as inorganic hetero groups, regardless of size.
const INORGANIC_NAMES: [&str; 24] = [
    "NA", "MG", "K", "CA", "MN", "FE", "FE2", "CO", "NI", "CU", "CU1", "ZN", "CD", "HG", "LI",
    "CL", "BR", "IOD", "F", "SO4", "PO4", "NO3", "NH4", "AZI",
];

/// HETATM residues that belong to the polymer (modified amino acids).
pub const MODIFIED_RESIDUES: [(&str, char); 7] = [
    ("MSE", 'M'),
    ("SEP", 'S'),
    ("TPO", 'T'),
    ("PTR", 'Y'),
    ("CSO", 'C'),
    ("MLY", 'K'),
    ("HYP", 'P'),
];

const STANDARD_RESIDUES: [(&str, char); 22] = [
    ("ALA", 'A'),
    ("ARG", 'R'),
    ("ASN", 'N'),
    ("ASP", 'D'),
    ("CYS", 'C'),
    ("GLN", 'Q'),
    ("GLU", 'E'),
    ("GLY", 'G'),
    ("HIS", 'H'),
    ("ILE", 'I'),
    ("LEU", 'L'),
    ("LYS", 'K'),
    ("MET", 'M'),
    ("PHE", 'F'),
    ("PRO", 'P'),
    ("SER", 'S'),
    ("THR", 'T'),
    ("TRP", 'W'),
    ("TYR", 'Y'),
    ("VAL", 'V'),
    ("SEC", 'U'),
    ("PYL", 'O'),
];

/// One-letter code for a residue name; `'X'` when unknown.
pub fn one_letter_code(res_name: &str) -> char {
    STANDARD_RESIDUES
        .iter()
        .chain(MODIFIED_RESIDUES.iter())
        .find(|(name, _)| *name == res_name)
        .map(|&(_, c)| c)
        .unwrap_or('X')
}

pub fn is_modified_residue(res_name: &str) -> bool {
    MODIFIED_RESIDUES.iter().any(|(n, _)| *n == res_name)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeteroClass {
    Organic,
    Inorganic,
    Water,
}

/// Classify a hetero group from its residue name and atoms.
///
/// Waters by name; inorganic if listed in the ion table or if the group is a
/// single heavy metal atom; organic otherwise.
pub fn classify_hetero(res_name: &str, atoms: &[Atom]) -> HeteroClass {
    let name = res_name.trim().to_ascii_uppercase();
    if WATER_NAMES.contains(&name.as_str()) {
        return HeteroClass::Water;
    }
    if INORGANIC_NAMES.contains(&name.as_str()) {
        return HeteroClass::Inorganic;
    }
    let heavy: Vec<&Atom> = atoms.iter().filter(|a| !a.is_hydrogen()).collect();
    if heavy.len() == 1 && heavy[0].element.is_metal() {
        return HeteroClass::Inorganic;
    }
    HeteroClass::Organic
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residue {
    pub chain_id: String,
    pub name: String,
    pub seq_number: i32,
    pub insertion_code: Option<char>,
    pub atoms: Vec<Atom>,
}

impl Residue {
    pub fn atom(&self, name: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.name == name)
    }

    pub fn ca(&self) -> Option<&Atom> {
        self.atom("CA").filter(|a| a.element == Element::C)
    }

    pub fn heavy_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter().filter(|a| !a.is_hydrogen())
    }

    pub fn one_letter(&self) -> char {
        one_letter_code(&self.name)
    }

    pub fn sort_key(&self) -> (i32, char) {
        (self.seq_number, self.insertion_code.unwrap_or(' '))
    }

    /// Label like `A:GLY12` (plus insertion code if any).
    pub fn label(&self) -> String {
        match self.insertion_code {
            Some(c) => format!("{}:{}{}{}", self.chain_id, self.name, self.seq_number, c),
            None => format!("{}:{}{}", self.chain_id, self.name, self.seq_number),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub id: String,
    pub residues: Vec<Residue>,
}

impl Chain {
    /// Residues carrying a Cα atom, in chain order.
    pub fn ca_residues(&self) -> impl Iterator<Item = &Residue> {
        self.residues.iter().filter(|r| r.ca().is_some())
    }

    pub fn sequence(&self) -> String {
        self.ca_residues().map(Residue::one_letter).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroGroup {
    pub chain_id: String,
    pub res_name: String,
    pub seq_number: i32,
    pub insertion_code: Option<char>,
    pub class: HeteroClass,
    pub molecule: SmallMolecule,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProteinStructure {
    pub chains: Vec<Chain>,
    pub hetero_groups: Vec<HeteroGroup>,
    /// Set when the source had several MODEL blocks; only the first was read.
    pub multi_model: bool,
    /// Atoms dropped because an earlier alternate location was kept.
    pub skipped_altloc_atoms: usize,
}

impl ProteinStructure {
    pub fn residues(&self) -> impl Iterator<Item = &Residue> {
        self.chains.iter().flat_map(|c| c.residues.iter())
    }

    pub fn residue_count(&self) -> usize {
        self.chains.iter().map(|c| c.residues.len()).sum()
    }

    pub fn polymer_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.residues().flat_map(|r| r.atoms.iter())
    }

    pub fn polymer_heavy_atoms(&self) -> Vec<&Atom> {
        self.polymer_atoms().filter(|a| !a.is_hydrogen()).collect()
    }

    /// Heavy atoms of all hetero groups of the given class.
    pub fn hetero_heavy_atoms(&self, class: HeteroClass) -> Vec<&Atom> {
        self.hetero_groups
            .iter()
            .filter(|g| g.class == class)
            .flat_map(|g| g.molecule.atoms().iter())
            .filter(|a| !a.is_hydrogen())
            .collect()
    }

    pub fn chain(&self, id: &str) -> Option<&Chain> {
        self.chains.iter().find(|c| c.id == id)
    }

    /// Apply `f` to every atom position, polymer and hetero groups alike.
    pub fn map_positions(&self, f: impl Fn(&Vec3) -> Vec3) -> Self {
        let mut out = self.clone();
        for chain in &mut out.chains {
            for residue in &mut chain.residues {
                for atom in &mut residue.atoms {
                    atom.position = f(&atom.position);
                }
            }
        }
        for group in &mut out.hetero_groups {
            group.molecule = group.molecule.map_positions(&f);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification_table() {
        let zn = vec![Atom::new(Element::Zn, Vec3::zeros())];
        assert_eq!(classify_hetero("HOH", &[]), HeteroClass::Water);
        assert_eq!(classify_hetero("ZN", &zn), HeteroClass::Inorganic);
        assert_eq!(classify_hetero("XYZ", &zn), HeteroClass::Inorganic);
        assert_eq!(classify_hetero("SO4", &[]), HeteroClass::Inorganic);
        let c = vec![Atom::new(Element::C, Vec3::zeros())];
        assert_eq!(classify_hetero("ATP", &c), HeteroClass::Organic);
    }

    #[test]
    fn one_letter_codes() {
        assert_eq!(one_letter_code("GLY"), 'G');
        assert_eq!(one_letter_code("MSE"), 'M');
        assert_eq!(one_letter_code("HOH"), 'X');
    }
}
