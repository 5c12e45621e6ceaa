use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::element::Element;
use crate::geom::Vec3;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub element: Element,
    /// Cartesian position in Å.
    pub position: Vec3,
    pub formal_charge: i8,
    /// Index of the record in the source file (1-based for SDF, PDB serial for PDB).
    pub serial: usize,
    /// Atom name; empty for SDF atoms.
    pub name: String,
}

impl Atom {
    pub fn new(element: Element, position: Vec3) -> Self {
        Atom {
            element,
            position,
            formal_charge: 0,
            serial: 0,
            name: String::new(),
        }
    }

    pub fn is_hydrogen(&self) -> bool {
        self.element.is_hydrogen()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// MDL bond type code.
    pub fn mdl_code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    pub fn from_mdl_code(code: u8) -> Option<Self> {
        match code {
            1 => Some(BondOrder::Single),
            2 => Some(BondOrder::Double),
            3 => Some(BondOrder::Triple),
            4 => Some(BondOrder::Aromatic),
            _ => None,
        }
    }
}

impl fmt::Display for BondOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BondOrder::Single => "single",
            BondOrder::Double => "double",
            BondOrder::Triple => "triple",
            BondOrder::Aromatic => "aromatic",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

impl Bond {
    pub fn new(a: usize, b: usize, order: BondOrder) -> Self {
        Bond { a, b, order }
    }

    pub fn other(&self, i: usize) -> Option<usize> {
        if self.a == i {
            Some(self.b)
        } else if self.b == i {
            Some(self.a)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MoleculeError {
    #[error("molecule has no heavy atoms")]
    NoHeavyAtoms,
    #[error("bond {index} connects atom {atom} to itself")]
    SelfBond { index: usize, atom: usize },
    #[error("bond {index} references atom {atom} but molecule has {count} atoms")]
    BondOutOfRange {
        index: usize,
        atom: usize,
        count: usize,
    },
    #[error("bond {index} duplicates the bond between atoms {a} and {b}")]
    DuplicateBond { index: usize, a: usize, b: usize },
    #[error("atom {index} has a non-finite coordinate")]
    NonFinite { index: usize },
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateCount { expected: usize, got: usize },
}

/// A ligand: labeled atom graph plus 3D coordinates.
///
/// Hydrogens are kept so files round-trip, but geometry and graph matching
/// operate on the heavy-atom subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallMolecule {
    pub name: String,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    heavy_components: usize,
}

impl SmallMolecule {
    pub fn new(
        name: impl Into<String>,
        atoms: Vec<Atom>,
        bonds: Vec<Bond>,
    ) -> Result<Self, MoleculeError> {
        let n = atoms.len();
        for (index, atom) in atoms.iter().enumerate() {
            if !(atom.position.x.is_finite()
                && atom.position.y.is_finite()
                && atom.position.z.is_finite())
            {
                return Err(MoleculeError::NonFinite { index });
            }
        }
        if !atoms.iter().any(|a| !a.is_hydrogen()) {
            return Err(MoleculeError::NoHeavyAtoms);
        }
        let mut seen = std::collections::HashSet::new();
        for (index, bond) in bonds.iter().enumerate() {
            for atom in [bond.a, bond.b] {
                if atom >= n {
                    return Err(MoleculeError::BondOutOfRange {
                        index,
                        atom,
                        count: n,
                    });
                }
            }
            if bond.a == bond.b {
                return Err(MoleculeError::SelfBond {
                    index,
                    atom: bond.a,
                });
            }
            let key = (bond.a.min(bond.b), bond.a.max(bond.b));
            if !seen.insert(key) {
                return Err(MoleculeError::DuplicateBond {
                    index,
                    a: key.0,
                    b: key.1,
                });
            }
        }
        let mut mol = SmallMolecule {
            name: name.into(),
            atoms,
            bonds,
            heavy_components: 0,
        };
        mol.heavy_components = mol.count_heavy_components();
        Ok(mol)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Number of connected components of the heavy-atom graph.
    pub fn component_count(&self) -> usize {
        self.heavy_components
    }

    pub fn heavy_atom_indices(&self) -> Vec<usize> {
        (0..self.atoms.len())
            .filter(|&i| !self.atoms[i].is_hydrogen())
            .collect()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| !a.is_hydrogen()).count()
    }

    pub fn heavy_positions(&self) -> Vec<Vec3> {
        self.atoms
            .iter()
            .filter(|a| !a.is_hydrogen())
            .map(|a| a.position)
            .collect()
    }

    pub fn positions(&self) -> Vec<Vec3> {
        self.atoms.iter().map(|a| a.position).collect()
    }

    pub fn heavy_centroid(&self) -> Vec3 {
        let pts = self.heavy_positions();
        pts.iter().fold(Vec3::zeros(), |acc, p| acc + p) / pts.len() as f64
    }

    /// Adjacency lists over all atoms: `(neighbor, order)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, BondOrder)>> {
        let mut adj = vec![Vec::new(); self.atoms.len()];
        for bond in &self.bonds {
            adj[bond.a].push((bond.b, bond.order));
            adj[bond.b].push((bond.a, bond.order));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Adjacency restricted to heavy atoms, indexed by original atom index.
    pub fn heavy_adjacency(&self) -> Vec<Vec<(usize, BondOrder)>> {
        let mut adj = self.adjacency();
        for (i, list) in adj.iter_mut().enumerate() {
            if self.atoms[i].is_hydrogen() {
                list.clear();
            } else {
                list.retain(|&(j, _)| !self.atoms[j].is_hydrogen());
            }
        }
        adj
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.bonds
            .iter()
            .find(|bd| (bd.a == a && bd.b == b) || (bd.a == b && bd.b == a))
    }

    /// Heavy-atom element counts.
    pub fn heavy_formula(&self) -> BTreeMap<Element, usize> {
        let mut f = BTreeMap::new();
        for a in self.atoms.iter().filter(|a| !a.is_hydrogen()) {
            *f.entry(a.element).or_insert(0) += 1;
        }
        f
    }

    pub fn formula_string(&self) -> String {
        self.heavy_formula()
            .iter()
            .map(|(e, n)| format!("{}{}", e, n))
            .collect::<Vec<_>>()
            .join("")
    }

    pub fn molecular_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.element.atomic_mass()).sum()
    }

    /// Same graph, new coordinates (one per atom, hydrogens included).
    pub fn with_positions(&self, positions: &[Vec3]) -> Result<Self, MoleculeError> {
        if positions.len() != self.atoms.len() {
            return Err(MoleculeError::CoordinateCount {
                expected: self.atoms.len(),
                got: positions.len(),
            });
        }
        let mut out = self.clone();
        for (i, (atom, p)) in out.atoms.iter_mut().zip(positions).enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(MoleculeError::NonFinite { index: i });
            }
            atom.position = *p;
        }
        Ok(out)
    }

    /// Apply `f` to every atom position.
    pub fn map_positions(&self, f: impl Fn(&Vec3) -> Vec3) -> Self {
        let mut out = self.clone();
        for atom in &mut out.atoms {
            atom.position = f(&atom.position);
        }
        out
    }

    /// Copy with hydrogens removed; bond indices remapped.
    pub fn without_hydrogens(&self) -> Self {
        let mut remap = vec![usize::MAX; self.atoms.len()];
        let mut atoms = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            if !a.is_hydrogen() {
                remap[i] = atoms.len();
                atoms.push(a.clone());
            }
        }
        let bonds = self
            .bonds
            .iter()
            .filter(|b| remap[b.a] != usize::MAX && remap[b.b] != usize::MAX)
            .map(|b| Bond::new(remap[b.a], remap[b.b], b.order))
            .collect();
        SmallMolecule {
            name: self.name.clone(),
            atoms,
            bonds,
            heavy_components: self.heavy_components,
        }
    }

    fn count_heavy_components(&self) -> usize {
        let adj = self.heavy_adjacency();
        let mut seen = vec![false; self.atoms.len()];
        let mut components = 0;
        for start in 0..self.atoms.len() {
            if seen[start] || self.atoms[start].is_hydrogen() {
                continue;
            }
            components += 1;
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        components
    }
}
