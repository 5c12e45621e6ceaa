//! Restrained energy minimisation of a protein–ligand complex.
//!
//! The potential has three terms, all in kJ/mol with lengths in nm:
//! harmonic positional restraints on backbone atoms, harmonic bond restraints
//! holding covalent geometry at its input values, and a one-sided harmonic
//! repulsion between atoms closer than a clash distance. Hydrogens are carried
//! along with the heavy atom they are attached to.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::chemio::{ProteinStructure, SmallMolecule, protein::BACKBONE_ATOM_NAMES};
use crate::geom::{RadiusTable, Vec3};

pub const ANGSTROM_TO_NM: f64 = 0.1;
/// Scale on the vdW-radius sum at which repulsion begins.
pub const CLASH_SCALE: f64 = 0.75;
/// Pairs farther apart than this in the input (nm) get no repulsion term.
pub const NEIGHBOR_CUTOFF_NM: f64 = 1.2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RelaxError {
    #[error("no residue template for {residue} ({label})")]
    UnknownResidue { residue: String, label: String },
    #[error("ligand has no heavy atoms")]
    EmptyLigand,
    #[error("non-finite coordinate at atom {0}")]
    NonFinite(usize),
    #[error("coordinate count {got} does not match system size {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaxConfig {
    /// Backbone positional restraint constant, kJ/mol/nm².
    pub k_backbone: f64,
    /// kJ/mol/nm².
    pub k_bond: f64,
    /// kJ/mol/nm².
    pub k_rep: f64,
    /// Added to `0.75 × vdW sum` to get the repulsion onset distance, nm.
    pub repulsion_margin: f64,
    /// Max per-atom gradient norm for convergence, kJ/mol/nm.
    pub gradient_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for RelaxConfig {
    fn default() -> Self {
        RelaxConfig {
            k_backbone: 10.0,
            k_bond: 100_000.0,
            k_rep: 10_000.0,
            repulsion_margin: 0.01,
            gradient_tolerance: 10.0,
            max_iterations: 2000,
        }
    }
}

impl RelaxConfig {
    pub fn validate(&self) -> Result<(), RelaxError> {
        let positive = [
            ("k_backbone", self.k_backbone),
            ("k_bond", self.k_bond),
            ("k_rep", self.k_rep),
            ("gradient_tolerance", self.gradient_tolerance),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(RelaxError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.repulsion_margin >= 0.0 && self.repulsion_margin.is_finite()) {
            return Err(RelaxError::Config("repulsion_margin must be non-negative".into()));
        }
        if self.max_iterations == 0 {
            return Err(RelaxError::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionalRestraint {
    pub atom: usize,
    /// nm.
    pub anchor: Vec3,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondRestraint {
    pub i: usize,
    pub j: usize,
    /// nm.
    pub target_length: f64,
    pub k_bond: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoftRepulsion {
    pub i: usize,
    pub j: usize,
    /// nm.
    pub clash_distance: f64,
    pub k_rep: f64,
}

/// Where a system atom came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomOrigin {
    /// chain, residue, atom indices into the protein.
    Protein(usize, usize, usize),
    /// atom index into the ligand.
    Ligand(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxSystem {
    /// nm.
    pub coords: Vec<Vec3>,
    pub positional: Vec<PositionalRestraint>,
    pub bonds: Vec<BondRestraint>,
    pub repulsion: Vec<SoftRepulsion>,
    pub origin: Vec<AtomOrigin>,
}

impl RelaxSystem {
    /// A system with no terms over the given coordinates (nm).
    pub fn from_coords(coords: Vec<Vec3>) -> Self {
        RelaxSystem {
            origin: (0..coords.len()).map(AtomOrigin::Ligand).collect(),
            coords,
            positional: Vec::new(),
            bonds: Vec::new(),
            repulsion: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Energy (kJ/mol) and its exact gradient (kJ/mol/nm) at `coords`.
    pub fn energy_gradient(&self, coords: &[Vec3]) -> Result<(f64, Vec<Vec3>), RelaxError> {
        if coords.len() != self.coords.len() {
            return Err(RelaxError::CoordinateCount {
                expected: self.coords.len(),
                got: coords.len(),
            });
        }
        if let Some(i) = coords.iter().position(|p| !p.iter().all(|v| v.is_finite())) {
            return Err(RelaxError::NonFinite(i));
        }
        let mut e = 0.0;
        let mut g = vec![Vec3::zeros(); coords.len()];
        for r in &self.positional {
            let d = coords[r.atom] - r.anchor;
            e += 0.5 * r.k * d.norm_squared();
            g[r.atom] += r.k * d;
        }
        for b in &self.bonds {
            let v = coords[b.i] - coords[b.j];
            let len = v.norm();
            let dev = len - b.target_length;
            e += 0.5 * b.k_bond * dev * dev;
            if len > 0.0 {
                let f = b.k_bond * dev / len * v;
                g[b.i] += f;
                g[b.j] -= f;
            }
        }
        for r in &self.repulsion {
            let v = coords[r.i] - coords[r.j];
            let len = v.norm();
            if len >= r.clash_distance {
                continue;
            }
            let dev = r.clash_distance - len;
            e += 0.5 * r.k_rep * dev * dev;
            if len > 0.0 {
                let f = -r.k_rep * dev / len * v;
                g[r.i] += f;
                g[r.j] -= f;
            }
        }
        Ok((e, g))
    }
}

/// Heavy-atom bonds of one residue type, by atom name.
fn residue_template(name: &str) -> Option<&'static [(&'static str, &'static str)]> {
    const PHE: &[(&str, &str)] = &[
        ("CB", "CG"), ("CG", "CD1"), ("CG", "CD2"), ("CD1", "CE1"), ("CD2", "CE2"), ("CE1", "CZ"), ("CE2", "CZ"),
    ];
    const TYR: &[(&str, &str)] = &[
        ("CB", "CG"), ("CG", "CD1"), ("CG", "CD2"), ("CD1", "CE1"), ("CD2", "CE2"), ("CE1", "CZ"), ("CE2", "CZ"),
        ("CZ", "OH"),
    ];
    Some(match name {
        "ALA" | "GLY" => &[],
        "ARG" => &[("CB", "CG"), ("CG", "CD"), ("CD", "NE"), ("NE", "CZ"), ("CZ", "NH1"), ("CZ", "NH2")],
        "ASN" => &[("CB", "CG"), ("CG", "OD1"), ("CG", "ND2")],
        "ASP" => &[("CB", "CG"), ("CG", "OD1"), ("CG", "OD2")],
        "CYS" => &[("CB", "SG")],
        "GLN" => &[("CB", "CG"), ("CG", "CD"), ("CD", "OE1"), ("CD", "NE2")],
        "GLU" => &[("CB", "CG"), ("CG", "CD"), ("CD", "OE1"), ("CD", "OE2")],
        "HIS" => &[
            ("CB", "CG"), ("CG", "ND1"), ("CG", "CD2"), ("ND1", "CE1"), ("CD2", "NE2"), ("CE1", "NE2"),
        ],
        "ILE" => &[("CB", "CG1"), ("CB", "CG2"), ("CG1", "CD1")],
        "LEU" => &[("CB", "CG"), ("CG", "CD1"), ("CG", "CD2")],
        "LYS" => &[("CB", "CG"), ("CG", "CD"), ("CD", "CE"), ("CE", "NZ")],
        "MET" => &[("CB", "CG"), ("CG", "SD"), ("SD", "CE")],
        "MSE" => &[("CB", "CG"), ("CG", "SE"), ("SE", "CE")],
        "PHE" => PHE,
        "PRO" => &[("CB", "CG"), ("CG", "CD"), ("CD", "N")],
        "HYP" => &[("CB", "CG"), ("CG", "CD"), ("CD", "N"), ("CG", "OD1")],
        "SER" => &[("CB", "OG")],
        "SEP" => &[("CB", "OG"), ("OG", "P"), ("P", "O1P"), ("P", "O2P"), ("P", "O3P")],
        "THR" => &[("CB", "OG1"), ("CB", "CG2")],
        "TPO" => &[("CB", "OG1"), ("CB", "CG2"), ("OG1", "P"), ("P", "O1P"), ("P", "O2P"), ("P", "O3P")],
        "TRP" => &[
            ("CB", "CG"), ("CG", "CD1"), ("CG", "CD2"), ("CD1", "NE1"), ("NE1", "CE2"), ("CD2", "CE2"),
            ("CE2", "CZ2"), ("CZ2", "CH2"), ("CH2", "CZ3"), ("CZ3", "CE3"), ("CE3", "CD2"),
        ],
        "TYR" => TYR,
        "PTR" => &[
            ("CB", "CG"), ("CG", "CD1"), ("CG", "CD2"), ("CD1", "CE1"), ("CD2", "CE2"), ("CE1", "CZ"), ("CE2", "CZ"),
            ("CZ", "OH"), ("OH", "P"), ("P", "O1P"), ("P", "O2P"), ("P", "O3P"),
        ],
        "VAL" => &[("CB", "CG1"), ("CB", "CG2")],
        "SEC" => &[("CB", "SE")],
        "CSO" => &[("CB", "SG"), ("SG", "OD")],
        "MLY" => &[("CB", "CG"), ("CG", "CD"), ("CD", "CE"), ("CE", "NZ"), ("NZ", "CH1"), ("NZ", "CH2")],
        _ => return None,
    })
}

const BACKBONE_BONDS: [(&str, &str); 5] = [("N", "CA"), ("CA", "C"), ("C", "O"), ("CA", "CB"), ("C", "OXT")];
/// Longest C–N distance (Å) still treated as a peptide bond.
const PEPTIDE_BOND_MAX: f64 = 2.0;

/// Pairs `(i, j)` within two bonds of each other.
fn close_in_graph(adj: &[Vec<usize>]) -> std::collections::BTreeSet<(usize, usize)> {
    let mut out = std::collections::BTreeSet::new();
    for i in 0..adj.len() {
        let mut dist = BTreeMap::from([(i, 0usize)]);
        let mut q = VecDeque::from([i]);
        while let Some(v) = q.pop_front() {
            let dv = dist[&v];
            if dv == 2 {
                continue;
            }
            for &w in &adj[v] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(dv + 1);
                    q.push_back(w);
                }
            }
        }
        out.extend(dist.keys().filter(|&&j| j > i).map(|&j| (i, j)));
    }
    out
}

/// Build the restrained system for `protein` + `ligand`. Hetero groups other
/// than the ligand are not part of the system.
pub fn build_system(
    protein: &ProteinStructure,
    ligand: &SmallMolecule,
    config: &RelaxConfig,
    radii: &RadiusTable,
) -> Result<RelaxSystem, RelaxError> {
    config.validate()?;
    if ligand.heavy_atom_count() == 0 {
        return Err(RelaxError::EmptyLigand);
    }
    let mut coords = Vec::new();
    let mut origin = Vec::new();
    let mut elements = Vec::new();
    let mut positional = Vec::new();
    let mut bond_pairs: Vec<(usize, usize)> = Vec::new();
    for (ci, chain) in protein.chains.iter().enumerate() {
        let mut prev_c: Option<usize> = None;
        for (ri, res) in chain.residues.iter().enumerate() {
            let template = residue_template(&res.name).ok_or_else(|| RelaxError::UnknownResidue {
                residue: res.name.clone(),
                label: res.label(),
            })?;
            let mut by_name = BTreeMap::new();
            for (ai, atom) in res.atoms.iter().enumerate() {
                if atom.is_hydrogen() {
                    continue;
                }
                let idx = coords.len();
                coords.push(atom.position * ANGSTROM_TO_NM);
                origin.push(AtomOrigin::Protein(ci, ri, ai));
                elements.push(atom.element);
                by_name.insert(atom.name.as_str(), idx);
                if BACKBONE_ATOM_NAMES.contains(&atom.name.as_str()) {
                    positional.push(PositionalRestraint {
                        atom: idx,
                        anchor: atom.position * ANGSTROM_TO_NM,
                        k: config.k_backbone,
                    });
                }
            }
            for (a, b) in BACKBONE_BONDS.iter().chain(template) {
                if let (Some(&i), Some(&j)) = (by_name.get(a), by_name.get(b)) {
                    bond_pairs.push((i, j));
                }
            }
            if let (Some(c), Some(&n)) = (prev_c, by_name.get("N")) {
                if (coords[c] - coords[n]).norm() <= PEPTIDE_BOND_MAX * ANGSTROM_TO_NM {
                    bond_pairs.push((c, n));
                }
            }
            prev_c = by_name.get("C").copied();
        }
    }
    let n_protein = coords.len();
    let mut lig_index = vec![usize::MAX; ligand.len()];
    for (li, atom) in ligand.atoms().iter().enumerate() {
        if atom.is_hydrogen() {
            continue;
        }
        lig_index[li] = coords.len();
        coords.push(atom.position * ANGSTROM_TO_NM);
        origin.push(AtomOrigin::Ligand(li));
        elements.push(atom.element);
    }
    for b in ligand.bonds() {
        let (i, j) = (lig_index[b.a], lig_index[b.b]);
        if i != usize::MAX && j != usize::MAX {
            bond_pairs.push((i, j));
        }
    }
    let mut adj = vec![Vec::new(); coords.len()];
    for &(i, j) in &bond_pairs {
        adj[i].push(j);
        adj[j].push(i);
    }
    let excluded = close_in_graph(&adj);
    let bonds = bond_pairs
        .iter()
        .map(|&(i, j)| BondRestraint {
            i,
            j,
            target_length: (coords[i] - coords[j]).norm(),
            k_bond: config.k_bond,
        })
        .collect();
    let clash = |i: usize, j: usize| {
        CLASH_SCALE * (radii.vdw(elements[i]) + radii.vdw(elements[j])) * ANGSTROM_TO_NM + config.repulsion_margin
    };
    let mut repulsion = Vec::new();
    for i in n_protein..coords.len() {
        // protein partners first, then later ligand atoms
        for j in (0..n_protein).chain(i + 1..coords.len()) {
            let (a, b) = (i.min(j), i.max(j));
            if excluded.contains(&(a, b)) || (coords[a] - coords[b]).norm() > NEIGHBOR_CUTOFF_NM {
                continue;
            }
            repulsion.push(SoftRepulsion {
                i: a,
                j: b,
                clash_distance: clash(a, b),
                k_rep: config.k_rep,
            });
        }
    }
    Ok(RelaxSystem {
        coords,
        positional,
        bonds,
        repulsion,
        origin,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    /// nm.
    pub coords: Vec<Vec3>,
    pub iterations: usize,
    /// Energy after each accepted step, starting with the initial energy.
    pub energies: Vec<f64>,
    pub final_max_gradient: f64,
    pub converged: bool,
    pub message: Option<String>,
}

fn max_norm(g: &[Vec3]) -> f64 {
    g.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

const ARMIJO_C: f64 = 1e-4;
const SHRINK: f64 = 0.5;
/// First trial step, nm per (kJ/mol/nm).
const INITIAL_STEP: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;

/// Steepest descent with backtracking (Armijo) line search. The trial step
/// starts at twice the last accepted one.
pub fn minimize(system: &RelaxSystem, config: &RelaxConfig) -> Result<MinimizeResult, RelaxError> {
    config.validate()?;
    let mut x = system.coords.clone();
    let (mut e, mut g) = system.energy_gradient(&x)?;
    let mut energies = vec![e];
    let mut step = INITIAL_STEP;
    let mut iterations = 0;
    let mut gmax = max_norm(&g);
    let mut message = None;
    while gmax > config.gradient_tolerance {
        if iterations >= config.max_iterations {
            message = Some(format!("stopped after {iterations} iterations"));
            break;
        }
        let g2: f64 = g.iter().map(|v| v.norm_squared()).sum();
        let mut alpha = step;
        let accepted = loop {
            let trial: Vec<Vec3> = x.iter().zip(&g).map(|(p, d)| p - alpha * d).collect();
            let (et, gt) = system.energy_gradient(&trial)?;
            if et <= e - ARMIJO_C * alpha * g2 {
                break Some((trial, et, gt));
            }
            alpha *= SHRINK;
            if alpha < MIN_STEP {
                break None;
            }
        };
        let Some((xn, en, gn)) = accepted else {
            message = Some(format!("line search found no decrease (max gradient {gmax:.3e})"));
            break;
        };
        debug_assert!(en <= e);
        x = xn;
        e = en;
        g = gn;
        gmax = max_norm(&g);
        energies.push(e);
        iterations += 1;
        step = 2.0 * alpha;
    }
    Ok(MinimizeResult {
        coords: x,
        iterations,
        energies,
        final_max_gradient: gmax,
        converged: gmax <= config.gradient_tolerance,
        message,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxStats {
    pub clash_count_before: usize,
    pub clash_count_after: usize,
    /// Å.
    pub backbone_rmsd_from_input: f64,
    /// Mean displacement of restrained backbone atoms, Å.
    pub backbone_mean_displacement: f64,
    /// Mean displacement of ligand heavy atoms, Å.
    pub ligand_mean_displacement: f64,
    pub iterations: usize,
    pub final_max_gradient: f64,
    pub converged: bool,
    pub energy_before: f64,
    pub energy_after: f64,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxOutcome {
    pub protein: ProteinStructure,
    pub ligand: SmallMolecule,
    pub stats: RelaxStats,
    pub minimization: MinimizeResult,
}

/// Ligand heavy atom / protein heavy atom pairs at or below 0.75 × vdW sum.
pub fn clash_count(protein: &ProteinStructure, ligand: &SmallMolecule, radii: &RadiusTable) -> usize {
    let prot = protein.polymer_heavy_atoms();
    ligand
        .atoms()
        .iter()
        .filter(|a| !a.is_hydrogen())
        .map(|a| {
            prot.iter()
                .filter(|p| {
                    (a.position - p.position).norm() <= CLASH_SCALE * (radii.vdw(a.element) + radii.vdw(p.element))
                })
                .count()
        })
        .sum()
}

/// Index of the atom each hydrogen follows: its bonded heavy atom for the
/// ligand, the nearest heavy atom of the same residue for the protein.
fn hydrogen_parent_in_residue(res: &crate::chemio::Residue, h: usize) -> Option<usize> {
    let p = res.atoms[h].position;
    res.atoms
        .iter()
        .enumerate()
        .filter(|(_, a)| !a.is_hydrogen())
        .map(|(i, a)| (i, (a.position - p).norm()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
}

/// Relax the complex and rebuild it with the new coordinates (same topology).
pub fn relax_complex(
    protein: &ProteinStructure,
    ligand: &SmallMolecule,
    config: &RelaxConfig,
    radii: &RadiusTable,
) -> Result<RelaxOutcome, RelaxError> {
    let system = build_system(protein, ligand, config, radii)?;
    let result = minimize(&system, config)?;
    let shift: Vec<Vec3> = result
        .coords
        .iter()
        .zip(&system.coords)
        .map(|(a, b)| (a - b) / ANGSTROM_TO_NM)
        .collect();

    let mut prot_shift: BTreeMap<(usize, usize, usize), Vec3> = BTreeMap::new();
    let mut lig_shift: BTreeMap<usize, Vec3> = BTreeMap::new();
    for (k, o) in system.origin.iter().enumerate() {
        match *o {
            AtomOrigin::Protein(c, r, a) => {
                prot_shift.insert((c, r, a), shift[k]);
            }
            AtomOrigin::Ligand(i) => {
                lig_shift.insert(i, shift[k]);
            }
        }
    }

    let mut out_protein = protein.clone();
    for (ci, chain) in out_protein.chains.iter_mut().enumerate() {
        for (ri, res) in chain.residues.iter_mut().enumerate() {
            let parents: Vec<Option<usize>> = (0..res.atoms.len())
                .map(|ai| {
                    if res.atoms[ai].is_hydrogen() {
                        hydrogen_parent_in_residue(res, ai)
                    } else {
                        Some(ai)
                    }
                })
                .collect();
            for (ai, parent) in parents.into_iter().enumerate() {
                if let Some(d) = parent.and_then(|p| prot_shift.get(&(ci, ri, p))) {
                    res.atoms[ai].position += d;
                }
            }
        }
    }

    let adj = ligand.adjacency();
    let new_lig_pos: Vec<Vec3> = ligand
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let key = if a.is_hydrogen() {
                adj[i].iter().map(|&(j, _)| j).find(|&j| !ligand.atoms()[j].is_hydrogen())
            } else {
                Some(i)
            };
            a.position + key.and_then(|k| lig_shift.get(&k)).copied().unwrap_or_else(Vec3::zeros)
        })
        .collect();
    let out_ligand = ligand
        .with_positions(&new_lig_pos)
        .map_err(|_| RelaxError::NonFinite(0))?;

    let mut bb_sq = 0.0;
    let mut bb_abs = 0.0;
    for r in &system.positional {
        let d = shift[r.atom].norm();
        bb_sq += d * d;
        bb_abs += d;
    }
    let n_bb = system.positional.len().max(1) as f64;
    let lig_moves: Vec<f64> = lig_shift.values().map(|v| v.norm()).collect();
    let stats = RelaxStats {
        clash_count_before: clash_count(protein, ligand, radii),
        clash_count_after: clash_count(&out_protein, &out_ligand, radii),
        backbone_rmsd_from_input: (bb_sq / n_bb).sqrt(),
        backbone_mean_displacement: bb_abs / n_bb,
        ligand_mean_displacement: lig_moves.iter().sum::<f64>() / lig_moves.len() as f64,
        iterations: result.iterations,
        final_max_gradient: result.final_max_gradient,
        converged: result.converged,
        energy_before: result.energies[0],
        energy_after: *result.energies.last().expect("initial energy"),
        message: result.message.clone(),
    };
    Ok(RelaxOutcome {
        protein: out_protein,
        ligand: out_ligand,
        stats,
        minimization: result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemio::Element;
    use crate::fixtures::{helix_protein, molecule, phenol};

    #[test]
    fn restraint_example() {
        let mut s = RelaxSystem::from_coords(vec![Vec3::new(1.0, 0.0, 0.0)]);
        s.positional.push(PositionalRestraint {
            atom: 0,
            anchor: Vec3::zeros(),
            k: 10.0,
        });
        let (e, g) = s.energy_gradient(&s.coords).unwrap();
        assert_eq!(e, 5.0);
        assert_eq!(g[0], Vec3::new(10.0, 0.0, 0.0));
    }

    #[test]
    fn repulsion_vanishes_at_boundary() {
        let mut s = RelaxSystem::from_coords(vec![Vec3::zeros(), Vec3::new(0.3, 0.0, 0.0)]);
        s.repulsion.push(SoftRepulsion {
            i: 0,
            j: 1,
            clash_distance: 0.3,
            k_rep: 100.0,
        });
        let (e, g) = s.energy_gradient(&s.coords).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(g, vec![Vec3::zeros(); 2]);
        let (e, _) = s.energy_gradient(&[Vec3::zeros(), Vec3::new(0.2, 0.0, 0.0)]).unwrap();
        assert!((e - 0.5 * 100.0 * 0.01).abs() < 1e-12);
    }

    #[test]
    fn quadratic_bowl_converges() {
        let mut s = RelaxSystem::from_coords(vec![Vec3::new(3.0, -2.0, 1.0)]);
        s.positional.push(PositionalRestraint {
            atom: 0,
            anchor: Vec3::zeros(),
            k: 10.0,
        });
        let r = minimize(&s, &RelaxConfig::default()).unwrap();
        assert!(r.converged);
        assert!(r.coords[0].norm() <= 1.0);
        assert!(r.energies.windows(2).all(|w| w[1] <= w[0]));
        let at_rest = RelaxSystem::from_coords(vec![Vec3::zeros()]);
        assert_eq!(minimize(&at_rest, &RelaxConfig::default()).unwrap().iterations, 0);
    }

    #[test]
    fn budget_exhaustion() {
        let mut s = RelaxSystem::from_coords(vec![Vec3::new(300.0, 0.0, 0.0)]);
        s.positional.push(PositionalRestraint {
            atom: 0,
            anchor: Vec3::zeros(),
            k: 10.0,
        });
        let cfg = RelaxConfig {
            max_iterations: 1,
            ..Default::default()
        };
        let r = minimize(&s, &cfg).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(!r.converged);
    }

    #[test]
    fn term_counts() {
        let p = helix_protein("MKTAYIAKQR");
        let far = phenol(Vec3::new(100.0, 100.0, 100.0));
        let s = build_system(&p, &far, &RelaxConfig::default(), &RadiusTable::default()).unwrap();
        assert_eq!(s.positional.len(), 40);
        let ligand_bonds = s
            .bonds
            .iter()
            .filter(|b| matches!(s.origin[b.i], AtomOrigin::Ligand(_)))
            .count();
        assert_eq!(ligand_bonds, far.bonds().len());
        let cross = s
            .repulsion
            .iter()
            .filter(|r| matches!(s.origin[r.i], AtomOrigin::Protein(..)))
            .count();
        assert_eq!(cross, 0);
        // 9 peptide links, 10×(N-CA, CA-C, C-O), 10 CA-CB; fixtures carry no side chain beyond CB
        let protein_bonds = s.bonds.len() - ligand_bonds;
        assert_eq!(protein_bonds, 9 + 30 + 10);
    }

    #[test]
    fn unknown_residue_is_an_error() {
        let mut p = helix_protein("AAAA");
        p.chains[0].residues[1].name = "XYZ".into();
        let lig = molecule(&[(Element::C, [0.0; 3])], &[]);
        assert!(matches!(
            build_system(&p, &lig, &RelaxConfig::default(), &RadiusTable::default()),
            Err(RelaxError::UnknownResidue { .. })
        ));
    }

    #[test]
    fn clash_free_complex_is_a_fixed_point() {
        let p = helix_protein("MKTAYIAKQR");
        let lig = phenol(Vec3::new(40.0, 0.0, 0.0));
        let out = relax_complex(&p, &lig, &RelaxConfig::default(), &RadiusTable::default()).unwrap();
        assert_eq!(out.stats.iterations, 0);
        for (a, b) in p.polymer_atoms().zip(out.protein.polymer_atoms()) {
            assert!((a.position - b.position).norm() < 1e-6);
        }
        assert_eq!(out.ligand, lig);
    }
}
