//! Cross-docking set construction: superpose a candidate structure onto a
//! reference by matched Cα atoms, carry its ligand across, and reject the pair
//! when the proteins or the ligand positions disagree too much.

use serde::{Deserialize, Serialize};

use crate::chemio::{Chain, ProteinStructure, SmallMolecule};
use crate::geom::{kabsch_superpose, GeomError, RigidTransform, Vec3};
use crate::seqalign::{global_align, Scoring};

/// Largest chain count on either side for which pairings are enumerated.
pub const MAX_CHAINS: usize = 4;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CrossDockError {
    #[error("no correspondence: fewer than 3 aligned identical residues between the structures")]
    NoCorrespondence,
    #[error("{0} has no polymer chains with Cα atoms")]
    NoChains(&'static str),
    #[error("{side} has {count} chains; at most {MAX_CHAINS} are supported, select chains first")]
    TooManyChains { side: &'static str, count: usize },
    #[error("degenerate Cα geometry: {0}")]
    Degenerate(GeomError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// Maps candidate coordinates into the reference frame.
    pub transform: RigidTransform,
    /// Å, over matched Cα after superposition.
    pub ca_rmsd: f64,
    pub matched_residue_pairs: usize,
    /// `(candidate chain, reference chain)` in the order they were paired.
    pub chain_pairs: Vec<(String, String)>,
}

fn ca_chains(p: &ProteinStructure) -> Vec<&Chain> {
    p.chains.iter().filter(|c| c.ca_residues().next().is_some()).collect()
}

fn ca_positions(c: &Chain) -> Vec<Vec3> {
    c.ca_residues().map(|r| r.ca().expect("filtered").position).collect()
}

/// Cα pairs of residues that align with identical residue types.
fn matched_cas(cand: &Chain, reference: &Chain) -> (i32, Vec<(Vec3, Vec3)>) {
    let (sa, sb) = (cand.sequence(), reference.sequence());
    let al = global_align(sa.as_bytes(), sb.as_bytes(), Scoring::default());
    let (pa, pb) = (ca_positions(cand), ca_positions(reference));
    let pairs = al
        .aligned_pairs()
        .filter(|&(i, j)| sa.as_bytes()[i] == sb.as_bytes()[j])
        .map(|(i, j)| (pa[i], pb[j]))
        .collect();
    (al.score, pairs)
}

/// Superpose `candidate` onto `reference`.
///
/// Every candidate/reference chain pair is aligned; pairs are then taken
/// greedily by descending alignment score (ties by reference, then candidate
/// chain order), each chain used at most once.
pub fn align_to_reference(
    candidate: &ProteinStructure,
    reference: &ProteinStructure,
) -> Result<AlignmentResult, CrossDockError> {
    let (cc, rc) = (ca_chains(candidate), ca_chains(reference));
    if cc.is_empty() {
        return Err(CrossDockError::NoChains("candidate"));
    }
    if rc.is_empty() {
        return Err(CrossDockError::NoChains("reference"));
    }
    for (side, n) in [("candidate", cc.len()), ("reference", rc.len())] {
        if n > MAX_CHAINS {
            return Err(CrossDockError::TooManyChains { side, count: n });
        }
    }
    let mut options = Vec::new();
    for (ri, r) in rc.iter().enumerate() {
        for (ci, c) in cc.iter().enumerate() {
            let (score, pairs) = matched_cas(c, r);
            if !pairs.is_empty() {
                options.push((score, ri, ci, pairs));
            }
        }
    }
    options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let (mut used_r, mut used_c) = (vec![false; rc.len()], vec![false; cc.len()]);
    let (mut moving, mut target, mut chain_pairs) = (Vec::new(), Vec::new(), Vec::new());
    for (_, ri, ci, pairs) in options {
        if used_r[ri] || used_c[ci] {
            continue;
        }
        used_r[ri] = true;
        used_c[ci] = true;
        chain_pairs.push((cc[ci].id.clone(), rc[ri].id.clone()));
        for (m, t) in pairs {
            moving.push(m);
            target.push(t);
        }
    }
    if moving.len() < 3 {
        return Err(CrossDockError::NoCorrespondence);
    }
    let (transform, ca_rmsd) = kabsch_superpose(&moving, &target).map_err(CrossDockError::Degenerate)?;
    Ok(AlignmentResult {
        transform,
        ca_rmsd,
        matched_residue_pairs: moving.len(),
        chain_pairs,
    })
}

/// Ligand coordinates carried into the reference frame; the graph is untouched.
pub fn transfer_ligand(ligand: &SmallMolecule, alignment: &AlignmentResult) -> SmallMolecule {
    ligand.map_positions(|p| alignment.transform.apply(p))
}

/// Heavy-atom centroid distance, Å.
pub fn ligand_displacement(transferred: &SmallMolecule, reference: &SmallMolecule) -> f64 {
    (transferred.heavy_centroid() - reference.heavy_centroid()).norm()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossDockThresholds {
    /// Å; candidates strictly above are rejected.
    pub max_ca_rmsd: f64,
    /// Å; candidates strictly above are rejected.
    pub max_ligand_displacement: f64,
}

impl Default for CrossDockThresholds {
    fn default() -> Self {
        CrossDockThresholds {
            max_ca_rmsd: 2.0,
            max_ligand_displacement: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    Alignment,
    LigandShift,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::Alignment => "alignment",
            RejectReason::LigandShift => "ligand-shift",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject(RejectReason),
}

impl Decision {
    pub fn is_accept(self) -> bool {
        self == Decision::Accept
    }
}

/// Alignment quality is checked before ligand displacement.
pub fn decide(ca_rmsd: f64, displacement: f64, t: &CrossDockThresholds) -> Decision {
    if ca_rmsd > t.max_ca_rmsd {
        Decision::Reject(RejectReason::Alignment)
    } else if displacement > t.max_ligand_displacement {
        Decision::Reject(RejectReason::LigandShift)
    } else {
        Decision::Accept
    }
}

pub fn candidate_filter(alignment: &AlignmentResult, displacement: f64, t: &CrossDockThresholds) -> Decision {
    decide(alignment.ca_rmsd, displacement, t)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossDockReportRow {
    pub candidate_id: String,
    pub ca_rmsd: Option<f64>,
    pub displacement: Option<f64>,
    pub decision: String,
    pub reason: String,
}

impl CrossDockReportRow {
    pub fn from_decision(candidate_id: &str, ca_rmsd: f64, displacement: f64, d: Decision) -> Self {
        CrossDockReportRow {
            candidate_id: candidate_id.to_string(),
            ca_rmsd: Some(ca_rmsd),
            displacement: Some(displacement),
            decision: if d.is_accept() { "accept" } else { "reject" }.into(),
            reason: match d {
                Decision::Accept => String::new(),
                Decision::Reject(r) => r.as_str().into(),
            },
        }
    }

    pub fn from_error(candidate_id: &str, err: &CrossDockError) -> Self {
        CrossDockReportRow {
            candidate_id: candidate_id.to_string(),
            ca_rmsd: None,
            displacement: None,
            decision: "error".into(),
            reason: err.to_string(),
        }
    }
}

pub fn write_report(rows: &[CrossDockReportRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record(["candidate_id", "ca_rmsd", "displacement", "decision", "reason"])
            .expect("in-memory CSV");
    }
    for r in rows {
        w.serialize(r).expect("in-memory CSV");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
