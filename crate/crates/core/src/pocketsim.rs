//! Binding-pocket extraction and pocket-to-pocket TM-score similarity.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chemio::{read_pdb_file, read_sdf_file, ProteinStructure, Residue, SmallMolecule};
use crate::geom::{kabsch_superpose, GeomError, Vec3};
use crate::par::{self, Execution};
use crate::seqalign::{global_align, Scoring};

pub const POCKET_CUTOFF: f64 = 10.0;
pub const SIMILARITY_THRESHOLD: f64 = 0.70;
/// Minimum Cα count for a pocket to be scored.
pub const MIN_POCKET_CA: usize = 5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PocketError {
    #[error("no residue within {0} Å of the ligand")]
    Empty(f64),
    #[error("pocket {id} has {got} Cα atoms; at least {MIN_POCKET_CA} are needed")]
    TooFewCa { id: String, got: usize },
    #[error("only {0} matched residues; at least 3 are needed")]
    TooFewMatched(usize),
    #[error("superposition failed: {0}")]
    Geometry(GeomError),
    #[error("every corpus comparison failed ({0} pockets)")]
    AllFailed(usize),
    #[error("corpus is empty")]
    EmptyCorpus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pocket {
    pub source_entry: String,
    /// Residues in structure order, each keeping its chain id.
    pub residues: Vec<Residue>,
    /// Cα of each residue that has one, in the same order.
    pub ca_coords: Vec<Vec3>,
    /// One-letter codes of the residues with a Cα.
    pub sequence: String,
}

impl Pocket {
    pub fn from_residues(source_entry: &str, residues: Vec<Residue>) -> Self {
        let with_ca: Vec<&Residue> = residues.iter().filter(|r| r.ca().is_some()).collect();
        Pocket {
            source_entry: source_entry.to_string(),
            ca_coords: with_ca.iter().map(|r| r.ca().expect("filtered").position).collect(),
            sequence: with_ca.iter().map(|r| r.one_letter()).collect(),
            residues,
        }
    }

    pub fn len(&self) -> usize {
        self.ca_coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ca_coords.is_empty()
    }
}

/// Residues with any heavy atom within `cutoff` Å (inclusive) of any ligand
/// heavy atom.
pub fn extract_pocket(
    protein: &ProteinStructure,
    ligand: &SmallMolecule,
    cutoff: f64,
    source_entry: &str,
) -> Result<Pocket, PocketError> {
    let lig = ligand.heavy_positions();
    let residues: Vec<Residue> = protein
        .residues()
        .filter(|r| {
            r.heavy_atoms()
                .any(|a| lig.iter().any(|q| (a.position - q).norm() <= cutoff))
        })
        .cloned()
        .collect();
    if residues.is_empty() {
        return Err(PocketError::Empty(cutoff));
    }
    Ok(Pocket::from_residues(source_entry, residues))
}

/// TM-score distance scale for a reference of `l_ref` residues, floored at 0.5 Å.
pub fn d0(l_ref: usize) -> f64 {
    let raw = 1.24 * (l_ref as f64 - 15.0).cbrt() - 1.8;
    raw.max(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmScoreParams {
    pub l_ref: usize,
    pub d0: f64,
}

impl TmScoreParams {
    pub fn for_reference(l_ref: usize) -> Self {
        TmScoreParams { l_ref, d0: d0(l_ref) }
    }
}

/// `(1/L_ref) Σ 1/(1 + (d_i/d0)²)` over paired, already superposed points.
pub fn tm_sum(query: &[Vec3], reference: &[Vec3], params: TmScoreParams) -> f64 {
    let s: f64 = query
        .iter()
        .zip(reference)
        .map(|(a, b)| {
            let x = (a - b).norm() / params.d0;
            1.0 / (1.0 + x * x)
        })
        .sum();
    s / params.l_ref as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TmScore {
    pub score: f64,
    pub matched: usize,
    pub params: TmScoreParams,
    /// Cα RMSD of the matched pairs after superposition, Å.
    pub rmsd: f64,
}

/// Similarity of `query` to `reference`, normalised by the reference length.
///
/// Residues are paired by global alignment of the pocket sequences (every
/// aligned column counts, identical or not); matched Cα are superposed by
/// Kabsch before scoring.
pub fn pocket_tm_score(query: &Pocket, reference: &Pocket) -> Result<TmScore, PocketError> {
    for p in [query, reference] {
        if p.len() < MIN_POCKET_CA {
            return Err(PocketError::TooFewCa {
                id: p.source_entry.clone(),
                got: p.len(),
            });
        }
    }
    let al = global_align(query.sequence.as_bytes(), reference.sequence.as_bytes(), Scoring::default());
    let (q, r): (Vec<Vec3>, Vec<Vec3>) = al
        .aligned_pairs()
        .map(|(i, j)| (query.ca_coords[i], reference.ca_coords[j]))
        .unzip();
    if q.len() < 3 {
        return Err(PocketError::TooFewMatched(q.len()));
    }
    let (t, rmsd) = kabsch_superpose(&q, &r).map_err(PocketError::Geometry)?;
    let params = TmScoreParams::for_reference(reference.len());
    Ok(TmScore {
        score: tm_sum(&t.apply_all(&q), &r, params),
        matched: q.len(),
        params,
        rmsd,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusMatch {
    pub score: f64,
    pub best_index: usize,
    pub best_id: String,
    /// Pairwise comparisons that raised an error and were skipped.
    pub failures: usize,
}

/// Highest score of `query` against any corpus pocket. Ties go to the lowest
/// corpus index, independent of execution mode.
pub fn max_similarity_vs_corpus(
    query: &Pocket,
    corpus: &[Pocket],
    exec: Execution,
) -> Result<CorpusMatch, PocketError> {
    if corpus.is_empty() {
        return Err(PocketError::EmptyCorpus);
    }
    let scores = par::map(exec, corpus, |p| pocket_tm_score(query, p).map(|s| s.score));
    let failures = scores.iter().filter(|s| s.is_err()).count();
    if failures > 0 {
        log::warn!("pocket={} corpus_failures={failures}", query.source_entry);
    }
    let best = scores
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.as_ref().ok().map(|&v| (i, v)))
        .fold(None, |acc: Option<(usize, f64)>, (i, v)| match acc {
            Some((_, b)) if b >= v => acc,
            _ => Some((i, v)),
        });
    match best {
        None => Err(PocketError::AllFailed(corpus.len())),
        Some((i, score)) => Ok(CorpusMatch {
            score,
            best_index: i,
            best_id: corpus[i].source_entry.clone(),
            failures,
        }),
    }
}

/// Split into `(similar, dissimilar)` at `threshold` (similar is `≥`),
/// preserving input order.
pub fn stratify<T: Clone>(entries: &[(T, f64)], threshold: f64) -> (Vec<(T, f64)>, Vec<(T, f64)>) {
    entries.iter().cloned().partition(|(_, s)| *s >= threshold)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub entry_id: String,
    pub protein_path: PathBuf,
    pub ligand_path: PathBuf,
    /// ISO date, `YYYY-MM-DD`.
    pub release_date: String,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corpus index: {0}")]
    Csv(#[from] csv::Error),
}

/// Read an index CSV (`entry_id,protein_path,ligand_path,release_date`).
/// Relative paths resolve against the index file's directory.
pub fn load_corpus_index(path: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for row in csv::Reader::from_reader(text.as_bytes()).deserialize::<CorpusEntry>() {
        let mut e = row?;
        if e.protein_path.is_relative() {
            e.protein_path = base.join(&e.protein_path);
        }
        if e.ligand_path.is_relative() {
            e.ligand_path = base.join(&e.ligand_path);
        }
        out.push(e);
    }
    Ok(out)
}

/// Extract a pocket for every entry released strictly before `released_before`
/// (all entries if `None`). Entries that fail to load are returned separately.
pub fn build_corpus(
    entries: &[CorpusEntry],
    cutoff: f64,
    released_before: Option<&str>,
    exec: Execution,
) -> (Vec<Pocket>, Vec<(String, String)>) {
    let kept: Vec<&CorpusEntry> = entries
        .iter()
        .filter(|e| released_before.is_none_or(|d| e.release_date.as_str() < d))
        .collect();
    let built = par::map(exec, &kept, |e| -> Result<Pocket, String> {
        let protein = read_pdb_file(&e.protein_path).map_err(|x| x.to_string())?;
        let ligand = read_sdf_file(&e.ligand_path).map_err(|x| x.to_string())?;
        extract_pocket(&protein, &ligand, cutoff, &e.entry_id).map_err(|x| x.to_string())
    });
    let mut pockets = Vec::new();
    let mut failed = Vec::new();
    for (e, r) in kept.iter().zip(built) {
        match r {
            Ok(p) => pockets.push(p),
            Err(msg) => failed.push((e.entry_id.clone(), msg)),
        }
    }
    (pockets, failed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{helix_protein, molecule};
    use crate::chemio::Element;
    use crate::geom::RigidTransform;

    fn pocket_of(seq: &str, id: &str) -> Pocket {
        let p = helix_protein(seq);
        Pocket::from_residues(id, p.residues().cloned().collect())
    }

    #[test]
    fn d0_formula() {
        let expected = 1.24 * 70f64.powf(1.0 / 3.0) - 1.8;
        assert!((d0(85) - expected).abs() < 1e-12);
        assert!((d0(85) - 3.3102).abs() < 1e-3);
        assert_eq!(d0(16), 0.5);
        assert_eq!(d0(5), 0.5);
    }

    #[test]
    fn self_score_is_one_and_motion_invariant() {
        let p = pocket_of("MKTAYIAKQRQISFVKSHFS", "p");
        assert!((pocket_tm_score(&p, &p).unwrap().score - 1.0).abs() < 1e-9);
        let t = RigidTransform::from_axis_angle(Vec3::new(0.2, 1.0, 0.3), 2.0)
            .compose(&RigidTransform::from_translation(Vec3::new(5.0, -3.0, 8.0)));
        let mut q = p.clone();
        q.ca_coords = t.apply_all(&q.ca_coords);
        assert!((pocket_tm_score(&q, &p).unwrap().score - 1.0).abs() < 1e-9);
    }

    #[test]
    fn score_is_asymmetric_in_length() {
        let big = pocket_of("MKTAYIAKQRGGGGGGGGGGGG", "big");
        let small = pocket_of("MKTAYIAKQR", "small");
        let a = pocket_tm_score(&small, &big).unwrap().score;
        let b = pocket_tm_score(&big, &small).unwrap().score;
        assert!((b - 1.0).abs() < 1e-9);
        assert!((a - 10.0 / 22.0).abs() < 1e-9);
    }

    #[test]
    fn cutoff_is_inclusive() {
        let p = helix_protein("AAAAAAAAAAAAAAAAAAAAAAAAAAAAAA");
        // single-atom "ligand" far below the helix
        let far = Vec3::new(0.0, 0.0, -200.0);
        let lig = molecule(&[(Element::C, [far.x, far.y, far.z])], &[]);
        assert_eq!(extract_pocket(&p, &lig, 10.0, "x"), Err(PocketError::Empty(10.0)));
        let nearest = p
            .polymer_heavy_atoms()
            .iter()
            .map(|a| (a.position - far).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(extract_pocket(&p, &lig, nearest, "x").is_ok());
        assert!(extract_pocket(&p, &lig, nearest - 1e-9, "x").is_err());
    }

    #[test]
    fn corpus_max_and_ties() {
        let q = pocket_of("MKTAYIAKQRQISF", "q");
        // stretched helix: no rigid motion maps it onto the query
        let mut other = pocket_of("GSHWWEFLDNAPKE", "o");
        other.ca_coords.iter_mut().for_each(|p| *p *= 1.5);
        let corpus = vec![other.clone(), q.clone(), q.clone()];
        for exec in [Execution::Sequential, Execution::Parallel] {
            let m = max_similarity_vs_corpus(&q, &corpus, exec).unwrap();
            assert_eq!(m.best_index, 1);
            assert!((m.score - 1.0).abs() < 1e-9);
        }
        let brute = corpus
            .iter()
            .map(|p| pocket_tm_score(&q, p).unwrap().score)
            .fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(max_similarity_vs_corpus(&q, &corpus, Execution::Sequential).unwrap().score, brute);
    }

    #[test]
    fn stratify_threshold_inclusive() {
        let e = vec![("a", 0.70), ("b", 0.69), ("c", 0.95)];
        let (s, d) = stratify(&e, SIMILARITY_THRESHOLD);
        assert_eq!(s, vec![("a", 0.70), ("c", 0.95)]);
        assert_eq!(d, vec![("b", 0.69)]);
        let empty: Vec<(&str, f64)> = vec![];
        assert_eq!(stratify(&empty, 0.7), (vec![], vec![]));
    }
}
