//! Benchmark set construction from a manifest of per-entry quality metrics:
//! ordered filter rows, unique PDB/CCD pair selection by maximum bipartite
//! matching, greedy sequence clustering, and cross-dock pair assembly.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chemio::{ProteinStructure, SmallMolecule};
use crate::crossdock::{
    align_to_reference, decide, ligand_displacement, CrossDockReportRow, CrossDockThresholds, Decision,
};
use crate::geom::RigidTransform;
use crate::par::{self, Execution};
use crate::seqalign::{global_align, Scoring};

#[derive(Debug, thiserror::Error)]
pub enum CurateError {
    #[error("manifest is missing fields required by enabled filters: {}", .0.join("; "))]
    MissingFields(Vec<String>),
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("entry {0} has an empty protein sequence")]
    EmptySequence(String),
    #[error("invalid filter configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One ligand instance in one PDB entry, with the precomputed quantities the
/// filter rows test. Optional fields may be absent when their row is disabled.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub pdb_id: String,
    pub ccd_id: String,
    #[serde(default)]
    pub release_date: Option<String>,
    #[serde(default)]
    pub resolution: Option<f64>,
    #[serde(default)]
    pub ligand_mw: Option<f64>,
    #[serde(default)]
    pub heavy_atom_count: Option<u32>,
    #[serde(default)]
    pub elements: Option<Vec<String>>,
    #[serde(default)]
    pub covalently_bound: Option<bool>,
    #[serde(default)]
    pub rsr: Option<f64>,
    #[serde(default)]
    pub rscc: Option<f64>,
    #[serde(default)]
    pub completeness: Option<f64>,
    #[serde(default)]
    pub conformer_generated: Option<bool>,
    #[serde(default)]
    pub sanitizable: Option<bool>,
    #[serde(default)]
    pub stereo_errors: Option<bool>,
    #[serde(default)]
    pub atomic_clashes: Option<bool>,
    #[serde(default)]
    pub sequences: Option<Vec<String>>,
    #[serde(default)]
    pub min_protein_distance: Option<f64>,
    /// Absent when the structure holds no other ligand.
    #[serde(default)]
    pub min_other_ligand_distance: Option<f64>,
    /// Absent when the structure holds no metal ion.
    #[serde(default)]
    pub min_metal_distance: Option<f64>,
    #[serde(default)]
    pub min_symmetry_mate_distance: Option<f64>,
    #[serde(default)]
    pub protein_path: Option<String>,
    #[serde(default)]
    pub ligand_path: Option<String>,
}

impl ManifestEntry {
    pub fn new(pdb_id: &str, ccd_id: &str) -> Self {
        ManifestEntry {
            pdb_id: pdb_id.to_string(),
            ccd_id: ccd_id.to_string(),
            ..Default::default()
        }
    }

    /// `{pdb_id}_{ccd_id}`.
    pub fn id(&self) -> String {
        format!("{}_{}", self.pdb_id, self.ccd_id)
    }

    /// Protein chains concatenated in manifest order.
    pub fn concatenated_sequence(&self) -> Option<String> {
        self.sequences.as_ref().map(|s| s.concat())
    }

    fn validate(&self) -> Result<(), String> {
        let id = self.id();
        if self.pdb_id.is_empty() || self.ccd_id.is_empty() {
            return Err("pdb_id and ccd_id must be non-empty".into());
        }
        if let Some(r) = self.resolution {
            if !(r > 0.0) {
                return Err(format!("{id}: resolution must be > 0"));
            }
        }
        if let Some(c) = self.completeness {
            if !(0.0..=100.0).contains(&c) {
                return Err(format!("{id}: completeness must be in [0, 100]"));
            }
        }
        if let Some(c) = self.rscc {
            if !(-1.0..=1.0).contains(&c) {
                return Err(format!("{id}: rscc must be in [-1, 1]"));
            }
        }
        if let Some(d) = &self.release_date {
            if !is_iso_date(d) {
                return Err(format!("{id}: release_date {d:?} is not YYYY-MM-DD"));
            }
        }
        Ok(())
    }
}

fn is_iso_date(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 10
        && b[4] == b'-'
        && b[7] == b'-'
        && b.iter().enumerate().all(|(i, c)| i == 4 || i == 7 || c.is_ascii_digit())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CsvEntry {
    pdb_id: String,
    ccd_id: String,
    release_date: Option<String>,
    resolution: Option<f64>,
    ligand_mw: Option<f64>,
    heavy_atom_count: Option<u32>,
    elements: Option<String>,
    covalently_bound: Option<bool>,
    rsr: Option<f64>,
    rscc: Option<f64>,
    completeness: Option<f64>,
    #[serde(default)]
    conformer_generated: Option<bool>,
    #[serde(default)]
    sanitizable: Option<bool>,
    stereo_errors: Option<bool>,
    atomic_clashes: Option<bool>,
    sequences: Option<String>,
    min_protein_distance: Option<f64>,
    min_other_ligand_distance: Option<f64>,
    #[serde(default)]
    min_metal_distance: Option<f64>,
    min_symmetry_mate_distance: Option<f64>,
    #[serde(default)]
    protein_path: Option<String>,
    #[serde(default)]
    ligand_path: Option<String>,
}

fn split_list(s: Option<String>) -> Option<Vec<String>> {
    s.map(|s| s.split(';').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect())
}

impl From<CsvEntry> for ManifestEntry {
    fn from(c: CsvEntry) -> Self {
        ManifestEntry {
            pdb_id: c.pdb_id,
            ccd_id: c.ccd_id,
            release_date: c.release_date,
            resolution: c.resolution,
            ligand_mw: c.ligand_mw,
            heavy_atom_count: c.heavy_atom_count,
            elements: split_list(c.elements),
            covalently_bound: c.covalently_bound,
            rsr: c.rsr,
            rscc: c.rscc,
            completeness: c.completeness,
            conformer_generated: c.conformer_generated,
            sanitizable: c.sanitizable,
            stereo_errors: c.stereo_errors,
            atomic_clashes: c.atomic_clashes,
            sequences: split_list(c.sequences),
            min_protein_distance: c.min_protein_distance,
            min_other_ligand_distance: c.min_other_ligand_distance,
            min_metal_distance: c.min_metal_distance,
            min_symmetry_mate_distance: c.min_symmetry_mate_distance,
            protein_path: c.protein_path,
            ligand_path: c.ligand_path,
        }
    }
}

fn check_manifest(entries: &[ManifestEntry]) -> Result<(), CurateError> {
    let mut seen = BTreeSet::new();
    for e in entries {
        e.validate().map_err(CurateError::Manifest)?;
        if !seen.insert((e.pdb_id.clone(), e.ccd_id.clone())) {
            return Err(CurateError::Manifest(format!("duplicate entry {}", e.id())));
        }
    }
    Ok(())
}

/// JSON array of entries.
pub fn parse_manifest_json(text: &str) -> Result<Vec<ManifestEntry>, CurateError> {
    let entries: Vec<ManifestEntry> = serde_json::from_str(text).map_err(|e| CurateError::Manifest(e.to_string()))?;
    check_manifest(&entries)?;
    Ok(entries)
}

/// CSV with a header of field names; `elements` and `sequences` are
/// `;`-separated; empty cells are absent values.
pub fn parse_manifest_csv(text: &str) -> Result<Vec<ManifestEntry>, CurateError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut entries = Vec::new();
    for row in rdr.deserialize::<CsvEntry>() {
        entries.push(row.map_err(|e| CurateError::Manifest(e.to_string()))?.into());
    }
    check_manifest(&entries)?;
    Ok(entries)
}

/// Dispatches on the `.csv` extension, JSON otherwise.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Vec<ManifestEntry>, CurateError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        parse_manifest_csv(&text)
    } else {
        parse_manifest_json(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    SelfDock,
    CrossDock,
}

/// Filter thresholds. Rows can be switched off by name through `disabled`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    /// Inclusive, `YYYY-MM-DD`.
    pub release_from: String,
    /// Exclusive, `YYYY-MM-DD`.
    pub release_before: String,
    pub max_resolution: f64,
    pub unknown_ligands: Vec<String>,
    pub max_sequence_length: usize,
    pub min_ligand_mw: f64,
    pub max_ligand_mw: f64,
    pub min_heavy_atoms: u32,
    pub allowed_elements: Vec<String>,
    pub max_rsr: f64,
    pub min_rscc: f64,
    pub min_completeness: f64,
    pub min_protein_distance: f64,
    /// Self-dock: other organic molecules and metal ions.
    pub min_other_molecule_distance: f64,
    /// Cross-dock: other ligands.
    pub min_other_ligand_distance: f64,
    /// Strict: entries at exactly this distance are removed.
    pub min_symmetry_mate_distance: f64,
    pub disabled: Vec<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            release_from: "2022-01-01".into(),
            release_before: "2025-01-01".into(),
            max_resolution: 2.0,
            unknown_ligands: vec!["UNX".into(), "UNL".into(), "UNK".into()],
            max_sequence_length: 2000,
            min_ligand_mw: 100.0,
            max_ligand_mw: 900.0,
            min_heavy_atoms: 3,
            allowed_elements: ["H", "C", "O", "N", "P", "S", "F", "Cl"].iter().map(|s| s.to_string()).collect(),
            max_rsr: 0.2,
            min_rscc: 0.95,
            min_completeness: 100.0,
            min_protein_distance: 0.2,
            min_other_molecule_distance: 0.2,
            min_other_ligand_distance: 5.0,
            min_symmetry_mate_distance: 5.0,
            // no manifest column is required for these in the base schema
            disabled: vec!["conformer_generation".into(), "sanitization".into()],
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<(), CurateError> {
        for d in [&self.release_from, &self.release_before] {
            if !is_iso_date(d) {
                return Err(CurateError::Config(format!("{d:?} is not YYYY-MM-DD")));
            }
        }
        if self.min_ligand_mw > self.max_ligand_mw {
            return Err(CurateError::Config("min_ligand_mw exceeds max_ligand_mw".into()));
        }
        let known: BTreeSet<&str> = FilterRow::ALL.iter().map(|r| r.name()).collect();
        for d in &self.disabled {
            if !known.contains(d.as_str()) {
                return Err(CurateError::Config(format!("unknown filter row {d:?}")));
            }
        }
        Ok(())
    }

    fn enabled(&self, row: FilterRow) -> bool {
        !self.disabled.iter().any(|d| d == row.name())
    }
}

/// Filter rows in pipeline order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterRow {
    ReleaseWindow,
    Resolution,
    UnknownLigand,
    SequenceLength,
    MolecularWeight,
    HeavyAtoms,
    Elements,
    NotCovalent,
    UnknownAtoms,
    Rsr,
    Rscc,
    Completeness,
    ConformerGeneration,
    Sanitization,
    StereoErrors,
    AtomicClashes,
    ProteinDistance,
    OtherMoleculeDistance,
    OtherLigandDistance,
    SymmetryMate,
}

impl FilterRow {
    pub const ALL: [FilterRow; 20] = [
        FilterRow::ReleaseWindow,
        FilterRow::Resolution,
        FilterRow::UnknownLigand,
        FilterRow::SequenceLength,
        FilterRow::MolecularWeight,
        FilterRow::HeavyAtoms,
        FilterRow::Elements,
        FilterRow::NotCovalent,
        FilterRow::UnknownAtoms,
        FilterRow::Rsr,
        FilterRow::Rscc,
        FilterRow::Completeness,
        FilterRow::ConformerGeneration,
        FilterRow::Sanitization,
        FilterRow::StereoErrors,
        FilterRow::AtomicClashes,
        FilterRow::ProteinDistance,
        FilterRow::OtherMoleculeDistance,
        FilterRow::OtherLigandDistance,
        FilterRow::SymmetryMate,
    ];

    pub fn for_pipeline(p: Pipeline) -> Vec<FilterRow> {
        FilterRow::ALL
            .into_iter()
            .filter(|r| match (r, p) {
                (FilterRow::OtherMoleculeDistance, Pipeline::CrossDock) => false,
                (FilterRow::OtherLigandDistance, Pipeline::SelfDock) => false,
                _ => true,
            })
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            FilterRow::ReleaseWindow => "release_window",
            FilterRow::Resolution => "resolution",
            FilterRow::UnknownLigand => "unknown_ligand",
            FilterRow::SequenceLength => "sequence_length",
            FilterRow::MolecularWeight => "molecular_weight",
            FilterRow::HeavyAtoms => "heavy_atoms",
            FilterRow::Elements => "elements",
            FilterRow::NotCovalent => "not_covalent",
            FilterRow::UnknownAtoms => "unknown_atoms",
            FilterRow::Rsr => "rsr",
            FilterRow::Rscc => "rscc",
            FilterRow::Completeness => "completeness",
            FilterRow::ConformerGeneration => "conformer_generation",
            FilterRow::Sanitization => "sanitization",
            FilterRow::StereoErrors => "stereo_errors",
            FilterRow::AtomicClashes => "atomic_clashes",
            FilterRow::ProteinDistance => "protein_distance",
            FilterRow::OtherMoleculeDistance => "other_molecule_distance",
            FilterRow::OtherLigandDistance => "other_ligand_distance",
            FilterRow::SymmetryMate => "symmetry_mate_distance",
        }
    }

    /// Names of manifest fields that must be present for this row.
    fn missing(self, e: &ManifestEntry) -> Vec<&'static str> {
        let need: &[(&'static str, bool)] = match self {
            FilterRow::ReleaseWindow => &[("release_date", e.release_date.is_some())],
            FilterRow::Resolution => &[("resolution", e.resolution.is_some())],
            FilterRow::UnknownLigand => &[],
            FilterRow::SequenceLength => &[("sequences", e.sequences.is_some())],
            FilterRow::MolecularWeight => &[("ligand_mw", e.ligand_mw.is_some())],
            FilterRow::HeavyAtoms => &[("heavy_atom_count", e.heavy_atom_count.is_some())],
            FilterRow::Elements | FilterRow::UnknownAtoms => &[("elements", e.elements.is_some())],
            FilterRow::NotCovalent => &[("covalently_bound", e.covalently_bound.is_some())],
            FilterRow::Rsr => &[("rsr", e.rsr.is_some())],
            FilterRow::Rscc => &[("rscc", e.rscc.is_some())],
            FilterRow::Completeness => &[("completeness", e.completeness.is_some())],
            FilterRow::ConformerGeneration => &[("conformer_generated", e.conformer_generated.is_some())],
            FilterRow::Sanitization => &[("sanitizable", e.sanitizable.is_some())],
            FilterRow::StereoErrors => &[("stereo_errors", e.stereo_errors.is_some())],
            FilterRow::AtomicClashes => &[("atomic_clashes", e.atomic_clashes.is_some())],
            FilterRow::ProteinDistance => &[("min_protein_distance", e.min_protein_distance.is_some())],
            FilterRow::OtherMoleculeDistance | FilterRow::OtherLigandDistance => &[],
            FilterRow::SymmetryMate => &[("min_symmetry_mate_distance", e.min_symmetry_mate_distance.is_some())],
        };
        need.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }

    /// Call only after [`FilterRow::missing`] came back empty.
    pub fn accepts(self, e: &ManifestEntry, c: &FilterConfig) -> bool {
        match self {
            FilterRow::ReleaseWindow => {
                let d = e.release_date.as_deref().unwrap_or_default();
                d >= c.release_from.as_str() && d < c.release_before.as_str()
            }
            FilterRow::Resolution => e.resolution.is_some_and(|r| r <= c.max_resolution),
            FilterRow::UnknownLigand => !c.unknown_ligands.iter().any(|u| u.eq_ignore_ascii_case(&e.ccd_id)),
            FilterRow::SequenceLength => e
                .sequences
                .as_ref()
                .is_some_and(|s| s.iter().all(|q| q.len() <= c.max_sequence_length)),
            FilterRow::MolecularWeight => e
                .ligand_mw
                .is_some_and(|m| m >= c.min_ligand_mw && m <= c.max_ligand_mw),
            FilterRow::HeavyAtoms => e.heavy_atom_count.is_some_and(|n| n >= c.min_heavy_atoms),
            FilterRow::Elements => e.elements.as_ref().is_some_and(|els| {
                els.iter()
                    .all(|x| c.allowed_elements.iter().any(|a| a.eq_ignore_ascii_case(x)))
            }),
            FilterRow::NotCovalent => e.covalently_bound == Some(false),
            FilterRow::UnknownAtoms => e
                .elements
                .as_ref()
                .is_some_and(|els| !els.iter().any(|x| x.eq_ignore_ascii_case("X"))),
            FilterRow::Rsr => e.rsr.is_some_and(|v| v <= c.max_rsr),
            FilterRow::Rscc => e.rscc.is_some_and(|v| v >= c.min_rscc),
            FilterRow::Completeness => e.completeness.is_some_and(|v| v >= c.min_completeness),
            FilterRow::ConformerGeneration => e.conformer_generated == Some(true),
            FilterRow::Sanitization => e.sanitizable == Some(true),
            FilterRow::StereoErrors => e.stereo_errors == Some(false),
            FilterRow::AtomicClashes => e.atomic_clashes == Some(false),
            FilterRow::ProteinDistance => e.min_protein_distance.is_some_and(|d| d >= c.min_protein_distance),
            FilterRow::OtherMoleculeDistance => {
                e.min_other_ligand_distance.is_none_or(|d| d >= c.min_other_molecule_distance)
                    && e.min_metal_distance.is_none_or(|d| d >= c.min_other_molecule_distance)
            }
            FilterRow::OtherLigandDistance => e.min_other_ligand_distance.is_none_or(|d| d >= c.min_other_ligand_distance),
            FilterRow::SymmetryMate => e
                .min_symmetry_mate_distance
                .is_some_and(|d| d > c.min_symmetry_mate_distance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: String,
    pub survivors: usize,
    pub unique_pdb_ids: usize,
    pub unique_ccd_ids: usize,
    /// Entry ids (`pdb_ccd`) removed at this step, sorted.
    pub rejected_ids: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FilterTrace {
    pub steps: Vec<TraceStep>,
}

impl FilterTrace {
    fn record<'a>(
        &mut self,
        step: &str,
        survivors: impl IntoIterator<Item = &'a ManifestEntry>,
        rejected: impl IntoIterator<Item = String>,
    ) {
        let (mut n, mut pdbs, mut ccds) = (0, BTreeSet::new(), BTreeSet::new());
        for e in survivors {
            n += 1;
            pdbs.insert(e.pdb_id.as_str());
            ccds.insert(e.ccd_id.as_str());
        }
        let mut rejected_ids: Vec<String> = rejected.into_iter().collect();
        rejected_ids.sort();
        self.steps.push(TraceStep {
            step: step.to_string(),
            survivors: n,
            unique_pdb_ids: pdbs.len(),
            unique_ccd_ids: ccds.len(),
            rejected_ids,
        });
    }

    pub fn survivor_counts(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.survivors).collect()
    }

    pub fn step(&self, name: &str) -> Option<&TraceStep> {
        self.steps.iter().find(|s| s.step == name)
    }

    /// `step,survivors,unique_pdb_ids,unique_ccd_ids`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["step", "survivors", "unique_pdb_ids", "unique_ccd_ids"])
            .expect("in-memory CSV");
        for s in &self.steps {
            w.write_record([
                s.step.clone(),
                s.survivors.to_string(),
                s.unique_pdb_ids.to_string(),
                s.unique_ccd_ids.to_string(),
            ])
            .expect("in-memory CSV");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }
}

/// Apply the pipeline's enabled rows in order. Survivors keep manifest order.
pub fn apply_filters(
    entries: &[ManifestEntry],
    config: &FilterConfig,
    pipeline: Pipeline,
) -> Result<(Vec<ManifestEntry>, FilterTrace), CurateError> {
    config.validate()?;
    check_manifest(entries)?;
    let rows: Vec<FilterRow> = FilterRow::for_pipeline(pipeline)
        .into_iter()
        .filter(|r| config.enabled(*r))
        .collect();

    let mut missing: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    for e in entries {
        for r in &rows {
            for f in r.missing(e) {
                missing.entry(f).or_default().push(e.id());
            }
        }
    }
    if !missing.is_empty() {
        return Err(CurateError::MissingFields(
            missing
                .into_iter()
                .map(|(f, mut ids)| {
                    ids.dedup();
                    format!("{f} (entries: {})", ids.join(", "))
                })
                .collect(),
        ));
    }

    let mut survivors: Vec<ManifestEntry> = entries.to_vec();
    let mut trace = FilterTrace::default();
    for r in rows {
        let (keep, drop): (Vec<_>, Vec<_>) = survivors.into_iter().partition(|e| r.accepts(e, config));
        trace.record(r.name(), &keep, drop.iter().map(ManifestEntry::id));
        survivors = keep;
    }
    Ok((survivors, trace))
}

/// Left vertices are PDB ids, right vertices CCD ids, in declaration order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BipartiteGraph {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl BipartiteGraph {
    /// Vertices declared in first-appearance order; duplicate pairs collapse.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = BipartiteGraph::default();
        let (mut li, mut ri) = (HashMap::new(), HashMap::new());
        let mut seen = BTreeSet::new();
        for (l, r) in pairs {
            let a = *li.entry(l).or_insert_with(|| {
                g.left.push(l.to_string());
                g.left.len() - 1
            });
            let b = *ri.entry(r).or_insert_with(|| {
                g.right.push(r.to_string());
                g.right.len() - 1
            });
            if seen.insert((a, b)) {
                g.edges.push((a, b));
            }
        }
        g
    }
}

const FREE: usize = usize::MAX;

/// Maximum-cardinality matching as `(left, right)` index pairs sorted by left
/// index. Adjacency is visited in edge declaration order, so the result is a
/// function of the input order.
pub fn hopcroft_karp(graph: &BipartiteGraph) -> Vec<(usize, usize)> {
    let (nl, nr) = (graph.left.len(), graph.right.len());
    let mut adj = vec![Vec::new(); nl];
    for &(a, b) in &graph.edges {
        assert!(a < nl && b < nr, "edge ({a}, {b}) references an undeclared vertex");
        adj[a].push(b);
    }
    let mut match_l = vec![FREE; nl];
    let mut match_r = vec![FREE; nr];
    let mut dist = vec![0usize; nl];
    loop {
        // layer free left vertices, stop at the first layer reaching a free right vertex
        let mut queue = VecDeque::new();
        for u in 0..nl {
            if match_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut limit = usize::MAX;
        while let Some(u) = queue.pop_front() {
            if dist[u] >= limit {
                continue;
            }
            for &v in &adj[u] {
                let w = match_r[v];
                if w == FREE {
                    limit = limit.min(dist[u] + 1);
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if limit == usize::MAX {
            break;
        }
        let mut next = vec![0usize; nl];
        for u in 0..nl {
            if match_l[u] == FREE {
                augment(u, &adj, &mut match_l, &mut match_r, &mut dist, &mut next, limit);
            }
        }
    }
    (0..nl).filter(|&u| match_l[u] != FREE).map(|u| (u, match_l[u])).collect()
}

/// Iterative layered DFS from free vertex `root` along `dist` layers.
fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    next: &mut [usize],
    limit: usize,
) -> bool {
    let mut stack = vec![root];
    while let Some(&u) = stack.last() {
        if next[u] == adj[u].len() {
            dist[u] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adj[u][next[u]];
        next[u] += 1;
        let w = match_r[v];
        if w == FREE {
            if dist[u] + 1 != limit {
                continue;
            }
            // flip the path: stack holds left vertices, each advanced past its edge
            for &x in stack.iter().rev() {
                let y = adj[x][next[x] - 1];
                match_l[x] = y;
                match_r[y] = x;
            }
            return true;
        }
        if dist[w] == dist[u] + 1 {
            stack.push(w);
        }
    }
    false
}

/// A sequence cluster; `members` sorted by id, representative included.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub representative: String,
    pub members: Vec<String>,
}

/// Greedy centroid clustering.
///
/// Sequences are visited by length descending (ties by id); each joins the
/// first existing centroid with identity ≥ `min_identity` and coverage ≥
/// `min_coverage`, otherwise founds a cluster. Identity is identical columns ÷
/// alignment columns, coverage is aligned pairs ÷ the longer length, both
/// from a global alignment (+1/−1/−2). The representative is the founding
/// (longest, then lexicographically first) member. Clusters come back in
/// founding order.
pub fn cluster_sequences(
    seqs: &[(String, String)],
    min_identity: f64,
    min_coverage: f64,
) -> Result<Vec<Cluster>, CurateError> {
    if let Some((id, _)) = seqs.iter().find(|(_, s)| s.is_empty()) {
        return Err(CurateError::EmptySequence(id.clone()));
    }
    let mut order: Vec<&(String, String)> = seqs.iter().collect();
    order.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
    let mut clusters: Vec<(&str, Cluster)> = Vec::new();
    for (id, seq) in order {
        let home = clusters.iter_mut().find(|(centroid, _)| {
            let al = global_align(centroid.as_bytes(), seq.as_bytes(), Scoring::default());
            al.identity() >= min_identity && al.coverage() >= min_coverage
        });
        match home {
            Some((_, c)) => c.members.push(id.clone()),
            None => clusters.push((
                seq.as_str(),
                Cluster {
                    representative: id.clone(),
                    members: vec![id.clone()],
                },
            )),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(_, mut c)| {
            c.members.sort();
            c
        })
        .collect())
}

/// Unique-pair selection over filter survivors. Entries are matched in
/// `(pdb_id, ccd_id)` order so the result does not depend on manifest order.
pub fn unique_pairs(entries: &[ManifestEntry]) -> Vec<ManifestEntry> {
    let mut sorted: Vec<&ManifestEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| (&a.pdb_id, &a.ccd_id).cmp(&(&b.pdb_id, &b.ccd_id)));
    let g = BipartiteGraph::from_pairs(sorted.iter().map(|e| (e.pdb_id.as_str(), e.ccd_id.as_str())));
    let by_pair: HashMap<(&str, &str), &ManifestEntry> =
        sorted.iter().map(|e| ((e.pdb_id.as_str(), e.ccd_id.as_str()), *e)).collect();
    hopcroft_karp(&g)
        .into_iter()
        .map(|(a, b)| by_pair[&(g.left[a].as_str(), g.right[b].as_str())].clone())
        .collect()
}

/// One sequence per PDB id (the first entry's chains, concatenated).
fn pdb_sequences(entries: &[ManifestEntry]) -> Result<Vec<(String, String)>, CurateError> {
    let mut by_pdb: BTreeMap<&str, String> = BTreeMap::new();
    for e in entries {
        if by_pdb.contains_key(e.pdb_id.as_str()) {
            continue;
        }
        let s = e
            .concatenated_sequence()
            .ok_or_else(|| CurateError::MissingFields(vec![format!("sequences (entries: {})", e.id())]))?;
        by_pdb.insert(&e.pdb_id, s);
    }
    Ok(by_pdb.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurateConfig {
    pub filters: FilterConfig,
    pub self_dock_identity: f64,
    pub self_dock_coverage: f64,
    pub cross_dock_identity: f64,
    pub cross_dock_coverage: f64,
    pub max_ca_rmsd: f64,
    pub max_ligand_displacement: f64,
}

impl Default for CurateConfig {
    fn default() -> Self {
        CurateConfig {
            filters: FilterConfig::default(),
            self_dock_identity: 0.0,
            self_dock_coverage: 1.0,
            cross_dock_identity: 0.9,
            cross_dock_coverage: 0.8,
            max_ca_rmsd: 2.0,
            max_ligand_displacement: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfDockSet {
    /// One representative entry per cluster, sorted by entry id.
    pub entries: Vec<ManifestEntry>,
    pub clusters: Vec<Cluster>,
    pub trace: FilterTrace,
}

/// Filters, unique PDB/CCD pairs, then one representative per sequence cluster.
pub fn build_self_dock_set(entries: &[ManifestEntry], config: &CurateConfig) -> Result<SelfDockSet, CurateError> {
    let (survivors, mut trace) = apply_filters(entries, &config.filters, Pipeline::SelfDock)?;
    let matched = unique_pairs(&survivors);
    let kept: BTreeSet<String> = matched.iter().map(ManifestEntry::id).collect();
    trace.record(
        "unique_pairs",
        &matched,
        survivors.iter().map(ManifestEntry::id).filter(|id| !kept.contains(id)),
    );
    // after matching each pdb id carries exactly one entry
    let clusters = cluster_sequences(&pdb_sequences(&matched)?, config.self_dock_identity, config.self_dock_coverage)?;
    let reps: BTreeSet<&str> = clusters.iter().map(|c| c.representative.as_str()).collect();
    let (mut selected, dropped): (Vec<_>, Vec<_>) = matched.into_iter().partition(|e| reps.contains(e.pdb_id.as_str()));
    selected.sort_by_key(ManifestEntry::id);
    trace.record("cluster_representatives", &selected, dropped.iter().map(ManifestEntry::id));
    Ok(SelfDockSet {
        entries: selected,
        clusters,
        trace,
    })
}

/// Where the cross-dock pipeline gets coordinates.
pub trait StructureSource: Sync {
    fn protein(&self, pdb_id: &str) -> Result<ProteinStructure, String>;
    fn ligand(&self, entry: &ManifestEntry) -> Result<SmallMolecule, String>;
}

/// Reads `protein_path` / `ligand_path` from the entry when set, else
/// `{root}/{pdb_id}/protein.pdb` and `{root}/{pdb_id}/{ccd_id}_ligand.sdf`.
#[derive(Debug, Clone)]
pub struct DirectorySource {
    pub root: std::path::PathBuf,
    protein_paths: HashMap<String, String>,
}

impl DirectorySource {
    pub fn new(root: impl Into<std::path::PathBuf>, manifest: &[ManifestEntry]) -> Self {
        let mut protein_paths = HashMap::new();
        for e in manifest {
            if let Some(p) = &e.protein_path {
                protein_paths.entry(e.pdb_id.clone()).or_insert_with(|| p.clone());
            }
        }
        DirectorySource {
            root: root.into(),
            protein_paths,
        }
    }

    fn resolve(&self, p: &str) -> std::path::PathBuf {
        let p = Path::new(p);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.root.join(p)
        }
    }
}

impl StructureSource for DirectorySource {
    fn protein(&self, pdb_id: &str) -> Result<ProteinStructure, String> {
        let path = match self.protein_paths.get(pdb_id) {
            Some(p) => self.resolve(p),
            None => self.root.join(pdb_id).join("protein.pdb"),
        };
        crate::chemio::read_pdb_file(&path).map_err(|e| format!("{}: {e}", path.display()))
    }

    fn ligand(&self, entry: &ManifestEntry) -> Result<SmallMolecule, String> {
        let path = match &entry.ligand_path {
            Some(p) => self.resolve(p),
            None => self.root.join(&entry.pdb_id).join(format!("{}_ligand.sdf", entry.ccd_id)),
        };
        crate::chemio::read_sdf_file(&path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Structures held in memory, keyed by PDB id and entry id.
#[derive(Debug, Clone, Default)]
pub struct InMemorySource {
    pub proteins: HashMap<String, ProteinStructure>,
    pub ligands: HashMap<String, SmallMolecule>,
}

impl StructureSource for InMemorySource {
    fn protein(&self, pdb_id: &str) -> Result<ProteinStructure, String> {
        self.proteins.get(pdb_id).cloned().ok_or_else(|| format!("no protein for {pdb_id}"))
    }

    fn ligand(&self, entry: &ManifestEntry) -> Result<SmallMolecule, String> {
        let id = entry.id();
        self.ligands.get(&id).cloned().ok_or_else(|| format!("no ligand for {id}"))
    }
}

/// A ligand placed into a non-native structure of its cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossPair {
    pub protein_pdb_id: String,
    /// Entry id of the ligand's native entry.
    pub ligand_entry_id: String,
    /// Ligand coordinates in the frame of `protein_pdb_id`.
    pub ligand: SmallMolecule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossDockTarget {
    pub reference_pdb_id: String,
    /// Structures that survived alignment, reference first, then by id.
    pub structures: Vec<String>,
    /// Surviving ligand entry ids, sorted.
    pub ligands: Vec<String>,
    pub pairs: Vec<CrossPair>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossDockSet {
    pub targets: Vec<CrossDockTarget>,
    pub trace: FilterTrace,
    /// One row per non-reference structure and per non-reference ligand.
    pub report: Vec<CrossDockReportRow>,
}

struct Member {
    pdb_id: String,
    /// Candidate frame → reference frame.
    to_reference: RigidTransform,
}

/// Filters, 90%/80% sequence clusters with at least two structures, then
/// Cα superposition onto a per-cluster reference (best resolution, ties by
/// PDB id). Structures aligning above `max_ca_rmsd` are dropped with all their
/// ligands; ligands whose transferred centroid lies more than
/// `max_ligand_displacement` from the reference ligand are dropped. Every
/// surviving ligand is paired with every surviving structure except its own.
pub fn build_cross_dock_set(
    entries: &[ManifestEntry],
    source: &dyn StructureSource,
    config: &CurateConfig,
    exec: Execution,
) -> Result<CrossDockSet, CurateError> {
    let thresholds = CrossDockThresholds {
        max_ca_rmsd: config.max_ca_rmsd,
        max_ligand_displacement: config.max_ligand_displacement,
    };
    let (survivors, mut trace) = apply_filters(entries, &config.filters, Pipeline::CrossDock)?;
    let clusters = cluster_sequences(
        &pdb_sequences(&survivors)?,
        config.cross_dock_identity,
        config.cross_dock_coverage,
    )?;
    let multi: Vec<&Cluster> = clusters.iter().filter(|c| c.members.len() >= 2).collect();
    let clustered: BTreeSet<&str> = multi.iter().flat_map(|c| c.members.iter().map(String::as_str)).collect();
    let (in_clusters, singletons): (Vec<_>, Vec<_>) =
        survivors.iter().partition(|e| clustered.contains(e.pdb_id.as_str()));
    trace.record(
        "sequence_clusters",
        in_clusters.iter().copied(),
        singletons.iter().map(|e| e.id()),
    );

    let mut by_pdb: BTreeMap<&str, Vec<&ManifestEntry>> = BTreeMap::new();
    for e in &in_clusters {
        by_pdb.entry(e.pdb_id.as_str()).or_default().push(e);
    }
    for v in by_pdb.values_mut() {
        v.sort_by(|a, b| a.ccd_id.cmp(&b.ccd_id));
    }

    let outcomes = par::map(exec, &multi, |c| cross_cluster(c, &by_pdb, source, &thresholds));
    let mut targets = Vec::new();
    let mut report = Vec::new();
    let mut kept_ids = BTreeSet::new();
    let mut dropped_ids = Vec::new();
    for (target, rows, dropped) in outcomes {
        report.extend(rows);
        dropped_ids.extend(dropped);
        if let Some(t) = target {
            kept_ids.extend(t.ligands.iter().cloned());
            targets.push(t);
        }
    }
    let kept: Vec<&ManifestEntry> = in_clusters.iter().copied().filter(|e| kept_ids.contains(&e.id())).collect();
    trace.record("aligned_to_reference", kept, dropped_ids);
    Ok(CrossDockSet { targets, trace, report })
}

type ClusterOutcome = (Option<CrossDockTarget>, Vec<CrossDockReportRow>, Vec<String>);

fn cross_cluster(
    cluster: &Cluster,
    by_pdb: &BTreeMap<&str, Vec<&ManifestEntry>>,
    source: &dyn StructureSource,
    t: &CrossDockThresholds,
) -> ClusterOutcome {
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    let all_ids = |pdb: &str| by_pdb[pdb].iter().map(|e| e.id()).collect::<Vec<_>>();

    let mut members: Vec<&str> = cluster.members.iter().map(String::as_str).collect();
    members.sort_by(|a, b| {
        let ra = by_pdb[a][0].resolution.unwrap_or(f64::INFINITY);
        let rb = by_pdb[b][0].resolution.unwrap_or(f64::INFINITY);
        ra.total_cmp(&rb).then_with(|| a.cmp(b))
    });

    // the reference must load; otherwise try the next-best structure
    let mut reference = None;
    for (k, &pdb) in members.iter().enumerate() {
        let p = source.protein(pdb);
        let l = source.ligand(by_pdb[pdb][0]);
        match (p, l) {
            (Ok(p), Ok(l)) => {
                reference = Some((k, p, l));
                break;
            }
            (Err(e), _) | (_, Err(e)) => {
                log::warn!("event=load_failed pdb_id={pdb} error={e:?}");
                rows.push(error_row(pdb, &e));
                dropped.extend(all_ids(pdb));
            }
        }
    }
    let Some((ref_k, ref_protein, ref_ligand)) = reference else {
        return (None, rows, dropped);
    };
    let ref_id = members[ref_k];

    let mut structures = vec![Member {
        pdb_id: ref_id.to_string(),
        to_reference: RigidTransform::identity(),
    }];
    for &pdb in &members[ref_k + 1..] {
        let aligned = source
            .protein(pdb)
            .and_then(|p| align_to_reference(&p, &ref_protein).map_err(|e| e.to_string()));
        match aligned {
            Err(e) => {
                rows.push(error_row(pdb, &e));
                dropped.extend(all_ids(pdb));
            }
            Ok(a) => {
                if let Decision::Reject(r) = decide(a.ca_rmsd, 0.0, t) {
                    rows.push(CrossDockReportRow {
                        candidate_id: pdb.to_string(),
                        ca_rmsd: Some(a.ca_rmsd),
                        displacement: None,
                        decision: "reject".into(),
                        reason: r.as_str().into(),
                    });
                    dropped.extend(all_ids(pdb));
                } else {
                    rows.push(CrossDockReportRow {
                        candidate_id: pdb.to_string(),
                        ca_rmsd: Some(a.ca_rmsd),
                        displacement: None,
                        decision: "accept".into(),
                        reason: String::new(),
                    });
                    structures.push(Member {
                        pdb_id: pdb.to_string(),
                        to_reference: a.transform,
                    });
                }
            }
        }
    }
    structures[1..].sort_by(|a, b| a.pdb_id.cmp(&b.pdb_id));

    // ligands, all carried into the reference frame
    let ref_entry_id = by_pdb[ref_id][0].id();
    let mut ligands: Vec<(String, String, SmallMolecule)> = Vec::new();
    for m in &structures {
        for e in &by_pdb[m.pdb_id.as_str()] {
            let id = e.id();
            if id == ref_entry_id {
                ligands.push((id, m.pdb_id.clone(), ref_ligand.clone()));
                continue;
            }
            let lig = match source.ligand(e) {
                Ok(l) => l.map_positions(|p| m.to_reference.apply(p)),
                Err(err) => {
                    rows.push(error_row(&id, &err));
                    dropped.push(id);
                    continue;
                }
            };
            let disp = ligand_displacement(&lig, &ref_ligand);
            let d = decide(0.0, disp, t);
            rows.push(CrossDockReportRow::from_decision(&id, 0.0, disp, d));
            let row = rows.last_mut().expect("just pushed");
            row.ca_rmsd = None;
            if d.is_accept() {
                ligands.push((id, m.pdb_id.clone(), lig));
            } else {
                dropped.push(id);
            }
        }
    }
    ligands.sort_by(|a, b| a.0.cmp(&b.0));

    let mut pairs = Vec::new();
    for m in &structures {
        let from_reference = m.to_reference.inverse();
        for (id, native, lig) in &ligands {
            if *native == m.pdb_id {
                continue;
            }
            pairs.push(CrossPair {
                protein_pdb_id: m.pdb_id.clone(),
                ligand_entry_id: id.clone(),
                ligand: lig.map_positions(|p| from_reference.apply(p)),
            });
        }
    }
    // a lone structure has nothing to cross with; its ligands leave the set
    if structures.len() < 2 {
        dropped.extend(ligands.iter().map(|l| l.0.clone()));
        return (None, rows, dropped);
    }
    let target = CrossDockTarget {
        reference_pdb_id: ref_id.to_string(),
        structures: structures.iter().map(|m| m.pdb_id.clone()).collect(),
        ligands: ligands.iter().map(|l| l.0.clone()).collect(),
        pairs,
    };
    (Some(target), rows, dropped)
}

fn error_row(id: &str, err: &str) -> CrossDockReportRow {
    CrossDockReportRow {
        candidate_id: id.to_string(),
        ca_rmsd: None,
        displacement: None,
        decision: "error".into(),
        reason: err.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn clean(pdb: &str, ccd: &str, seq: &str) -> ManifestEntry {
        ManifestEntry {
            release_date: Some("2023-06-01".into()),
            resolution: Some(1.8),
            ligand_mw: Some(300.0),
            heavy_atom_count: Some(20),
            elements: Some(vec!["C".into(), "N".into(), "O".into()]),
            covalently_bound: Some(false),
            rsr: Some(0.1),
            rscc: Some(0.97),
            completeness: Some(100.0),
            stereo_errors: Some(false),
            atomic_clashes: Some(false),
            sequences: Some(vec![seq.into()]),
            min_protein_distance: Some(2.8),
            min_symmetry_mate_distance: Some(8.0),
            ..ManifestEntry::new(pdb, ccd)
        }
    }

    fn brute_force_matching(nl: usize, nr: usize, edges: &[(usize, usize)]) -> usize {
        fn go(u: usize, nl: usize, adj: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if u == nl {
                return 0;
            }
            let mut best = go(u + 1, nl, adj, used);
            for &v in &adj[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(u + 1, nl, adj, used));
                    used[v] = false;
                }
            }
            best
        }
        let mut adj = vec![Vec::new(); nl];
        for &(a, b) in edges {
            adj[a].push(b);
        }
        go(0, nl, &adj, &mut vec![false; nr])
    }

    fn graph(nl: usize, nr: usize, edges: &[(usize, usize)]) -> BipartiteGraph {
        BipartiteGraph {
            left: (0..nl).map(|i| format!("p{i}")).collect(),
            right: (0..nr).map(|i| format!("c{i}")).collect(),
            edges: edges.to_vec(),
        }
    }

    #[test]
    fn small_matchings() {
        let m = hopcroft_karp(&graph(2, 2, &[(0, 0), (0, 1), (1, 0)]));
        assert_eq!(m, vec![(0, 1), (1, 0)]);
        assert!(hopcroft_karp(&graph(3, 3, &[])).is_empty());
        let disjoint: Vec<_> = (0..5).map(|i| (i, i)).collect();
        assert_eq!(hopcroft_karp(&graph(5, 5, &disjoint)).len(), 5);
        let g = BipartiteGraph::from_pairs([("1abc", "ATP"), ("1abc", "ADP"), ("1abc", "GTP")]);
        assert_eq!(hopcroft_karp(&g).len(), 1);
    }

    #[test]
    fn matching_is_maximum_and_valid_on_random_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let (nl, nr) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
            let p = rng.gen_range(0.05..0.6);
            let edges: Vec<_> = (0..nl)
                .flat_map(|a| (0..nr).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let m = hopcroft_karp(&graph(nl, nr, &edges));
            assert_eq!(m.len(), brute_force_matching(nl, nr, &edges));
            let ls: BTreeSet<_> = m.iter().map(|x| x.0).collect();
            let rs: BTreeSet<_> = m.iter().map(|x| x.1).collect();
            assert_eq!(ls.len(), m.len());
            assert_eq!(rs.len(), m.len());
            assert!(m.iter().all(|e| edges.contains(e)));
        }
    }

    #[test]
    fn filter_rows_reject_documented_examples() {
        let c = FilterConfig::default();
        let mut light = clean("1aaa", "LIG", "MKT");
        light.ligand_mw = Some(95.0);
        assert!(!FilterRow::MolecularWeight.accepts(&light, &c));
        let mut tiny = clean("1aaa", "LIG", "MKT");
        tiny.heavy_atom_count = Some(2);
        assert!(!FilterRow::HeavyAtoms.accepts(&tiny, &c));
        let mut br = clean("1aaa", "LIG", "MKT");
        br.elements = Some(vec!["C".into(), "Br".into()]);
        assert!(!FilterRow::Elements.accepts(&br, &c));
        let mut cl = clean("1aaa", "LIG", "MKT");
        cl.elements = Some(vec!["C".into(), "Cl".into()]);
        assert!(FilterRow::Elements.accepts(&cl, &c));

        let mut e = clean("1aaa", "LIG", "MKT");
        e.release_date = Some("2025-01-01".into());
        assert!(!FilterRow::ReleaseWindow.accepts(&e, &c));
        e.release_date = Some("2022-01-01".into());
        assert!(FilterRow::ReleaseWindow.accepts(&e, &c));
        e.min_symmetry_mate_distance = Some(5.0);
        assert!(!FilterRow::SymmetryMate.accepts(&e, &c));
        e.rsr = Some(0.2);
        e.rscc = Some(0.95);
        e.resolution = Some(2.0);
        assert!(FilterRow::Rsr.accepts(&e, &c) && FilterRow::Rscc.accepts(&e, &c) && FilterRow::Resolution.accepts(&e, &c));
        let unk = clean("1aaa", "UNL", "MKT");
        assert!(!FilterRow::UnknownLigand.accepts(&unk, &c));
    }

    #[test]
    fn missing_field_is_a_config_error_naming_it() {
        let mut e = clean("1aaa", "LIG", "MKT");
        e.rscc = None;
        let err = apply_filters(&[e.clone()], &FilterConfig::default(), Pipeline::SelfDock).unwrap_err();
        assert!(err.to_string().contains("rscc"), "{err}");
        let cfg = FilterConfig {
            disabled: vec!["rscc".into(), "conformer_generation".into(), "sanitization".into()],
            ..Default::default()
        };
        assert!(apply_filters(&[e], &cfg, Pipeline::SelfDock).is_ok());
    }

    #[test]
    fn trace_is_monotone_and_order_independent() {
        let mut entries = Vec::new();
        for k in 0..12 {
            let mut e = clean(&format!("{k}xyz"), &format!("L{k}"), "MKTAYIAKQR");
            if k % 3 == 0 {
                e.rscc = Some(0.9);
            }
            if k % 4 == 1 {
                e.ligand_mw = Some(950.0);
            }
            entries.push(e);
        }
        let (s1, t1) = apply_filters(&entries, &FilterConfig::default(), Pipeline::SelfDock).unwrap();
        entries.reverse();
        let (s2, t2) = apply_filters(&entries, &FilterConfig::default(), Pipeline::SelfDock).unwrap();
        let ids = |s: &[ManifestEntry]| s.iter().map(ManifestEntry::id).collect::<BTreeSet<_>>();
        assert_eq!(ids(&s1), ids(&s2));
        assert_eq!(t1, t2);
        let counts = t1.survivor_counts();
        assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(*counts.last().unwrap(), 6);
        assert!(t1.to_csv().starts_with("step,survivors,unique_pdb_ids,unique_ccd_ids\n"));
    }

    #[test]
    fn clustering_examples() {
        let s = |id: &str, q: &str| (id.to_string(), q.to_string());
        let c = cluster_sequences(&[s("a", "MKTAYIAKQR"), s("b", "MKTAYIAKQR")], 1.0, 1.0).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].representative, "a");
        // 5 of 10 identical by construction
        let half = cluster_sequences(&[s("a", "MKTAYIAKQR"), s("b", "MKTAYWWWWW")], 0.9, 0.0).unwrap();
        assert_eq!(half.len(), 2);
        let al = global_align(b"MKTAYIAKQR", b"MKTAYWWWWW", Scoring::default());
        assert_eq!(al.identity(), 0.5);
        let cov = cluster_sequences(&[s("a", "MKTAYIAKQR"), s("b", "MKTAYIAKQRGG")], 0.0, 1.0).unwrap();
        assert_eq!(cov.len(), 2);
        assert_eq!(cov[0].representative, "b");
        assert!(matches!(
            cluster_sequences(&[s("a", "")], 0.0, 0.0),
            Err(CurateError::EmptySequence(_))
        ));
    }

    #[test]
    fn clustering_is_a_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alphabet = b"ACDEFGHIKLMNPQRSTVWY";
        let base: Vec<u8> = (0..40).map(|_| alphabet[rng.gen_range(0..20)]).collect();
        let seqs: Vec<(String, String)> = (0..25)
            .map(|k| {
                let mut s = base.clone();
                for _ in 0..rng.gen_range(0..15) {
                    let i = rng.gen_range(0..s.len());
                    s[i] = alphabet[rng.gen_range(0..20)];
                }
                s.truncate(rng.gen_range(30..=40));
                (format!("id{k:02}"), String::from_utf8(s).unwrap())
            })
            .collect();
        let clusters = cluster_sequences(&seqs, 0.8, 0.8).unwrap();
        let mut all: Vec<&String> = clusters.iter().flat_map(|c| &c.members).collect();
        all.sort();
        let mut expect: Vec<&String> = seqs.iter().map(|s| &s.0).collect();
        expect.sort();
        assert_eq!(all, expect);
        for c in &clusters {
            let len = |id: &str| seqs.iter().find(|s| s.0 == id).unwrap().1.len();
            assert!(c.members.iter().all(|m| len(m) <= len(&c.representative)));
        }
    }

    #[test]
    fn empty_manifest_gives_empty_set() {
        let s = build_self_dock_set(&[], &CurateConfig::default()).unwrap();
        assert!(s.entries.is_empty());
        assert!(s.trace.survivor_counts().iter().all(|&n| n == 0));
    }

    #[test]
    fn manifest_round_trips_through_json_and_csv() {
        let e = clean("1abc", "ATP", "MKT");
        let json = serde_json::to_string(&vec![e.clone()]).unwrap();
        assert_eq!(parse_manifest_json(&json).unwrap(), vec![e.clone()]);
        let csv = "pdb_id,ccd_id,release_date,resolution,ligand_mw,heavy_atom_count,elements,covalently_bound,rsr,rscc,completeness,stereo_errors,atomic_clashes,sequences,min_protein_distance,min_other_ligand_distance,min_symmetry_mate_distance\n\
                   1abc,ATP,2023-06-01,1.8,300,20,C;N;O,false,0.1,0.97,100,false,false,MKT,2.8,,8.0\n";
        assert_eq!(parse_manifest_csv(csv).unwrap(), vec![e]);
        assert!(parse_manifest_json(r#"[{"pdb_id":"1abc","ccd_id":"ATP","frobnicate":1}]"#).is_err());
        let dup = serde_json::to_string(&vec![clean("1abc", "ATP", "M"), clean("1abc", "ATP", "M")]).unwrap();
        assert!(parse_manifest_json(&dup).is_err());
    }
}
