//! Symmetry-corrected heavy-atom ligand RMSD.
//!
//! Poses are compared in the shared protein frame (no superposition). The
//! minimum is taken over every label-preserving isomorphism between the
//! predicted and reference heavy-atom graphs, where vertex labels are elements
//! and edge labels are bond orders (aromatic kept distinct).

use std::collections::BTreeMap;

use crate::chemio::{BondOrder, Element, SmallMolecule};
use crate::geom::Vec3;

/// Hard limit on the number of isomorphisms enumerated for one pair.
pub const MAX_ISOMORPHISMS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RmsdError {
    #[error("heavy-atom graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("molecules are not isomorphic: {0}")]
    NotIsomorphic(String),
    #[error("more than {0} isomorphisms; symmetry search aborted")]
    TooManyIsomorphisms(usize),
    #[error("heavy-atom counts differ ({pred} vs {reference})")]
    CountMismatch { pred: usize, reference: usize },
}

/// Bijection from predicted heavy atoms to reference heavy atoms, both
/// indexed by position in the heavy-atom list (file order, hydrogens skipped).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomCorrespondence {
    pub mapping: Vec<usize>,
}

impl AtomCorrespondence {
    pub fn identity(n: usize) -> Self {
        AtomCorrespondence {
            mapping: (0..n).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(i, &j)| i == j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RmsdMode {
    #[default]
    Symmetry,
    /// Heavy atoms paired by file order.
    Naive,
}

/// Heavy-atom graph with an edge-label matrix for O(1) adjacency tests.
#[derive(Debug, Clone)]
pub(crate) struct HeavyGraph {
    /// Original atom index of each heavy atom.
    pub atom_index: Vec<usize>,
    pub labels: Vec<Element>,
    pub adj: Vec<Vec<usize>>,
    edges: Vec<u8>,
    pub positions: Vec<Vec3>,
}

fn order_code(o: BondOrder) -> u8 {
    match o {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

impl HeavyGraph {
    pub fn new(mol: &SmallMolecule) -> Self {
        let atom_index = mol.heavy_atom_indices();
        let mut pos_of = vec![usize::MAX; mol.len()];
        for (k, &i) in atom_index.iter().enumerate() {
            pos_of[i] = k;
        }
        let n = atom_index.len();
        let mut edges = vec![0u8; n * n];
        let mut adj = vec![Vec::new(); n];
        for bond in mol.bonds() {
            let (a, b) = (pos_of[bond.a], pos_of[bond.b]);
            if a == usize::MAX || b == usize::MAX {
                continue;
            }
            edges[a * n + b] = order_code(bond.order);
            edges[b * n + a] = order_code(bond.order);
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        HeavyGraph {
            labels: atom_index.iter().map(|&i| mol.atoms()[i].element).collect(),
            positions: atom_index.iter().map(|&i| mol.atoms()[i].position).collect(),
            atom_index,
            adj,
            edges,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn edge(&self, a: usize, b: usize) -> u8 {
        self.edges[a * self.len() + b]
    }

    fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn bond_multiset(&self) -> BTreeMap<(Element, Element, u8), usize> {
        let mut m = BTreeMap::new();
        for a in 0..self.len() {
            for &b in &self.adj[a] {
                if a < b {
                    let (x, y) = (self.labels[a].min(self.labels[b]), self.labels[a].max(self.labels[b]));
                    *m.entry((x, y, self.edge(a, b))).or_insert(0) += 1;
                }
            }
        }
        m
    }
}

/// Colour refinement run jointly over both graphs so colours are comparable.
/// Any isomorphism maps each vertex to a vertex of the same colour.
fn joint_colors(g: &HeavyGraph, h: &HeavyGraph) -> (Vec<usize>, Vec<usize>) {
    let graphs = [g, h];
    let mut colors: Vec<Vec<usize>> = {
        let mut dict: BTreeMap<(Element, usize), usize> = BTreeMap::new();
        for gr in graphs {
            for v in 0..gr.len() {
                let k = (gr.labels[v], gr.adj[v].len());
                let next = dict.len();
                dict.entry(k).or_insert(next);
            }
        }
        graphs
            .iter()
            .map(|gr| (0..gr.len()).map(|v| dict[&(gr.labels[v], gr.adj[v].len())]).collect())
            .collect()
    };
    let mut classes = count_classes(&colors);
    loop {
        let mut dict: BTreeMap<(usize, Vec<(usize, u8)>), usize> = BTreeMap::new();
        let mut sigs: Vec<Vec<(usize, Vec<(usize, u8)>)>> = Vec::new();
        for (gi, gr) in graphs.iter().enumerate() {
            let mut s = Vec::with_capacity(gr.len());
            for v in 0..gr.len() {
                let mut nb: Vec<(usize, u8)> = gr.adj[v]
                    .iter()
                    .map(|&u| (colors[gi][u], gr.edge(v, u)))
                    .collect();
                nb.sort_unstable();
                s.push((colors[gi][v], nb));
            }
            sigs.push(s);
        }
        for s in &sigs {
            for sig in s {
                let next = dict.len();
                dict.entry(sig.clone()).or_insert(next);
            }
        }
        let new_colors: Vec<Vec<usize>> = sigs
            .iter()
            .map(|s| s.iter().map(|sig| dict[sig]).collect())
            .collect();
        let new_classes = count_classes(&new_colors);
        colors = new_colors;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    let h_colors = colors.pop().expect("two graphs");
    let g_colors = colors.pop().expect("two graphs");
    (g_colors, h_colors)
}

fn count_classes(colors: &[Vec<usize>]) -> usize {
    let mut all: Vec<usize> = colors.iter().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    all.len()
}

fn color_histogram(colors: &[usize]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for &c in colors {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

/// Why two graphs cannot be isomorphic, if a cheap invariant already says so.
fn invariant_mismatch(g: &HeavyGraph, h: &HeavyGraph) -> Option<String> {
    if g.len() != h.len() {
        return Some(format!("heavy-atom counts differ ({} vs {})", g.len(), h.len()));
    }
    let mut fg = g.labels.clone();
    let mut fh = h.labels.clone();
    fg.sort();
    fh.sort();
    if fg != fh {
        return Some("element composition differs".into());
    }
    if g.edge_count() != h.edge_count() || g.bond_multiset() != h.bond_multiset() {
        return Some("bond sets differ".into());
    }
    None
}

/// Enumerate isomorphisms `g → h` in lexicographic order of the mapping,
/// calling `visit` on each. Stops (returning `Err`) once more than `cap` have
/// been found.
fn search_isomorphisms(
    g: &HeavyGraph,
    h: &HeavyGraph,
    cap: usize,
    mut visit: impl FnMut(&[usize]),
) -> Result<usize, RmsdError> {
    if let Some(reason) = invariant_mismatch(g, h) {
        return Err(RmsdError::NotIsomorphic(reason));
    }
    let n = g.len();
    let (cg, ch) = joint_colors(g, h);
    if color_histogram(&cg) != color_histogram(&ch) {
        return Err(RmsdError::NotIsomorphic("bond topology differs".into()));
    }
    let candidates: Vec<Vec<usize>> = (0..n)
        .map(|v| (0..n).filter(|&w| ch[w] == cg[v]).collect())
        .collect();

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = 0usize;
    // explicit stack of candidate cursors, one per assigned vertex
    let mut cursor = vec![0usize; n];
    let mut depth = 0usize;
    if n == 0 {
        return Ok(0);
    }
    loop {
        let v = depth;
        let mut advanced = false;
        while cursor[v] < candidates[v].len() {
            let w = candidates[v][cursor[v]];
            cursor[v] += 1;
            if used[w] {
                continue;
            }
            let consistent = (0..v).all(|u| g.edge(v, u) == h.edge(w, mapping[u]));
            if consistent {
                mapping[v] = w;
                used[w] = true;
                advanced = true;
                break;
            }
        }
        if advanced {
            if depth + 1 == n {
                found += 1;
                if found > cap {
                    return Err(RmsdError::TooManyIsomorphisms(cap));
                }
                visit(&mapping);
                used[mapping[v]] = false;
                mapping[v] = usize::MAX;
            } else {
                depth += 1;
                cursor[depth] = 0;
            }
        } else {
            cursor[v] = 0;
            if depth == 0 {
                break;
            }
            depth -= 1;
            let u = depth;
            used[mapping[u]] = false;
            mapping[u] = usize::MAX;
        }
    }
    if found == 0 {
        return Err(RmsdError::NotIsomorphic("bond topology differs".into()));
    }
    Ok(found)
}

/// All label-preserving automorphisms of the heavy-atom graph.
pub fn enumerate_automorphisms(mol: &SmallMolecule) -> Result<Vec<AtomCorrespondence>, RmsdError> {
    if mol.component_count() != 1 {
        return Err(RmsdError::Disconnected(mol.component_count()));
    }
    let g = HeavyGraph::new(mol);
    let mut out = Vec::new();
    search_isomorphisms(&g, &g, MAX_ISOMORPHISMS, |m| {
        out.push(AtomCorrespondence { mapping: m.to_vec() })
    })?;
    Ok(out)
}

/// Automorphisms without the connectivity requirement (salts, multi-part ligands).
pub(crate) fn automorphisms_any(mol: &SmallMolecule) -> Result<Vec<AtomCorrespondence>, RmsdError> {
    let g = HeavyGraph::new(mol);
    let mut out = Vec::new();
    search_isomorphisms(&g, &g, MAX_ISOMORPHISMS, |m| {
        out.push(AtomCorrespondence { mapping: m.to_vec() })
    })?;
    Ok(out)
}

/// All isomorphisms from `pred`'s heavy-atom graph onto `reference`'s.
pub fn find_isomorphisms(
    pred: &SmallMolecule,
    reference: &SmallMolecule,
) -> Result<Vec<AtomCorrespondence>, RmsdError> {
    let g = HeavyGraph::new(pred);
    let h = HeavyGraph::new(reference);
    let mut out = Vec::new();
    search_isomorphisms(&g, &h, MAX_ISOMORPHISMS, |m| {
        out.push(AtomCorrespondence { mapping: m.to_vec() })
    })?;
    Ok(out)
}

/// Outcome of a symmetry-corrected comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryRmsd {
    /// Å.
    pub rmsd: f64,
    /// Minimising correspondence; ties resolve to the lexicographically
    /// smallest mapping.
    pub correspondence: AtomCorrespondence,
    /// Original atom indices of the heavy atoms of `pred` and `reference`.
    pub pred_atoms: Vec<usize>,
    pub ref_atoms: Vec<usize>,
    pub isomorphism_count: usize,
}

impl SymmetryRmsd {
    /// `(pred atom index, reference atom index)` pairs in original numbering.
    pub fn atom_pairs(&self) -> Vec<(usize, usize)> {
        self.correspondence
            .mapping
            .iter()
            .enumerate()
            .map(|(k, &j)| (self.pred_atoms[k], self.ref_atoms[j]))
            .collect()
    }
}

pub fn symmetry_rmsd(
    pred: &SmallMolecule,
    reference: &SmallMolecule,
) -> Result<SymmetryRmsd, RmsdError> {
    let g = HeavyGraph::new(pred);
    let h = HeavyGraph::new(reference);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let count = search_isomorphisms(&g, &h, MAX_ISOMORPHISMS, |m| {
        let ss: f64 = m
            .iter()
            .enumerate()
            .map(|(v, &w)| (g.positions[v] - h.positions[w]).norm_squared())
            .sum();
        // strict: the first (lexicographically smallest) minimiser wins ties
        if best.as_ref().is_none_or(|(b, _)| ss < *b) {
            best = Some((ss, m.to_vec()));
        }
    })?;
    let (ss, mapping) = best.expect("at least one isomorphism");
    Ok(SymmetryRmsd {
        rmsd: (ss / g.len() as f64).sqrt(),
        correspondence: AtomCorrespondence { mapping },
        pred_atoms: g.atom_index,
        ref_atoms: h.atom_index,
        isomorphism_count: count,
    })
}

/// Heavy-atom RMSD pairing atoms by file order.
pub fn naive_rmsd(pred: &SmallMolecule, reference: &SmallMolecule) -> Result<f64, RmsdError> {
    let a = pred.heavy_positions();
    let b = reference.heavy_positions();
    if a.len() != b.len() {
        return Err(RmsdError::CountMismatch {
            pred: a.len(),
            reference: b.len(),
        });
    }
    Ok(crate::geom::rmsd(&a, &b))
}

pub fn ligand_rmsd(
    pred: &SmallMolecule,
    reference: &SmallMolecule,
    mode: RmsdMode,
) -> Result<f64, RmsdError> {
    match mode {
        RmsdMode::Symmetry => symmetry_rmsd(pred, reference).map(|r| r.rmsd),
        RmsdMode::Naive => naive_rmsd(pred, reference),
    }
}
