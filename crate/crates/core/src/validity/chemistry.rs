use crate::chemio::{BondOrder, Element, SmallMolecule};
use crate::geom::{dihedral_deg, signed_volume};
use crate::ligrmsd::{automorphisms_any, symmetry_rmsd, AtomCorrespondence, HeavyGraph, RmsdError};

use super::report::CheckResult;

/// Centres whose reference signed volume is smaller than this (Å³) are too
/// flat to carry a meaningful handedness.
const MIN_CHIRAL_VOLUME: f64 = 0.1;
/// Double bonds whose reference dihedral lies within this many degrees of 90
/// are neither clearly cis nor trans.
const AMBIGUOUS_DIHEDRAL: f64 = 5.0;

fn max_valence(e: Element) -> Option<f64> {
    use Element::*;
    Some(match e {
        H | F | Cl | Br | Li | Na | K => 1.0,
        O => 3.0,
        N | C | B | Si => 4.0,
        P | As => 5.0,
        S | Se => 6.0,
        I => 3.0,
        _ => return None,
    })
}

fn bond_valence(o: BondOrder) -> f64 {
    match o {
        BondOrder::Single => 1.0,
        BondOrder::Double => 2.0,
        BondOrder::Triple => 3.0,
        BondOrder::Aromatic => 1.5,
    }
}

/// Graph-level sanity in place of toolkit sanitisation: no atom exceeds the
/// maximum valence of its element. Metals are not checked.
fn sanitization(pred: &SmallMolecule) -> CheckResult {
    let adj = pred.adjacency();
    let mut bad = Vec::new();
    for (i, atom) in pred.atoms().iter().enumerate() {
        let Some(limit) = max_valence(atom.element) else {
            continue;
        };
        let v: f64 = adj[i].iter().map(|&(_, o)| bond_valence(o)).sum();
        if v > limit + 1e-9 {
            bad.push(format!("{}{} valence {v}", atom.element, i + 1));
        }
    }
    let r = CheckResult::pass_if("sanitization", bad.is_empty())
        .measured(bad.len() as f64, 0.0, "atoms");
    if bad.is_empty() {
        r.detail("valence check on the parsed graph")
    } else {
        r.detail(bad.join("; "))
    }
}

/// Reference heavy-atom automorphisms; identity only if enumeration blows up.
fn reference_automorphisms(reference: &SmallMolecule) -> Vec<AtomCorrespondence> {
    automorphisms_any(reference)
        .unwrap_or_else(|_| vec![AtomCorrespondence::identity(reference.heavy_atom_count())])
}

fn is_odd_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = perm[k];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 1
}

/// True if some automorphism fixing every atom in `fixed` permutes `around`
/// (a set it must then map onto itself) by an odd permutation.
fn has_odd_symmetry(autos: &[AtomCorrespondence], fixed: &[usize], around: &[usize]) -> bool {
    autos.iter().any(|a| {
        if fixed.iter().any(|&f| a.mapping[f] != f) {
            return false;
        }
        let perm: Option<Vec<usize>> = around
            .iter()
            .map(|&x| around.iter().position(|&y| y == a.mapping[x]))
            .collect();
        perm.is_some_and(|p| is_odd_permutation(&p))
    })
}

/// True if removing edge `a–b` leaves `b` reachable from `a`.
fn edge_in_cycle(adj: &[Vec<usize>], a: usize, b: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![a];
    seen[a] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if (v == a && w == b) || seen[w] {
                continue;
            }
            if w == b {
                return true;
            }
            seen[w] = true;
            stack.push(w);
        }
    }
    false
}

fn chirality(g: &HeavyGraph, h: &HeavyGraph, inv: &[usize], autos: &[AtomCorrespondence]) -> CheckResult {
    let mut checked = 0;
    let mut mismatched = Vec::new();
    for c in 0..h.len() {
        if h.adj[c].len() != 4 {
            continue;
        }
        let nb = &h.adj[c];
        let vol_ref = signed_volume(
            &h.positions[nb[0]],
            &h.positions[nb[1]],
            &h.positions[nb[2]],
            &h.positions[nb[3]],
        );
        if vol_ref.abs() < MIN_CHIRAL_VOLUME || has_odd_symmetry(autos, &[c], nb) {
            continue;
        }
        let p: Vec<usize> = nb.iter().map(|&j| inv[j]).collect();
        let vol_pred = signed_volume(
            &g.positions[p[0]],
            &g.positions[p[1]],
            &g.positions[p[2]],
            &g.positions[p[3]],
        );
        checked += 1;
        if vol_pred.signum() != vol_ref.signum() {
            mismatched.push(h.atom_index[c] + 1);
        }
    }
    CheckResult::pass_if("tetrahedral_chirality", mismatched.is_empty())
        .measured(mismatched.len() as f64, 0.0, "centers")
        .detail(if mismatched.is_empty() {
            format!("{checked} centers compared")
        } else {
            format!("{checked} centers compared; inverted at reference atoms {mismatched:?}")
        })
}

fn double_bond_stereo(
    g: &HeavyGraph,
    h: &HeavyGraph,
    inv: &[usize],
    autos: &[AtomCorrespondence],
) -> CheckResult {
    let mut checked = 0;
    let mut mismatched = Vec::new();
    for a in 0..h.len() {
        for &b in &h.adj[a] {
            if b < a
                || h.edge(a, b) != 2
                || h.labels[a] != Element::C
                || h.labels[b] != Element::C
                || edge_in_cycle(&h.adj, a, b)
            {
                continue;
            }
            let sa: Vec<usize> = h.adj[a].iter().copied().filter(|&x| x != b).collect();
            let sb: Vec<usize> = h.adj[b].iter().copied().filter(|&x| x != a).collect();
            if sa.is_empty() || sb.is_empty() {
                continue;
            }
            if has_odd_symmetry(autos, &[a, b], &sa) || has_odd_symmetry(autos, &[a, b], &sb) {
                continue;
            }
            let (x, y) = (sa[0], sb[0]);
            let d_ref = dihedral_deg(&h.positions[x], &h.positions[a], &h.positions[b], &h.positions[y]);
            if (d_ref.abs() - 90.0).abs() < AMBIGUOUS_DIHEDRAL {
                continue;
            }
            let d_pred = dihedral_deg(
                &g.positions[inv[x]],
                &g.positions[inv[a]],
                &g.positions[inv[b]],
                &g.positions[inv[y]],
            );
            checked += 1;
            if (d_ref.abs() < 90.0) != (d_pred.abs() < 90.0) {
                mismatched.push((h.atom_index[a] + 1, h.atom_index[b] + 1));
            }
        }
    }
    CheckResult::pass_if("double_bond_stereochemistry", mismatched.is_empty())
        .measured(mismatched.len() as f64, 0.0, "bonds")
        .detail(if mismatched.is_empty() {
            format!("{checked} double bonds compared")
        } else {
            format!("{checked} double bonds compared; flipped at reference bonds {mismatched:?}")
        })
}

/// Chemical validity and consistency of `pred` against the reference ligand.
pub fn check_chemistry(pred: &SmallMolecule, reference: &SmallMolecule) -> Vec<CheckResult> {
    let mut out = vec![
        CheckResult::pass_if("mol_pred_loaded", true).detail("parser accepted the record"),
        sanitization(pred),
    ];
    let (fp, fr) = (pred.formula_string(), reference.formula_string());
    out.push(
        CheckResult::pass_if("molecular_formula", pred.heavy_formula() == reference.heavy_formula())
            .detail(format!("pred {fp}, reference {fr}")),
    );
    match symmetry_rmsd(pred, reference) {
        Ok(sym) => {
            out.push(
                CheckResult::pass_if("molecular_bonds", true)
                    .detail(format!("{} isomorphisms", sym.isomorphism_count)),
            );
            let g = HeavyGraph::new(pred);
            let h = HeavyGraph::new(reference);
            let mut inv = vec![0; h.len()];
            for (k, &j) in sym.correspondence.mapping.iter().enumerate() {
                inv[j] = k;
            }
            let autos = reference_automorphisms(reference);
            out.push(chirality(&g, &h, &inv, &autos));
            out.push(double_bond_stereo(&g, &h, &inv, &autos));
        }
        Err(e) => {
            let why = match &e {
                RmsdError::TooManyIsomorphisms(_) => e.to_string(),
                _ => format!("no atom correspondence: {e}"),
            };
            // Too many isomorphisms still implies one exists.
            let bonds_ok = matches!(e, RmsdError::TooManyIsomorphisms(_));
            out.push(CheckResult::pass_if("molecular_bonds", bonds_ok).detail(why.clone()));
            out.push(CheckResult::skipped("tetrahedral_chirality", why.clone()));
            out.push(CheckResult::skipped("double_bond_stereochemistry", why));
        }
    }
    out
}

/// The reference-dependent checks, marked skipped when no reference is given.
pub fn chemistry_without_reference(pred: &SmallMolecule) -> Vec<CheckResult> {
    let why = "no reference ligand supplied";
    vec![
        CheckResult::pass_if("mol_pred_loaded", true).detail("parser accepted the record"),
        sanitization(pred),
        CheckResult::skipped("molecular_formula", why),
        CheckResult::skipped("molecular_bonds", why),
        CheckResult::skipped("tetrahedral_chirality", why),
        CheckResult::skipped("double_bond_stereochemistry", why),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chemio::{Atom, Bond};
    use crate::geom::Vec3;
    use crate::validity::CheckStatus;

    fn mol(atoms: &[(Element, [f64; 3])], bonds: &[(usize, usize, BondOrder)]) -> SmallMolecule {
        SmallMolecule::new(
            "t",
            atoms
                .iter()
                .map(|&(e, p)| Atom::new(e, Vec3::new(p[0], p[1], p[2])))
                .collect(),
            bonds.iter().map(|&(a, b, o)| Bond::new(a, b, o)).collect(),
        )
        .unwrap()
    }

    /// CHFClBr-like centre with four distinct heavy substituents.
    fn chiral(swap: bool) -> SmallMolecule {
        use BondOrder::Single;
        let s = 1.0 / 3f64.sqrt();
        let mut pos = [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]];
        if swap {
            pos.swap(1, 2);
        }
        mol(
            &[
                (Element::C, [0.0, 0.0, 0.0]),
                (Element::F, pos[0]),
                (Element::Cl, pos[1]),
                (Element::Br, pos[2]),
                (Element::O, pos[3]),
            ],
            &[(0, 1, Single), (0, 2, Single), (0, 3, Single), (0, 4, Single)],
        )
    }

    fn status(checks: &[CheckResult], name: &str) -> CheckStatus {
        checks.iter().find(|c| c.name == name).unwrap().status
    }

    #[test]
    fn identical_passes_everything() {
        let m = chiral(false);
        let checks = check_chemistry(&m, &m);
        assert_eq!(checks.len(), 6);
        assert!(checks.iter().all(|c| c.passed()), "{checks:?}");
    }

    #[test]
    fn swapped_substituents_invert_chirality() {
        let (p, r) = (chiral(true), chiral(false));
        let v = |m: &SmallMolecule| {
            let x = m.positions();
            signed_volume(&x[1], &x[2], &x[3], &x[4])
        };
        assert!(v(&p) * v(&r) < 0.0);
        let checks = check_chemistry(&p, &r);
        assert_eq!(status(&checks, "tetrahedral_chirality"), CheckStatus::Fail);
        assert_eq!(status(&checks, "molecular_formula"), CheckStatus::Pass);
    }

    #[test]
    fn equivalent_substituents_are_not_stereocentres() {
        // neopentane-like: swapping two methyls is a symmetry, not an inversion
        use BondOrder::Single;
        let s = 1.0 / 3f64.sqrt();
        let build = |a: [f64; 3], b: [f64; 3]| {
            mol(
                &[
                    (Element::C, [0.0, 0.0, 0.0]),
                    (Element::C, a),
                    (Element::C, b),
                    (Element::F, [-s, s, -s]),
                    (Element::O, [-s, -s, s]),
                ],
                &[(0, 1, Single), (0, 2, Single), (0, 3, Single), (0, 4, Single)],
            )
        };
        let r = build([s, s, s], [s, -s, -s]);
        let checks = check_chemistry(&r, &r);
        assert!(checks[4].detail.as_deref().unwrap().starts_with("0 centers"));
    }

    #[test]
    fn missing_oxygen_fails_formula_and_bonds() {
        use BondOrder::Single;
        let r = mol(
            &[(Element::C, [0.0; 3]), (Element::C, [1.5, 0.0, 0.0]), (Element::O, [2.0, 1.2, 0.0])],
            &[(0, 1, Single), (1, 2, Single)],
        );
        let p = mol(&[(Element::C, [0.0; 3]), (Element::C, [1.5, 0.0, 0.0])], &[(0, 1, Single)]);
        let checks = check_chemistry(&p, &r);
        assert_eq!(status(&checks, "molecular_formula"), CheckStatus::Fail);
        assert_eq!(status(&checks, "molecular_bonds"), CheckStatus::Fail);
        assert_eq!(status(&checks, "tetrahedral_chirality"), CheckStatus::Skipped);
    }

    fn butene(cis: bool) -> SmallMolecule {
        use BondOrder::{Double, Single};
        let y = if cis { 1.0 } else { -1.0 };
        mol(
            &[
                (Element::C, [-1.0, 1.0, 0.0]),
                (Element::C, [0.0, 0.0, 0.0]),
                (Element::C, [1.3, 0.0, 0.0]),
                (Element::C, [2.3, y, 0.0]),
            ],
            &[(0, 1, Single), (1, 2, Double), (2, 3, Single)],
        )
    }

    #[test]
    fn cis_trans_flip_detected() {
        let checks = check_chemistry(&butene(true), &butene(false));
        assert_eq!(status(&checks, "double_bond_stereochemistry"), CheckStatus::Fail);
        let same = check_chemistry(&butene(true), &butene(true));
        assert_eq!(status(&same, "double_bond_stereochemistry"), CheckStatus::Pass);
    }

    #[test]
    fn overvalent_carbon_fails_sanitization() {
        use BondOrder::Double;
        let m = mol(
            &[
                (Element::C, [0.0; 3]),
                (Element::O, [1.2, 0.0, 0.0]),
                (Element::O, [-1.2, 0.0, 0.0]),
                (Element::O, [0.0, 1.2, 0.0]),
            ],
            &[(0, 1, Double), (0, 2, Double), (0, 3, Double)],
        );
        assert_eq!(status(&check_chemistry(&m, &m), "sanitization"), CheckStatus::Fail);
    }

    #[test]
    fn parity() {
        assert!(!is_odd_permutation(&[0, 1, 2]));
        assert!(is_odd_permutation(&[1, 0, 2]));
        assert!(!is_odd_permutation(&[1, 2, 0]));
    }
}
