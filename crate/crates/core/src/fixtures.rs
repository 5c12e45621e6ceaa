//! Small synthetic structures for tests, benchmarks and examples.

use crate::chemio::{Atom, Bond, BondOrder, Chain, Element, ProteinStructure, Residue, SmallMolecule};
use crate::geom::Vec3;

/// Place atom `d` from `a`, `b`, `c` given |cd|, angle bcd and dihedral abcd
/// (natural extension reference frame).
pub fn place(a: &Vec3, b: &Vec3, c: &Vec3, bond: f64, angle_deg: f64, torsion_deg: f64) -> Vec3 {
    let (theta, phi) = (angle_deg.to_radians(), torsion_deg.to_radians());
    let bc = (c - b).normalize();
    let n = (b - a).cross(&bc).normalize();
    let m = n.cross(&bc);
    let d2 = Vec3::new(-bond * theta.cos(), bond * theta.sin() * phi.cos(), bond * theta.sin() * phi.sin());
    c + bc * d2.x + m * d2.y + n * d2.z
}

fn three_letter(c: char) -> &'static str {
    match c {
        'A' => "ALA",
        'R' => "ARG",
        'N' => "ASN",
        'D' => "ASP",
        'C' => "CYS",
        'Q' => "GLN",
        'E' => "GLU",
        'G' => "GLY",
        'H' => "HIS",
        'I' => "ILE",
        'L' => "LEU",
        'K' => "LYS",
        'M' => "MET",
        'F' => "PHE",
        'P' => "PRO",
        'S' => "SER",
        'T' => "THR",
        'W' => "TRP",
        'Y' => "TYR",
        'V' => "VAL",
        _ => "UNK",
    }
}

fn named(element: Element, name: &str, position: Vec3) -> Atom {
    let mut a = Atom::new(element, position);
    a.name = name.to_string();
    a
}

/// Ideal α-helix (φ −57°, ψ −47°) with backbone atoms and Cβ for non-glycine
/// residues. Residues are numbered from 1.
pub fn helix_chain(id: &str, sequence: &str) -> Chain {
    let (phi, psi, omega) = (-57.0, -47.0, 180.0);
    let mut n = Vec3::new(0.0, 1.458, 0.0);
    let mut ca = Vec3::zeros();
    let mut c = place(&Vec3::new(1.0, 1.0, 1.0), &n, &ca, 1.525, 111.0, -60.0);
    let mut residues = Vec::new();
    for (k, code) in sequence.chars().enumerate() {
        if k > 0 {
            let prev_n = n;
            n = place(&prev_n, &ca, &c, 1.329, 116.2, psi);
            let prev_ca = ca;
            ca = place(&prev_ca, &c, &n, 1.458, 121.7, omega);
            c = place(&c, &n, &ca, 1.525, 111.0, phi);
        }
        let next_n = place(&n, &ca, &c, 1.329, 116.2, psi);
        let o = place(&next_n, &ca, &c, 1.231, 120.5, 180.0);
        let mut atoms = vec![
            named(Element::N, "N", n),
            named(Element::C, "CA", ca),
            named(Element::C, "C", c),
            named(Element::O, "O", o),
        ];
        if code != 'G' {
            atoms.push(named(Element::C, "CB", place(&c, &n, &ca, 1.53, 110.5, -122.5)));
        }
        let chain_id = id.to_string();
        for (s, a) in atoms.iter_mut().enumerate() {
            a.serial = 10 * (k + 1) + s;
        }
        residues.push(Residue {
            chain_id,
            name: three_letter(code).to_string(),
            seq_number: k as i32 + 1,
            insertion_code: None,
            atoms,
        });
    }
    Chain {
        id: id.to_string(),
        residues,
    }
}

pub fn protein(chains: Vec<Chain>) -> ProteinStructure {
    ProteinStructure {
        chains,
        ..Default::default()
    }
}

/// Single-chain helical protein.
pub fn helix_protein(sequence: &str) -> ProteinStructure {
    protein(vec![helix_chain("A", sequence)])
}

pub fn molecule(atoms: &[(Element, [f64; 3])], bonds: &[(usize, usize, BondOrder)]) -> SmallMolecule {
    SmallMolecule::new(
        "fixture",
        atoms
            .iter()
            .map(|&(e, p)| Atom::new(e, Vec3::new(p[0], p[1], p[2])))
            .collect(),
        bonds.iter().map(|&(a, b, o)| Bond::new(a, b, o)).collect(),
    )
    .expect("fixture molecule is well-formed")
}

/// Planar aromatic benzene (heavy atoms only) centred at `center` in the xy plane.
pub fn benzene(center: Vec3) -> SmallMolecule {
    let atoms: Vec<(Element, [f64; 3])> = (0..6)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / 6.0;
            (Element::C, [center.x + 1.39 * t.cos(), center.y + 1.39 * t.sin(), center.z])
        })
        .collect();
    let bonds: Vec<_> = (0..6).map(|k| (k, (k + 1) % 6, BondOrder::Aromatic)).collect();
    molecule(&atoms, &bonds)
}

/// Staggered ethanol with explicit hydrogens.
pub fn ethanol() -> SmallMolecule {
    use BondOrder::Single;
    use Element::{C, H, O};
    molecule(
        &[
            (C, [-1.2516, -0.2009, 0.0]),
            (C, [0.2432, 0.1520, 0.0]),
            (O, [0.9956, -1.0530, 0.0]),
            (H, [-1.7878, 0.7507, 0.0]),
            (H, [-1.5273, -0.7675, 0.8908]),
            (H, [-1.5273, -0.7675, -0.8908]),
            (H, [0.5089, 0.7452, 0.8863]),
            (H, [0.5089, 0.7452, -0.8863]),
            (H, [1.9240, -0.8030, 0.0]),
        ],
        &[
            (0, 1, Single),
            (1, 2, Single),
            (0, 3, Single),
            (0, 4, Single),
            (0, 5, Single),
            (1, 6, Single),
            (1, 7, Single),
            (2, 8, Single),
        ],
    )
}

/// Phenol-like ligand: aromatic ring with a hydroxyl, heavy atoms only.
pub fn phenol(center: Vec3) -> SmallMolecule {
    let mut atoms: Vec<(Element, [f64; 3])> = (0..6)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / 6.0;
            (Element::C, [center.x + 1.39 * t.cos(), center.y + 1.39 * t.sin(), center.z])
        })
        .collect();
    atoms.push((Element::O, [center.x + 1.39 + 1.36, center.y, center.z]));
    let mut bonds: Vec<_> = (0..6).map(|k| (k, (k + 1) % 6, BondOrder::Aromatic)).collect();
    bonds.push((0, 6, BondOrder::Single));
    molecule(&atoms, &bonds)
}

/// A helix with a phenol whose oxygen sits `depth` Å inside the vdW sphere
/// of the Cβ of residue `residue` (0-based), the ring pointing away from the
/// helix. Returns the complex and the clashing protein atom's position.
pub fn clash_complex(sequence: &str, residue: usize, depth: f64) -> (ProteinStructure, SmallMolecule, Vec3) {
    use crate::geom::{RadiusTable, RigidTransform};
    let p = helix_protein(sequence);
    let res = &p.chains[0].residues[residue];
    let ca = res.atom("CA").expect("CA").position;
    let cb = res.atom("CB").expect("non-glycine residue").position;
    let u = (cb - ca).normalize();
    let o_pos = cb + u * (RadiusTable::default().vdw(Element::C) - depth);
    let lig = phenol(Vec3::zeros());
    // phenol's O lies on +x from the ring centre; turn +x onto -u
    let x = Vec3::x();
    let axis = x.cross(&(-u));
    let rot = if axis.norm() < 1e-12 {
        RigidTransform::identity()
    } else {
        RigidTransform::from_axis_angle(axis, x.dot(&(-u)).clamp(-1.0, 1.0).acos())
    };
    let o_local = lig.atoms()[6].position;
    let t = RigidTransform::from_translation(o_pos - rot.apply(&o_local)).compose(&rot);
    (p.clone(), lig.map_positions(|q| t.apply(q)), cb)
}

/// Copy of `p` with every residue shifted by its own fixed offset, scaled so
/// that the Cα RMSD after superposition onto `p` equals `ca_rmsd` (to 1e-9 Å).
pub fn distorted_copy(p: &ProteinStructure, ca_rmsd: f64) -> ProteinStructure {
    let offset = |k: usize| {
        let k = k as f64;
        Vec3::new((1.7 * k).sin(), (2.3 * k).cos(), (0.9 * k + 1.0).sin())
    };
    let build = |a: f64| {
        let mut q = p.clone();
        let mut k = 0;
        for chain in &mut q.chains {
            for r in &mut chain.residues {
                let d = offset(k) * a;
                for atom in &mut r.atoms {
                    atom.position += d;
                }
                k += 1;
            }
        }
        q
    };
    let measure = |a: f64| {
        crate::crossdock::align_to_reference(&build(a), p)
            .expect("same sequence")
            .ca_rmsd
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while measure(hi) < ca_rmsd {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if measure(mid) < ca_rmsd {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    build(0.5 * (lo + hi))
}

/// A manifest entry that passes every default filter row.
pub fn clean_entry(pdb_id: &str, ccd_id: &str, sequence: &str) -> crate::curate::ManifestEntry {
    crate::curate::ManifestEntry {
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
        sequences: Some(vec![sequence.into()]),
        min_protein_distance: Some(2.8),
        min_symmetry_mate_distance: Some(8.0),
        ..crate::curate::ManifestEntry::new(pdb_id, ccd_id)
    }
}

/// Eight-entry self-dock manifest. Filters reject 1fff (95 Da), 1ggg (2 heavy
/// atoms) and 1hhh (Br); matching keeps one of 1aaa's two ligands; 1ccc and
/// 1eee share a sequence and collapse to 1ccc. Selected: 1aaa_AAA, 1bbb_BBB,
/// 1ccc_CCC.
pub fn self_dock_manifest() -> Vec<crate::curate::ManifestEntry> {
    let s1 = "MKTAYIAKQRQISFVKSHFSRQLEERLGLI";
    let s2 = "GSHMSLFDKLKHLVSEEVRLPKQGYAQW";
    let s3 = "MADEEKLPPGWEKRMSRSSGRVYYF";
    let mut light = clean_entry("1fff", "FFF", s1);
    light.ligand_mw = Some(95.0);
    let mut tiny = clean_entry("1ggg", "GGG", s2);
    tiny.heavy_atom_count = Some(2);
    let mut bromo = clean_entry("1hhh", "HHH", s3);
    bromo.elements = Some(vec!["C".into(), "Br".into()]);
    vec![
        clean_entry("1aaa", "AAA", s1),
        clean_entry("1aaa", "DDD", s1),
        clean_entry("1bbb", "BBB", s2),
        clean_entry("1ccc", "CCC", s3),
        clean_entry("1eee", "EEE", s3),
        light,
        tiny,
        bromo,
    ]
}

/// Sequence shared by the cross-dock fixture structures.
pub const CROSS_DOCK_SEQUENCE: &str = "MKTAYIAKQRQISFVKSHFSRQ";

/// One sequence cluster of three structures. 2ref (1.5 Å resolution) is the
/// reference; 2cnd is a rigid copy holding a good ligand (2cnd_LGA) and one
/// shifted 4.5 Å from the reference ligand (2cnd_LGB); 2bad superposes at a Cα
/// RMSD of 2.5 Å. Expected cross pairs: 2ref_LRF into 2cnd and 2cnd_LGA into
/// 2ref.
pub fn cross_dock_fixture() -> (Vec<crate::curate::ManifestEntry>, crate::curate::InMemorySource) {
    use crate::geom::{RadiusTable, RigidTransform};
    let (reference, _, _) = clash_complex(CROSS_DOCK_SEQUENCE, 10, 0.0);
    // ligand sits clear of the helix: same orientation, pushed 3 Å further out
    let ca = reference.chains[0].residues[10].atom("CA").unwrap().position;
    let cb = reference.chains[0].residues[10].atom("CB").unwrap().position;
    let out = (cb - ca).normalize() * (3.0 + RadiusTable::default().vdw(Element::C));
    let (_, lig, _) = clash_complex(CROSS_DOCK_SEQUENCE, 10, 0.0);
    let ref_lig = lig.map_positions(|p| p + out);

    let motion = RigidTransform::from_translation(Vec3::new(12.0, -3.0, 7.5))
        .compose(&RigidTransform::from_axis_angle(Vec3::new(1.0, 2.0, -0.5), 0.9));
    let cand = reference.map_positions(|p| motion.apply(p));
    let good = ref_lig.map_positions(|p| motion.apply(&(p + Vec3::new(0.5, 0.0, 0.0))));
    let shifted = ref_lig.map_positions(|p| motion.apply(&(p + Vec3::new(0.0, 4.5, 0.0))));
    let bad = distorted_copy(&reference, 2.5);

    let mut e_ref = clean_entry("2ref", "LRF", CROSS_DOCK_SEQUENCE);
    e_ref.resolution = Some(1.5);
    let entries = vec![
        e_ref,
        clean_entry("2cnd", "LGA", CROSS_DOCK_SEQUENCE),
        clean_entry("2cnd", "LGB", CROSS_DOCK_SEQUENCE),
        clean_entry("2bad", "LBD", CROSS_DOCK_SEQUENCE),
    ];
    let mut src = crate::curate::InMemorySource::default();
    src.proteins.insert("2ref".into(), reference);
    src.proteins.insert("2cnd".into(), cand);
    src.proteins.insert("2bad".into(), bad);
    src.ligands.insert("2ref_LRF".into(), ref_lig.clone());
    src.ligands.insert("2cnd_LGA".into(), good);
    src.ligands.insert("2cnd_LGB".into(), shifted);
    src.ligands.insert("2bad_LBD".into(), ref_lig);
    (entries, src)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{angle_deg, dihedral_deg};

    #[test]
    fn helix_geometry_is_ideal() {
        let chain = helix_chain("A", "AGSLKE");
        assert_eq!(chain.sequence(), "AGSLKE");
        let ca: Vec<Vec3> = chain.residues.iter().map(|r| r.ca().unwrap().position).collect();
        for r in &chain.residues {
            let n = r.atom("N").unwrap().position;
            let a = r.atom("CA").unwrap().position;
            let c = r.atom("C").unwrap().position;
            assert!(((n - a).norm() - 1.458).abs() < 1e-9);
            assert!(((c - a).norm() - 1.525).abs() < 1e-9);
            assert!((angle_deg(&n, &a, &c) - 111.0).abs() < 1e-9);
        }
        // successive Cα about 3.8 Å apart, i→i+3 about 5 Å in an α-helix
        for w in ca.windows(2) {
            assert!(((w[0] - w[1]).norm() - 3.8).abs() < 0.05);
        }
        assert!((ca[0] - ca[3]).norm() < 5.5);
        let r1 = &chain.residues[1];
        let r2 = &chain.residues[2];
        let phi = dihedral_deg(
            &r1.atom("C").unwrap().position,
            &r2.atom("N").unwrap().position,
            &r2.atom("CA").unwrap().position,
            &r2.atom("C").unwrap().position,
        );
        assert!((phi + 57.0).abs() < 1e-6);
    }

    #[test]
    fn place_reproduces_internal_coordinates() {
        let a = Vec3::new(0.3, -1.0, 0.2);
        let b = Vec3::new(0.0, 0.0, 0.0);
        let c = Vec3::new(1.4, 0.1, -0.3);
        let d = place(&a, &b, &c, 1.5, 109.0, 65.0);
        assert!(((d - c).norm() - 1.5).abs() < 1e-12);
        assert!((angle_deg(&b, &c, &d) - 109.0).abs() < 1e-9);
        assert!((dihedral_deg(&a, &b, &c, &d) - 65.0).abs() < 1e-9);
    }
}
