use crate::chemio::{Atom, Element, HeteroClass, ProteinStructure, SmallMolecule};
use crate::geom::{NeighborGrid, RadiusTable, Vec3};
use crate::par::{self, Execution};

use super::report::CheckResult;

pub const DISTANCE_SCALE: f64 = 0.75;
pub const OVERLAP_LIMIT: f64 = 0.075;
pub const OVERLAP_SCALE: f64 = 0.8;
pub const INORGANIC_OVERLAP_SCALE: f64 = 0.5;
pub const GRID_SPACING: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct InterParams {
    pub radii: RadiusTable,
    /// Overlap grid spacing, Å.
    pub grid_spacing: f64,
}

impl Default for InterParams {
    fn default() -> Self {
        InterParams {
            radii: RadiusTable::default(),
            grid_spacing: GRID_SPACING,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadiusKind {
    Vdw,
    Covalent,
}

/// Smallest `d / (r_a + r_b)` over all ligand–partner pairs, with the pair.
pub fn min_distance_ratio(
    ligand: &[(Element, Vec3)],
    partner: &[(Element, Vec3)],
    radii: &RadiusTable,
    kind: RadiusKind,
    exec: Execution,
) -> Option<(f64, f64, usize, usize)> {
    let r = |e: Element| match kind {
        RadiusKind::Vdw => radii.vdw(e),
        RadiusKind::Covalent => radii.covalent(e),
    };
    let per_atom = par::map(exec, ligand, |&(el, p)| {
        let mut best: Option<(f64, f64, usize)> = None;
        for (j, &(ep, q)) in partner.iter().enumerate() {
            let d = (p - q).norm();
            let ratio = d / (r(el) + r(ep));
            if best.is_none_or(|(b, _, _)| ratio < b) {
                best = Some((ratio, d, j));
            }
        }
        best
    });
    per_atom
        .into_iter()
        .enumerate()
        .filter_map(|(i, b)| b.map(|(ratio, d, j)| (ratio, d, i, j)))
        .fold(None, |acc: Option<(f64, f64, usize, usize)>, x| match acc {
            Some(a) if a.0 <= x.0 => Some(a),
            _ => Some(x),
        })
}

/// Fraction of the ligand's sphere-union volume also inside the partner's,
/// both with radii `scale × vdW`, sampled at cell centres of a cubic grid over
/// the ligand's bounding box.
pub fn volume_overlap_fraction(
    ligand: &[(Element, Vec3)],
    partner: &[(Element, Vec3)],
    radii: &RadiusTable,
    scale: f64,
    spacing: f64,
    exec: Execution,
) -> f64 {
    if ligand.is_empty() {
        return 0.0;
    }
    let lig_r: Vec<f64> = ligand.iter().map(|&(e, _)| scale * radii.vdw(e)).collect();
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for (&(_, p), &r) in ligand.iter().zip(&lig_r) {
        lo = lo.inf(&(p - Vec3::repeat(r)));
        hi = hi.sup(&(p + Vec3::repeat(r)));
    }
    let max_pr = partner.iter().map(|&(e, _)| scale * radii.vdw(e)).fold(0.0, f64::max);
    let near: Vec<(Vec3, f64)> = partner
        .iter()
        .filter(|&&(_, q)| (0..3).all(|k| q[k] >= lo[k] - max_pr && q[k] <= hi[k] + max_pr))
        .map(|&(e, q)| (q, scale * radii.vdw(e)))
        .collect();
    let grid = NeighborGrid::new(&near.iter().map(|x| x.0).collect::<Vec<_>>(), 2.0 * max_pr.max(0.5));
    let dims: Vec<usize> = (0..3).map(|k| (((hi[k] - lo[k]) / spacing).ceil() as usize).max(1)).collect();
    let counts = par::map_range(exec, dims[0], |ix| {
        let (mut inside, mut shared) = (0u64, 0u64);
        for iy in 0..dims[1] {
            for iz in 0..dims[2] {
                let q = lo + Vec3::new(ix as f64 + 0.5, iy as f64 + 0.5, iz as f64 + 0.5) * spacing;
                let in_ligand = ligand
                    .iter()
                    .zip(&lig_r)
                    .any(|(&(_, p), &r)| (q - p).norm_squared() <= r * r);
                if !in_ligand {
                    continue;
                }
                inside += 1;
                if !near.is_empty()
                    && grid
                        .within(&q, max_pr)
                        .into_iter()
                        .any(|j| (q - near[j].0).norm_squared() <= near[j].1 * near[j].1)
                {
                    shared += 1;
                }
            }
        }
        (inside, shared)
    });
    let (inside, shared) = counts
        .into_iter()
        .fold((0u64, 0u64), |a, b| (a.0 + b.0, a.1 + b.1));
    if inside == 0 {
        0.0
    } else {
        shared as f64 / inside as f64
    }
}

fn atoms_of<'a>(it: impl IntoIterator<Item = &'a Atom>) -> Vec<(Element, Vec3)> {
    it.into_iter().map(|a| (a.element, a.position)).collect()
}

fn distance_check(
    name: &str,
    ligand: &[(Element, Vec3)],
    partner: &[(Element, Vec3)],
    radii: &RadiusTable,
    kind: RadiusKind,
    exec: Execution,
) -> CheckResult {
    match min_distance_ratio(ligand, partner, radii, kind, exec) {
        None => CheckResult::pass_if(name, true).detail("no partner atoms"),
        Some((ratio, d, i, j)) => {
            let (el, ep) = (ligand[i].0, partner[j].0);
            let sum = match kind {
                RadiusKind::Vdw => radii.vdw(el) + radii.vdw(ep),
                RadiusKind::Covalent => radii.covalent(el) + radii.covalent(ep),
            };
            // decided on distances so boundary cases do not hinge on a division
            let ok = ligand.iter().all(|&(el, p)| {
                partner.iter().all(|&(ep, q)| {
                    let s = match kind {
                        RadiusKind::Vdw => radii.vdw(el) + radii.vdw(ep),
                        RadiusKind::Covalent => radii.covalent(el) + radii.covalent(ep),
                    };
                    (p - q).norm() > DISTANCE_SCALE * s
                })
            });
            CheckResult::pass_if(name, ok)
                .measured(ratio, DISTANCE_SCALE, "ratio")
                .detail(format!(
                    "closest {el} (ligand heavy atom {}) to {ep} at {d:.3} Å, limit {:.3} Å",
                    i + 1,
                    DISTANCE_SCALE * sum
                ))
        }
    }
}

fn overlap_check(
    name: &str,
    ligand: &[(Element, Vec3)],
    partner: &[(Element, Vec3)],
    params: &InterParams,
    scale: f64,
    exec: Execution,
) -> CheckResult {
    if partner.is_empty() {
        return CheckResult::pass_if(name, true)
            .measured(0.0, OVERLAP_LIMIT, "fraction")
            .detail("no partner atoms");
    }
    let f = volume_overlap_fraction(ligand, partner, &params.radii, scale, params.grid_spacing, exec);
    CheckResult::pass_if(name, f < OVERLAP_LIMIT)
        .measured(f, OVERLAP_LIMIT, "fraction")
        .detail(format!("radius scale {scale}, grid {} Å", params.grid_spacing))
}

/// Intermolecular plausibility against the protein, organic cofactors and
/// inorganic cofactors. Heavy atoms only; waters are ignored.
pub fn check_intermolecular(
    pred: &SmallMolecule,
    protein: &ProteinStructure,
    params: &InterParams,
    exec: Execution,
) -> Vec<CheckResult> {
    let ligand = atoms_of(pred.atoms().iter().filter(|a| !a.is_hydrogen()));
    let prot = atoms_of(protein.polymer_heavy_atoms());
    let organic = atoms_of(protein.hetero_heavy_atoms(HeteroClass::Organic));
    let inorganic = atoms_of(protein.hetero_heavy_atoms(HeteroClass::Inorganic));
    let r = &params.radii;
    vec![
        distance_check("minimum_distance_to_protein", &ligand, &prot, r, RadiusKind::Vdw, exec),
        distance_check("minimum_distance_to_organic_cofactors", &ligand, &organic, r, RadiusKind::Vdw, exec),
        distance_check(
            "minimum_distance_to_inorganic_cofactors",
            &ligand,
            &inorganic,
            r,
            RadiusKind::Covalent,
            exec,
        ),
        overlap_check("volume_overlap_with_protein", &ligand, &prot, params, OVERLAP_SCALE, exec),
        overlap_check("volume_overlap_with_organic_cofactors", &ligand, &organic, params, OVERLAP_SCALE, exec),
        overlap_check(
            "volume_overlap_with_inorganic_cofactors",
            &ligand,
            &inorganic,
            params,
            INORGANIC_OVERLAP_SCALE,
            exec,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(x: f64) -> (Element, Vec3) {
        (Element::C, Vec3::new(x, 0.0, 0.0))
    }

    #[test]
    fn coincident_carbons_ratio_zero() {
        let r = RadiusTable::default();
        let (ratio, d, _, _) =
            min_distance_ratio(&[c(0.0)], &[c(0.0), c(5.0)], &r, RadiusKind::Vdw, Execution::Sequential).unwrap();
        assert_eq!((ratio, d), (0.0, 0.0));
    }

    /// Lens volume of two spheres of radius `r` at separation `d`.
    fn lens(r: f64, d: f64) -> f64 {
        PI * (4.0 * r + d) * (2.0 * r - d).powi(2) / 12.0
    }

    #[test]
    fn grid_overlap_matches_lens_volume() {
        let radii = RadiusTable::default();
        let r = 0.8 * 1.7;
        for d in [1.0, 1.8, 2.4] {
            let f = volume_overlap_fraction(&[c(0.0)], &[c(d)], &radii, 0.8, 0.1, Execution::Sequential);
            let exact = lens(r, d) / (4.0 / 3.0 * PI * r.powi(3));
            assert!((f - exact).abs() < 0.01, "d={d} grid {f} exact {exact}");
        }
    }

    #[test]
    fn no_partner_means_no_overlap() {
        let f = volume_overlap_fraction(&[c(0.0)], &[c(50.0)], &RadiusTable::default(), 0.8, 0.25, Execution::Sequential);
        assert_eq!(f, 0.0);
    }
}
