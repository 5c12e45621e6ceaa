use dockeval::fixtures::clash_complex;
use dockeval::geom::RadiusTable;
use dockeval::par::Execution;
use dockeval::relax::{relax_complex, RelaxConfig};
use dockeval::validity::{check_intermolecular, CheckStatus, InterParams};

const SEQ: &str = "MKTAYIAKQRQISFVKSHFSRQ";

fn min_distance_status(
    ligand: &dockeval::chemio::SmallMolecule,
    protein: &dockeval::chemio::ProteinStructure,
) -> CheckStatus {
    check_intermolecular(ligand, protein, &InterParams::default(), Execution::Sequential)
        .into_iter()
        .find(|c| c.name == "minimum_distance_to_protein")
        .unwrap()
        .status
}

#[test]
fn clash_is_resolved_with_backbone_held() {
    for depth in [0.5, 1.0, 1.5] {
        let (p, l, _) = clash_complex(SEQ, 10, depth);
        assert_eq!(min_distance_status(&l, &p), CheckStatus::Fail);
        let out = relax_complex(&p, &l, &RelaxConfig::default(), &RadiusTable::default()).unwrap();
        assert_eq!(min_distance_status(&out.ligand, &out.protein), CheckStatus::Pass, "depth {depth}");
        assert!(out.stats.converged);
        assert!(out.stats.clash_count_after < out.stats.clash_count_before);
        assert!(out.stats.backbone_mean_displacement < out.stats.ligand_mean_displacement);
        assert!(out.minimization.energies.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(out.ligand.bonds(), l.bonds());
    }
}

#[test]
fn minimisation_is_deterministic() {
    let (p, l, _) = clash_complex(SEQ, 6, 1.0);
    let a = relax_complex(&p, &l, &RelaxConfig::default(), &RadiusTable::default()).unwrap();
    let b = relax_complex(&p, &l, &RelaxConfig::default(), &RadiusTable::default()).unwrap();
    assert_eq!(a.minimization, b.minimization);
}
