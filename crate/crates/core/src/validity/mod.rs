//! Structural plausibility checks for docked poses: chemical consistency with
//! the reference ligand, intramolecular geometry, and contacts with the
//! surrounding protein and cofactors.

pub mod bounds;
pub mod chemistry;
pub mod inter;
pub mod intra;
pub mod report;
pub mod rings;

use std::sync::Arc;

use crate::chemio::{ProteinStructure, SmallMolecule};
use crate::geom::RadiusTable;
use crate::par::Execution;

pub use bounds::{BoundsTable, Hybridization};
pub use chemistry::check_chemistry;
pub use inter::{check_intermolecular, InterParams};
pub use intra::{check_intramolecular, ConformerEnergies, ConformerEnergyProvider};
pub use report::{pb_valid, CheckResult, CheckStatus, ValidityReport};

#[derive(Clone, Default)]
pub struct ValidityOptions {
    pub bounds: BoundsTable,
    pub inter: InterParams,
    pub energy_provider: Option<Arc<dyn ConformerEnergyProvider>>,
    pub exec: Execution,
}

impl ValidityOptions {
    pub fn with_radii(mut self, radii: RadiusTable) -> Self {
        self.bounds = self.bounds.with_radii(radii.clone());
        self.inter.radii = radii;
        self
    }
}

/// Run the full suite. Without a reference the consistency checks are
/// skipped; without a protein the intermolecular checks are.
pub fn validate(
    pred: &SmallMolecule,
    reference: Option<&SmallMolecule>,
    protein: Option<&ProteinStructure>,
    opts: &ValidityOptions,
) -> ValidityReport {
    let chem = match reference {
        Some(r) => check_chemistry(pred, r),
        None => chemistry::chemistry_without_reference(pred),
    };
    let intra = check_intramolecular(
        pred,
        &opts.bounds,
        &opts.inter.radii,
        opts.energy_provider.as_deref(),
    );
    let inter = match protein {
        Some(p) => check_intermolecular(pred, p, &opts.inter, opts.exec),
        None => [
            "minimum_distance_to_protein",
            "minimum_distance_to_organic_cofactors",
            "minimum_distance_to_inorganic_cofactors",
            "volume_overlap_with_protein",
            "volume_overlap_with_organic_cofactors",
            "volume_overlap_with_inorganic_cofactors",
        ]
        .iter()
        .map(|n| CheckResult::skipped(n, "no protein supplied"))
        .collect(),
    };
    ValidityReport::new(chem, intra, inter)
}
