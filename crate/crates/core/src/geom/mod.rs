//! Geometric kernels shared by the evaluation modules.

mod neighbors;
mod plane;
pub mod radii;
mod transform;

pub use neighbors::{min_pairwise_distance, min_pairwise_distance_with, NeighborGrid};
pub use plane::{fit_plane, Plane};
pub use radii::RadiusTable;
pub use transform::{kabsch_superpose, rmsd, RigidTransform};

pub type Vec3 = nalgebra::Vector3<f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("point sets differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),
    #[error("empty point set")]
    Empty,
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    points.iter().fold(Vec3::zeros(), |acc, p| acc + p) / points.len() as f64
}

/// Angle a–b–c at `b`, degrees.
pub fn angle_deg(a: &Vec3, b: &Vec3, c: &Vec3) -> f64 {
    let u = a - b;
    let v = c - b;
    let cos = (u.dot(&v) / (u.norm() * v.norm())).clamp(-1.0, 1.0);
    cos.acos().to_degrees()
}

/// Dihedral a–b–c–d, degrees in (-180, 180].
pub fn dihedral_deg(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    let b1 = b - a;
    let b2 = c - b;
    let b3 = d - c;
    let n1 = b1.cross(&b2);
    let n2 = b2.cross(&b3);
    let m1 = n1.cross(&b2.normalize());
    let x = n1.dot(&n2);
    let y = m1.dot(&n2);
    (-y).atan2(x).to_degrees()
}

/// Signed volume `det[(b-a), (c-a), (d-a)]`.
pub fn signed_volume(a: &Vec3, b: &Vec3, c: &Vec3, d: &Vec3) -> f64 {
    (b - a).dot(&(c - a).cross(&(d - a)))
}
