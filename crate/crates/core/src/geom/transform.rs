use nalgebra::{Matrix3, SVD};

use super::{centroid, GeomError, Vec3};

/// Proper rigid motion `p ↦ R·p + t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    pub rotation: Matrix3<f64>,
    /// Translation in Å.
    pub translation: Vec3,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: Vec3::zeros(),
        }
    }

    pub fn from_translation(t: Vec3) -> Self {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: t,
        }
    }

    /// Rotation of `angle` radians about `axis` through the origin.
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let axis = nalgebra::Unit::new_normalize(axis);
        let rot = nalgebra::Rotation3::from_axis_angle(&axis, angle);
        RigidTransform {
            rotation: *rot.matrix(),
            translation: Vec3::zeros(),
        }
    }

    pub fn apply(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn apply_all(&self, points: &[Vec3]) -> Vec<Vec3> {
        points.iter().map(|p| self.apply(p)).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    /// Max deviation of `RᵀR` from identity and of `det R` from 1.
    pub fn orthonormality_error(&self) -> f64 {
        let e = (self.rotation.transpose() * self.rotation - Matrix3::identity()).amax();
        e.max((self.rotation.determinant() - 1.0).abs())
    }
}

/// Root-mean-square deviation between corresponding points, no fitting.
pub fn rmsd(a: &[Vec3], b: &[Vec3]) -> f64 {
    assert_eq!(a.len(), b.len(), "rmsd of unequal point sets");
    if a.is_empty() {
        return 0.0;
    }
    let ss: f64 = a.iter().zip(b).map(|(p, q)| (p - q).norm_squared()).sum();
    (ss / a.len() as f64).sqrt()
}

/// Relative threshold below which the second principal variance of a point
/// set counts as zero (collinear or coincident points).
const RANK_TOLERANCE: f64 = 1e-10;

fn spread_rank(points: &[Vec3], c: &Vec3) -> usize {
    let mut scatter = Matrix3::zeros();
    for p in points {
        let d = p - c;
        scatter += d * d.transpose();
    }
    let mut ev: Vec<f64> = scatter.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    let scale = ev[0].max(1e-300);
    ev.iter().filter(|&&v| v > RANK_TOLERANCE * scale).count()
}

/// Optimal proper superposition of `moving` onto `target` (Kabsch).
///
/// Returns the transform taking `moving` into the frame of `target` and the
/// RMSD left after applying it.
pub fn kabsch_superpose(
    moving: &[Vec3],
    target: &[Vec3],
) -> Result<(RigidTransform, f64), GeomError> {
    if moving.len() != target.len() {
        return Err(GeomError::LengthMismatch {
            left: moving.len(),
            right: target.len(),
        });
    }
    if moving.len() < 3 {
        return Err(GeomError::TooFewPoints {
            needed: 3,
            got: moving.len(),
        });
    }
    let cm = centroid(moving);
    let ct = centroid(target);
    if spread_rank(moving, &cm) < 2 || spread_rank(target, &ct) < 2 {
        return Err(GeomError::Degenerate("point set is collinear or coincident"));
    }
    let mut h = Matrix3::zeros();
    for (m, t) in moving.iter().zip(target) {
        h += (m - cm) * (t - ct).transpose();
    }
    let svd = SVD::new(h, true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return Err(GeomError::Degenerate("SVD did not converge")),
    };
    let v = v_t.transpose();
    let d = (v * u.transpose()).determinant().signum();
    let correction = Matrix3::from_diagonal(&Vec3::new(1.0, 1.0, if d == 0.0 { 1.0 } else { d }));
    let rotation = v * correction * u.transpose();
    let translation = ct - rotation * cm;
    let transform = RigidTransform {
        rotation,
        translation,
    };
    let moved = transform.apply_all(moving);
    Ok((transform, rmsd(&moved, target)))
}
