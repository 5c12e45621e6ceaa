use nalgebra::Matrix3;

use super::{centroid, GeomError, Vec3};

/// Least-squares plane `normal · p = offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
    /// Largest |signed distance| of the fitted points from the plane, Å.
    pub max_deviation: f64,
}

impl Plane {
    pub fn signed_distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Fit the total-least-squares plane through `points`.
///
/// The normal is the eigenvector of the scatter matrix with the smallest
/// eigenvalue, oriented so its first non-negligible component is positive.
pub fn fit_plane(points: &[Vec3]) -> Result<Plane, GeomError> {
    if points.len() < 3 {
        return Err(GeomError::TooFewPoints {
            needed: 3,
            got: points.len(),
        });
    }
    let c = centroid(points);
    let mut scatter = Matrix3::zeros();
    for p in points {
        let d = p - c;
        scatter += d * d.transpose();
    }
    if scatter.trace() <= 1e-24 {
        return Err(GeomError::Degenerate("all points coincide"));
    }
    let eig = scatter.symmetric_eigen();
    let (k, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("three eigenvalues");
    let mut normal: Vec3 = eig.eigenvectors.column(k).into_owned().normalize();
    if let Some(first) = normal.iter().find(|v| v.abs() > 1e-12) {
        if *first < 0.0 {
            normal = -normal;
        }
    }
    let offset = normal.dot(&c);
    let max_deviation = points
        .iter()
        .map(|p| (normal.dot(p) - offset).abs())
        .fold(0.0, f64::max);
    Ok(Plane {
        normal,
        offset,
        max_deviation,
    })
}
