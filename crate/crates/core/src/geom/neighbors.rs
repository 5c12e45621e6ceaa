use std::collections::HashMap;

use super::{GeomError, Vec3};
use crate::par::{self, Execution};

/// Sets smaller than this (on either side) are scanned brute force.
pub const BRUTE_FORCE_LIMIT: usize = 256;

const DEFAULT_CELL: f64 = 4.0;

type CellKey = (i64, i64, i64);

/// Uniform hash grid over a fixed point set.
#[derive(Debug, Clone)]
pub struct NeighborGrid {
    cell: f64,
    points: Vec<Vec3>,
    cells: HashMap<CellKey, Vec<usize>>,
    lo: CellKey,
    hi: CellKey,
}

impl NeighborGrid {
    pub fn new(points: &[Vec3], cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite(), "grid cell must be positive");
        let mut cells: HashMap<CellKey, Vec<usize>> = HashMap::new();
        let mut lo = (i64::MAX, i64::MAX, i64::MAX);
        let mut hi = (i64::MIN, i64::MIN, i64::MIN);
        for (i, p) in points.iter().enumerate() {
            let k = key(p, cell);
            lo = (lo.0.min(k.0), lo.1.min(k.1), lo.2.min(k.2));
            hi = (hi.0.max(k.0), hi.1.max(k.1), hi.2.max(k.2));
            cells.entry(k).or_default().push(i);
        }
        NeighborGrid {
            cell,
            points: points.to_vec(),
            cells,
            lo,
            hi,
        }
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    /// Indices of points with `|p - q| <= radius`, in ascending order.
    pub fn within(&self, q: &Vec3, radius: f64) -> Vec<usize> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            return out;
        }
        let r2 = radius * radius;
        let reach = (radius / self.cell).ceil() as i64;
        let c = key(q, self.cell);
        for x in (c.0 - reach).max(self.lo.0)..=(c.0 + reach).min(self.hi.0) {
            for y in (c.1 - reach).max(self.lo.1)..=(c.1 + reach).min(self.hi.1) {
                for z in (c.2 - reach).max(self.lo.2)..=(c.2 + reach).min(self.hi.2) {
                    if let Some(list) = self.cells.get(&(x, y, z)) {
                        out.extend(
                            list.iter()
                                .copied()
                                .filter(|&i| (self.points[i] - q).norm_squared() <= r2),
                        );
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True if any point lies strictly closer than `radius`.
    pub fn any_closer_than(&self, q: &Vec3, radius: f64) -> bool {
        let r2 = radius * radius;
        let reach = (radius / self.cell).ceil() as i64;
        let c = key(q, self.cell);
        for x in c.0 - reach..=c.0 + reach {
            for y in c.1 - reach..=c.1 + reach {
                for z in c.2 - reach..=c.2 + reach {
                    if let Some(list) = self.cells.get(&(x, y, z)) {
                        if list
                            .iter()
                            .any(|&i| (self.points[i] - q).norm_squared() < r2)
                        {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    /// Nearest point to `q` as `(index, squared distance)`; ties go to the
    /// lowest index.
    pub fn nearest(&self, q: &Vec3) -> Option<(usize, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let c = key(q, self.cell);
        let max_ring = [
            (c.0 - self.lo.0).abs(),
            (c.0 - self.hi.0).abs(),
            (c.1 - self.lo.1).abs(),
            (c.1 - self.hi.1).abs(),
            (c.2 - self.lo.2).abs(),
            (c.2 - self.hi.2).abs(),
        ]
        .into_iter()
        .max()
        .unwrap_or(0);
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=max_ring {
            if let Some((_, d2)) = best {
                // every point in this ring or beyond is at least (ring-1)·cell away
                let bound = (ring - 1).max(0) as f64 * self.cell;
                if d2.sqrt() < bound {
                    break;
                }
            }
            self.visit_ring(c, ring, |list| {
                for &i in list {
                    let d2 = (self.points[i] - q).norm_squared();
                    let better = match best {
                        None => true,
                        Some((bi, bd)) => d2 < bd || (d2 == bd && i < bi),
                    };
                    if better {
                        best = Some((i, d2));
                    }
                }
            });
        }
        best
    }

    fn visit_ring(&self, c: CellKey, ring: i64, mut f: impl FnMut(&[usize])) {
        for x in c.0 - ring..=c.0 + ring {
            for y in c.1 - ring..=c.1 + ring {
                let on_face = (x - c.0).abs() == ring || (y - c.1).abs() == ring;
                if on_face {
                    for z in c.2 - ring..=c.2 + ring {
                        if let Some(list) = self.cells.get(&(x, y, z)) {
                            f(list);
                        }
                    }
                } else {
                    for z in [c.2 - ring, c.2 + ring] {
                        if let Some(list) = self.cells.get(&(x, y, z)) {
                            f(list);
                        }
                        if ring == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }
}

fn key(p: &Vec3, cell: f64) -> CellKey {
    (
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    )
}

/// Closest pair between two point sets: `(distance, (i, j))`.
///
/// Exact. Ties resolve to the lexicographically smallest `(i, j)`.
pub fn min_pairwise_distance(a: &[Vec3], b: &[Vec3]) -> Result<(f64, (usize, usize)), GeomError> {
    min_pairwise_distance_with(a, b, Execution::default())
}

pub fn min_pairwise_distance_with(
    a: &[Vec3],
    b: &[Vec3],
    exec: Execution,
) -> Result<(f64, (usize, usize)), GeomError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeomError::Empty);
    }
    let per_point: Vec<(f64, usize)> = if a.len() > BRUTE_FORCE_LIMIT && b.len() > BRUTE_FORCE_LIMIT
    {
        let grid = NeighborGrid::new(b, DEFAULT_CELL);
        par::map(exec, a, |p| {
            let (j, d2) = grid.nearest(p).expect("b is non-empty");
            (d2, j)
        })
    } else {
        par::map(exec, a, |p| brute_nearest(p, b))
    };
    let (i, (d2, j)) = per_point
        .into_iter()
        .enumerate()
        .fold(None::<(usize, (f64, usize))>, |best, (i, (d2, j))| match best {
            Some((_, (bd, _))) if bd <= d2 => best,
            _ => Some((i, (d2, j))),
        })
        .expect("a is non-empty");
    Ok((d2.sqrt(), (i, j)))
}

fn brute_nearest(p: &Vec3, b: &[Vec3]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (j, q) in b.iter().enumerate() {
        let d2 = (p - q).norm_squared();
        if d2 < best.0 {
            best = (d2, j);
        }
    }
    best
}
