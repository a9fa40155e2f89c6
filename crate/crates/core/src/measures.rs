//! Front quality indicators: exact hypervolume (2 and 3 objectives, plus the
//! trivial 1-objective case), additive epsilon and set coverage.

use thiserror::Error;

use crate::moo::ObjectiveVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("front point {point} is not strictly better than the reference point in objective {objective}")]
    ReferenceNotDominated { point: usize, objective: usize },
    #[error("objective count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("exact hypervolume is only supported for 1 to 3 objectives, got {0}")]
    UnsupportedDimension(usize),
    #[error("front must not be empty")]
    EmptyFront,
}

/// Upper corner of the hypervolume box.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint(ObjectiveVector);

impl ReferencePoint {
    pub fn new(values: ObjectiveVector) -> Self {
        Self(values)
    }

    /// Componentwise worst value of `points`, pushed outwards by 10% of its
    /// magnitude plus 1e-9 so every point is strictly inside.
    pub fn from_worst(points: &[&ObjectiveVector]) -> Option<Self> {
        let first = points.first()?;
        let mut worst = first.values().to_vec();
        for p in &points[1..] {
            for (w, &v) in worst.iter_mut().zip(p.values()) {
                *w = w.max(v);
            }
        }
        let values = worst.into_iter().map(|w| w + 0.1 * w.abs() + 1e-9).collect();
        ObjectiveVector::new(values).ok().map(Self)
    }

    pub fn vector(&self) -> &ObjectiveVector {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }
}

fn check_dims(front: &[ObjectiveVector], dims: usize) -> Result<(), MeasureError> {
    for p in front {
        if p.len() != dims {
            return Err(MeasureError::DimensionMismatch {
                expected: dims,
                found: p.len(),
            });
        }
    }
    Ok(())
}

/// Exact hypervolume of the region dominated by `front` and bounded by
/// `reference`. Every point must be strictly better than the reference in
/// every objective.
pub fn hypervolume(front: &[ObjectiveVector], reference: &ReferencePoint) -> Result<f64, MeasureError> {
    let r = reference.values();
    check_dims(front, r.len())?;
    for (i, p) in front.iter().enumerate() {
        if let Some(k) = p.values().iter().zip(r).position(|(v, rv)| v >= rv) {
            return Err(MeasureError::ReferenceNotDominated { point: i, objective: k });
        }
    }
    hypervolume_clipped(front, reference)
}

/// Like [`hypervolume`], but points that are not strictly better than the
/// reference in every objective are ignored (their box inside the
/// reference is empty).
pub fn hypervolume_clipped(
    front: &[ObjectiveVector],
    reference: &ReferencePoint,
) -> Result<f64, MeasureError> {
    let r = reference.values();
    check_dims(front, r.len())?;
    let inside: Vec<&[f64]> = front
        .iter()
        .map(|p| p.values())
        .filter(|p| p.iter().zip(r).all(|(v, rv)| v < rv))
        .collect();
    match r.len() {
        1 => Ok(inside.iter().map(|p| r[0] - p[0]).fold(0.0, f64::max)),
        2 => Ok(hv2d(inside, r[0], r[1])),
        3 => Ok(hv3d(inside, r)),
        d => Err(MeasureError::UnsupportedDimension(d)),
    }
}

/// Sweep over points sorted by the first objective, adding the horizontal
/// strip each new staircase step uncovers.
fn hv2d(mut pts: Vec<&[f64]>, rx: f64, ry: f64) -> f64 {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let mut area = 0.0;
    let mut level = ry;
    for p in pts {
        if p[1] < level {
            area += (rx - p[0]) * (level - p[1]);
            level = p[1];
        }
    }
    area
}

/// Slices along the third objective; each slab's area is the 2-D
/// hypervolume of the points at or below it.
fn hv3d(mut pts: Vec<&[f64]>, r: &[f64]) -> f64 {
    pts.sort_by(|a, b| {
        a[2].total_cmp(&b[2])
            .then(a[0].total_cmp(&b[0]))
            .then(a[1].total_cmp(&b[1]))
    });
    let mut volume = 0.0;
    for i in 0..pts.len() {
        let top = if i + 1 < pts.len() { pts[i + 1][2] } else { r[2] };
        let depth = top - pts[i][2];
        if depth > 0.0 {
            volume += hv2d(pts[..=i].to_vec(), r[0], r[1]) * depth;
        }
    }
    volume
}

/// Additive epsilon of `approx` relative to `reference_front`:
/// max over reference points r of min over approx points a of
/// max_i (a_i - r_i). Signed; negative when `approx` is strictly better.
pub fn additive_epsilon(
    approx: &[ObjectiveVector],
    reference_front: &[ObjectiveVector],
) -> Result<f64, MeasureError> {
    if approx.is_empty() || reference_front.is_empty() {
        return Err(MeasureError::EmptyFront);
    }
    let dims = approx[0].len();
    check_dims(approx, dims)?;
    check_dims(reference_front, dims)?;
    let eps = reference_front
        .iter()
        .map(|r| {
            approx
                .iter()
                .map(|a| {
                    a.values()
                        .iter()
                        .zip(r.values())
                        .map(|(ai, ri)| ai - ri)
                        .fold(f64::NEG_INFINITY, f64::max)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(eps)
}

/// Fraction of `b` weakly dominated by at least one point of `a`.
/// Not symmetric.
pub fn coverage(a: &[ObjectiveVector], b: &[ObjectiveVector]) -> Result<f64, MeasureError> {
    if b.is_empty() {
        return Err(MeasureError::EmptyFront);
    }
    let dims = b[0].len();
    check_dims(a, dims)?;
    check_dims(b, dims)?;
    let covered = b
        .iter()
        .filter(|q| a.iter().any(|p| p.weakly_dominates(q)))
        .count();
    Ok(covered as f64 / b.len() as f64)
}
