use super::angle::RationalAngle;
use crate::vec2::{segments_properly_intersect, Vec2};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

pub const CLOSURE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum PolygonError {
    #[error("need at least 3 vertices with matching angle/length counts")]
    BadArity,
    #[error("edge lengths must be positive")]
    NonPositiveLength,
    #[error("angle sum mismatch: interior angles of an n-gon must add to (n-2)*pi exactly")]
    AngleSumMismatch,
    #[error("polygon does not close: edge lengths are inconsistent with the angles")]
    NonClosing,
    #[error("polygon is self-intersecting")]
    SelfIntersecting,
}

/// A rational polygon given by exact interior angles and real edge lengths.
///
/// Vertices are derived deterministically: first vertex at the origin, first
/// edge along +x. Edge headings are kept as exact rational multiples of pi so
/// that the unfolding can match edge directions without any floating-point
/// angle comparisons.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalPolygon {
    pub angles: Vec<RationalAngle>,
    pub edge_lengths: Vec<f64>,
    pub vertices: Vec<Vec2>,
    /// Heading of edge i (from vertex i to vertex i+1) in units of pi.
    pub edge_headings: Vec<Ratio<i64>>,
}

impl RationalPolygon {
    pub fn num_vertices(&self) -> usize {
        self.angles.len()
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let mut s = 0.0;
        for i in 0..n {
            s += self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        0.5 * s.abs()
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths.iter().sum()
    }

    /// A point in the interior (centroid for convex polygons, with a fan
    /// fallback otherwise).
    pub fn interior_point(&self) -> Vec2 {
        let n = self.vertices.len();
        let centroid = self
            .vertices
            .iter()
            .fold(Vec2::ZERO, |acc, &v| acc + v)
            / n as f64;
        if self.contains(centroid, -1e-9) {
            return centroid;
        }
        for i in 1..n - 1 {
            let c = (self.vertices[0] + self.vertices[i] + self.vertices[i + 1]) / 3.0;
            if self.contains(c, -1e-9) {
                return c;
            }
        }
        centroid
    }

    /// Winding-number containment test; `tol` < 0 demands strict interior.
    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        polygon_contains(&self.vertices, p, tol)
    }
}

/// Containment with a tolerance band: `tol >= 0` accepts points within `tol`
/// of the boundary, `tol < 0` demands the interior with margin `-tol`.
pub(crate) fn polygon_contains(vertices: &[Vec2], p: Vec2, tol: f64) -> bool {
    let n = vertices.len();
    let mut winding = 0.0;
    let mut min_dist = f64::INFINITY;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        winding += (a - p).angle_signed(b - p);
        min_dist = min_dist.min(crate::vec2::point_segment_distance(p, a, b));
    }
    let inside = winding.abs() > PI; // |winding| is 2*pi inside, 0 outside
    if tol >= 0.0 {
        inside || min_dist <= tol
    } else {
        inside && min_dist >= -tol
    }
}

/// Build a polygon from exact rational angles and edge lengths.
pub fn build_polygon(
    angles: &[RationalAngle],
    edge_lengths: &[f64],
) -> Result<RationalPolygon, PolygonError> {
    let n = angles.len();
    if n < 3 || edge_lengths.len() != n {
        return Err(PolygonError::BadArity);
    }
    if edge_lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return Err(PolygonError::NonPositiveLength);
    }

    // Exact angle-sum check: sum p_i/q_i == n - 2 in rational arithmetic.
    let sum: Ratio<i64> = angles.iter().map(|a| a.as_ratio()).sum();
    if sum != Ratio::from_integer(n as i64 - 2) {
        return Err(PolygonError::AngleSumMismatch);
    }

    // Headings: edge 0 along +x; exterior turn at vertex i is pi*(1 - a_i).
    let mut headings = Vec::with_capacity(n);
    let mut h = Ratio::from_integer(0i64);
    headings.push(h);
    for a in angles.iter().take(n).skip(1) {
        h += Ratio::from_integer(1) - a.as_ratio();
        // Keep headings reduced mod 2 to bound numerators.
        let two = Ratio::from_integer(2);
        while h >= two {
            h -= two;
        }
        while h < Ratio::from_integer(0) {
            h += two;
        }
        headings.push(h);
    }

    let mut vertices = Vec::with_capacity(n);
    let mut v = Vec2::ZERO;
    vertices.push(v);
    for i in 0..n - 1 {
        let theta = PI * (*headings[i].numer() as f64) / (*headings[i].denom() as f64);
        v += Vec2::from_angle(theta) * edge_lengths[i];
        vertices.push(v);
    }
    // Closure: last edge must return to the origin.
    let theta = PI * (*headings[n - 1].numer() as f64) / (*headings[n - 1].denom() as f64);
    let closure = v + Vec2::from_angle(theta) * edge_lengths[n - 1];
    let perimeter: f64 = edge_lengths.iter().sum();
    if closure.norm() > CLOSURE_TOL * perimeter {
        return Err(PolygonError::NonClosing);
    }

    // Simplicity: no two non-adjacent edges may properly intersect.
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            let (a1, b1) = (vertices[i], vertices[(i + 1) % n]);
            let (a2, b2) = (vertices[j], vertices[(j + 1) % n]);
            if segments_properly_intersect(a1, b1, a2, b2) {
                return Err(PolygonError::SelfIntersecting);
            }
        }
    }

    Ok(RationalPolygon {
        angles: angles.to_vec(),
        edge_lengths: edge_lengths.to_vec(),
        vertices,
        edge_headings: headings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ang(p: i64, q: i64) -> RationalAngle {
        RationalAngle::new(p, q).unwrap()
    }

    #[test]
    fn unit_square() {
        let p = build_polygon(&[ang(1, 2); 4], &[1.0; 4]).unwrap();
        assert_eq!(p.vertices.len(), 4);
        assert!((p.vertices[1] - Vec2::new(1.0, 0.0)).norm() < 1e-14);
        assert!((p.vertices[2] - Vec2::new(1.0, 1.0)).norm() < 1e-14);
        assert!((p.vertices[3] - Vec2::new(0.0, 1.0)).norm() < 1e-14);
        assert!((p.area() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn right_isoceles_triangle() {
        let p = build_polygon(
            &[ang(1, 2), ang(1, 4), ang(1, 4)],
            &[1.0, std::f64::consts::SQRT_2, 1.0],
        )
        .unwrap();
        assert!((p.area() - 0.5).abs() < 1e-12);
        assert!((p.vertices[2] - Vec2::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn angle_sum_mismatch() {
        let err = build_polygon(&[ang(1, 2); 3], &[1.0; 3]).unwrap_err();
        assert_eq!(err, PolygonError::AngleSumMismatch);
    }

    #[test]
    fn non_closing() {
        let err = build_polygon(
            &[ang(1, 2), ang(1, 4), ang(1, 4)],
            &[1.0, std::f64::consts::SQRT_2, 2.0],
        )
        .unwrap_err();
        assert_eq!(err, PolygonError::NonClosing);
    }

    #[test]
    fn interior_point_is_inside() {
        let p = build_polygon(&[ang(1, 2); 4], &[2.0; 4]).unwrap();
        let c = p.interior_point();
        assert!(p.contains(c, 0.0));
        assert!((c - Vec2::new(1.0, 1.0)).norm() < 1e-12);
    }
}
