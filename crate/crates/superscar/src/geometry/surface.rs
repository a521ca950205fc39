use super::dihedral::{dihedral_group, DihedralGroup, GroupElement};
use super::polygon::{polygon_contains, RationalPolygon};
use crate::vec2::Vec2;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GLUING_TOL: f64 = 1e-12;
/// Rays passing closer than this to a cone point are treated as singular.
pub const CONE_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum UnfoldError {
    #[error("gluing between charts is not realized by a pure translation")]
    GluingNotTranslation,
    #[error("inconsistent surface invariant: {0}")]
    Inconsistent(String),
}

/// A planar copy g*P of the base polygon, anchored at the origin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Chart {
    pub element: GroupElement,
    pub vertices: Vec<Vec2>,
}

impl Chart {
    pub fn edge(&self, e: usize) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        (self.vertices[e], self.vertices[(e + 1) % n])
    }

    pub fn contains(&self, p: Vec2, tol: f64) -> bool {
        polygon_contains(&self.vertices, p, tol)
    }

    pub fn bounding_center_radius(&self) -> (Vec2, f64) {
        let c = self
            .vertices
            .iter()
            .fold(Vec2::ZERO, |acc, &v| acc + v)
            / self.vertices.len() as f64;
        let r = self
            .vertices
            .iter()
            .map(|&v| (v - c).norm())
            .fold(0.0, f64::max);
        (c, r)
    }
}

/// Identification of one chart edge with another, realized by a translation:
/// a point with coordinate p on the source edge has coordinate
/// `p + translation` in the target chart.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Gluing {
    pub to_chart: usize,
    pub to_edge: usize,
    pub translation: Vec2,
}

/// A point of the surface: a chart index plus planar coordinates inside that
/// chart's polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub chart: usize,
    pub pos: Vec2,
}

/// A conical singularity: total angle 2*pi*k with k >= 2, glued from the
/// listed chart corners.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConePoint {
    /// Cone angle in full turns (angle = 2*pi*turns).
    pub turns: i64,
    /// Chart corners (chart, vertex) identified at this point.
    pub corners: Vec<(usize, usize)>,
    /// Canonical representative: lowest chart id in the cycle.
    pub position: SurfacePoint,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationSurface {
    pub polygon: RationalPolygon,
    pub group: DihedralGroup,
    pub charts: Vec<Chart>,
    /// gluings[chart][edge]
    pub gluings: Vec<Vec<Gluing>>,
    pub cone_points: Vec<ConePoint>,
    pub area: f64,
    pub genus: i64,
    /// Corners of each chart that are cone points: (vertex index, cone index).
    cone_corners: Vec<Vec<(usize, usize)>>,
}

impl TranslationSurface {
    pub fn num_charts(&self) -> usize {
        self.charts.len()
    }

    pub fn chart_diameter(&self) -> f64 {
        let (_, r) = self.charts[0].bounding_center_radius();
        2.0 * r
    }

    /// Cone-point corners of a chart as (vertex index, cone index) pairs.
    pub fn cone_corners_of(&self, chart: usize) -> &[(usize, usize)] {
        &self.cone_corners[chart]
    }

    pub fn is_torus_cover(&self) -> bool {
        self.cone_points.is_empty()
    }

    /// Canonical representative of a point: interior points are returned
    /// unchanged; points on a glued edge pick the lower (chart, position)
    /// side, comparing positions lexicographically.
    pub fn canonicalize(&self, p: SurfacePoint, tol: f64) -> SurfacePoint {
        let chart = &self.charts[p.chart];
        let n = chart.vertices.len();
        let mut best = p;
        for e in 0..n {
            let (a, b) = chart.edge(e);
            if crate::vec2::point_segment_distance(p.pos, a, b) <= tol {
                let g = self.gluings[p.chart][e];
                let q = SurfacePoint {
                    chart: g.to_chart,
                    pos: p.pos + g.translation,
                };
                if (q.chart, ordered(q.pos)) < (best.chart, ordered(best.pos)) {
                    best = q;
                }
            }
        }
        best
    }

    /// True when two surface points coincide up to `tol` (edge-aware).
    pub fn same_point(&self, p: SurfacePoint, q: SurfacePoint, tol: f64) -> bool {
        if p.chart == q.chart && p.pos.dist(q.pos) <= tol {
            return true;
        }
        let pc = self.canonicalize(p, tol);
        let qc = self.canonicalize(q, tol);
        pc.chart == qc.chart && pc.pos.dist(qc.pos) <= tol
    }

    /// Distance from `p.pos` to the nearest cone corner in its chart, if any.
    pub fn cone_distance(&self, p: SurfacePoint) -> f64 {
        self.cone_corners[p.chart]
            .iter()
            .map(|&(v, _)| self.charts[p.chart].vertices[v].dist(p.pos))
            .fold(f64::INFINITY, f64::min)
    }

    /// Holonomy lattice of a torus cover: a reduced basis of the group of
    /// translations closing up loops of charts. `None` when the surface has
    /// cone points or the loop translations do not span a rank-2 lattice.
    pub fn holonomy_lattice(&self) -> Option<(Vec2, Vec2)> {
        if !self.is_torus_cover() {
            return None;
        }
        // Develop a BFS spanning tree of the chart adjacency graph; each
        // non-tree gluing contributes the translation of the loop it closes.
        let nc = self.num_charts();
        let mut offset = vec![None; nc];
        offset[0] = Some(Vec2::ZERO);
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut cycles: Vec<Vec2> = Vec::new();
        let mut seen_edges = std::collections::HashSet::new();
        while let Some(c) = queue.pop_front() {
            let o = offset[c].unwrap();
            for (e, g) in self.gluings[c].iter().enumerate() {
                if !seen_edges.insert((c.min(g.to_chart), if c <= g.to_chart { e } else { g.to_edge }, c.max(g.to_chart))) {
                    continue;
                }
                // Tile adjacency: crossing edge e of a tile at offset o lands
                // in a tile of chart to_chart at offset o - translation.
                let o2 = o - g.translation;
                match offset[g.to_chart] {
                    None => {
                        offset[g.to_chart] = Some(o2);
                        queue.push_back(g.to_chart);
                    }
                    Some(existing) => {
                        let v = o2 - existing;
                        if v.norm() > 1e-9 {
                            cycles.push(v);
                        }
                    }
                }
            }
        }
        lattice_basis(&cycles)
    }
}

fn ordered(v: Vec2) -> (u64, u64) {
    // Total order on positions for canonical representatives.
    (v.x.to_bits() ^ (1 << 63), v.y.to_bits() ^ (1 << 63))
}

/// Lagrange-reduce a set of vectors to a basis of the lattice they generate.
fn lattice_basis(vectors: &[Vec2]) -> Option<(Vec2, Vec2)> {
    let mut vs: Vec<Vec2> = vectors.to_vec();
    vs.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut u1 = *vs.first()?;
    // Find a second vector independent of u1.
    let mut u2 = *vs
        .iter()
        .find(|v| v.cross(u1).abs() > 1e-9 * v.norm() * u1.norm())?;
    // Reduce every remaining vector against the working basis; any residual
    // would mean the generators are not a lattice (should not happen).
    loop {
        if u2.norm() < u1.norm() {
            std::mem::swap(&mut u1, &mut u2);
        }
        let mu = (u2.dot(u1) / u1.norm_sq()).round();
        if mu == 0.0 {
            break;
        }
        u2 -= u1 * mu;
        if u2.norm() < 1e-9 {
            return None;
        }
    }
    for &v in &vs {
        let det = u1.cross(u2);
        let a = v.cross(u2) / det;
        let b = u1.cross(v) / det;
        if (a - a.round()).abs() > 1e-7 || (b - b.round()).abs() > 1e-7 {
            // Generator outside the lattice of (u1, u2): refine by gcd-like
            // reduction. Not needed for dihedral unfoldings in practice.
            return None;
        }
    }
    // Normalize orientation: prefer positive x, then positive y.
    let fix = |mut u: Vec2| {
        if u.x < -1e-12 || (u.x.abs() <= 1e-12 && u.y < 0.0) {
            u = -u;
        }
        u
    };
    u1 = fix(u1);
    u2 = fix(u2);
    // Put the basis vector closest to the +x axis first.
    if u1.x.abs() < u2.x.abs() - 1e-12 {
        std::mem::swap(&mut u1, &mut u2);
    }
    Some((u1, u2))
}

/// Unfold a rational polygon into a translation surface: one chart per group
/// element, glued edge-to-edge by pure translations.
pub fn unfold(poly: &RationalPolygon) -> Result<TranslationSurface, UnfoldError> {
    let group = dihedral_group(poly);
    let n_vertices = poly.num_vertices();

    // Linear reflection across each edge line, and the translation part
    // t_e = v_e - rho_e(v_e) of the affine reflection fixing the edge.
    let edge_reflections: Vec<GroupElement> = poly
        .edge_headings
        .iter()
        .map(|&h| group.reflection_for_heading(h))
        .collect();
    let edge_offsets: Vec<Vec2> = (0..n_vertices)
        .map(|e| {
            let v = poly.vertices[e];
            v - group.apply(edge_reflections[e], v)
        })
        .collect();

    let charts: Vec<Chart> = group
        .elements
        .iter()
        .map(|&g| Chart {
            element: g,
            vertices: poly.vertices.iter().map(|&v| group.apply(g, v)).collect(),
        })
        .collect();

    // Gluing: edge e of chart g meets edge e of chart g * rho_e, shifted by
    // -g(t_e).
    let mut gluings = Vec::with_capacity(charts.len());
    for chart in &charts {
        let g = chart.element;
        let mut per_edge = Vec::with_capacity(n_vertices);
        for e in 0..n_vertices {
            let partner = group.compose(g, edge_reflections[e]);
            let to_chart = group.index_of(partner);
            let translation = -group.apply(g, edge_offsets[e]);
            per_edge.push(Gluing {
                to_chart,
                to_edge: e,
                translation,
            });
        }
        gluings.push(per_edge);
    }

    // Verify every gluing is a pure translation matching the two edge
    // placements endpoint-to-endpoint.
    let scale = poly.perimeter();
    for (ci, chart) in charts.iter().enumerate() {
        for e in 0..n_vertices {
            let g = gluings[ci][e];
            let (a, b) = chart.edge(e);
            let (a2, b2) = charts[g.to_chart].edge(g.to_edge);
            if (a + g.translation - a2).norm() > GLUING_TOL * scale
                || (b + g.translation - b2).norm() > GLUING_TOL * scale
            {
                return Err(UnfoldError::GluingNotTranslation);
            }
        }
    }

    // Gluing involution: crossing back must undo the translation.
    for (ci, per_edge) in gluings.iter().enumerate() {
        for (e, g) in per_edge.iter().enumerate() {
            let back = gluings[g.to_chart][g.to_edge];
            if back.to_chart != ci
                || back.to_edge != e
                || (back.translation + g.translation).norm() > GLUING_TOL * scale
            {
                return Err(UnfoldError::Inconsistent("gluing involution".into()));
            }
        }
    }

    // Corner cycles: orbit of (chart, vertex) under crossing the two edges
    // adjacent to the vertex. Vertex i sits between edges i-1 and i.
    let nc = charts.len();
    let mut cycle_id = vec![vec![usize::MAX; n_vertices]; nc];
    let mut cycles: Vec<Vec<(usize, usize)>> = Vec::new();
    for c0 in 0..nc {
        for v0 in 0..n_vertices {
            if cycle_id[c0][v0] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut orbit = Vec::new();
            let mut stack = vec![(c0, v0)];
            while let Some((c, v)) = stack.pop() {
                if cycle_id[c][v] != usize::MAX {
                    continue;
                }
                cycle_id[c][v] = id;
                orbit.push((c, v));
                let e_out = v;
                let e_in = (v + n_vertices - 1) % n_vertices;
                for e in [e_out, e_in] {
                    let g = gluings[c][e];
                    stack.push((g.to_chart, v));
                }
            }
            orbit.sort_unstable();
            cycles.push(orbit);
        }
    }

    // Cone angle of each cycle: the vertex angle is shared by every corner in
    // the cycle, so total angle = |cycle| * pi * p/q = 2*pi*p for a full
    // cycle of 2q corners.
    let mut cone_points = Vec::new();
    let mut total_turns_excess = 0i64;
    for orbit in &cycles {
        let (c0, v0) = orbit[0];
        let a = poly.angles[v0];
        if orbit.len() as i64 != 2 * a.denom() {
            return Err(UnfoldError::Inconsistent(format!(
                "corner cycle at vertex {v0} has length {} (expected {})",
                orbit.len(),
                2 * a.denom()
            )));
        }
        let turns = a.numer();
        if turns >= 2 {
            total_turns_excess += turns - 1;
            cone_points.push(ConePoint {
                turns,
                corners: orbit.clone(),
                position: SurfacePoint {
                    chart: c0,
                    pos: charts[c0].vertices[v0],
                },
            });
        }
    }

    // Gauss-Bonnet: sum of (cone angle - 2*pi) = 2*pi*(2g - 2).
    if total_turns_excess % 2 != 0 {
        return Err(UnfoldError::Inconsistent(
            "cone-angle excess is not an even number of turns".into(),
        ));
    }
    let genus = 1 + total_turns_excess / 2;

    // Euler-characteristic cross-check: V - E + F = 2 - 2g.
    let v_count = cycles.len() as i64;
    let e_count = (nc * n_vertices / 2) as i64;
    let f_count = nc as i64;
    if v_count - e_count + f_count != 2 - 2 * genus {
        return Err(UnfoldError::Inconsistent(format!(
            "Euler characteristic {} disagrees with genus {}",
            v_count - e_count + f_count,
            genus
        )));
    }

    let mut cone_corners = vec![Vec::new(); nc];
    for (i, cp) in cone_points.iter().enumerate() {
        for &(c, v) in &cp.corners {
            cone_corners[c].push((v, i));
        }
    }

    let area = poly.area() * nc as f64;

    Ok(TranslationSurface {
        polygon: poly.clone(),
        group,
        charts,
        gluings,
        cone_points,
        area,
        genus,
        cone_corners,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_polygon, RationalAngle};

    fn ang(p: i64, q: i64) -> RationalAngle {
        RationalAngle::new(p, q).unwrap()
    }

    pub(crate) fn square(side: f64) -> TranslationSurface {
        unfold(&build_polygon(&[ang(1, 2); 4], &[side; 4]).unwrap()).unwrap()
    }

    #[test]
    fn square_unfolds_to_torus() {
        let s = square(1.0);
        assert_eq!(s.num_charts(), 4);
        assert_eq!(s.genus, 1);
        assert!(s.cone_points.is_empty());
        assert!((s.area - 4.0).abs() < 1e-12);
        let (u1, u2) = s.holonomy_lattice().unwrap();
        assert!((u1 - Vec2::new(2.0, 0.0)).norm() < 1e-9, "{u1:?}");
        assert!((u2 - Vec2::new(0.0, 2.0)).norm() < 1e-9, "{u2:?}");
    }

    #[test]
    fn right_isoceles_unfolds_to_torus() {
        let p = build_polygon(
            &[ang(1, 2), ang(1, 4), ang(1, 4)],
            &[1.0, std::f64::consts::SQRT_2, 1.0],
        )
        .unwrap();
        let s = unfold(&p).unwrap();
        assert_eq!(s.num_charts(), 8);
        assert_eq!(s.genus, 1);
        assert!(s.cone_points.is_empty());
        assert!((s.area - 4.0).abs() < 1e-12);
    }

    #[test]
    fn genus_two_triangle() {
        let p = build_polygon(
            &[ang(1, 8), ang(3, 8), ang(1, 2)],
            &[
                1.0,
                (std::f64::consts::PI / 8.0).sin(),
                (std::f64::consts::PI / 8.0).cos(),
            ],
        )
        .unwrap();
        let s = unfold(&p).unwrap();
        assert_eq!(s.num_charts(), 16);
        assert_eq!(s.genus, 2);
        assert_eq!(s.cone_points.len(), 1);
        assert_eq!(s.cone_points[0].turns, 3); // cone angle 6*pi
    }

    #[test]
    fn equilateral_unfolds_to_torus() {
        let s = unfold(&build_polygon(&[ang(1, 3); 3], &[1.0; 3]).unwrap()).unwrap();
        assert_eq!(s.num_charts(), 6);
        assert_eq!(s.genus, 1);
        assert!(s.holonomy_lattice().is_some());
    }

    #[test]
    fn group_action_permutes_charts() {
        let s = square(1.0);
        let g = &s.group;
        for &a in &g.elements {
            let mut seen = vec![false; s.num_charts()];
            for chart in &s.charts {
                let idx = g.index_of(g.compose(a, chart.element));
                assert!(!seen[idx]);
                seen[idx] = true;
            }
            assert!(seen.iter().all(|&b| b));
        }
    }

    #[test]
    fn canonical_edge_representative() {
        let s = square(1.0);
        // A point on edge 1 of chart 0 (the segment x = 1).
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(1.0, 0.25),
        };
        let g = s.gluings[0][1];
        let q = SurfacePoint {
            chart: g.to_chart,
            pos: p.pos + g.translation,
        };
        let cp = s.canonicalize(p, 1e-12);
        let cq = s.canonicalize(q, 1e-12);
        assert_eq!(cp.chart, cq.chart);
        assert!(cp.pos.dist(cq.pos) < 1e-12);
        assert!(s.same_point(p, q, 1e-12));
    }
}
