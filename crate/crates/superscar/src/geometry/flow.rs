use super::surface::{SurfacePoint, TranslationSurface, CONE_TOL};
use crate::vec2::Vec2;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FlowError {
    #[error("start point must not be a cone point")]
    StartAtConePoint,
    #[error("ray passes within tolerance of a cone point ({remaining} of the distance left)")]
    HitConePoint { remaining: f64 },
    #[error("direction must be a nonzero vector")]
    BadDirection,
}

/// One event of a straight-line trace.
#[derive(Clone, Copy, Debug)]
pub enum TraceEvent {
    /// Crossed into another chart. `dev` is the crossing point in the
    /// developed (start-chart) frame.
    Crossing { chart: usize, dev: Vec2 },
    /// Reached the requested distance.
    Finished,
}

/// Incremental straight-line flow on a translation surface.
///
/// The direction never changes in chart coordinates (all transition maps are
/// translations); crossing a gluing shifts the coordinate frame. `offset`
/// accumulates the translations so `pos = dev_pos + offset` stays in the
/// current chart.
pub struct RayTracer<'a> {
    pub surface: &'a TranslationSurface,
    pub chart: usize,
    /// Developed position (start-chart frame).
    pub dev: Vec2,
    /// Accumulated translation: chart coordinate = dev + offset.
    pub offset: Vec2,
    pub direction: Vec2,
    pub traveled: f64,
    entry_edge: Option<usize>,
}

const EDGE_EPS: f64 = 1e-12;

impl<'a> RayTracer<'a> {
    pub fn new(
        surface: &'a TranslationSurface,
        start: SurfacePoint,
        direction: Vec2,
    ) -> Result<Self, FlowError> {
        if direction.norm() < 1e-15 {
            return Err(FlowError::BadDirection);
        }
        if surface.cone_distance(start) < CONE_TOL {
            return Err(FlowError::StartAtConePoint);
        }
        Ok(RayTracer {
            surface,
            chart: start.chart,
            dev: start.pos,
            offset: Vec2::ZERO,
            direction: direction.normalized(),
            traveled: 0.0,
            entry_edge: None,
        })
    }

    pub fn position(&self) -> SurfacePoint {
        SurfacePoint {
            chart: self.chart,
            pos: self.dev + self.offset,
        }
    }

    /// Advance by at most `budget`; returns the event that stopped the step.
    pub fn step(&mut self, budget: f64) -> Result<TraceEvent, FlowError> {
        let chart = &self.surface.charts[self.chart];
        let pos = self.dev + self.offset;
        let d = self.direction;
        let nv = chart.vertices.len();

        // First crossing among the chart edges. The entry edge is only
        // accepted again at a clearly positive distance, so the point we just
        // crossed on does not retrigger.
        let mut best: Option<(f64, usize, f64)> = None; // (t, edge, s)
        for e in 0..nv {
            let t_floor = if Some(e) == self.entry_edge {
                1e-9
            } else {
                EDGE_EPS
            };
            let (a, b) = chart.edge(e);
            let ab = b - a;
            let denom = d.cross(ab);
            if denom.abs() < 1e-15 {
                continue; // parallel
            }
            let t = (a - pos).cross(ab) / denom;
            let s = (a - pos).cross(d) / denom;
            if t > t_floor && s >= -EDGE_EPS && s <= 1.0 + EDGE_EPS {
                if best.map_or(true, |(tb, _, _)| t < tb) {
                    best = Some((t, e, s));
                }
            }
        }

        let (t_exit, exit_edge, s_exit) = match best {
            Some(v) => v,
            None => {
                // Numerical corner case: nudge along the ray and declare the
                // segment finished if nothing is crossed within the budget.
                self.dev += d * budget;
                self.traveled += budget;
                return Ok(TraceEvent::Finished);
            }
        };

        let seg_len = t_exit.min(budget);
        // Cone-point proximity along the sub-segment about to be traversed.
        let seg_end = pos + d * seg_len;
        for &(v, _) in self.surface.cone_corners_of(self.chart) {
            let cp = chart.vertices[v];
            let dist = crate::vec2::point_segment_distance(cp, pos, seg_end);
            if dist < CONE_TOL {
                let along = ((cp - pos).dot(d)).clamp(0.0, seg_len);
                return Err(FlowError::HitConePoint {
                    remaining: budget - along,
                });
            }
        }

        if budget < t_exit - EDGE_EPS {
            self.dev += d * budget;
            self.traveled += budget;
            return Ok(TraceEvent::Finished);
        }

        // Crossing. Resolve near-vertex hits deterministically.
        let hit = pos + d * t_exit;
        let mut edge = exit_edge;
        let vertex_hit = if s_exit < 1e-9 {
            Some(exit_edge)
        } else if s_exit > 1.0 - 1e-9 {
            Some((exit_edge + 1) % nv)
        } else {
            None
        };
        if let Some(v) = vertex_hit {
            let vp = chart.vertices[v];
            if vp.dist(hit) < 1e-9 {
                // Regular vertex (cone hits were caught above): exit through
                // whichever adjacent edge the ray leaves, preferring the
                // counterclockwise one on a tie.
                edge = self.pick_exit_edge(v, d);
            }
        }

        let g = self.surface.gluings[self.chart][edge];
        self.traveled += t_exit;
        // `hit` is in chart coordinates; the developed frame differs by the
        // accumulated offset.
        self.dev = hit - self.offset;
        self.offset += g.translation;
        self.chart = g.to_chart;
        self.entry_edge = Some(g.to_edge);
        Ok(TraceEvent::Crossing {
            chart: self.chart,
            dev: self.dev,
        })
    }

    fn pick_exit_edge(&self, vertex: usize, d: Vec2) -> usize {
        let chart = &self.surface.charts[self.chart];
        let nv = chart.vertices.len();
        let e_out = vertex;
        let e_in = (vertex + nv - 1) % nv;
        // Chart orientation sign (reflected charts are clockwise).
        let mut area2 = 0.0;
        for i in 0..nv {
            area2 += chart.vertices[i].cross(chart.vertices[(i + 1) % nv]);
        }
        let orient = area2.signum();
        let outward_dot = |e: usize| {
            let (a, b) = chart.edge(e);
            let normal = (b - a).perp() * (-orient);
            normal.normalized().dot(d)
        };
        let o_out = outward_dot(e_out);
        let o_in = outward_dot(e_in);
        if (o_out - o_in).abs() < 1e-14 {
            // Tie: take the counterclockwise-adjacent edge.
            if orient >= 0.0 {
                e_out
            } else {
                e_in
            }
        } else if o_out > o_in {
            e_out
        } else {
            e_in
        }
    }
}

/// Endpoint of the straight-line flow from `start` along `direction` for
/// `distance`.
pub fn transport(
    surface: &TranslationSurface,
    start: SurfacePoint,
    direction: Vec2,
    distance: f64,
) -> Result<SurfacePoint, FlowError> {
    let mut tracer = RayTracer::new(surface, start, direction)?;
    loop {
        let remaining = distance - tracer.traveled;
        if remaining <= 0.0 {
            return Ok(tracer.position());
        }
        match tracer.step(remaining)? {
            TraceEvent::Finished => return Ok(tracer.position()),
            TraceEvent::Crossing { .. } => {}
        }
    }
}

/// The developed (plane-unfolded) straight segment of the flow: a polyline
/// through the chart-crossing points in the start chart's frame.
pub fn develop(
    surface: &TranslationSurface,
    start: SurfacePoint,
    direction: Vec2,
    distance: f64,
) -> Result<Vec<Vec2>, FlowError> {
    let mut tracer = RayTracer::new(surface, start, direction)?;
    let mut polyline = vec![start.pos];
    loop {
        let remaining = distance - tracer.traveled;
        if remaining <= 0.0 {
            break;
        }
        match tracer.step(remaining)? {
            TraceEvent::Finished => break,
            TraceEvent::Crossing { dev, .. } => polyline.push(dev),
        }
    }
    if polyline.last().map_or(true, |&p| p.dist(tracer.dev) > 1e-15) {
        polyline.push(tracer.dev);
    }
    Ok(polyline)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_polygon, unfold, RationalAngle};

    fn ang(p: i64, q: i64) -> RationalAngle {
        RationalAngle::new(p, q).unwrap()
    }

    fn square_surface() -> TranslationSurface {
        unfold(&build_polygon(&[ang(1, 2); 4], &[1.0; 4]).unwrap()).unwrap()
    }

    fn genus2_surface() -> TranslationSurface {
        let p = build_polygon(
            &[ang(1, 8), ang(3, 8), ang(1, 2)],
            &[
                1.0,
                (std::f64::consts::PI / 8.0).sin(),
                (std::f64::consts::PI / 8.0).cos(),
            ],
        )
        .unwrap();
        unfold(&p).unwrap()
    }

    #[test]
    fn zero_distance_is_identity() {
        let s = square_surface();
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(0.3, 0.4),
        };
        let q = transport(&s, p, Vec2::new(1.0, 0.0), 0.0).unwrap();
        assert_eq!(q, p);
        let line = develop(&s, p, Vec2::new(1.0, 0.0), 0.0).unwrap();
        assert_eq!(line, vec![p.pos]);
    }

    #[test]
    fn horizontal_period_on_square_torus() {
        let s = square_surface();
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(0.3, 0.4),
        };
        let q = transport(&s, p, Vec2::new(1.0, 0.0), 2.0).unwrap();
        assert!(s.same_point(p, q, 1e-9), "{q:?}");
    }

    #[test]
    fn diagonal_period_and_development() {
        let s = square_surface();
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(0.3, 0.4),
        };
        let d = Vec2::new(1.0, 1.0).normalized();
        let dist = 2.0 * std::f64::consts::SQRT_2;
        let q = transport(&s, p, d, dist).unwrap();
        assert!(s.same_point(p, q, 1e-9));
        let line = develop(&s, p, d, dist).unwrap();
        let end = *line.last().unwrap();
        assert!((end - p.pos - Vec2::new(2.0, 2.0)).norm() < 1e-9);
        // Development is straight and length-preserving.
        let mut len = 0.0;
        for w in line.windows(2) {
            len += w[0].dist(w[1]);
            assert!((w[1] - w[0]).normalized().dot(d) > 1.0 - 1e-12);
        }
        assert!((len - dist).abs() < 1e-12 * dist.max(1.0));
    }

    #[test]
    fn development_has_exact_length() {
        let s = square_surface();
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(0.51, 0.27),
        };
        let d = Vec2::new(0.3, 1.0).normalized();
        let line = develop(&s, p, d, 5.0).unwrap();
        let end = *line.last().unwrap();
        assert!((end.dist(p.pos) - 5.0).abs() < 1e-12 * 5.0);
    }

    #[test]
    fn ray_into_cone_point_errors() {
        let s = genus2_surface();
        let cone = s.cone_points[0].position;
        // Start inside the cone's chart, aim straight at the cone corner.
        let interior = s.polygon.interior_point();
        let start = SurfacePoint {
            chart: cone.chart,
            pos: s.group.apply(s.charts[cone.chart].element, interior),
        };
        let dir = (cone.pos - start.pos).normalized();
        let dist = start.pos.dist(cone.pos) + 0.5;
        let res = transport(&s, start, dir, dist);
        assert!(matches!(res, Err(FlowError::HitConePoint { .. })), "{res:?}");
    }

    #[test]
    fn flow_semigroup_property() {
        let s = square_surface();
        let p = SurfacePoint {
            chart: 0,
            pos: Vec2::new(0.21, 0.73),
        };
        let d = Vec2::new(2.0, 0.7).normalized();
        let whole = transport(&s, p, d, 3.7).unwrap();
        let first = transport(&s, p, d, 1.3).unwrap();
        let second = transport(&s, first, d, 2.4).unwrap();
        assert!(s.same_point(whole, second, 1e-10));
    }
}
