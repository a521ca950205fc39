use super::polygon::RationalPolygon;
use crate::vec2::Vec2;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// An orthogonal map of the dihedral group D_N of order 2N.
///
/// `Rotation { k }` is rotation by 2*pi*k/N; `Reflection { m }` is reflection
/// across the line through the origin at angle pi*m/N. Composition stays
/// exact on the integer labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupElement {
    Rotation { k: i64 },
    Reflection { m: i64 },
}

impl GroupElement {
    pub fn is_reflection(&self) -> bool {
        matches!(self, GroupElement::Reflection { .. })
    }

    /// Parity flag: +1 for rotations, -1 for reflections.
    pub fn parity(&self) -> i64 {
        if self.is_reflection() {
            -1
        } else {
            1
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DihedralGroup {
    /// Rotation order N (group order is 2N).
    pub n: i64,
    pub elements: Vec<GroupElement>,
    matrices: Vec<[f64; 4]>,
}

impl DihedralGroup {
    pub fn order(&self) -> usize {
        2 * self.n as usize
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::Rotation { k: 0 }
    }

    fn canon(&self, e: GroupElement) -> GroupElement {
        match e {
            GroupElement::Rotation { k } => GroupElement::Rotation {
                k: k.rem_euclid(self.n),
            },
            GroupElement::Reflection { m } => GroupElement::Reflection {
                m: m.rem_euclid(self.n),
            },
        }
    }

    /// Index of an element in `self.elements` (rotations first).
    pub fn index_of(&self, e: GroupElement) -> usize {
        match self.canon(e) {
            GroupElement::Rotation { k } => k as usize,
            GroupElement::Reflection { m } => (self.n + m) as usize,
        }
    }

    /// Compose `a * b` (apply `b` first, then `a`).
    pub fn compose(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        use GroupElement::*;
        // Rot(k): angle 2*pi*k/N. Refl(m): line angle pi*m/N.
        // Rot(a)Rot(b) = Rot(a+b); Rot(k)Refl(m) = Refl(m+k);
        // Refl(m)Rot(k) = Refl(m-k); Refl(a)Refl(b) = Rot(a-b).
        let e = match (a, b) {
            (Rotation { k: ka }, Rotation { k: kb }) => Rotation { k: ka + kb },
            (Rotation { k }, Reflection { m }) => Reflection { m: m + k },
            (Reflection { m }, Rotation { k }) => Reflection { m: m - k },
            (Reflection { m: ma }, Reflection { m: mb }) => Rotation { k: ma - mb },
        };
        self.canon(e)
    }

    pub fn inverse(&self, e: GroupElement) -> GroupElement {
        match e {
            GroupElement::Rotation { k } => self.canon(GroupElement::Rotation { k: -k }),
            r @ GroupElement::Reflection { .. } => r,
        }
    }

    pub fn matrix(&self, e: GroupElement) -> [f64; 4] {
        self.matrices[self.index_of(e)]
    }

    pub fn apply(&self, e: GroupElement, v: Vec2) -> Vec2 {
        let m = self.matrices[self.index_of(e)];
        Vec2::new(m[0] * v.x + m[1] * v.y, m[2] * v.x + m[3] * v.y)
    }

    /// Exact action on a direction heading given in units of pi.
    pub fn apply_heading(&self, e: GroupElement, h: Ratio<i64>) -> Ratio<i64> {
        match self.canon(e) {
            GroupElement::Rotation { k } => h + Ratio::new(2 * k, self.n),
            GroupElement::Reflection { m } => Ratio::new(2 * m, self.n) - h,
        }
    }

    /// Reflection across the line at heading `h` (units of pi); `h` must be a
    /// multiple of 1/N.
    pub fn reflection_for_heading(&self, h: Ratio<i64>) -> GroupElement {
        let scaled = h * Ratio::from_integer(self.n);
        assert!(
            scaled.is_integer(),
            "edge heading {h} is not a multiple of 1/N"
        );
        self.canon(GroupElement::Reflection {
            m: scaled.to_integer(),
        })
    }
}

fn element_matrix(n: i64, e: GroupElement) -> [f64; 4] {
    match e {
        GroupElement::Rotation { k } => {
            let t = 2.0 * PI * k as f64 / n as f64;
            [t.cos(), -t.sin(), t.sin(), t.cos()]
        }
        GroupElement::Reflection { m } => {
            let t = 2.0 * PI * m as f64 / n as f64; // 2 * line angle
            [t.cos(), t.sin(), t.sin(), -t.cos()]
        }
    }
}

/// The dihedral group of a rational polygon: order 2N with N the lcm of the
/// angle denominators.
pub fn dihedral_group(poly: &RationalPolygon) -> DihedralGroup {
    let n = poly
        .angles
        .iter()
        .fold(1i64, |acc, a| acc.lcm(&a.denom()));
    let mut elements = Vec::with_capacity(2 * n as usize);
    for k in 0..n {
        elements.push(GroupElement::Rotation { k });
    }
    for m in 0..n {
        elements.push(GroupElement::Reflection { m });
    }
    let matrices = elements.iter().map(|&e| element_matrix(n, e)).collect();
    DihedralGroup {
        n,
        elements,
        matrices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_polygon, RationalAngle};

    fn ang(p: i64, q: i64) -> RationalAngle {
        RationalAngle::new(p, q).unwrap()
    }

    fn group_of(angles: &[RationalAngle], lengths: &[f64]) -> DihedralGroup {
        dihedral_group(&build_polygon(angles, lengths).unwrap())
    }

    #[test]
    fn orders_match_lcm_of_denominators() {
        let sq = group_of(&[ang(1, 2); 4], &[1.0; 4]);
        assert_eq!(sq.order(), 4);
        let iso = group_of(
            &[ang(1, 2), ang(1, 4), ang(1, 4)],
            &[1.0, std::f64::consts::SQRT_2, 1.0],
        );
        assert_eq!(iso.order(), 8);
        let eq = group_of(&[ang(1, 3); 3], &[1.0; 3]);
        assert_eq!(eq.order(), 6);
    }

    #[test]
    fn closure_oracle() {
        // Every pairwise composition lands back in the element list, the
        // labels compose consistently with the matrices, and each element's
        // order divides 2N.
        let g = group_of(
            &[ang(1, 2), ang(1, 4), ang(1, 4)],
            &[1.0, std::f64::consts::SQRT_2, 1.0],
        );
        let v = Vec2::new(0.37, -1.21);
        for &a in &g.elements {
            for &b in &g.elements {
                let c = g.compose(a, b);
                assert!(g.elements.contains(&c));
                let via_labels = g.apply(c, v);
                let via_maps = g.apply(a, g.apply(b, v));
                assert!((via_labels - via_maps).norm() < 1e-12);
            }
            // Element order divides 2N.
            let mut acc = a;
            let mut ord = 1;
            while acc != g.identity() {
                acc = g.compose(a, acc);
                ord += 1;
                assert!(ord <= g.order());
            }
            assert_eq!(g.order() % ord, 0);
        }
    }

    #[test]
    fn inverse_and_identity() {
        let g = group_of(&[ang(1, 3); 3], &[1.0; 3]);
        for &a in &g.elements {
            assert_eq!(g.compose(a, g.inverse(a)), g.identity());
            assert_eq!(g.compose(g.inverse(a), a), g.identity());
        }
    }

    #[test]
    fn heading_action_matches_matrix() {
        let g = group_of(&[ang(1, 2); 4], &[1.0; 4]);
        let h = Ratio::new(1i64, 2); // heading pi/2
        for &e in &g.elements {
            let hd = g.apply_heading(e, h);
            let expect = g.apply(e, Vec2::from_angle(PI * 0.5));
            let got = Vec2::from_angle(PI * (*hd.numer() as f64) / (*hd.denom() as f64));
            assert!((expect - got).norm() < 1e-12, "{e:?}");
        }
    }
}
