//! Small planar geometry primitives shared by every module.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point (or vector) in the plane, also used as a complex number.
///
/// Serializes as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pt {
    pub x: f64,
    pub y: f64,
}

impl Serialize for Pt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x, self.y].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Pt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Pt, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        Ok(pt(x, y))
    }
}

pub const fn pt(x: f64, y: f64) -> Pt {
    Pt { x, y }
}

impl Pt {
    pub const ZERO: Pt = pt(0.0, 0.0);

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, o: Pt) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Pt) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dist(self, o: Pt) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn scale(self, s: f64) -> Pt {
        pt(self.x * s, self.y * s)
    }

    /// Complex multiplication.
    pub fn cmul(self, o: Pt) -> Pt {
        pt(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }

    /// Complex reciprocal 1/z.
    pub fn cinv(self) -> Pt {
        let n = self.norm_sq();
        pt(self.x / n, -self.y / n)
    }

    pub fn from_polar(r: f64, theta: f64) -> Pt {
        pt(r * theta.cos(), r * theta.sin())
    }

    pub fn lerp(self, o: Pt, t: f64) -> Pt {
        pt(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

impl Add for Pt {
    type Output = Pt;
    fn add(self, o: Pt) -> Pt {
        pt(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Pt {
    type Output = Pt;
    fn sub(self, o: Pt) -> Pt {
        pt(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Pt {
    type Output = Pt;
    fn neg(self) -> Pt {
        pt(-self.x, -self.y)
    }
}

impl Mul<f64> for Pt {
    type Output = Pt;
    fn mul(self, s: f64) -> Pt {
        self.scale(s)
    }
}

impl Div<f64> for Pt {
    type Output = Pt;
    fn div(self, s: f64) -> Pt {
        pt(self.x / s, self.y / s)
    }
}

/// Distance from a point to a closed segment [a, b].
pub fn dist_point_segment(p: Pt, a: Pt, b: Pt) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

/// Distance between two closed segments.
pub fn dist_segment_segment(a0: Pt, a1: Pt, b0: Pt, b1: Pt) -> f64 {
    if segments_intersect(a0, a1, b0, b1).is_some() {
        return 0.0;
    }
    dist_point_segment(a0, b0, b1)
        .min(dist_point_segment(a1, b0, b1))
        .min(dist_point_segment(b0, a0, a1))
        .min(dist_point_segment(b1, a0, a1))
}

/// Proper or touching intersection point of two segments, if any.
///
/// Collinear overlaps report the midpoint of the overlap. Returns `None`
/// for disjoint segments.
pub fn segments_intersect(a0: Pt, a1: Pt, b0: Pt, b1: Pt) -> Option<Pt> {
    let r = a1 - a0;
    let s = b1 - b0;
    let denom = r.cross(s);
    let qp = b0 - a0;
    if denom != 0.0 {
        let t = qp.cross(s) / denom;
        let u = qp.cross(r) / denom;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return Some(a0 + r * t);
        }
        return None;
    }
    // Parallel; check collinear overlap.
    if qp.cross(r) != 0.0 {
        return None;
    }
    let rr = r.norm_sq();
    if rr == 0.0 {
        // a is a point
        if dist_point_segment(a0, b0, b1) == 0.0 {
            return Some(a0);
        }
        return None;
    }
    let t0 = (b0 - a0).dot(r) / rr;
    let t1 = (b1 - a0).dot(r) / rr;
    let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
    if lo <= hi {
        return Some(a0 + r * ((lo + hi) * 0.5));
    }
    None
}

/// 4-point Gauss-Legendre nodes and weights on [0, 1].
pub const GAUSS4: [(f64, f64); 4] = [
    (0.069_431_844_202_973_71, 0.173_927_422_568_726_9),
    (0.330_009_478_207_571_87, 0.326_072_577_431_273_1),
    (0.669_990_521_792_428_13, 0.326_072_577_431_273_1),
    (0.930_568_155_797_026_3, 0.173_927_422_568_726_9),
];

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn segment_distance() {
        assert_relative_eq!(
            dist_point_segment(pt(0.0, 1.0), pt(-1.0, 0.0), pt(1.0, 0.0)),
            1.0
        );
        assert_relative_eq!(
            dist_point_segment(pt(2.0, 0.0), pt(-1.0, 0.0), pt(1.0, 0.0)),
            1.0
        );
    }

    #[test]
    fn crossing_segments() {
        let p = segments_intersect(pt(-1.0, 0.0), pt(1.0, 0.0), pt(0.0, -1.0), pt(0.0, 1.0));
        assert_eq!(p, Some(pt(0.0, 0.0)));
        assert!(
            segments_intersect(pt(0.0, 0.0), pt(1.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0)).is_none()
        );
    }

    #[test]
    fn gauss4_integrates_cubics_exactly() {
        // integral of x^3 on [0,1] = 1/4
        let s: f64 = GAUSS4.iter().map(|&(x, w)| w * x * x * x).sum();
        assert_relative_eq!(s, 0.25, epsilon = 1e-14);
    }
}
