//! Closed polygonal curves, the universal curve representation.

use crate::domain::Domain;
use crate::geom::Pt;
use serde::{Deserialize, Serialize};

/// A closed polygonal chain; the last vertex connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCurve {
    vertices: Vec<Pt>,
}

impl PolyCurve {
    pub fn new(vertices: Vec<Pt>) -> Self {
        assert!(vertices.len() >= 3, "closed curve needs at least 3 vertices");
        PolyCurve { vertices }
    }

    pub fn vertices(&self) -> &[Pt] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertex(&self, i: usize) -> Pt {
        self.vertices[i % self.vertices.len()]
    }

    /// Closed segments (a, b) of the curve, in order.
    pub fn segments(&self) -> impl Iterator<Item = (Pt, Pt)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn euclidean_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn diameter(&self) -> f64 {
        let n = self.vertices.len();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                d = d.max(self.vertices[i].dist(self.vertices[j]));
            }
        }
        d
    }

    pub fn centroid(&self) -> Pt {
        self.vertices
            .iter()
            .fold(Pt::ZERO, |a, &v| a + v)
            .scale(1.0 / self.vertices.len() as f64)
    }

    /// Twice the signed area; positive for counter-clockwise curves.
    pub fn signed_area2(&self) -> f64 {
        self.segments().map(|(a, b)| a.cross(b)).sum()
    }

    pub fn orientation(&self) -> i8 {
        if self.signed_area2() >= 0.0 {
            1
        } else {
            -1
        }
    }

    #[must_use]
    pub fn reversed(&self) -> PolyCurve {
        let mut v = self.vertices.clone();
        v.reverse();
        PolyCurve { vertices: v }
    }

    #[must_use]
    pub fn rotated_start(&self, shift: usize) -> PolyCurve {
        let n = self.vertices.len();
        let v = (0..n).map(|i| self.vertices[(i + shift) % n]).collect();
        PolyCurve { vertices: v }
    }

    #[must_use]
    pub fn map(&self, f: impl Fn(Pt) -> Pt) -> PolyCurve {
        PolyCurve {
            vertices: self.vertices.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Minimum clearance of the curve track to the complement of the domain.
    pub fn clearance(&self, domain: &Domain) -> f64 {
        self.segments()
            .map(|(a, b)| domain.segment_clearance(a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Resample so that no segment is longer than `max_seg`, keeping vertices
    /// on the original track.
    #[must_use]
    pub fn resampled(&self, max_seg: f64) -> PolyCurve {
        let mut v = Vec::new();
        for (a, b) in self.segments() {
            v.push(a);
            let d = a.dist(b);
            if d > max_seg {
                let k = (d / max_seg).ceil() as usize;
                for j in 1..k {
                    v.push(a.lerp(b, j as f64 / k as f64));
                }
            }
        }
        PolyCurve { vertices: v }
    }

    /// Resample to exactly `n` vertices spaced uniformly in Euclidean
    /// arc length, starting at vertex 0.
    #[must_use]
    pub fn resampled_uniform(&self, n: usize) -> PolyCurve {
        let total = self.euclidean_length();
        let step = total / n as f64;
        let mut out = Vec::with_capacity(n);
        let mut target = 0.0f64;
        let mut acc = 0.0f64;
        let mut seg_iter: Vec<(Pt, Pt, f64)> =
            self.segments().map(|(a, b)| (a, b, a.dist(b))).collect();
        // drop zero-length segments
        seg_iter.retain(|&(_, _, d)| d > 0.0);
        let mut idx = 0usize;
        while out.len() < n && idx < seg_iter.len() {
            let (a, b, d) = seg_iter[idx];
            while out.len() < n && target <= acc + d {
                let t = (target - acc) / d;
                out.push(a.lerp(b, t));
                target += step;
            }
            acc += d;
            idx += 1;
        }
        while out.len() < n {
            out.push(self.vertices[0]);
        }
        PolyCurve { vertices: out }
    }

    /// Drop repeated and collinear vertices.
    #[must_use]
    pub fn simplified(&self, tol: f64) -> PolyCurve {
        let n = self.vertices.len();
        let mut keep = Vec::new();
        for i in 0..n {
            let prev = self.vertices[(i + n - 1) % n];
            let cur = self.vertices[i];
            let next = self.vertices[(i + 1) % n];
            if cur.dist(prev) <= tol {
                continue;
            }
            let a = cur - prev;
            let b = next - cur;
            if a.cross(b).abs() <= tol * (a.norm() + b.norm()).max(1e-300) && a.dot(b) > 0.0 {
                continue;
            }
            keep.push(cur);
        }
        if keep.len() >= 3 {
            PolyCurve { vertices: keep }
        } else {
            self.clone()
        }
    }

    /// Alignment distance between two closed curves: both are resampled to a
    /// common vertex count and the max pointwise distance is minimized over
    /// cyclic shifts and orientation reversal.
    pub fn alignment_distance(&self, other: &PolyCurve) -> f64 {
        let n = 128;
        let a = self.resampled_uniform(n);
        let b0 = other.resampled_uniform(n);
        let b1 = b0.reversed();
        let mut best = f64::INFINITY;
        for b in [&b0, &b1] {
            for shift in 0..n {
                let mut worst = 0.0f64;
                for i in 0..n {
                    worst = worst.max(a.vertices[i].dist(b.vertices[(i + shift) % n]));
                    if worst >= best {
                        break;
                    }
                }
                best = best.min(worst);
            }
        }
        best
    }
}

/// Serialized form: `{"vertices": [[x,y],...], "closed": true}`.
#[derive(Serialize, Deserialize)]
struct CurveRepr {
    vertices: Vec<Pt>,
    closed: bool,
}

impl Serialize for PolyCurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CurveRepr {
            vertices: self.vertices.clone(),
            closed: true,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyCurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<PolyCurve, D::Error> {
        let r = CurveRepr::deserialize(d)?;
        if r.vertices.len() < 3 {
            return Err(serde::de::Error::custom("closed curve needs >= 3 vertices"));
        }
        Ok(PolyCurve {
            vertices: r.vertices,
        })
    }
}

/// A regular n-gon approximation of the circle of the given center and radius.
pub fn circle_curve(center: Pt, radius: f64, n: usize) -> PolyCurve {
    let v = (0..n)
        .map(|k| center + Pt::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))
        .collect();
    PolyCurve::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use approx::assert_relative_eq;

    #[test]
    fn circle_length() {
        let c = circle_curve(Pt::ZERO, 1.0, 256);
        assert_relative_eq!(c.euclidean_length(), std::f64::consts::TAU, epsilon = 1e-3);
        assert_eq!(c.orientation(), 1);
        assert_eq!(c.reversed().orientation(), -1);
    }

    #[test]
    fn resample_uniform_counts() {
        let sq = PolyCurve::new(vec![pt(0., 0.), pt(1., 0.), pt(1., 1.), pt(0., 1.)]);
        let r = sq.resampled_uniform(40);
        assert_eq!(r.len(), 40);
        assert_relative_eq!(r.euclidean_length(), 4.0, epsilon = 1e-6);
    }

    #[test]
    fn alignment_of_rotated_copies() {
        let a = circle_curve(Pt::ZERO, 1.0, 97);
        let b = a.rotated_start(31);
        assert!(a.alignment_distance(&b) < 0.08);
        let far = circle_curve(pt(3.0, 0.0), 1.0, 97);
        assert!(a.alignment_distance(&far) > 1.0);
    }

    #[test]
    fn serde_roundtrip() {
        let sq = PolyCurve::new(vec![pt(0., 0.), pt(1., 0.), pt(1., 1.), pt(0., 1.)]);
        let s = serde_json::to_string(&sq).unwrap();
        assert!(s.contains("\"closed\":true"));
        let back: PolyCurve = serde_json::from_str(&s).unwrap();
        assert_eq!(sq, back);
    }
}
