//! Planar arrangement of the segments of a closed curve, with face
//! extraction and point location.
//!
//! Faces of the arrangement are exactly the connected components of the
//! complement of the curve track, which is what the face-wise separation
//! predicate needs. Input segments must form a connected set (a closed
//! polygonal chain always does).

use crate::geom::Pt;
use std::collections::HashMap;

pub type FaceId = usize;

pub struct Arrangement {
    verts: Vec<Pt>,
    // half-edge h: origin, target, twin = h ^ 1
    he_from: Vec<usize>,
    he_to: Vec<usize>,
    he_face: Vec<FaceId>,
    unbounded: FaceId,
    n_faces: usize,
    snap: f64,
}

impl Arrangement {
    /// Build the arrangement of the given segments.
    pub fn build(segments: &[(Pt, Pt)]) -> Arrangement {
        let scale = segments
            .iter()
            .flat_map(|&(a, b)| [a.x.abs(), a.y.abs(), b.x.abs(), b.y.abs()])
            .fold(1.0f64, f64::max);
        let snap = scale * 1e-12;

        // Split every segment at its intersections with every other segment.
        let n = segments.len();
        let mut cuts: Vec<Vec<f64>> = vec![vec![0.0, 1.0]; n];
        for i in 0..n {
            for j in i + 1..n {
                let (a0, a1) = segments[i];
                let (b0, b1) = segments[j];
                let r = a1 - a0;
                let s = b1 - b0;
                let denom = r.cross(s);
                let qp = b0 - a0;
                if denom != 0.0 {
                    let t = qp.cross(s) / denom;
                    let u = qp.cross(r) / denom;
                    if (-1e-12..=1.0 + 1e-12).contains(&t) && (-1e-12..=1.0 + 1e-12).contains(&u)
                    {
                        cuts[i].push(t.clamp(0.0, 1.0));
                        cuts[j].push(u.clamp(0.0, 1.0));
                    }
                } else if qp.cross(r).abs() <= snap * r.norm().max(1.0) {
                    // collinear: cut each segment at the other's endpoints
                    let rr = r.norm_sq();
                    let ss = s.norm_sq();
                    if rr > 0.0 {
                        for p in [b0, b1] {
                            let t = (p - a0).dot(r) / rr;
                            if (0.0..=1.0).contains(&t) {
                                cuts[i].push(t);
                            }
                        }
                    }
                    if ss > 0.0 {
                        for p in [a0, a1] {
                            let u = (p - b0).dot(s) / ss;
                            if (0.0..=1.0).contains(&u) {
                                cuts[j].push(u);
                            }
                        }
                    }
                }
            }
        }

        // Snap-round all points into vertices.
        let mut verts: Vec<Pt> = Vec::new();
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut vertex_id = |p: Pt, verts: &mut Vec<Pt>| -> usize {
            let gx = (p.x / snap).round() as i64;
            let gy = (p.y / snap).round() as i64;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(ids) = grid.get(&(gx + dx, gy + dy)) {
                        for &id in ids {
                            if verts[id].dist(p) <= snap {
                                return id;
                            }
                        }
                    }
                }
            }
            let id = verts.len();
            verts.push(p);
            grid.entry((gx, gy)).or_default().push(id);
            id
        };

        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut edge_set: HashMap<(usize, usize), ()> = HashMap::new();
        for (i, seg) in segments.iter().enumerate() {
            let (a, b) = *seg;
            let mut ts = cuts[i].clone();
            ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let mut prev: Option<usize> = None;
            for &t in &ts {
                let v = vertex_id(a.lerp(b, t), &mut verts);
                if let Some(u) = prev {
                    if u != v {
                        let key = (u.min(v), u.max(v));
                        if edge_set.insert(key, ()).is_none() {
                            edges.push(key);
                        }
                    }
                }
                prev = Some(v);
            }
        }

        // Half-edges and angular order around each vertex.
        let nh = edges.len() * 2;
        let mut he_from = vec![0usize; nh];
        let mut he_to = vec![0usize; nh];
        for (k, &(u, v)) in edges.iter().enumerate() {
            he_from[2 * k] = u;
            he_to[2 * k] = v;
            he_from[2 * k + 1] = v;
            he_to[2 * k + 1] = u;
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); verts.len()];
        for h in 0..nh {
            out[he_from[h]].push(h);
        }
        for (v, list) in out.iter_mut().enumerate() {
            list.sort_by(|&a, &b| {
                let pa = (verts[he_to[a]] - verts[v]).angle();
                let pb = (verts[he_to[b]] - verts[v]).angle();
                pa.partial_cmp(&pb).unwrap()
            });
        }
        let mut pos_in_out = vec![0usize; nh];
        for list in &out {
            for (idx, &h) in list.iter().enumerate() {
                pos_in_out[h] = idx;
            }
        }

        // next(h): the half-edge before twin(h) in CCW order around the head.
        let next = |h: usize| -> usize {
            let t = h ^ 1;
            let v = he_from[t];
            let list = &out[v];
            let p = pos_in_out[t];
            list[(p + list.len() - 1) % list.len()]
        };

        // Trace faces.
        let mut he_face = vec![usize::MAX; nh];
        let mut n_faces = 0usize;
        let mut unbounded = 0usize;
        for h0 in 0..nh {
            if he_face[h0] != usize::MAX {
                continue;
            }
            let face = n_faces;
            n_faces += 1;
            let mut area2 = 0.0f64;
            let mut h = h0;
            loop {
                he_face[h] = face;
                area2 += verts[he_from[h]].cross(verts[he_to[h]]);
                h = next(h);
                if h == h0 {
                    break;
                }
            }
            if area2 < 0.0 {
                unbounded = face;
            }
        }
        if nh == 0 {
            n_faces = 1;
            unbounded = 0;
        }

        Arrangement {
            verts,
            he_from,
            he_to,
            he_face,
            unbounded,
            n_faces,
            snap,
        }
    }

    pub fn n_faces(&self) -> usize {
        self.n_faces
    }

    pub fn unbounded_face(&self) -> FaceId {
        self.unbounded
    }

    /// Face containing the query point, or `None` if the point lies on the
    /// curve (within snap tolerance).
    pub fn face_of(&self, p: Pt) -> Option<FaceId> {
        // Upward vertical ray from p, with symbolic perturbation of p.x.
        let right = |x: f64| x > p.x;
        let mut best: Option<(f64, FaceId)> = None;
        for h in (0..self.he_from.len()).step_by(2) {
            let a = self.verts[self.he_from[h]];
            let b = self.verts[self.he_to[h]];
            if right(a.x) == right(b.x) {
                continue;
            }
            let t = (p.x - a.x) / (b.x - a.x);
            let y = a.y + (b.y - a.y) * t;
            if (y - p.y).abs() <= self.snap {
                return None; // on the curve
            }
            if y > p.y {
                // half-edge directed from the x > p.x endpoint to the other
                let hh = if right(a.x) { h } else { h ^ 1 };
                match best {
                    Some((by, _)) if by <= y => {}
                    _ => best = Some((y, self.he_face[hh])),
                }
            }
        }
        Some(best.map(|(_, f)| f).unwrap_or(self.unbounded))
    }
}
