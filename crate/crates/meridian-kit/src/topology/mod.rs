//! Winding numbers, the three separation predicates, homology classes over
//! complement components, and self-intersection analysis.

mod arrangement;

pub use arrangement::{Arrangement, FaceId};

use crate::curve::PolyCurve;
use crate::domain::{Domain, Separation};
use crate::geom::{dist_point_segment, segments_intersect, Pt};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("query point lies on the curve")]
    PointOnCurve,
    #[error("curve meets the complement of the domain")]
    CurveMeetsComplement,
    #[error("winding number is not constant on component {0}")]
    InconsistentWinding(usize),
}

/// Winding numbers of a closed curve about each bounded complement
/// component, in the order of [`Domain::bounded_indices`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct HomologyClass(pub Vec<i64>);

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Some(k) when the class is +/- the unit vector at position k.
    pub fn unit_position(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] != 0).collect();
        match nz.as_slice() {
            [k] if self.0[*k].abs() == 1 => Some(*k),
            _ => None,
        }
    }
}

/// One self-intersection of a curve.
#[derive(Debug, Clone, serde::Serialize)]
pub struct Crossing {
    pub point: Pt,
    pub segments: (usize, usize),
    pub transversal: bool,
}

#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct IntersectionReport {
    pub self_crossings: Vec<Crossing>,
}

impl IntersectionReport {
    pub fn is_simple(&self) -> bool {
        self.self_crossings.is_empty()
    }
}

/// Exact integer winding number of the curve about `z`, by signed crossing
/// count of the horizontal ray to the right, with the half-open edge rule
/// standing in for symbolic perturbation of vertex and edge hits.
pub fn winding_number(curve: &PolyCurve, z: Pt) -> Result<i64, TopologyError> {
    let scale = curve
        .vertices()
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(z.x.abs().max(z.y.abs()).max(1.0), f64::max);
    let mut w = 0i64;
    for (a, b) in curve.segments() {
        if dist_point_segment(z, a, b) <= 1e-12 * scale {
            return Err(TopologyError::PointOnCurve);
        }
        if a.y <= z.y {
            if b.y > z.y && (b - a).cross(z - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= z.y && (b - a).cross(z - a) < 0.0 {
            w -= 1;
        }
    }
    Ok(w)
}

fn check_in_domain(curve: &PolyCurve, domain: &Domain) -> Result<(), TopologyError> {
    if curve.clearance(domain) <= 0.0 {
        return Err(TopologyError::CurveMeetsComplement);
    }
    Ok(())
}

/// Winding of the curve about every probe of component `idx`; errors if the
/// probes disagree (the class would be ill-defined).
fn component_winding(
    curve: &PolyCurve,
    domain: &Domain,
    idx: usize,
) -> Result<i64, TopologyError> {
    let comp = &domain.components()[idx];
    let probes = comp.probes();
    let mut w = None;
    for p in probes {
        let wp = winding_number(curve, p)?;
        match w {
            None => w = Some(wp),
            Some(prev) if prev != wp => return Err(TopologyError::InconsistentWinding(idx)),
            _ => {}
        }
    }
    Ok(w.unwrap())
}

/// The homology class of the curve in the domain: winding numbers about the
/// bounded complement components.
pub fn homology_class(curve: &PolyCurve, domain: &Domain) -> Result<HomologyClass, TopologyError> {
    check_in_domain(curve, domain)?;
    let mut v = Vec::new();
    for idx in domain.bounded_indices() {
        v.push(component_winding(curve, domain, idx)?);
    }
    Ok(HomologyClass(v))
}

/// Face-wise separation (Definition 1.1 form 1): no component of the
/// complement of the curve contains points of both E and F.
pub fn separates(
    curve: &PolyCurve,
    domain: &Domain,
    sep: &Separation,
) -> Result<bool, TopologyError> {
    check_in_domain(curve, domain)?;
    let (e_faces, f_faces) = side_faces(curve, domain, sep)?;
    for f in &e_faces {
        if f_faces.contains(f) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parity separation (Definition 1.1 form 2): winding numbers are constant
/// odd on one side and constant even on the other. Since infinity lies in F
/// with winding 0, F must be the even side.
pub fn separates_by_parity(
    curve: &PolyCurve,
    domain: &Domain,
    sep: &Separation,
) -> Result<bool, TopologyError> {
    check_in_domain(curve, domain)?;
    let parity_of = |idx: usize| -> Result<i64, TopologyError> {
        Ok(component_winding(curve, domain, idx)?.rem_euclid(2))
    };
    for &i in &sep.e_indices {
        if parity_of(i)? != 1 {
            return Ok(false);
        }
    }
    for &j in &sep.f_indices {
        if domain.components()[j].is_cap() {
            continue; // winding about the unbounded component is always 0
        }
        if parity_of(j)? != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Simple separation (Definition 1.1 form 3): the curve separates, and at
/// least one side lies in a single component of the complement of the curve.
pub fn separates_simply(
    curve: &PolyCurve,
    domain: &Domain,
    sep: &Separation,
) -> Result<bool, TopologyError> {
    check_in_domain(curve, domain)?;
    let (e_faces, f_faces) = side_faces(curve, domain, sep)?;
    let mut disjoint = true;
    for f in &e_faces {
        if f_faces.contains(f) {
            disjoint = false;
        }
    }
    if !disjoint {
        return Ok(false);
    }
    let single = |faces: &Vec<FaceId>| faces.windows(2).all(|w| w[0] == w[1]);
    Ok(single(&e_faces) || single(&f_faces))
}

/// Faces of the curve arrangement hit by probes of the E side and F side.
fn side_faces(
    curve: &PolyCurve,
    domain: &Domain,
    sep: &Separation,
) -> Result<(Vec<FaceId>, Vec<FaceId>), TopologyError> {
    let segs: Vec<(Pt, Pt)> = curve.segments().collect();
    let arr = Arrangement::build(&segs);
    let collect = |indices: &[usize], with_infinity: bool| -> Result<Vec<FaceId>, TopologyError> {
        let mut faces = Vec::new();
        for &i in indices {
            for p in domain.components()[i].probes() {
                faces.push(arr.face_of(p).ok_or(TopologyError::PointOnCurve)?);
            }
        }
        if with_infinity {
            faces.push(arr.unbounded_face());
        }
        Ok(faces)
    };
    let e_faces = collect(&sep.e_indices, false)?;
    // infinity always belongs to the F side
    let f_has_cap = sep
        .f_indices
        .iter()
        .any(|&i| domain.components()[i].is_cap());
    let f_faces = collect(&sep.f_indices, f_has_cap || domain.cap_index().is_none())?;
    Ok((e_faces, f_faces))
}

/// All pairwise self-crossings of the curve, excluding the shared endpoints
/// of adjacent segments. Repeated vertices are dropped first, and crossings
/// at the same geometric point are reported once.
pub fn self_intersections(curve: &PolyCurve) -> IntersectionReport {
    let scale = curve
        .vertices()
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(1.0f64, f64::max);
    let tol = 1e-9 * scale;

    let mut verts: Vec<Pt> = Vec::new();
    for &v in curve.vertices() {
        if verts.last().map_or(true, |&p| p.dist(v) > tol) {
            verts.push(v);
        }
    }
    if verts.len() > 1 && verts[0].dist(*verts.last().unwrap()) <= tol {
        verts.pop();
    }
    let n = verts.len();
    let mut out = IntersectionReport::default();
    if n < 3 {
        return out;
    }
    let seg = |i: usize| (verts[i], verts[(i + 1) % n]);
    for i in 0..n {
        let (a0, a1) = seg(i);
        for j in i + 1..n {
            let (b0, b1) = seg(j);
            let adjacent_fwd = (i + 1) % n == j;
            let adjacent_bwd = (j + 1) % n == i;
            if let Some(p) = segments_intersect(a0, a1, b0, b1) {
                // ignore the shared endpoint of adjacent segments
                if adjacent_fwd && p.dist(a1) <= tol {
                    continue;
                }
                if adjacent_bwd && p.dist(b1) <= tol {
                    continue;
                }
                if out.self_crossings.iter().any(|c| c.point.dist(p) <= tol) {
                    continue;
                }
                let transversal = (a1 - a0).cross(b1 - b0) != 0.0;
                out.self_crossings.push(Crossing {
                    point: p,
                    segments: (i, j),
                    transversal,
                });
            }
        }
    }
    out
}

/// True when the tracks of two curves intersect.
pub fn curves_cross(a: &PolyCurve, b: &PolyCurve) -> bool {
    for (a0, a1) in a.segments() {
        for (b0, b1) in b.segments() {
            if segments_intersect(a0, a1, b0, b1).is_some() {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::circle_curve;
    use crate::domain::{make_domain, make_separation, Comp};
    use crate::geom::pt;

    fn unit_square() -> PolyCurve {
        PolyCurve::new(vec![
            pt(-0.5, -0.5),
            pt(0.5, -0.5),
            pt(0.5, 0.5),
            pt(-0.5, 0.5),
        ])
    }

    fn figure_eight() -> PolyCurve {
        // both lobes traversed counter-clockwise, sharing the origin
        PolyCurve::new(vec![
            pt(0., 0.),
            pt(1., -1.),
            pt(1., 1.),
            pt(0., 0.),
            pt(-1., 1.),
            pt(-1., -1.),
        ])
    }

    /// Brute-force angle-summation winding oracle.
    pub fn winding_oracle(curve: &PolyCurve, z: Pt) -> i64 {
        let mut total = 0.0f64;
        for (a, b) in curve.segments() {
            let u = a - z;
            let v = b - z;
            total += u.cross(v).atan2(u.dot(v));
        }
        (total / std::f64::consts::TAU).round() as i64
    }

    #[test]
    fn square_windings() {
        let sq = unit_square();
        assert_eq!(winding_number(&sq, pt(0., 0.)).unwrap(), 1);
        assert_eq!(winding_number(&sq, pt(5., 0.)).unwrap(), 0);
        assert_eq!(winding_number(&sq, pt(0.5, 0.0)), Err(TopologyError::PointOnCurve));
    }

    #[test]
    fn figure_eight_windings() {
        let f8 = figure_eight();
        assert_eq!(winding_number(&f8, pt(-0.7, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&f8, pt(0.7, 0.0)).unwrap(), 1);
        assert_eq!(winding_number(&f8, pt(0.0, 5.0)).unwrap(), 0);
    }

    #[test]
    fn winding_matches_oracle_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(3..12);
            let verts: Vec<Pt> = (0..n)
                .map(|_| pt(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let curve = PolyCurve::new(verts);
            let z = pt(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            match winding_number(&curve, z) {
                Ok(w) => assert_eq!(w, winding_oracle(&curve, z)),
                Err(_) => {} // point effectively on the curve; oracle undefined
            }
        }
    }

    #[test]
    fn convex_polygon_is_simple() {
        assert!(self_intersections(&unit_square()).is_simple());
        assert!(self_intersections(&circle_curve(Pt::ZERO, 1.0, 64)).is_simple());
    }

    #[test]
    fn figure_eight_has_one_transversal_crossing() {
        let rep = self_intersections(&figure_eight());
        assert_eq!(rep.self_crossings.len(), 1);
        assert!(rep.self_crossings[0].transversal);
        assert!(rep.self_crossings[0].point.dist(pt(0., 0.)) < 1e-9);
    }

    #[test]
    fn degenerate_repeated_vertex_is_not_a_crossing() {
        let c = PolyCurve::new(vec![pt(0., 0.), pt(1., 0.), pt(1., 0.), pt(0., 1.)]);
        assert!(self_intersections(&c).is_simple());
    }

    fn annulus() -> crate::domain::Domain {
        make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap()
    }

    #[test]
    fn annulus_equator_separates_all_three_ways() {
        let d = annulus();
        let sep = make_separation(&d, &[0]).unwrap();
        let eq = circle_curve(Pt::ZERO, 0.5, 64);
        assert!(separates(&eq, &d, &sep).unwrap());
        assert!(separates_by_parity(&eq, &d, &sep).unwrap());
        assert!(separates_simply(&eq, &d, &sep).unwrap());
        assert_eq!(homology_class(&eq, &d).unwrap(), HomologyClass(vec![1]));
    }

    #[test]
    fn doubled_circle_fails_parity() {
        let d = annulus();
        let sep = make_separation(&d, &[0]).unwrap();
        let mut v = Vec::new();
        for _ in 0..2 {
            for k in 0..48 {
                v.push(Pt::from_polar(0.5, std::f64::consts::TAU * k as f64 / 48.0));
            }
        }
        let doubled = PolyCurve::new(v);
        assert!(!separates_by_parity(&doubled, &d, &sep).unwrap());
        assert_eq!(homology_class(&doubled, &d).unwrap(), HomologyClass(vec![2]));
    }

    #[test]
    fn contractible_loop_is_nullhomologous() {
        let d = annulus();
        let c = circle_curve(pt(0.6, 0.0), 0.05, 16);
        assert!(homology_class(&c, &d).unwrap().is_zero());
    }

    #[test]
    fn curve_meeting_complement_rejected() {
        let d = annulus();
        let sep = make_separation(&d, &[0]).unwrap();
        let bad = circle_curve(Pt::ZERO, 0.2, 32); // inside the inner disk
        assert_eq!(
            separates(&bad, &d, &sep),
            Err(TopologyError::CurveMeetsComplement)
        );
    }

    #[test]
    fn small_square_around_one_of_three_points_does_not_separate() {
        let d = make_domain(vec![
            Comp::point(pt(1.0, 0.0)),
            Comp::point(pt(-1.0, 0.5)),
            Comp::point(pt(-1.0, -0.5)),
            Comp::cap(3.0),
        ])
        .unwrap();
        let sep = make_separation(&d, &[0, 1, 2]).unwrap();
        let c = PolyCurve::new(vec![
            pt(0.8, -0.2),
            pt(1.2, -0.2),
            pt(1.2, 0.2),
            pt(0.8, 0.2),
        ]);
        assert!(!separates(&c, &d, &sep).unwrap());
    }

    #[test]
    fn parity_is_homology_invariant_under_contractible_detour() {
        let d = annulus();
        let sep = make_separation(&d, &[0]).unwrap();
        let eq = circle_curve(Pt::ZERO, 0.5, 32);
        let mut v: Vec<Pt> = eq.vertices().to_vec();
        // append a small contractible detour after vertex 0
        let base = v[0];
        let detour = [
            base + pt(0.05, 0.0),
            base + pt(0.05, 0.05),
            base + pt(0.02, 0.05),
            base,
        ];
        let mut out = vec![base];
        out.extend_from_slice(&detour);
        out.extend_from_slice(&v.split_off(1));
        let c = PolyCurve::new(out);
        assert!(separates_by_parity(&c, &d, &sep).unwrap());
    }
}
