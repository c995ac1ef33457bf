//! Plane domains described by their complement components, and separations
//! of the complement into two sides E and F.

use crate::geom::{dist_point_segment, dist_segment_segment, pt, Pt};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum Euclidean gap required between complement components.
pub const MIN_COMPONENT_GAP: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum DomainError {
    #[error("complement components {0} and {1} overlap or touch")]
    OverlappingComponents(usize, usize),
    #[error("complement has fewer than three points; the domain is not hyperbolic")]
    NotHyperbolic,
    #[error("bad unbounded cap: {0}")]
    BadCap(String),
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("trivial separation: {0}")]
    TrivialSeparation(String),
    #[error("empty component list")]
    Empty,
}

/// One connected component of the complement of the domain.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComplementComponent {
    Disk { center: Pt, radius: f64 },
    Point { location: Pt },
    Polygon { vertices: Vec<Pt> },
    /// The closed set outside the open disk of the given radius about 0,
    /// including the point at infinity.
    UnboundedCap { radius: f64 },
}

pub use ComplementComponent as Comp;

impl ComplementComponent {
    pub fn disk(center: Pt, radius: f64) -> Self {
        Comp::Disk { center, radius }
    }

    pub fn point(location: Pt) -> Self {
        Comp::Point { location }
    }

    pub fn polygon(vertices: Vec<Pt>) -> Self {
        Comp::Polygon { vertices }
    }

    pub fn cap(radius: f64) -> Self {
        Comp::UnboundedCap { radius }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Comp::Point { .. })
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Comp::UnboundedCap { .. })
    }

    /// Euclidean distance from `z` to the component (zero inside it).
    pub fn dist(&self, z: Pt) -> f64 {
        match self {
            Comp::Disk { center, radius } => (z.dist(*center) - radius).max(0.0),
            Comp::Point { location } => z.dist(*location),
            Comp::Polygon { vertices } => {
                if polygon_contains(vertices, z) {
                    0.0
                } else {
                    polygon_boundary_dist(vertices, z)
                }
            }
            Comp::UnboundedCap { radius } => (radius - z.norm()).max(0.0),
        }
    }

    pub fn contains(&self, z: Pt) -> bool {
        self.dist(z) == 0.0
    }

    /// Distance from the closed segment [a, b] to the component.
    pub fn dist_segment(&self, a: Pt, b: Pt) -> f64 {
        match self {
            Comp::Disk { center, radius } => {
                (dist_point_segment(*center, a, b) - radius).max(0.0)
            }
            Comp::Point { location } => dist_point_segment(*location, a, b),
            Comp::Polygon { vertices } => {
                let mid = a.lerp(b, 0.5);
                if polygon_contains(vertices, a)
                    || polygon_contains(vertices, b)
                    || polygon_contains(vertices, mid)
                {
                    return 0.0;
                }
                let n = vertices.len();
                let mut d = f64::INFINITY;
                for i in 0..n {
                    d = d.min(dist_segment_segment(
                        a,
                        b,
                        vertices[i],
                        vertices[(i + 1) % n],
                    ));
                }
                d
            }
            Comp::UnboundedCap { radius } => (radius - a.norm().max(b.norm())).max(0.0),
        }
    }

    /// Distance from the closed square [x0, x0+s] x [y0, y0+s] to the component.
    pub fn dist_square(&self, x0: f64, y0: f64, s: f64) -> f64 {
        match self {
            Comp::Disk { center, radius } => {
                (square_point_dist(x0, y0, s, *center) - radius).max(0.0)
            }
            Comp::Point { location } => square_point_dist(x0, y0, s, *location),
            Comp::Polygon { vertices } => {
                let corners = [
                    pt(x0, y0),
                    pt(x0 + s, y0),
                    pt(x0 + s, y0 + s),
                    pt(x0, y0 + s),
                ];
                // Square inside polygon or polygon vertex inside square?
                if polygon_contains(vertices, corners[0])
                    || vertices
                        .iter()
                        .any(|v| v.x >= x0 && v.x <= x0 + s && v.y >= y0 && v.y <= y0 + s)
                {
                    return 0.0;
                }
                let n = vertices.len();
                let mut d = f64::INFINITY;
                for i in 0..n {
                    let (p, q) = (vertices[i], vertices[(i + 1) % n]);
                    for k in 0..4 {
                        d = d.min(dist_segment_segment(corners[k], corners[(k + 1) % 4], p, q));
                    }
                }
                d
            }
            Comp::UnboundedCap { radius } => {
                // farthest corner from the origin
                let m = [
                    pt(x0, y0),
                    pt(x0 + s, y0),
                    pt(x0 + s, y0 + s),
                    pt(x0, y0 + s),
                ]
                .iter()
                .map(|c| c.norm())
                .fold(0.0f64, f64::max);
                (radius - m).max(0.0)
            }
        }
    }

    /// A representative interior point.
    pub fn representative(&self) -> Pt {
        match self {
            Comp::Disk { center, .. } => *center,
            Comp::Point { location } => *location,
            Comp::Polygon { vertices } => polygon_inner_point(vertices),
            Comp::UnboundedCap { radius } => pt(radius * 1.5, 0.0),
        }
    }

    /// Probe points used for winding-number and face-membership tests.
    ///
    /// All probes lie inside the component; for non-point components a ring
    /// of boundary-adjacent probes is included.
    pub fn probes(&self) -> Vec<Pt> {
        match self {
            Comp::Point { location } => vec![*location],
            Comp::Disk { center, radius } => {
                let mut p = vec![*center];
                for k in 0..8 {
                    let th = std::f64::consts::TAU * k as f64 / 8.0;
                    p.push(*center + Pt::from_polar(radius * 0.9, th));
                }
                p
            }
            Comp::Polygon { vertices } => {
                let mut p = vec![polygon_inner_point(vertices)];
                let n = vertices.len();
                for i in 0..n {
                    // nudge each vertex toward the inner point
                    let v = vertices[i];
                    let inner = p[0];
                    let cand = v + (inner - v) * 0.05;
                    if polygon_contains(vertices, cand) {
                        p.push(cand);
                    }
                }
                p
            }
            Comp::UnboundedCap { radius } => {
                let mut p = Vec::new();
                for k in 0..8 {
                    let th = std::f64::consts::TAU * k as f64 / 8.0;
                    p.push(Pt::from_polar(radius * 1.02, th));
                }
                p
            }
        }
    }

    /// Number of points of the Riemann sphere in the component, saturating
    /// at 3: a continuum alone already makes the complement hyperbolic.
    fn point_weight(&self) -> usize {
        if self.is_point() {
            1
        } else {
            3
        }
    }

    fn validate(&self) -> Result<(), DomainError> {
        match self {
            Comp::Disk { radius, .. } => {
                if *radius <= 0.0 || !radius.is_finite() {
                    return Err(DomainError::InvalidComponent(format!(
                        "disk radius must be positive, got {radius}"
                    )));
                }
            }
            Comp::Point { location } => {
                if !location.x.is_finite() || !location.y.is_finite() {
                    return Err(DomainError::InvalidComponent(
                        "point location must be finite".into(),
                    ));
                }
            }
            Comp::Polygon { vertices } => {
                if vertices.len() < 3 {
                    return Err(DomainError::InvalidComponent(
                        "polygon needs at least 3 vertices".into(),
                    ));
                }
                if !polygon_is_simple(vertices) {
                    return Err(DomainError::InvalidComponent(
                        "polygon must be simple".into(),
                    ));
                }
            }
            Comp::UnboundedCap { radius } => {
                if *radius <= 0.0 || !radius.is_finite() {
                    return Err(DomainError::BadCap(format!(
                        "cap radius must be positive, got {radius}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Euclidean distance between two components; non-positive means overlap.
pub fn component_gap(a: &Comp, b: &Comp) -> f64 {
    use Comp::*;
    match (a, b) {
        (Disk { center: c1, radius: r1 }, Disk { center: c2, radius: r2 }) => {
            c1.dist(*c2) - r1 - r2
        }
        (Disk { center, radius }, Point { location })
        | (Point { location }, Disk { center, radius }) => center.dist(*location) - radius,
        (Point { location: p }, Point { location: q }) => p.dist(*q),
        (UnboundedCap { radius: rc }, other) | (other, UnboundedCap { radius: rc }) => match other {
            Disk { center, radius } => rc - center.norm() - radius,
            Point { location } => rc - location.norm(),
            Polygon { vertices } => {
                rc - vertices.iter().map(|v| v.norm()).fold(0.0f64, f64::max)
            }
            UnboundedCap { .. } => -1.0,
        },
        (Polygon { vertices }, other) | (other, Polygon { vertices }) => match other {
            Disk { center, radius } => {
                if polygon_contains(vertices, *center) {
                    return -1.0;
                }
                polygon_boundary_dist(vertices, *center) - radius
            }
            Point { location } => {
                if polygon_contains(vertices, *location) {
                    return -1.0;
                }
                polygon_boundary_dist(vertices, *location)
            }
            Polygon { vertices: w } => {
                if polygon_contains(vertices, w[0]) || polygon_contains(w, vertices[0]) {
                    return -1.0;
                }
                let (n, m) = (vertices.len(), w.len());
                let mut d = f64::INFINITY;
                for i in 0..n {
                    for j in 0..m {
                        d = d.min(dist_segment_segment(
                            vertices[i],
                            vertices[(i + 1) % n],
                            w[j],
                            w[(j + 1) % m],
                        ));
                    }
                }
                d
            }
            _ => unreachable!(),
        },
    }
}

/// A validated hyperbolic plane domain, given by its complement components.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Domain {
    components: Vec<ComplementComponent>,
}

impl Domain {
    pub fn components(&self) -> &[ComplementComponent] {
        &self.components
    }

    /// Connectivity of the domain (number of complement components).
    pub fn connectivity(&self) -> usize {
        self.components.len()
    }

    pub fn cap_index(&self) -> Option<usize> {
        self.components.iter().position(|c| c.is_cap())
    }

    pub fn cap_radius(&self) -> Option<f64> {
        self.components.iter().find_map(|c| match c {
            Comp::UnboundedCap { radius } => Some(*radius),
            _ => None,
        })
    }

    /// Indices of the bounded complement components, in declaration order.
    pub fn bounded_indices(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| !self.components[i].is_cap())
            .collect()
    }

    pub fn has_punctures(&self) -> bool {
        self.components.iter().any(|c| c.is_point())
    }

    /// Euclidean distance from `z` to the boundary of the domain.
    pub fn boundary_dist(&self, z: Pt) -> f64 {
        self.components
            .iter()
            .map(|c| c.dist(z))
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from the closed segment [a, b] to the complement.
    pub fn segment_clearance(&self, a: Pt, b: Pt) -> f64 {
        self.components
            .iter()
            .map(|c| c.dist_segment(a, b))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, z: Pt) -> bool {
        self.boundary_dist(z) > 0.0
    }

    /// Smallest gap between any two complement components.
    pub fn min_gap(&self) -> f64 {
        let n = self.components.len();
        let mut g = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                g = g.min(component_gap(&self.components[i], &self.components[j]));
            }
        }
        g
    }
}

/// Validate a component list and build a [`Domain`].
pub fn make_domain(components: Vec<ComplementComponent>) -> Result<Domain, DomainError> {
    if components.is_empty() {
        return Err(DomainError::Empty);
    }
    for c in &components {
        c.validate()?;
    }
    let caps: Vec<usize> = (0..components.len())
        .filter(|&i| components[i].is_cap())
        .collect();
    if caps.len() > 1 {
        return Err(DomainError::BadCap("more than one unbounded cap".into()));
    }
    let n = components.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = component_gap(&components[i], &components[j]);
            if g < MIN_COMPONENT_GAP {
                if components[i].is_cap() || components[j].is_cap() {
                    return Err(DomainError::BadCap(format!(
                        "cap does not strictly enclose component {}",
                        if components[i].is_cap() { j } else { i }
                    )));
                }
                return Err(DomainError::OverlappingComponents(i, j));
            }
        }
    }
    let weight: usize = components.iter().map(|c| c.point_weight()).sum();
    if weight < 3 {
        return Err(DomainError::NotHyperbolic);
    }
    Ok(Domain { components })
}

/// A non-trivial separation of the complement: E on the bounded side,
/// F containing the unbounded component.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Separation {
    pub e_indices: Vec<usize>,
    pub f_indices: Vec<usize>,
}

impl Separation {
    pub fn is_e(&self, idx: usize) -> bool {
        self.e_indices.contains(&idx)
    }

    /// True when one side of the separation is a single complement component.
    pub fn is_principal(&self) -> bool {
        self.e_indices.len() == 1 || self.f_indices.len() == 1
    }
}

/// Build and validate a separation with the given E-side component indices.
pub fn make_separation(domain: &Domain, e_indices: &[usize]) -> Result<Separation, DomainError> {
    let n = domain.components.len();
    let mut e: Vec<usize> = e_indices.to_vec();
    e.sort_unstable();
    e.dedup();
    if e.iter().any(|&i| i >= n) {
        return Err(DomainError::TrivialSeparation("index out of range".into()));
    }
    if let Some(cap) = domain.cap_index() {
        if e.contains(&cap) {
            return Err(DomainError::TrivialSeparation(
                "the unbounded component must be on the F side".into(),
            ));
        }
    }
    if e.is_empty() || e.len() == n {
        return Err(DomainError::TrivialSeparation(
            "both sides must be nonempty".into(),
        ));
    }
    let f: Vec<usize> = (0..n).filter(|i| !e.contains(i)).collect();
    let weight = |idx: &[usize]| -> usize {
        idx.iter()
            .map(|&i| domain.components[i].point_weight())
            .sum()
    };
    if weight(&e) < 2 {
        return Err(DomainError::TrivialSeparation(
            "E side is a single point of the sphere".into(),
        ));
    }
    if weight(&f) < 2 {
        return Err(DomainError::TrivialSeparation(
            "F side is a single point of the sphere".into(),
        ));
    }
    Ok(Separation {
        e_indices: e,
        f_indices: f,
    })
}

/// Euclidean distance between the two closed sets of the separation.
pub fn gap_distance(domain: &Domain, sep: &Separation) -> f64 {
    let mut d = f64::INFINITY;
    for &i in &sep.e_indices {
        for &j in &sep.f_indices {
            d = d.min(component_gap(
                &domain.components[i],
                &domain.components[j],
            ));
        }
    }
    d
}

/// Domain config file schema: `{"components": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainConfig {
    pub components: Vec<ComplementComponent>,
}

impl DomainConfig {
    pub fn into_domain(self) -> Result<Domain, DomainError> {
        make_domain(self.components)
    }

    pub fn from_domain(d: &Domain) -> Self {
        DomainConfig {
            components: d.components.clone(),
        }
    }
}

// --- polygon helpers ---

pub(crate) fn polygon_contains(vertices: &[Pt], z: Pt) -> bool {
    // even-odd rule with the half-open ray convention; boundary counts as inside
    if polygon_boundary_dist(vertices, z) == 0.0 {
        return true;
    }
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        if (a.y <= z.y) != (b.y <= z.y) {
            let x = a.x + (b.x - a.x) * (z.y - a.y) / (b.y - a.y);
            if x > z.x {
                inside = !inside;
            }
        }
    }
    inside
}

fn polygon_boundary_dist(vertices: &[Pt], z: Pt) -> f64 {
    let n = vertices.len();
    let mut d = f64::INFINITY;
    for i in 0..n {
        d = d.min(dist_point_segment(z, vertices[i], vertices[(i + 1) % n]));
    }
    d
}

fn polygon_is_simple(vertices: &[Pt]) -> bool {
    let n = vertices.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            if crate::geom::segments_intersect(
                vertices[i],
                vertices[(i + 1) % n],
                vertices[j],
                vertices[(j + 1) % n],
            )
            .is_some()
            {
                return false;
            }
        }
    }
    true
}

fn polygon_inner_point(vertices: &[Pt]) -> Pt {
    let n = vertices.len() as f64;
    let centroid = vertices
        .iter()
        .fold(Pt::ZERO, |acc, &v| acc + v)
        .scale(1.0 / n);
    if polygon_contains(vertices, centroid) {
        return centroid;
    }
    // Fallback for non-convex shapes: midpoint of a vertex and the centroid
    // of its neighbours, first one that lands inside.
    let m = vertices.len();
    for i in 0..m {
        let cand = (vertices[i] + vertices[(i + 1) % m] + vertices[(i + 2) % m]).scale(1.0 / 3.0);
        if polygon_contains(vertices, cand) {
            return cand;
        }
    }
    centroid
}

fn square_point_dist(x0: f64, y0: f64, s: f64, p: Pt) -> f64 {
    let dx = (x0 - p.x).max(p.x - (x0 + s)).max(0.0);
    let dy = (y0 - p.y).max(p.y - (y0 + s)).max(0.0);
    dx.hypot(dy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    pub fn annulus(r_in: f64, r_out: f64) -> Domain {
        make_domain(vec![Comp::disk(Pt::ZERO, r_in), Comp::cap(r_out)]).unwrap()
    }

    #[test]
    fn thm14_domain_is_valid() {
        let d = make_domain(vec![
            Comp::disk(Pt::ZERO, 2.0),
            Comp::disk(pt(0.0, 3.5), 0.5),
            Comp::disk(pt(0.0, -3.5), 0.5),
            Comp::cap(5.0),
        ])
        .unwrap();
        assert_eq!(d.connectivity(), 4);
        assert_eq!(d.cap_index(), Some(3));
    }

    #[test]
    fn annulus_is_valid() {
        let d = annulus(0.25, 1.0);
        assert_eq!(d.connectivity(), 2);
        assert!(d.contains(pt(0.5, 0.0)));
        assert!(!d.contains(pt(0.1, 0.0)));
    }

    #[test]
    fn overlapping_disks_rejected() {
        let err = make_domain(vec![
            Comp::disk(Pt::ZERO, 2.0),
            Comp::disk(pt(1.0, 0.0), 2.0),
        ])
        .unwrap_err();
        assert_eq!(err, DomainError::OverlappingComponents(0, 1));
    }

    #[test]
    fn two_points_not_hyperbolic() {
        let err = make_domain(vec![Comp::point(Pt::ZERO), Comp::point(pt(1.0, 0.0))])
            .unwrap_err();
        assert_eq!(err, DomainError::NotHyperbolic);
    }

    #[test]
    fn disk_and_punctured_disk_are_hyperbolic() {
        assert!(make_domain(vec![Comp::cap(1.0)]).is_ok());
        assert!(make_domain(vec![Comp::point(Pt::ZERO), Comp::cap(1.0)]).is_ok());
    }

    #[test]
    fn cap_must_enclose() {
        let err = make_domain(vec![Comp::disk(pt(4.0, 0.0), 2.0), Comp::cap(5.0)]).unwrap_err();
        assert!(matches!(err, DomainError::BadCap(_)));
    }

    #[test]
    fn double_cap_rejected() {
        let err = make_domain(vec![Comp::cap(1.0), Comp::cap(2.0)]).unwrap_err();
        assert!(matches!(err, DomainError::BadCap(_)));
    }

    #[test]
    fn single_point_separation_rejected() {
        let d = make_domain(vec![
            Comp::point(pt(0.5, 0.0)),
            Comp::disk(pt(-0.5, 0.0), 0.1),
            Comp::cap(2.0),
        ])
        .unwrap();
        let err = make_separation(&d, &[0]).unwrap_err();
        assert!(matches!(err, DomainError::TrivialSeparation(_)));
        // a point together with a disk is fine
        assert!(make_separation(&d, &[0, 1]).is_ok());
    }

    #[test]
    fn annulus_gap() {
        let d = annulus(0.25, 1.0);
        let sep = make_separation(&d, &[0]).unwrap();
        assert_relative_eq!(gap_distance(&d, &sep), 0.75);
    }

    #[test]
    fn thm14_gap() {
        let d = make_domain(vec![
            Comp::disk(Pt::ZERO, 2.0),
            Comp::disk(pt(0.0, 3.5), 0.5),
            Comp::disk(pt(0.0, -3.5), 0.5),
            Comp::cap(5.0),
        ])
        .unwrap();
        let sep = make_separation(&d, &[1, 2]).unwrap();
        assert_relative_eq!(gap_distance(&d, &sep), 1.0);
    }

    #[test]
    fn thm12_gap() {
        // three points at radius 1 + eps around the unit disk
        let eps = 0.1;
        let mut comps = vec![Comp::disk(Pt::ZERO, 1.0)];
        for k in 0..3 {
            let th = std::f64::consts::TAU * k as f64 / 3.0;
            comps.push(Comp::point(Pt::from_polar(1.0 + eps, th)));
        }
        comps.push(Comp::cap((1.0 + eps) * (1.0 + eps)));
        let d = make_domain(comps).unwrap();
        let sep = make_separation(&d, &[1, 2, 3]).unwrap();
        assert_relative_eq!(gap_distance(&d, &sep), eps, epsilon = 1e-12);
    }

    #[test]
    fn revalidation_is_idempotent() {
        let d = annulus(0.25, 1.0);
        let d2 = make_domain(d.components().to_vec()).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn config_roundtrip() {
        let json = r#"{"components":[
            {"kind":"disk","center":[0.0,0.0],"radius":0.25},
            {"kind":"unbounded_cap","radius":1.0}
        ]}"#;
        let cfg: DomainConfig = serde_json::from_str(json).unwrap();
        let d = cfg.into_domain().unwrap();
        assert_eq!(d.connectivity(), 2);
        let back = serde_json::to_string(&DomainConfig::from_domain(&d)).unwrap();
        assert!(back.contains("\"kind\":\"disk\""));
        assert!(back.contains("\"kind\":\"unbounded_cap\""));
    }
}
