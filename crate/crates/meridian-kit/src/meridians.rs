//! Meridians of a separation: the shortest closed geodesics separating the
//! two sides by parity (which are always simple), together with the shortest
//! separating geodesic in the weaker face-wise sense (which need not be).
//!
//! Candidate curves come from the net construction; alternative isotopy
//! classes are explored with corridor barriers, and alternative homology
//! classes for the face-wise search by grafting winding loops ("lassos")
//! onto the net curve.

use crate::curve::PolyCurve;
use crate::domain::{
    component_gap, make_separation, Domain, DomainError, Separation,
};
use crate::geom::{pt, Pt};
use crate::metric::{DensityField, MetricError};
use crate::net::{self, NetError};
use crate::shorten::{shorten, ShortenParams, ShortenStatus, ShorteningResult};
use crate::topology::{self, HomologyClass, TopologyError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MeridianError {
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("no geodesic exists for this separation: every candidate collapsed into a puncture")]
    Degenerate {
        separation: Separation,
        completed: Vec<MeridianReport>,
    },
    #[error("no separating geodesic candidate survived the checks")]
    NoCandidate,
}

/// Number of separation classes of an `n`-connected domain.
pub fn count_classes(n: usize) -> u64 {
    if n <= 1 {
        return 0;
    }
    (1u64 << (n - 1)) - 1
}

/// Number of principal separation classes (one side a single component).
pub fn count_principal(n: usize) -> u64 {
    (n as u64).min(count_classes(n))
}

/// All valid separations of the domain, ordered by the bitmask of the E side
/// over the bounded components.
pub fn enumerate_separations(domain: &Domain) -> Vec<Separation> {
    let bounded = domain.bounded_indices();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << bounded.len()) {
        let e: Vec<usize> = bounded
            .iter()
            .enumerate()
            .filter(|&(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        if let Ok(sep) = make_separation(domain, &e) {
            out.push(sep);
        }
    }
    out
}

/// The principal separations: each single bounded component against the
/// rest, and (when distinct) all bounded components against the cap side.
pub fn principal_separations(domain: &Domain) -> Result<Vec<Separation>, DomainError> {
    let bounded = domain.bounded_indices();
    let mut out = Vec::new();
    for &k in &bounded {
        out.push(make_separation(domain, &[k])?);
    }
    if bounded.len() >= 2 && domain.cap_index().is_some() {
        out.push(make_separation(domain, &bounded)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeridianReport {
    pub separation: Separation,
    /// A meridian of minimal length (the first in deterministic order).
    pub curve: PolyCurve,
    pub length: f64,
    pub simple: bool,
    pub principal: bool,
    /// Number of distinct minimal-length meridians found; 1 is evidence of
    /// uniqueness, more is a counterexample.
    pub unique_evidence: usize,
    /// All distinct minimal-length meridians found, including `curve`.
    pub comeridians: Vec<PolyCurve>,
    pub residual: f64,
}

/// Radius of the smallest circle about the representative `p` that encloses
/// the whole component; `None` for the cap.
fn component_extent(comp: &crate::domain::ComplementComponent, p: Pt) -> Option<f64> {
    match comp {
        crate::domain::ComplementComponent::Disk { radius, .. } => Some(*radius),
        crate::domain::ComplementComponent::Point { .. } => Some(0.0),
        crate::domain::ComplementComponent::Polygon { vertices } => Some(
            vertices
                .iter()
                .map(|v| v.dist(p))
                .fold(0.0f64, f64::max),
        ),
        crate::domain::ComplementComponent::UnboundedCap { .. } => None,
    }
}

fn barrier_seeds(domain: &Domain, sep: &Separation) -> Vec<PolyCurve> {
    let mut seeds = Vec::new();
    let reach = domain.cap_radius().unwrap_or_else(|| {
        domain
            .components()
            .iter()
            .map(|c| c.representative().norm())
            .fold(1.0f64, f64::max)
            * 4.0
    });
    let mut barriers = vec![None];
    for &fi in &sep.f_indices {
        let comp = &domain.components()[fi];
        if comp.is_cap() {
            continue;
        }
        let p = comp.representative();
        for dir in [pt(1.0, 0.0), pt(0.0, 1.0), pt(-1.0, 0.0), pt(0.0, -1.0)] {
            barriers.push(Some((p, p + dir.scale(2.0 * reach))));
        }
    }
    for b in barriers {
        if let Ok(c) = net::separating_curve_with_barrier(domain, sep, b) {
            seeds.push(c);
        }
    }
    seeds
}

/// The meridian(s) of the separation: shortest simple closed geodesics
/// separating E and F by parity.
pub fn find_meridian(
    domain: &Domain,
    field: &DensityField,
    sep: &Separation,
    params: &ShortenParams,
) -> Result<MeridianReport, MeridianError> {
    let seeds = barrier_seeds(domain, sep);
    if seeds.is_empty() {
        return Err(NetError::NoPath.into());
    }
    let mut candidates: Vec<(ShorteningResult, bool)> = Vec::new();
    let mut collapsed = false;
    for seed in &seeds {
        let r = shorten(domain, field, seed, params)?;
        match r.status {
            ShortenStatus::Converged => {
                let numerically_simple = topology::self_intersections(&r.curve).is_simple();
                // a geodesic whose isotopy class has a simple representative
                // is simple; when the two strands of a thin neck collapse
                // below the grid scale the polygon crosses itself even
                // though the geodesic does not. The simple net seed together
                // with unit windings witnesses the class.
                let class_simple = numerically_simple
                    || topology::homology_class(&r.curve, domain)
                        .map(|h| h.0.iter().all(|w| w.abs() <= 1))
                        .unwrap_or(false);
                if class_simple
                    && topology::separates_by_parity(&r.curve, domain, sep)?
                    && topology::separates(&r.curve, domain, sep)?
                {
                    candidates.push((r, numerically_simple));
                }
            }
            ShortenStatus::PunctureCollapse(_) => collapsed = true,
            ShortenStatus::MaxIterations => {}
        }
    }
    if candidates.is_empty() {
        return Err(if collapsed {
            MeridianError::Degenerate {
                separation: sep.clone(),
                completed: Vec::new(),
            }
        } else {
            MeridianError::NoCandidate
        });
    }
    candidates.sort_by(|a, b| a.0.length.partial_cmp(&b.0.length).unwrap());
    let h_curve = 2.0 * field.h;
    let mut distinct: Vec<(ShorteningResult, bool)> = Vec::new();
    for c in candidates {
        if distinct
            .iter()
            .all(|d| d.0.curve.alignment_distance(&c.0.curve) > 3.0 * h_curve)
        {
            distinct.push(c);
        }
    }
    let best_len = distinct[0].0.length;
    let comeridians: Vec<&(ShorteningResult, bool)> = distinct
        .iter()
        .filter(|c| c.0.length <= best_len * 1.005)
        .collect();
    Ok(MeridianReport {
        separation: sep.clone(),
        curve: comeridians[0].0.curve.clone(),
        length: best_len,
        simple: comeridians[0].1,
        principal: sep.is_principal(),
        unique_evidence: comeridians.len(),
        comeridians: comeridians.iter().map(|c| c.0.curve.clone()).collect(),
        residual: distinct[0].0.residual,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrincipalSystem {
    pub reports: Vec<MeridianReport>,
    /// The meridians are pairwise disjoint, as the nesting of their
    /// separations requires.
    pub nesting_ok: bool,
}

/// Meridians for all principal separations, with the pairwise disjointness
/// check. A puncture as its own side has no meridian; this surfaces as
/// [`MeridianError::Degenerate`] carrying the reports completed so far.
pub fn principal_system(
    domain: &Domain,
    field: &DensityField,
    params: &ShortenParams,
) -> Result<PrincipalSystem, MeridianError> {
    let mut reports: Vec<MeridianReport> = Vec::new();
    for sep in principal_separations(domain)? {
        match find_meridian(domain, field, &sep, params) {
            Ok(r) => reports.push(r),
            Err(MeridianError::Degenerate { separation, .. }) => {
                return Err(MeridianError::Degenerate {
                    separation,
                    completed: reports,
                })
            }
            Err(e) => return Err(e),
        }
    }
    let mut nesting_ok = true;
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            if topology::curves_cross(&reports[i].curve, &reports[j].curve) {
                nesting_ok = false;
            }
        }
    }
    Ok(PrincipalSystem { reports, nesting_ok })
}

/// Graft a small loop of the given signed number of turns around component
/// `k` onto the curve, reached by a doubled slit from the nearest vertex.
/// Returns `None` when no straight slit with positive clearance exists.
pub fn attach_lasso(
    curve: &PolyCurve,
    domain: &Domain,
    k: usize,
    turns: i64,
) -> Option<PolyCurve> {
    if turns == 0 {
        return Some(curve.clone());
    }
    let comp = &domain.components()[k];
    if comp.is_cap() {
        return None;
    }
    let p = comp.representative();
    let gap = domain
        .components()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != k)
        .map(|(_, c)| component_gap(comp, c))
        .fold(f64::INFINITY, f64::min);
    if !gap.is_finite() || gap <= 0.0 {
        return None;
    }
    let Some(extent) = component_extent(comp, p) else {
        return None;
    };
    let (vi, v_star) = curve
        .vertices()
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.dist(p).partial_cmp(&b.1.dist(p)).unwrap())
        .map(|(i, v)| (i, *v))?;
    if v_star.dist(p) <= extent {
        return None;
    }
    // the attach vertex may lie inside the loop circle; the slit still
    // reaches the loop radially and the windings compose the same way
    let loop_r = extent + gap / 3.0;
    for (j, c) in domain.components().iter().enumerate() {
        if j != k && c.dist(p) <= loop_r {
            return None;
        }
    }
    let u = (v_star - p).scale(1.0 / v_star.dist(p));
    let perp = pt(-u.y, u.x);
    let delta = gap / 40.0;
    let gamma = 0.1; // angular gap between the slit's two sides at the loop

    let theta0 = u.angle();
    let q1 = p + Pt::from_polar(loop_r, theta0 + gamma);
    let q2 = p + Pt::from_polar(loop_r, theta0 - gamma);
    let a1 = v_star + perp.scale(delta);
    let a2 = v_star - perp.scale(delta);
    // both sides of the slit must clear every other component
    for (a, b) in [(a1, q1), (q2, a2)] {
        for (j, c) in domain.components().iter().enumerate() {
            if j != k && c.dist_segment(a, b) <= 0.0 {
                return None;
            }
        }
    }

    let sign = turns.signum() as f64;
    let sweep = 2.0 * std::f64::consts::PI * turns.unsigned_abs() as f64 - 2.0 * gamma;
    // enough vertices that the polygon chords keep 4/5 of the loop's
    // clearance over the component
    let ratio = (extent + 0.8 * (loop_r - extent)) / loop_r;
    let m = (24 * turns.unsigned_abs() as usize)
        .max((sweep / (2.0 * ratio.clamp(0.0, 1.0).acos())).ceil() as usize);
    let mut verts: Vec<Pt> = Vec::with_capacity(curve.len() + m + 5);
    verts.extend_from_slice(&curve.vertices()[..=vi]);
    verts.push(a1);
    for s in 0..=m {
        let theta = theta0 + gamma + sign * sweep * s as f64 / m as f64;
        verts.push(p + Pt::from_polar(loop_r, theta));
    }
    verts.push(a2);
    verts.extend_from_slice(&curve.vertices()[vi + 1..]);
    Some(PolyCurve::new(verts))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeodesicCandidate {
    pub windings: HomologyClass,
    pub curve: PolyCurve,
    pub length: f64,
    pub simple: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsgReport {
    /// Shortest geodesic separating E and F face-wise; may be non-simple.
    pub best: GeodesicCandidate,
    /// All distinct separating geodesics found, by increasing length.
    pub candidates: Vec<GeodesicCandidate>,
}

/// Shortest closed geodesic separating E and F in the face-wise sense.
///
/// Seeds cover the parity class of the net curve plus homology classes
/// obtained by flipping the winding on up to three E components (lassos of
/// -2 turns) and adding a turn around one bounded F component. The winding
/// budget caps the number of seeds.
pub fn shortest_separating_geodesic(
    domain: &Domain,
    field: &DensityField,
    sep: &Separation,
    params: &ShortenParams,
    seed_budget: usize,
) -> Result<SsgReport, MeridianError> {
    let base = net::separating_curve(domain, sep)?;

    let mut seeds: Vec<PolyCurve> = Vec::new();
    let e = &sep.e_indices;
    let bounded_f: Vec<usize> = sep
        .f_indices
        .iter()
        .copied()
        .filter(|&i| !domain.components()[i].is_cap())
        .collect();
    let flip_masks: Vec<u64> = if e.len() <= 16 {
        (0u64..1 << e.len())
            .filter(|m| m.count_ones() <= 3)
            .collect()
    } else {
        vec![0]
    };
    // second family of bases: a circle hugging one bounded F component,
    // which already carries winding +1 there; flipped E components then
    // need a single negative turn
    let mut circle_bases: Vec<PolyCurve> = Vec::new();
    for &fi in &bounded_f {
        let comp = &domain.components()[fi];
        let p = comp.representative();
        let gap = domain
            .components()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != fi)
            .map(|(_, c)| component_gap(comp, c))
            .fold(f64::INFINITY, f64::min);
        if !gap.is_finite() || gap <= 0.0 {
            continue;
        }
        let Some(extent) = component_extent(comp, p) else {
            continue;
        };
        let r = extent + gap / 3.0;
        if domain
            .components()
            .iter()
            .enumerate()
            .any(|(j, c)| j != fi && c.dist(p) <= r)
        {
            continue;
        }
        let n = ((2.0 * std::f64::consts::PI * r) / (2.0 * field.h)).ceil() as usize;
        circle_bases.push(crate::curve::circle_curve(p, r, n.max(32)));
    }

    'mask_loop: for &mask in &flip_masks {
        let flip = |seed: &PolyCurve, turns: i64| -> Option<PolyCurve> {
            let mut s = seed.clone();
            for (b, &ei) in e.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    s = attach_lasso(&s, domain, ei, turns)?;
                }
            }
            Some(s)
        };
        let mut batch: Vec<Option<PolyCurve>> = Vec::new();
        batch.push(flip(&base, -2));
        for &fi in &bounded_f {
            batch.push(
                flip(&base, -2).and_then(|s| attach_lasso(&s, domain, fi, 1)),
            );
        }
        for cb in &circle_bases {
            batch.push(flip(cb, -1));
        }
        for s in batch.into_iter().flatten() {
            if seeds.len() >= seed_budget {
                break 'mask_loop;
            }
            seeds.push(s);
        }
    }

    let h_curve = 2.0 * field.h;
    let mut results: Vec<GeodesicCandidate> = Vec::new();
    for seed in &seeds {
        let Ok(r) = shorten(domain, field, seed, params) else {
            continue;
        };
        if r.status != ShortenStatus::Converged {
            continue;
        }
        if !topology::separates(&r.curve, domain, sep).unwrap_or(false) {
            continue;
        }
        let windings = topology::homology_class(&r.curve, domain)?;
        let simple = topology::self_intersections(&r.curve).is_simple();
        results.push(GeodesicCandidate {
            windings,
            curve: r.curve,
            length: r.length,
            simple,
        });
    }
    if results.is_empty() {
        return Err(MeridianError::NoCandidate);
    }
    results.sort_by(|a, b| a.length.partial_cmp(&b.length).unwrap());
    let mut distinct: Vec<GeodesicCandidate> = Vec::new();
    for c in results {
        if distinct
            .iter()
            .all(|d| d.curve.alignment_distance(&c.curve) > 3.0 * h_curve)
        {
            distinct.push(c);
        }
    }
    Ok(SsgReport {
        best: distinct[0].clone(),
        candidates: distinct,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{make_domain, Comp};
    use crate::metric::{annulus_core_length, solve_density, SolveParams};
    use approx::assert_relative_eq;

    #[test]
    fn class_counts() {
        assert_eq!(count_classes(1), 0);
        assert_eq!(count_classes(2), 1);
        assert_eq!(count_classes(3), 3);
        assert_eq!(count_classes(4), 7);
        assert_eq!(count_classes(5), 15);
        assert_eq!(count_principal(2), 1);
        assert_eq!(count_principal(3), 3);
        assert_eq!(count_principal(4), 4);
        assert_eq!(count_principal(5), 5);
    }

    #[test]
    fn enumerate_matches_count() {
        let d = make_domain(vec![
            Comp::disk(pt(0.0, 3.5), 0.5),
            Comp::disk(pt(0.0, -3.5), 0.5),
            Comp::disk(Pt::ZERO, 2.0),
            Comp::cap(5.0),
        ])
        .unwrap();
        let seps = enumerate_separations(&d);
        assert_eq!(seps.len() as u64, count_classes(4));
        let principal = principal_separations(&d).unwrap();
        assert_eq!(principal.len() as u64, count_principal(4));
        assert!(principal.iter().all(|s| s.is_principal()));
    }

    #[test]
    fn annulus_meridian() {
        let d = make_domain(vec![Comp::disk(Pt::ZERO, 0.25), Comp::cap(1.0)]).unwrap();
        let f = solve_density(&d, &SolveParams::default()).unwrap();
        let sep = make_separation(&d, &[0]).unwrap();
        let r = find_meridian(&d, &f, &sep, &ShortenParams::default()).unwrap();
        assert!(r.simple && r.principal);
        assert_eq!(r.unique_evidence, 1);
        assert_relative_eq!(r.length, annulus_core_length(0.25, 1.0), max_relative = 0.02);
    }

    #[test]
    fn punctured_disk_meridian_degenerate() {
        let d = make_domain(vec![Comp::point(Pt::ZERO), Comp::cap(1.0)]).unwrap();
        let f = solve_density(&d, &SolveParams::default()).unwrap();
        let sep = Separation {
            e_indices: vec![0],
            f_indices: vec![1],
        };
        match find_meridian(&d, &f, &sep, &ShortenParams::default()) {
            Err(MeridianError::Degenerate { .. }) => {}
            other => panic!("expected degenerate, got {other:?}"),
        }
    }

    #[test]
    fn lasso_changes_windings() {
        let d = make_domain(vec![
            Comp::point(pt(-1.0, 0.0)),
            Comp::point(pt(1.0, 0.0)),
            Comp::cap(3.0),
        ])
        .unwrap();
        let sep = make_separation(&d, &[0, 1]).unwrap();
        let base = net::separating_curve(&d, &sep).unwrap();
        assert_eq!(
            topology::homology_class(&base, &d).unwrap(),
            HomologyClass(vec![1, 1])
        );
        let flipped = attach_lasso(&base, &d, 1, -2).unwrap();
        assert_eq!(
            topology::homology_class(&flipped, &d).unwrap(),
            HomologyClass(vec![1, -1])
        );
    }
}
