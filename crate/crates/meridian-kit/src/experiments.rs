//! Desk-scale reproductions of the two counterexamples: the domain where
//! the shortest separating geodesic is neither simple nor unique, and the
//! quadruply connected domain with two meridians for the same separation.

use crate::curve::PolyCurve;
use crate::domain::{make_domain, make_separation, Comp, Domain, DomainConfig, DomainError};
use crate::meridians::{
    self, enumerate_separations, find_meridian, MeridianError, MeridianReport,
};
use crate::metric::SolveParams;
use crate::shorten::ShortenParams;
use crate::topology::{self, HomologyClass};
use crate::geom::{pt, Pt};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub description: String,
    /// Allowed tolerance for the checked quantity.
    pub tolerance: f64,
    /// Measured margin: how comfortably the assertion holds (negative when
    /// it fails).
    pub margin: f64,
    pub pass: bool,
}

impl Assertion {
    fn new(name: &str, description: &str, tolerance: f64, margin: f64, pass: bool) -> Assertion {
        Assertion {
            name: name.into(),
            description: description.into(),
            tolerance,
            margin,
            pass,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub curve: PolyCurve,
    pub length: f64,
    pub simple: bool,
    pub windings: HomologyClass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub domain: DomainConfig,
    pub curves: Vec<CurveRecord>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

impl ExperimentReport {
    fn finish(mut self) -> ExperimentReport {
        self.passed = self.assertions.iter().all(|a| a.pass);
        self
    }
}

/// The domain of the first counterexample: three punctures at
/// `(1+eps) e^(2 pi i k/3)` between the closed unit disk and the cap of
/// radius `(1+eps)^2`.
pub fn build_thm12_domain(eps: f64) -> Result<Domain, DomainError> {
    if !(0.0..1.0).contains(&eps) || eps == 0.0 {
        return Err(DomainError::InvalidComponent(format!(
            "eps must lie in (0, 1), got {eps}"
        )));
    }
    let r = 1.0 + eps;
    let mut comps = Vec::new();
    for k in 0..3 {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
        comps.push(Comp::point(Pt::from_polar(r, theta)));
    }
    comps.push(Comp::disk(Pt::ZERO, 1.0));
    comps.push(Comp::cap(r * r));
    make_domain(comps)
}

fn record(
    label: &str,
    curve: &PolyCurve,
    length: f64,
    domain: &Domain,
) -> CurveRecord {
    CurveRecord {
        label: label.into(),
        curve: curve.clone(),
        length,
        simple: topology::self_intersections(curve).is_simple(),
        windings: topology::homology_class(curve, domain)
            .unwrap_or(HomologyClass(vec![])),
    }
}

/// Reproduce the first counterexample at the given `eps`: the geodesic in
/// the flipped-winding class separates the three punctures from the rest
/// face-wise, is non-simple, and (for small `eps`) is shorter than the
/// meridian; its inversion image is a second geodesic of the same length.
pub fn run_thm12(
    eps: f64,
    solve_params: &SolveParams,
    shorten_params: &ShortenParams,
    cache_dir: Option<&std::path::Path>,
) -> Result<ExperimentReport, MeridianError> {
    let domain = build_thm12_domain(eps)?;
    let field = crate::cache::solve_or_load(&domain, solve_params, cache_dir)?;
    let sep = make_separation(&domain, &[0, 1, 2])?;

    let meridian = find_meridian(&domain, &field, &sep, shorten_params)?;
    let l1 = meridian.length;

    let ssg = meridians::shortest_separating_geodesic(
        &domain,
        &field,
        &sep,
        shorten_params,
        24,
    )?;
    // the beta class winds -1 about each puncture and +1 about the disk
    let beta_class = HomologyClass(vec![-1, -1, -1, 1]);
    let beta = ssg
        .candidates
        .iter()
        .find(|c| {
            c.windings == beta_class
                || c.windings == HomologyClass(vec![1, 1, 1, -1])
        })
        .or_else(|| ssg.candidates.iter().find(|c| !c.simple))
        .ok_or(MeridianError::NoCandidate)?;
    let l2 = beta.length;

    let h_curve = 2.0 * field.h;
    let mut assertions = Vec::new();

    assertions.push(Assertion::new(
        "shorter_than_meridian",
        "the flipped-class geodesic is shorter than the simple meridian",
        0.0,
        (l1 - l2) / l1,
        l2 < l1,
    ));

    let crossings = topology::self_intersections(&beta.curve);
    assertions.push(Assertion::new(
        "non_simple",
        "the flipped-class geodesic has self-intersections",
        0.0,
        crossings.self_crossings.len() as f64,
        !crossings.is_simple(),
    ));

    let sep_ok = topology::separates(&beta.curve, &domain, &sep)?;
    let parity = topology::separates_by_parity(&beta.curve, &domain, &sep)?;
    let simply = topology::separates_simply(&beta.curve, &domain, &sep)?;
    assertions.push(Assertion::new(
        "separates_facewise_only",
        "it separates the sides, but neither by parity nor simply",
        0.0,
        if sep_ok && !parity && !simply { 1.0 } else { -1.0 },
        sep_ok && !parity && !simply,
    ));

    // the inversion z -> (1+eps)^2 / z is a hyperbolic isometry of the domain
    let rr = (1.0 + eps) * (1.0 + eps);
    let mirrored = beta.curve.map(|z| z.cinv().scale(rr));
    let mirror_len = field.hyperbolic_length(&domain, &mirrored)?;
    let len_dev = (mirror_len - l2).abs() / l2;
    let distinct = beta.curve.alignment_distance(&mirrored) > 3.0 * h_curve;
    assertions.push(Assertion::new(
        "inversion_pair",
        "the inversion image is a distinct separating curve of equal length (1% tolerance)",
        0.01,
        0.01 - len_dev,
        len_dev <= 0.01 && distinct,
    ));

    let mut curves = vec![
        record("meridian", &meridian.curve, l1, &domain),
        record("beta_geodesic", &beta.curve, l2, &domain),
        record("beta_inverted", &mirrored, mirror_len, &domain),
    ];
    for (i, c) in ssg.candidates.iter().enumerate().skip(1) {
        curves.push(record(&format!("candidate_{i}"), &c.curve, c.length, &domain));
    }

    Ok(ExperimentReport {
        name: format!("thm12_eps_{eps}"),
        domain: DomainConfig::from_domain(&domain),
        curves,
        assertions,
        passed: false,
    }
    .finish())
}

/// Scan over decreasing `eps`; the margin of the length inequality should
/// grow as `eps` shrinks.
pub fn thm12_scan(
    epsilons: &[f64],
    solve_params: &SolveParams,
    shorten_params: &ShortenParams,
    cache_dir: Option<&std::path::Path>,
) -> Result<Vec<ExperimentReport>, MeridianError> {
    epsilons
        .iter()
        .map(|&e| run_thm12(e, solve_params, shorten_params, cache_dir))
        .collect()
}

/// The domain of the second counterexample: two small disks at `+-3.5i`
/// separated from the central disk of radius 2 and the cap of radius 5.
pub fn build_thm14_domain() -> Domain {
    make_domain(vec![
        Comp::disk(pt(0.0, 3.5), 0.5),
        Comp::disk(pt(0.0, -3.5), 0.5),
        Comp::disk(Pt::ZERO, 2.0),
        Comp::cap(5.0),
    ])
    .expect("fixed domain is valid")
}

/// Reproduce the second counterexample: the separation of the two small
/// disks has two meridians exchanged by `T(z) = -z`, while every principal
/// separation has a unique meridian and the full class scan yields seven
/// simple, pairwise distinct meridians.
pub fn run_thm14(
    solve_params: &SolveParams,
    shorten_params: &ShortenParams,
    cache_dir: Option<&std::path::Path>,
) -> Result<ExperimentReport, MeridianError> {
    let domain = build_thm14_domain();
    let field = crate::cache::solve_or_load(&domain, solve_params, cache_dir)?;
    let h_curve = 2.0 * field.h;
    let mut assertions = Vec::new();
    let mut curves = Vec::new();

    // all seven separation classes
    let seps = enumerate_separations(&domain);
    assertions.push(Assertion::new(
        "class_count",
        "the quadruply connected domain has E(4) = 7 separation classes",
        0.0,
        seps.len() as f64 - 7.0,
        seps.len() == 7,
    ));

    let mut reports: Vec<MeridianReport> = Vec::new();
    for sep in &seps {
        let r = find_meridian(&domain, &field, sep, shorten_params)?;
        curves.push(record(
            &format!("meridian_e{:?}", sep.e_indices),
            &r.curve,
            r.length,
            &domain,
        ));
        reports.push(r);
    }

    assertions.push(Assertion::new(
        "all_simple",
        "every class yields a simple meridian",
        0.0,
        reports.iter().filter(|r| r.simple).count() as f64 - 7.0,
        reports.iter().all(|r| r.simple),
    ));

    let mut distinct = true;
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            if reports[i]
                .curve
                .alignment_distance(&reports[j].curve)
                <= 3.0 * h_curve
            {
                distinct = false;
            }
        }
    }
    assertions.push(Assertion::new(
        "classes_distinct",
        "the seven meridians are pairwise distinct curves",
        0.0,
        if distinct { 1.0 } else { -1.0 },
        distinct,
    ));

    // the separation of the two small disks: two meridians exchanged by T
    let pair_sep = make_separation(&domain, &[0, 1])?;
    let pair = reports
        .iter()
        .find(|r| r.separation == pair_sep)
        .expect("scan covers the pair separation");
    assertions.push(Assertion::new(
        "two_meridians",
        "the small-disk separation has at least two minimal meridians",
        0.0,
        pair.unique_evidence as f64 - 2.0,
        pair.unique_evidence >= 2,
    ));

    if pair.comeridians.len() >= 2 {
        let a = &pair.comeridians[0];
        let b = &pair.comeridians[1];
        let ta = a.map(|z| -z);
        let mirror_dist = ta.alignment_distance(b);
        let la = field.hyperbolic_length(&domain, a)?;
        let lb = field.hyperbolic_length(&domain, b)?;
        let len_dev = (la - lb).abs() / la;
        assertions.push(Assertion::new(
            "mirror_pair",
            "the two meridians are images of each other under T(z) = -z with equal length (1%)",
            0.01,
            0.01 - len_dev,
            mirror_dist <= 3.0 * h_curve && len_dev <= 0.01,
        ));
        let a_invariant = a.alignment_distance(&ta) <= 3.0 * h_curve;
        let tb = b.map(|z| -z);
        let b_invariant = b.alignment_distance(&tb) <= 3.0 * h_curve;
        assertions.push(Assertion::new(
            "not_t_invariant",
            "neither meridian is itself T-invariant",
            0.0,
            if !a_invariant && !b_invariant { 1.0 } else { -1.0 },
            !a_invariant && !b_invariant,
        ));
    } else {
        assertions.push(Assertion::new(
            "mirror_pair",
            "the two meridians are images of each other under T(z) = -z with equal length (1%)",
            0.01,
            -1.0,
            false,
        ));
    }

    // winding obstruction: no curve in the pool separates the pair, has
    // zero winding about the central disk, and is T-invariant
    let central = domain.components()[2].representative();
    let mut obstruction_free = true;
    for r in &reports {
        for c in std::iter::once(&r.curve).chain(r.comeridians.iter()) {
            let separates_pair =
                topology::separates(c, &domain, &pair_sep).unwrap_or(false);
            let zero_winding = topology::winding_number(c, central)
                .map(|w| w == 0)
                .unwrap_or(false);
            let t_invariant =
                c.alignment_distance(&c.map(|z| -z)) <= 3.0 * h_curve;
            if separates_pair && zero_winding && t_invariant {
                obstruction_free = false;
            }
        }
    }
    assertions.push(Assertion::new(
        "winding_obstruction",
        "no pooled curve separates the pair with zero winding about the central disk while T-invariant",
        0.0,
        if obstruction_free { 1.0 } else { -1.0 },
        obstruction_free,
    ));

    // principal separations: unique meridians, pairwise disjoint
    let principal: Vec<&MeridianReport> =
        reports.iter().filter(|r| r.principal).collect();
    assertions.push(Assertion::new(
        "principal_unique",
        "each of the four principal separations has a unique meridian",
        0.0,
        principal
            .iter()
            .filter(|r| r.unique_evidence == 1)
            .count() as f64
            - 4.0,
        principal.len() == 4 && principal.iter().all(|r| r.unique_evidence == 1),
    ));

    let mut nesting_ok = true;
    for i in 0..principal.len() {
        for j in i + 1..principal.len() {
            if topology::curves_cross(&principal[i].curve, &principal[j].curve) {
                nesting_ok = false;
            }
        }
    }
    assertions.push(Assertion::new(
        "principal_nesting",
        "the principal meridians are pairwise disjoint",
        0.0,
        if nesting_ok { 1.0 } else { -1.0 },
        nesting_ok,
    ));

    Ok(ExperimentReport {
        name: "thm14".into(),
        domain: DomainConfig::from_domain(&domain),
        curves,
        assertions,
        passed: false,
    }
    .finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm12_domain_geometry() {
        let d = build_thm12_domain(0.1).unwrap();
        assert_eq!(d.connectivity(), 5);
        assert!((d.cap_radius().unwrap() - 1.21).abs() < 1e-12);
        let p = d.components()[0].representative();
        assert!((p.norm() - 1.1).abs() < 1e-12);
        assert!(build_thm12_domain(1.5).is_err());
        assert!(build_thm12_domain(0.0).is_err());
    }

    #[test]
    fn thm14_domain_geometry() {
        let d = build_thm14_domain();
        assert_eq!(d.connectivity(), 4);
        assert_eq!(d.cap_radius(), Some(5.0));
        assert!((d.min_gap() - 1.0).abs() < 1e-12);
        assert_eq!(meridians::count_classes(4), 7);
        assert_eq!(meridians::count_principal(4), 4);
    }
}
